"""Enumerate 12-vertex gadget candidates F whose six anchored copies fit
a 17-vertex union.

The recursion needs each child window (F re-anchored along a child edge)
to lie inside G plus the hole w_G, so G must contain the union of all six
windows; with |G| = 17 the union (minus w_G) must have at most 17
vertices.  Each vertex z of F contributes its orbit {rho_k(z)} to the
union, so the union grows monotonically with F and the search can prune
as soon as the partial union exceeds the limit.
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
from trimix.lattice import neighbour_ring

V, W = (0, 0), (0, 2)
RING = [(0, 2), (1, 1), (1, -1), (0, -2), (-1, -1), (-1, 1)]  # clockwise
U_LIST = [(1, 1), (1, -1), (0, -2), (-1, -1), (-1, 1)]


def make_rot(r):
    a, b = RING[0], RING[1]
    ia, ib = RING[r % 6], RING[(1 + r) % 6]
    det = a[0] * b[1] - a[1] * b[0]
    m00 = (ia[0] * b[1] - ib[0] * a[1]) / det
    m01 = (ib[0] * a[0] - ia[0] * b[0]) / det
    m10 = (ia[1] * b[1] - ib[1] * a[1]) / det
    m11 = (ib[1] * a[0] - ia[1] * b[0]) / det

    def f(z):
        x, y = z
        rx, ry = m00 * x + m01 * y, m10 * x + m11 * y
        return (int(round(rx)), int(round(ry)))
    return f


ROTS = [make_rot(r) for r in range(6)]


def window_maps():
    maps = []
    for u in U_LIST:
        want = (V[0] - u[0], V[1] - u[1])
        r = next(r for r in range(6) if ROTS[r]((0, 2)) == want)
        maps.append(lambda z, f=ROTS[r], u=u: (f(z)[0] + u[0], f(z)[1] + u[1]))
    return maps


WMAPS = window_maps()


def orbit(z):
    out = {z}
    for m in WMAPS:
        out.add(m(z))
    out.discard(W)
    return frozenset(out)


def main():
    limit = int(sys.argv[1]) if len(sys.argv) > 1 else 17
    ball = {V}
    frontier = {V}
    for _ in range(3):
        frontier = {nb for z in frontier for nb in neighbour_ring(z)} - {W}
        ball |= frontier
    ball_set = set(ball)
    orbits = {z: orbit(z) for z in ball_set}
    found = []

    def extend(cur, union, cand, banned):
        if len(union) > limit:
            return
        if len(cur) == 12:
            found.append((len(union), tuple(sorted(cur))))
            print(f"|union|={len(union)}  F={sorted(cur)}", flush=True)
            return
        cand = list(cand)
        for i, z in enumerate(cand):
            u2 = union | orbits[z]
            if len(u2) > limit:
                continue
            new_banned = banned | set(cand[:i])
            nxt = [nb for nb in neighbour_ring(z)
                   if nb in ball_set and nb not in cur
                   and nb not in new_banned and nb not in cand and nb != z]
            extend(cur | {z}, u2, cand[i + 1:] + nxt, new_banned)

    start_cand = [nb for nb in neighbour_ring(V) if nb in ball_set]
    extend({V}, set(orbits[V]), start_cand, set())
    print(f"{len(found)} connected 12-vertex candidates with union <= {limit}")
    for size, F in sorted(found):
        print(size, list(F))


if __name__ == "__main__":
    main()
