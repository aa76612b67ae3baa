"""Relaxed gadget search: all 12-vertex regions F (not necessarily
connected, radius up to 4 avoiding w) containing v whose six anchored
copies have a union of at most `limit` vertices (excluding the hole w).

Prunes on the union size plus an admissible lower bound: the sum of the
(12 - |cur|) smallest marginal orbit costs among remaining candidates.
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
from trimix.lattice import neighbour_ring

V, W = (0, 0), (0, 2)
RING = [(0, 2), (1, 1), (1, -1), (0, -2), (-1, -1), (-1, 1)]
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
        return (int(round(m00 * x + m01 * y)), int(round(m10 * x + m11 * y)))
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
    radius = int(sys.argv[2]) if len(sys.argv) > 2 else 4
    ball = {V}
    frontier = {V}
    for _ in range(radius):
        frontier = {nb for z in frontier for nb in neighbour_ring(z)} - {W}
        ball |= frontier
    cand_all = sorted(ball - {V})
    orbits = {z: orbit(z) for z in ball}
    print(f"ball: {len(ball)} vertices, limit={limit}")
    found = []

    def extend(cur, union, start):
        need = 12 - len(cur)
        if need == 0:
            found.append(tuple(sorted(cur)))
            print(f"|union|={len(union)}  F={sorted(cur)}", flush=True)
            return
        rem = cand_all[start:]
        if len(rem) < need:
            return
        in_union = sum(1 for z in rem if z in union)
        if len(union) + max(0, need - in_union) > limit:
            return
        for i in range(start, len(cand_all)):
            z = cand_all[i]
            u2 = union | orbits[z]
            if len(u2) > limit:
                continue
            extend(cur + [z], u2, i + 1)

    extend([V], set(orbits[V]), 0)
    print(f"{len(found)} candidates with union <= {limit}")


if __name__ == "__main__":
    main()
