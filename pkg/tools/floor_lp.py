"""Decisive optimism test: is the inequality system feasible when every
row gets the LOWEST mu value consistent with known hill-climb floors?

For each admissible subregion G', any certificate must select a table
value >= mu_max(G') (monotonicity: every embeddable region contains a
subset of G', and the selected region's exact mu is an upper bound that
cannot fall below mu_max of the superset... more precisely the selected
value equals mu_max of an embeddable M <= G' and mu_max(M) >= mu_max(G')
= mu_max of the v-component of G').  So floor(G') = least table value
>= lb(comp_v(G')), using the best known hill-climb lower bound; rows
without a cataloged component floor get the global minimum table value.
If the LP with these row mus is infeasible at scale s, NO certificate
(with this table and geometry) can exist.
"""
import ast
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix, hstack, identity

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parent))
from trimix.lattice import neighbour_ring

import opt_assign
import gen_data


def main():
    s = float(sys.argv[1]) if len(sys.argv) > 1 else 0.999
    cert, order, (gps, bcodes) = opt_assign.load_geometry()
    pos = {z: i for i, z in enumerate(order)}
    n = len(gps)

    values = sorted({v for (_, v, _) in gen_data.M_REGIONS.values()})
    vmin = float(values[0])

    catalog = opt_assign.parse_catalog(pos)
    extra = Path("/tmp/extra_shapes.log")
    if extra.exists():
        for line in extra.read_text().splitlines():
            parts = line.split(None, 3)
            try:
                lb = Fraction(parts[2])
                S = tuple(sorted(ast.literal_eval(
                    parts[3].strip().split("]")[0] + "]")))
            except (ValueError, SyntaxError, IndexError):
                continue
            if S not in catalog or lb > catalog[S]:
                catalog[S] = lb
    # mirror closure: lb transfers under x -> -x
    for S, lb in list(catalog.items()):
        Sm = tuple(sorted((-x, y) for x, y in S))
        if Sm not in catalog or lb > catalog[Sm]:
            catalog[Sm] = lb

    # v-component per subregion via bitmask BFS
    nbr_mask = []
    for z in order:
        m = 0
        for nb in neighbour_ring(z):
            if nb in pos:
                m |= 1 << pos[nb]
        nbr_mask.append(m)
    vbit = 1 << pos[(0, 0)]

    def comp_mask(mask):
        comp = vbit
        frontier = vbit
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                f ^= b
                nxt |= nbr_mask[b.bit_length() - 1]
            frontier = nxt & mask & ~comp
            comp |= frontier
        return comp

    def quant_up(lb):
        for v in values:
            if v >= lb:
                return float(v)
        return None  # floor exceeds every table value: impossible row

    floor = np.full(n, vmin)
    comp_cache = {}
    missing = 0
    impossible = 0
    for i in range(n):
        cm = comp_mask(int(gps[i]))
        if cm in comp_cache:
            floor[i] = comp_cache[cm]
            continue
        S = tuple(sorted(z for z in order if cm & (1 << pos[z])))
        lb = catalog.get(S)
        if lb is None:
            val = vmin
            missing += 1
        else:
            q = quant_up(lb)
            if q is None:
                impossible += 1
                q = float(values[-1]) + 1.0
            val = q
        comp_cache[cm] = val
        floor[i] = val
    print(f"{len(comp_cache)} distinct components, "
          f"{sum(1 for v in comp_cache.values() if v > vmin)} with real floors, "
          f"{missing} uncataloged, {impossible} impossible", flush=True)

    brows_bytes = np.ascontiguousarray(bcodes).view(
        np.dtype((np.void, bcodes.dtype.itemsize * bcodes.shape[1]))).ravel()
    uniq_b, inv = np.unique(brows_bytes, return_inverse=True)
    ub = uniq_b.view(np.int32).reshape(len(uniq_b), 6)
    nr = len(uniq_b)
    mu_per_b = np.zeros(nr)
    np.maximum.at(mu_per_b, inv, floor)

    used = sorted(set(ub.ravel()) - {0})
    vidx = {c: k for k, c in enumerate(used)}
    nv = len(used)
    rows_i, rows_j, rows_v, base_j = [], [], [], []
    for r in range(nr):
        for b in ub[r, 1:]:
            if b != 0:
                rows_i.append(r)
                rows_j.append(vidx[b])
                rows_v.append(mu_per_b[r])
        base_j.append(vidx[ub[r, 0]])
    A_mu = csr_matrix((rows_v, (rows_i, rows_j)), shape=(nr, nv))
    A_b0 = csr_matrix((np.ones(nr), (np.arange(nr), np.array(base_j))),
                      shape=(nr, nv))
    ok = linprog(c=np.zeros(nv), A_ub=(A_mu - s * A_b0), b_ub=np.zeros(nr),
                 bounds=[(2, 6)] * nv, method="highs").success
    print(f"floor LP at scale {s}: {'FEASIBLE' if ok else 'INFEASIBLE'}")
    if not ok:
        A = hstack([A_mu - s * A_b0, -identity(nr, format="csr")])
        c = np.concatenate([np.zeros(nv), np.ones(nr)])
        res = linprog(c=c, A_ub=A, b_ub=np.zeros(nr),
                      bounds=[(2, 6)] * nv + [(0, None)] * nr, method="highs")
        t = res.x[nv:]
        alpha = res.x[:nv]
        bad = np.where(t > 1e-9)[0]
        print(f"total violation={t.sum():.4f} over {len(bad)} rows")
        bad = bad[np.argsort(-t[bad])]
        for r in bad[:15]:
            codes = ub[r]
            achunk = [0.0 if b == 0 else alpha[vidx[b]] for b in codes[1:]]
            gi = np.where(inv == r)[0][:1]
            wit = []
            for g in gi:
                mask = int(gps[g])
                wit = [z for z in order if mask & (1 << pos[z])]
            print(f"t={t[r]:.4f} mu={mu_per_b[r]:.5f} b0={codes[0]} "
                  f"a0={alpha[vidx[codes[0]]]:.3f} children a="
                  f"{[f'{a:.3f}' for a in achunk]}")
            print(f"   witness gp ({len(wit)}v): {wit}")


if __name__ == "__main__":
    main()
