"""Explain LP infeasibility at a given scale via an elastic relaxation.

Builds the envelope mu per unique inequality row, then solves
    min sum t_r   s.t.   mu_r * sum(alpha_children) - s*alpha_b0 <= t_r,
with t >= 0 and alpha in [2, 6]; rows with positive t are the hard core.
Prints those rows' codes, mu, and a witness subregion for each.
"""
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix, hstack, identity

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parent))
import opt_assign
import grow_catalog


def main():
    s = float(sys.argv[1]) if len(sys.argv) > 1 else 0.999
    cert, order, (gps, bcodes) = opt_assign.load_geometry()
    pos = {z: i for i, z in enumerate(order)}
    n = len(gps)

    import gen_data
    from fractions import Fraction
    import ast
    values = {i: v for i, (_, v, _) in gen_data.M_REGIONS.items()}

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
    for i, (S, v, _) in gen_data.M_REGIONS.items():
        S = tuple(sorted(S))
        if S not in catalog:
            catalog[S] = v

    # envelope (copied logic from grow_catalog, via its helpers)
    idx_order = sorted(values, key=lambda i: (values[i], i))
    mirror_pos = {z: pos[(-z[0], z[1])] for z in order}

    def embed_vec(S):
        ident = 0
        mirr = 0
        for z in S:
            ident |= 1 << pos[z]
            mirr |= 1 << mirror_pos[z]
        return ((gps & ident) == ident) | ((gps & mirr) == mirr)

    by_lb = sorted(catalog.items(), key=lambda kv: kv[1])
    ideal = np.full(n, np.inf)
    taken = np.zeros(n, dtype=bool)
    union = np.zeros(n, dtype=bool)
    ptr = 0
    for i in idx_order:
        v = values[i]
        while ptr < len(by_lb) and by_lb[ptr][1] <= v:
            union |= embed_vec(by_lb[ptr][0])
            ptr += 1
        fresh = union & ~taken
        ideal[fresh] = float(v)
        taken |= fresh
    assert taken.all()

    brows_bytes = np.ascontiguousarray(bcodes).view(
        np.dtype((np.void, bcodes.dtype.itemsize * bcodes.shape[1]))).ravel()
    uniq_b, inv = np.unique(brows_bytes, return_inverse=True)
    ub = uniq_b.view(np.int32).reshape(len(uniq_b), 6)
    mu_per_b = np.zeros(len(uniq_b))
    np.maximum.at(mu_per_b, inv, ideal)

    used = sorted(set(ub.ravel()) - {0})
    vidx = {c: k for k, c in enumerate(used)}
    nv = len(used)
    nr = len(uniq_b)
    rows_i, rows_j, rows_v = [], [], []
    base_j = []
    for r in range(nr):
        for b in ub[r, 1:]:
            if b != 0:
                rows_i.append(r)
                rows_j.append(vidx[b])
                rows_v.append(mu_per_b[r])
        base_j.append(vidx[ub[r, 0]])
    base_j = np.array(base_j)
    A_mu = csr_matrix((rows_v, (rows_i, rows_j)), shape=(nr, nv))
    A_b0 = csr_matrix((np.ones(nr), (np.arange(nr), base_j)), shape=(nr, nv))
    A = hstack([A_mu - s * A_b0, -identity(nr, format="csr")])
    c = np.concatenate([np.zeros(nv), np.ones(nr)])
    bounds = [(2, 6)] * nv + [(0, None)] * nr
    res = linprog(c=c, A_ub=A, b_ub=np.zeros(nr), bounds=bounds,
                  method="highs")
    assert res.success, res.message
    t = res.x[nv:]
    alpha = res.x[:nv]
    bad = np.where(t > 1e-9)[0]
    print(f"scale={s}: total violation={t.sum():.4f}, "
          f"{len(bad)} violated rows of {nr}", flush=True)
    bad = bad[np.argsort(-t[bad])]
    for r in bad[:30]:
        codes = ub[r]
        mus = mu_per_b[r]
        achunk = [0.0 if b == 0 else alpha[vidx[b]] for b in codes[1:]]
        gi = np.where((inv == r) & (np.abs(ideal - mus) < 1e-12))[0][:1]
        wit = []
        for g in gi:
            mask = int(gps[g])
            wit = [z for z in order if mask & (1 << pos[z])]
        print(f"t={t[r]:.4f} mu={mus:.5f} b0={codes[0]} "
              f"a0={alpha[vidx[codes[0]]]:.3f} "
              f"children={list(codes[1:])} a={[f'{a:.3f}' for a in achunk]}")
        print(f"   witness gp ({len(wit)}v): {wit}")


if __name__ == "__main__":
    main()
