"""Grow the shape catalog toward LP feasibility.

Computes the ideal coverage envelope (least eligible table value per
admissible subregion), finds the subregions tight in the scale-bisected
LP, and hill-climbs those subregions themselves as new catalog shapes
(the v-component of a subregion is the largest shape that can embed into
it).  Results append to /tmp/extra_shapes.log in sweep format so the
assignment optimizer picks them up.
"""
import ast
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parent))
from trimix.lattice import neighbour_ring, region
from trimix.mu import mu_hill_climb

import opt_assign

V = (0, 0)


def comp_v(S):
    S = set(S)
    if V not in S:
        return ()
    seen = {V}
    st = [V]
    while st:
        u = st.pop()
        for nb in neighbour_ring(u):
            if nb in S and nb not in seen:
                seen.add(nb)
                st.append(nb)
    return tuple(sorted(seen))


def main():
    cert, order, (gps, bcodes) = opt_assign.load_geometry()
    pos = {z: i for i, z in enumerate(order)}
    mirror_pos = {z: pos[(-z[0], z[1])] for z in order}
    n = len(gps)

    extra = Path("/tmp/extra_shapes.log")

    import gen_data
    values = {i: v for i, (_, v, _) in gen_data.M_REGIONS.items()}
    idx_order = sorted(values, key=lambda i: (values[i], i))
    assign0 = {i: tuple(sorted(S)) for i, (S, _, _) in gen_data.M_REGIONS.items()}

    def embed_vec(S):
        ident = 0
        mirr = 0
        for z in S:
            ident |= 1 << pos[z]
            mirr |= 1 << mirror_pos[z]
        return ((gps & ident) == ident) | ((gps & mirr) == mirr)

    brows_bytes = np.ascontiguousarray(bcodes).view(
        np.dtype((np.void, bcodes.dtype.itemsize * bcodes.shape[1]))).ravel()
    uniq_b, inv = np.unique(brows_bytes, return_inverse=True)
    ub = uniq_b.view(np.int32).reshape(len(uniq_b), 6)
    used = sorted(set(ub.ravel()) - {0})
    vidx = {c: k for k, c in enumerate(used)}
    nv = len(used)
    rows_i, rows_j = [], []
    base_j = []
    for r in range(len(uniq_b)):
        for b in ub[r, 1:]:
            if b != 0:
                rows_i.append(r)
                rows_j.append(vidx[b])
        base_j.append(vidx[ub[r, 0]])
    base_j = np.array(base_j)
    A_b0 = csr_matrix((np.ones(len(uniq_b)), (np.arange(len(uniq_b)), base_j)),
                      shape=(len(uniq_b), nv))

    def lp_at(mu_per_b, s):
        vals = []
        for r, j in zip(rows_i, rows_j):
            vals.append(mu_per_b[r])
        A_mu = csr_matrix((vals, (rows_i, rows_j)), shape=(len(uniq_b), nv))
        return linprog(c=np.zeros(nv), A_ub=(A_mu - s * A_b0),
                       b_ub=np.zeros(len(uniq_b)), bounds=[(2, 6)] * nv,
                       method="highs")

    def envelope(catalog):
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
        return ideal

    deadline = time.time() + float(sys.argv[1]) if len(sys.argv) > 1 else \
        time.time() + 3000
    for rnd in range(30):
        catalog = opt_assign.parse_catalog(pos)
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
        for i, S in assign0.items():
            if S not in catalog:
                catalog[S] = values[i]
        ideal = envelope(catalog)
        mu_per_b = np.zeros(len(uniq_b))
        np.maximum.at(mu_per_b, inv, ideal)
        # elastic relaxation at the target scale: which rows carry violation?
        from scipy.sparse import hstack, identity
        s = 0.999
        nr = len(uniq_b)
        vals = [mu_per_b[r] for r in rows_i]
        A_mu = csr_matrix((vals, (rows_i, rows_j)), shape=(nr, nv))
        A = hstack([A_mu - s * A_b0, -identity(nr, format="csr")])
        c = np.concatenate([np.zeros(nv), np.ones(nr)])
        res = linprog(c=c, A_ub=A, b_ub=np.zeros(nr),
                      bounds=[(2, 6)] * nv + [(0, None)] * nr, method="highs")
        t = res.x[nv:]
        bad = np.where(t > 1e-9)[0]
        print(f"round {rnd}: violation={t.sum():.3f} over {len(bad)} rows",
              flush=True)
        if t.sum() < 1e-9:
            print("envelope feasible at 1/1000; stop")
            break
        if time.time() > deadline:
            print("time budget exhausted")
            break
        bad = bad[np.argsort(-t[bad])]
        cand_shapes = {}
        known = set(catalog)
        for r in bad:
            sel = np.where((inv == r) & (ideal >= mu_per_b[r] - 1e-12))[0]
            for g_i in sel[:2]:
                mask = int(gps[g_i])
                S = comp_v([z for z in order if mask & (1 << pos[z])])
                if len(S) < 5:
                    continue
                Sm = tuple(sorted((-x0, y0) for x0, y0 in S))
                if S in known or Sm in known or S in cand_shapes:
                    continue
                cand_shapes[S] = True
        if not cand_shapes:
            print("no new candidate shapes; stop")
            break
        for S in list(cand_shapes)[:60]:
            if time.time() > deadline:
                break
            t0 = time.time()
            r = mu_hill_climb(region(list(S)), V, (0, 2), seed=2, restarts=1)
            line = (f"{len(S)} {float(r.value):.6f} {r.value} {list(S)} "
                    f"{time.time()-t0:.0f}s")
            with open(extra, "a") as fh:
                fh.write(line + "\n")
            print("  new:", line, flush=True)


if __name__ == "__main__":
    main()
