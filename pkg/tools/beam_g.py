"""Beam search for low-mu legal subsets of G, one added vertex per level.

Usage: beam_g.py START_SIZE MAX_SIZE [beam] [restarts]
Seeds from the sorted output of sweep_g.py piped on stdin (lines
"float frac [coords]"), keeps the `beam` lowest-bound shapes per size.
"""
import ast
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
from trimix.lattice import neighbour_ring, region
from trimix.mu import mu_hill_climb

V, W = (0, 0), (0, 2)
G = [(-2, 0), (-2, 2), (-1, -3), (-1, -1), (-1, 1), (-1, 3), (-1, 5),
     (0, -2), (0, 0), (0, 4), (1, -3), (1, -1), (1, 1), (1, 3),
     (1, 5), (2, 0), (2, 2)]
W_NBRS = set(neighbour_ring(W))


def mirror(S):
    return tuple(sorted((-x, y) for x, y in S))


start_size = int(sys.argv[1])
max_size = int(sys.argv[2])
beam = int(sys.argv[3]) if len(sys.argv) > 3 else 6
restarts = int(sys.argv[4]) if len(sys.argv) > 4 else 2

seeds = []
for line in sys.stdin:
    parts = line.split(None, 2)
    if len(parts) == 3 and parts[2].lstrip().startswith("["):
        S = tuple(sorted(ast.literal_eval(parts[2].strip())))
        if len(S) == start_size:
            seeds.append(S)
    if len(seeds) >= beam:
        break

frontier = seeds
for size in range(start_size + 1, max_size + 1):
    cands = set()
    for S in frontier:
        sset = set(S)
        grow = {nb for u in S for nb in neighbour_ring(u)
                if nb in G and nb not in sset}
        for g in grow:
            T = tuple(sorted(S + (g,)))
            if len(W_NBRS & set(T)) > 5:
                continue
            if mirror(T) not in cands:
                cands.add(T)
    rows = []
    for T in sorted(cands):
        t0 = time.time()
        lb = mu_hill_climb(region(list(T)), V, W, seed=2,
                           restarts=restarts).value
        rows.append((lb, T))
        print(f"{size} {float(lb):.6f} {lb} {list(T)} {time.time()-t0:.1f}s",
              flush=True)
    rows.sort()
    frontier = [T for _, T in rows[:beam]]
    print(f"=== size {size} best ===", flush=True)
    for lb, T in rows[:beam]:
        print(f"{size} BEST {float(lb):.6f} {lb} {list(T)}", flush=True)
