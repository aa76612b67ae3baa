"""Hill-climb mu lower bounds over all legal connected subsets of G.

Usage: sweep_g.py SIZE [restarts] — prints one line per mirror-class,
sorted by bound, to match published table values by fingerprint.
"""
import sys, time
from itertools import combinations
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
from trimix.lattice import neighbour_ring, region
from trimix.mu import mu_hill_climb

V, W = (0, 0), (0, 2)
G = [(-2, 0), (-2, 2), (-1, -3), (-1, -1), (-1, 1), (-1, 3), (-1, 5),
     (0, -2), (0, 0), (0, 4), (1, -3), (1, -1), (1, 1), (1, 3),
     (1, 5), (2, 0), (2, 2)]
W_NBRS = set(neighbour_ring(W))

def connected(S):
    S = set(S); seen = {V}; stack = [V]
    while stack:
        u = stack.pop()
        for nb in neighbour_ring(u):
            if nb in S and nb not in seen:
                seen.add(nb); stack.append(nb)
    return len(seen) == len(S)

def mirror(S):
    return tuple(sorted((-x, y) for x, y in S))

size = int(sys.argv[1])
restarts = int(sys.argv[2]) if len(sys.argv) > 2 else 3
others = [g for g in G if g != V]
seen = set()
rows = []
for extra in combinations(others, size - 1):
    S = tuple(sorted((V,) + extra))
    if S in seen or mirror(S) in seen:
        continue
    seen.add(S)
    if not connected(S):
        continue
    if len(W_NBRS & set(S)) > 5:
        continue
    t0 = time.time()
    lb = mu_hill_climb(region(list(S)), V, W, seed=2, restarts=restarts).value
    rows.append((lb, S))
    print(f"{float(lb):.6f} {lb} {list(S)} {time.time()-t0:.1f}s", flush=True)
rows.sort()
print("--- sorted ---")
for lb, S in rows:
    print(f"{float(lb):.6f} {lb} {list(S)}")
