"""Hill-climb mu lower bounds for large subsets of G and beyond."""
import sys, time
from pathlib import Path
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
from trimix.lattice import region
from trimix.mu import mu_hill_climb

V, W = (0, 0), (0, 2)
CHAIN12 = [(-2, 0), (-2, 2), (-1, -1), (-1, 1), (-1, 3), (0, -2), (0, 0),
           (1, -1), (1, 1), (1, 3), (2, 0), (2, 2)]
GROWTH = [(0, 4), (1, 5), (-1, 5), (1, -3), (-1, -3),   # completes G (17)
          (0, -4), (2, -2), (-2, -2), (3, 1), (-3, 1)]  # beyond G
cur = list(CHAIN12)
for g in GROWTH:
    cur.append(g)
    R = region(sorted(cur))
    for seed in (2, 7):
        t0 = time.time()
        lb = mu_hill_climb(R, V, W, seed=seed, restarts=2).value
        print(f"size={len(cur)} seed={seed} lb={lb} {float(lb):.6f} "
              f"{time.time()-t0:.1f}s", flush=True)
