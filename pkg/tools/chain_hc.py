"""Hill-climb lower bounds along the nested growth chain used for the
large reconstructed M-regions."""
import sys, time
sys.path.insert(0, "/root/pkg/src")
from trimix.lattice import region
from trimix.mu import mu_hill_climb

BASE = [(-1, 1), (0, -2), (0, 0), (1, 1)]
GROWTH = [(1, -1), (-1, -1), (2, 0), (-2, 0), (2, 2), (-2, 2), (1, 3), (-1, 3)]
S = list(BASE)
for i, z in enumerate(GROWTH):
    S.append(z)
    t0 = time.time()
    res = mu_hill_climb(region(sorted(S)), (0, 0), (0, 2), seed=2, restarts=3)
    v = res.value
    print(f"size={len(S)} {sorted(S)} lb={v.numerator}/{v.denominator} "
          f"{float(v):.6f} {time.time()-t0:.1f}s", flush=True)
