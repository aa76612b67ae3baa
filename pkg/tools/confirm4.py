"""Exact mu_max confirmation for shortlisted 4-vertex shapes."""
import sys, time
sys.path.insert(0, "/root/pkg/src")
from trimix.lattice import region
from trimix.mu import mu_max

SHAPES = [
    ([(-1, -1), (-1, 1), (0, 0), (1, -1)], "5/17"),
    ([(-1, -1), (-1, 1), (0, 0), (1, 1)], "5/17"),
    ([(-1, -1), (0, -2), (0, 0), (1, 1)], "5/17"),
    ([(-1, 1), (0, -2), (0, 0), (1, 1)], "32/113"),
]
for S, want in SHAPES:
    t0 = time.time()
    res = mu_max(region(S), (0, 0), (0, 2))
    v = res.value
    print(f"{S} exact={v.numerator}/{v.denominator} want={want} "
          f"match={str(v) == want} {time.time()-t0:.1f}s", flush=True)
