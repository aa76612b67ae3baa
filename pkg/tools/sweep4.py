"""Hill-climb lower bounds for mu_max over all connected 4-vertex
anchored subsets of the large gadget, deduplicated by the mirror
symmetry that fixes the anchor edge."""
import sys, time
from fractions import Fraction
from itertools import combinations
sys.path.insert(0, "/root/pkg/src")
from trimix.lattice import neighbour_ring, region
from trimix.mu import mu_hill_climb

G = {(-2,0),(-2,2),(-1,-3),(-1,-1),(-1,1),(-1,3),(-1,5),(0,-2),(0,0),(0,4),
     (1,-3),(1,-1),(1,1),(1,3),(1,5),(2,0),(2,2)}
V, W = (0,0), (0,2)

def connected(S):
    S = set(S); start = next(iter(S)); seen = {start}; stack = [start]
    while stack:
        u = stack.pop()
        for nb in neighbour_ring(u):
            if nb in S and nb not in seen:
                seen.add(nb); stack.append(nb)
    return len(seen) == len(S)

def mirror(S):
    return tuple(sorted((-x, y) for (x, y) in S))

rest = sorted(G - {V})
seen = set()
shapes = []
for c in combinations(rest, 3):
    S = tuple(sorted(((V,) + c)))
    if not connected(S):
        continue
    if mirror(S) in seen:
        continue
    seen.add(S)
    shapes.append(S)
print(f"{len(shapes)} shapes after mirror dedup", flush=True)
for S in shapes:
    t0 = time.time()
    res = mu_hill_climb(region(S), V, W, seed=1, restarts=4)
    v = res.value
    print(f"{list(S)} {v.numerator}/{v.denominator} {float(v):.6f} "
          f"{time.time()-t0:.1f}s", flush=True)
