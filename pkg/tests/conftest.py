"""Shared fixtures and generators for the test suite.

Random regions are grown by a seeded random walk so every test run sees
the same instances; boundary pairs are always produced through the
canonical enumeration so they are valid by construction.
"""

from __future__ import annotations

import random

import pytest

from trimix.lattice import Region, neighbour_ring, region
from trimix.boundary import (
    EdgeBoundaryPair, build_edge_pair, enumerate_boundaries,
)


def grow_region(rng: random.Random, n_vertices: int,
                start=(0, 0)) -> Region:
    """Random connected region with exactly ``n_vertices`` vertices."""
    verts = {start}
    frontier = list(neighbour_ring(start))
    while len(verts) < n_vertices:
        v = frontier.pop(rng.randrange(len(frontier)))
        if v in verts:
            continue
        verts.add(v)
        frontier.extend(neighbour_ring(v))
        if not frontier:  # pragma: no cover - cannot happen on the lattice
            break
    return region(sorted(verts))


def pick_vw(rng: random.Random, R: Region):
    """A distinguished vertex of R and an adjacent w outside R."""
    candidates = []
    for v in sorted(R.vertices):
        for w in neighbour_ring(v):
            if w not in R:
                candidates.append((v, w))
    return candidates[rng.randrange(len(candidates))]


def random_pairs(seed: int, count: int, max_vertices: int = 4,
                 per_region: int = 4) -> list[EdgeBoundaryPair]:
    """A deterministic stream of valid edge-boundary pairs."""
    rng = random.Random(seed)
    pairs: list[EdgeBoundaryPair] = []
    while len(pairs) < count:
        R = grow_region(rng, rng.randint(1, max_vertices))
        v_x, w_x = pick_vw(rng, R)
        stream = enumerate_boundaries(R, v_x, w_x)
        taken = 0
        while taken < per_region and len(pairs) < count:
            # lazily skip a random prefix instead of materializing the
            # whole stream (it is huge for larger regions)
            cb = None
            for _ in range(rng.randint(1, 40)):
                cb = next(stream, None)
                if cb is None:
                    break
            if cb is None:
                break
            pairs.append(build_edge_pair(cb, R, v_x, w_x))
            taken += 1
    return pairs


@pytest.fixture
def rng():
    return random.Random(20210405)
