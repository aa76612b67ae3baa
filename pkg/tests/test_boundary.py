"""Edge-boundary pairs, validity rules, and the canonical enumeration."""

import random

from trimix.lattice import edge, neighbour_ring, region
from trimix.boundary import (
    EdgeBoundaryPair, boundary_units, build_edge_pair, child_pair,
    enumerate_boundaries, format_pair, ordered_EX, parse_pair,
    validate_edge_pair,
)
from trimix.colouring import PartialEdgeColouring

from conftest import grow_region, pick_vw, random_pairs


def test_enumerated_pairs_are_valid():
    for X in random_pairs(seed=11, count=40):
        assert validate_edge_pair(X) == []


def test_pair_differs_exactly_on_ex():
    for X in random_pairs(seed=12, count=20):
        e_x = X.e_x
        assert X.B[e_x] != X.Bprime[e_x]
        assert X.B[e_x] > 0 and X.Bprime[e_x] > 0
        for e in X.B.assignment:
            if e != e_x:
                assert X.B[e] == X.Bprime[e]


def test_ordered_ex_is_the_internal_edges_at_vx():
    # the edges from v_x into the rest of the region: exactly those become
    # new boundary edges once v_x is removed in the recursion
    for X in random_pairs(seed=13, count=20):
        edges = ordered_EX(X)
        assert X.e_x not in edges
        expected = {edge(X.v_x, u) for u in neighbour_ring(X.v_x)
                    if u in X.region}
        assert set(edges) == expected


def test_child_pairs_are_valid_boundary_pairs():
    rng = random.Random(14)
    for X in random_pairs(seed=14, count=15, max_vertices=4):
        if len(X.region) < 2:
            continue
        k = len(ordered_EX(X))
        i = rng.randrange(1, k + 1)
        child = child_pair(X, i, X.B[X.e_x], X.Bprime[X.e_x])
        assert X.v_x not in child.region
        # child discrepancy edge is the i-th edge of the ordered list
        assert child.e_x == ordered_EX(X)[i - 1]
        assert child.B[child.e_x] != child.Bprime[child.e_x]


def test_validation_catches_mismatch_off_ex():
    R = region([(0, 0)])
    v_x, w_x = (0, 0), (0, 2)
    cb = next(iter(enumerate_boundaries(R, v_x, w_x)))
    X = build_edge_pair(cb, R, v_x, w_x)
    other = next(e for e in X.B.assignment if e != X.e_x)
    broken = EdgeBoundaryPair(
        X.region, X.v_x, X.w_x,
        X.B,
        PartialEdgeColouring(
            X.region,
            {**X.Bprime.assignment, other: (X.Bprime[other] % 9) + 1}),
    )
    assert validate_edge_pair(broken) != []


def test_validation_catches_equal_discrepancy():
    R = region([(0, 0)])
    v_x, w_x = (0, 0), (0, 2)
    cb = next(iter(enumerate_boundaries(R, v_x, w_x)))
    X = build_edge_pair(cb, R, v_x, w_x)
    same = EdgeBoundaryPair(X.region, X.v_x, X.w_x, X.B, X.B)
    assert validate_edge_pair(same) != []


def test_boundary_units_cover_the_boundary():
    rng = random.Random(15)
    for _ in range(10):
        R = grow_region(rng, rng.randint(1, 5))
        v_x, w_x = pick_vw(rng, R)
        units = boundary_units(R, v_x, w_x)
        # w-runs come first in scan order
        kinds = [u.kind for u in units]
        first_vertex = kinds.index("vertex") if "vertex" in kinds else len(kinds)
        assert all(k == "wrun" for k in kinds[:first_vertex])
        assert all(k == "vertex" for k in kinds[first_vertex:])


def test_canonical_stream_has_distinct_keys():
    R = region([(0, 0), (1, 1)])
    v_x, w_x = (0, 0), (0, 2)
    stream = list(enumerate_boundaries(R, v_x, w_x))
    keys = [cb.sort_key for cb in stream]
    assert len(keys) == len(set(keys))


def test_canonical_colours_first_use_increasing():
    R = region([(0, 0), (1, 1)])
    v_x, w_x = (0, 0), (0, 2)
    for cb in enumerate_boundaries(R, v_x, w_x):
        seen_new = 2  # colours 1 and 2 are reserved for the discrepancy
        for c in cb.colours:
            if c > seen_new:
                assert c == seen_new + 1
                seen_new = c


def test_pair_file_round_trip():
    for X in random_pairs(seed=16, count=10):
        text = format_pair(X)
        X2 = parse_pair(text)
        assert X2.region.vertices == X.region.vertices
        assert (X2.v_x, X2.w_x) == (X.v_x, X.w_x)
        assert X2.B.assignment == X.B.assignment
        assert X2.Bprime.assignment == X.Bprime.assignment


def test_single_vertex_stream_size():
    # one unit per w-run plus one per remaining boundary vertex; for the
    # single-vertex region the stream is small and every entry is valid
    R = region([(0, 0)])
    stream = list(enumerate_boundaries(R, (0, 0), (0, 2)))
    assert 0 < len(stream) < 2000
    for cb in stream:
        X = build_edge_pair(cb, R, (0, 0), (0, 2))
        assert validate_edge_pair(X) == []
