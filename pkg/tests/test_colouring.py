"""Exact counting of proper 9-colourings under partial edge boundaries."""

import random
from fractions import Fraction

import pytest

from trimix.lattice import (
    SYMMETRIES, edge, edge_boundary, region, transform, apply_symmetry,
)
from trimix.colouring import (
    DEFAULT_Q, DomainMismatchError, PartialEdgeColouring,
    PartialVertexColouring, brute_force_count, count, count_breakdown,
    format_boundary, free_boundary, marginal, parse_boundary, tv_distance,
    vertex_to_edge_colouring,
)

from conftest import grow_region


def random_boundary(rng: random.Random, R, q: int = DEFAULT_Q):
    """Arbitrary partial edge colouring (0 = free) over ℰR."""
    assignment = {}
    for e in edge_boundary(R):
        assignment[e] = rng.choice([0, 0, 0] + list(range(1, q + 1)))
    return PartialEdgeColouring(R, assignment, q)


def test_known_free_counts():
    assert count(region([(0, 0)]), free_boundary(region([(0, 0)]))) == 9
    R2 = region([(0, 0), (0, 2)])
    assert count(R2, free_boundary(R2)) == 72
    R3 = region([(0, 0), (1, 1), (1, -1)])
    assert count(R3, free_boundary(R3)) == 9 * 8 * 7


def test_single_vertex_fully_constrained():
    R = region([(0, 0)])
    B = PartialEdgeColouring(
        R, {e: i + 1 for i, e in enumerate(sorted(edge_boundary(R)))})
    # all six boundary edges use distinct colours 1..6 → 3 remain
    assert count(R, B) == 3


def test_count_matches_brute_force(rng):
    for _ in range(60):
        R = grow_region(rng, rng.randint(1, 5))
        B = random_boundary(rng, R)
        assert count(R, B) == brute_force_count(R, B)


def test_count_colour_permutation_invariance(rng):
    for _ in range(15):
        R = grow_region(rng, rng.randint(1, 5))
        B = random_boundary(rng, R)
        perm = list(range(1, DEFAULT_Q + 1))
        rng.shuffle(perm)
        relabel = {0: 0, **{i + 1: perm[i] for i in range(DEFAULT_Q)}}
        B2 = PartialEdgeColouring(
            R, {e: relabel[B[e]] for e in B.assignment})
        assert count(R, B) == count(R, B2)


def test_count_symmetry_invariance(rng):
    for _ in range(15):
        R = grow_region(rng, rng.randint(2, 5))
        B = random_boundary(rng, R)
        s = SYMMETRIES[rng.randrange(12)]
        anchor = sorted(R.vertices)[0]
        R2 = transform(R, s, anchor)
        B2 = PartialEdgeColouring(
            R2,
            {edge(apply_symmetry(u, s, anchor), apply_symmetry(v, s, anchor)):
             B[edge(u, v)] for (u, v) in B.assignment})
        assert count(R, B) == count(R2, B2)


def test_count_monotone_under_extra_constraints(rng):
    for _ in range(15):
        R = grow_region(rng, rng.randint(1, 5))
        B = random_boundary(rng, R)
        free_edges = [e for e in B.assignment if B[e] == 0]
        if not free_edges:
            continue
        e = free_edges[rng.randrange(len(free_edges))]
        constrained = B.with_colour(e, rng.randint(1, DEFAULT_Q))
        assert count(R, constrained) <= count(R, B)


def test_count_disconnected_region_multiplies():
    left = region([(0, 0)])
    right = region([(6, 0)])
    both = region([(0, 0), (6, 0)])
    assert (count(both, free_boundary(both))
            == count(left, free_boundary(left))
            * count(right, free_boundary(right)))


def test_breakdown_totals(rng):
    for _ in range(10):
        R = grow_region(rng, rng.randint(1, 4))
        B = random_boundary(rng, R)
        v = sorted(R.vertices)[0]
        bd = count_breakdown(R, B, v)
        assert bd.total == count(R, B)
        assert all(bd[c] >= 0 for c in range(1, DEFAULT_Q + 1))


def test_marginal_is_a_distribution(rng):
    for _ in range(10):
        R = grow_region(rng, rng.randint(1, 4))
        B = free_boundary(R)
        v = sorted(R.vertices)[0]
        p = marginal(R, B, v)
        assert sum(p.values()) == 1
        assert all(isinstance(x, Fraction) for x in p.values())


def test_tv_distance_basics():
    p = {1: Fraction(1, 2), 2: Fraction(1, 2)}
    r = {1: Fraction(1, 2), 2: Fraction(1, 2)}
    assert tv_distance(p, r) == 0
    r = {2: Fraction(1, 2), 3: Fraction(1, 2)}
    assert tv_distance(p, r) == Fraction(1, 2)
    r = {3: 1}
    assert tv_distance(p, r) == 1


def test_vertex_to_edge_colouring():
    R = region([(0, 0)])
    Bv = PartialVertexColouring(R, {(0, 2): 4, (1, 1): 0, (1, -1): 1,
                                    (0, -2): 0, (-1, -1): 0, (-1, 1): 0})
    B = vertex_to_edge_colouring(Bv)
    assert B[edge((0, 0), (0, 2))] == 4
    assert B[edge((0, 0), (1, 1))] == 0
    assert count(R, B) == 7


def test_domain_mismatch_rejected():
    R = region([(0, 0)])
    with pytest.raises(DomainMismatchError):
        PartialEdgeColouring(R, {edge((0, 0), (0, 2)): 1})


def test_boundary_file_round_trip(rng):
    R = grow_region(rng, 4)
    B = random_boundary(rng, R)
    text = format_boundary(B)
    B2 = parse_boundary(text, R)
    assert B2.assignment == B.assignment
