"""Couplings at the discrepancy vertex, the disagreement tree, and Γ_d."""

from fractions import Fraction

from trimix.lattice import region
from trimix.boundary import build_edge_pair, enumerate_boundaries
from trimix.coupling import (
    GammaEvaluator, build_tree, cost, coupling_distribution, dump_tree,
    gamma_d, p_table, sample_coupling, tree_levels,
)
from trimix.mu import mu_exact

from conftest import random_pairs


def small_pair():
    R = region([(0, 0), (1, 1)])
    cb = next(iter(enumerate_boundaries(R, (0, 0), (0, 2))))
    return build_edge_pair(cb, R, (0, 0), (0, 2))


def test_p_table_marginals_and_disagreement():
    for X in random_pairs(seed=31, count=20):
        T = p_table(X)
        # row sums reproduce the B-side marginal, column sums the B'-side
        for c, target in T.marginal_B.items():
            assert sum(T.p.get((c, cp), Fraction(0))
                       for cp in T.marginal_Bprime) == target
        for cp, target in T.marginal_Bprime.items():
            assert sum(T.p.get((c, cp), Fraction(0))
                       for c in T.marginal_B) == target
        # the coupling is optimal: off-diagonal mass equals μ exactly
        assert T.off_diagonal_mass == mu_exact(X).value


def test_p_table_probabilities_valid():
    for X in random_pairs(seed=32, count=10):
        T = p_table(X)
        assert sum(T.p.values()) == 1
        assert all(v >= 0 for v in T.p.values())


def test_gamma_one_equals_mu():
    ev = GammaEvaluator()
    for X in random_pairs(seed=33, count=30):
        assert ev.gamma(X, 1) == mu_exact(X).value


def test_gamma_recursion_matches_tree_traversal():
    ev = GammaEvaluator()
    for X in random_pairs(seed=34, count=8, max_vertices=3):
        T = build_tree(X, depth=3)
        levels = tree_levels(T)
        for d in (1, 2, 3):
            assert ev.gamma(X, d) == levels.get(d, Fraction(0))


def test_gamma_decays_geometrically():
    # Γ_d ≤ 5·(1−1/1000)^d for every pair we can compute
    ev = GammaEvaluator()
    bound = Fraction(999, 1000)
    for X in random_pairs(seed=35, count=10, max_vertices=3):
        for d in (1, 2, 3, 4):
            assert ev.gamma(X, d) <= 5 * bound ** d


def test_gamma_d_function_agrees_with_evaluator():
    X = small_pair()
    ev = GammaEvaluator()
    for d in (1, 2, 3):
        assert gamma_d(X, d) == ev.gamma(X, d)


def test_coupling_distribution_has_exact_marginals():
    for X in random_pairs(seed=36, count=6, max_vertices=2):
        joint = coupling_distribution(X)
        assert sum(joint.values()) == 1
        # project on the first coordinate: uniform over B-compatible
        # colourings; on the second: uniform over B'-compatible ones
        left = {}
        right = {}
        disagree = Fraction(0)
        for (a, b), pr in joint.items():
            left[a] = left.get(a, Fraction(0)) + pr
            right[b] = right.get(b, Fraction(0)) + pr
            if dict(a)[X.v_x] != dict(b)[X.v_x]:
                disagree += pr
        assert len(set(left.values())) == 1
        assert len(set(right.values())) == 1
        assert disagree == mu_exact(X).value


def test_sample_coupling_matches_joint():
    X = small_pair()
    joint = coupling_distribution(X)
    n = 4000
    samples = sample_coupling(X, seed=9, n=n)
    freq = {}
    for C, Cp in samples:
        key = (tuple(sorted(C.items())), tuple(sorted(Cp.items())))
        freq[key] = freq.get(key, 0) + 1
    for key, pr in joint.items():
        assert abs(freq.get(key, 0) / n - float(pr)) < 0.05


def test_tree_dump_format():
    X = small_pair()
    T = build_tree(X, depth=2)
    text = dump_tree(T)
    for line in text.splitlines():
        parts = line.split()
        assert parts[0].isdigit()  # level
        assert any(p.startswith("weight=") for p in parts)
        assert any(p.startswith("name=") for p in parts)


def test_cost_nonnegative():
    X = small_pair()
    T = build_tree(X, depth=3)
    assert cost(X.v_x, T) >= 0
