"""Single-site dynamics: exact transition matrices, mixing, sampling."""

import math
import random
from fractions import Fraction

from trimix.lattice import adjacent, region, vertex_boundary
from trimix.colouring import PartialVertexColouring
from trimix.glauber import (
    ChainConfig, _static_forbidden, approx_count, available_colours,
    enumerate_states, exact_transition_matrix, initial_state,
    matrix_power_tv, run_chain, simulate_tv_curve, step, tv_decay,
    uniform_is_stationary,
)

from conftest import grow_region


def free_vertex_boundary(R):
    return PartialVertexColouring(R, {v: 0 for v in vertex_boundary(R)})


def random_vertex_boundary(rng, R, q=9):
    return PartialVertexColouring(
        R, {v: rng.choice([0, 0, rng.randint(1, q)])
            for v in vertex_boundary(R)})


def test_uniform_stationary_on_random_instances():
    rng = random.Random(41)
    done = 0
    while done < 12:
        R = grow_region(rng, rng.randint(1, 3))
        bv = random_vertex_boundary(rng, R)
        try:
            states = enumerate_states(R, bv)
        except ValueError:
            continue
        if not 0 < len(states) <= 2000:
            continue
        for variant in (False, True):
            _, rows = exact_transition_matrix(R, bv,
                                              rejection_variant=variant)
            assert uniform_is_stationary(rows)
            for row in rows:
                assert sum(row.values()) == 1
        done += 1


def test_never_rejecting_variant_moves_more():
    # the always-accept variant puts no more mass on self-loops than the
    # propose-and-reject one
    R = region([(0, 0), (0, 2)])
    bv = free_vertex_boundary(R)
    _, rows_a = exact_transition_matrix(R, bv, rejection_variant=False)
    _, rows_r = exact_transition_matrix(R, bv, rejection_variant=True)
    for i, (ra, rr) in enumerate(zip(rows_a, rows_r)):
        assert ra.get(i, Fraction(0)) <= rr.get(i, Fraction(0))


def test_matrix_power_tv_decreases():
    R = region([(0, 0), (0, 2)])
    bv = free_vertex_boundary(R)
    _, rows = exact_transition_matrix(R, bv)
    tvs = matrix_power_tv(rows, 0, [0, 2, 4, 8, 16])
    vals = [tvs[t] for t in (0, 2, 4, 8, 16)]
    assert all(vals[i + 1] <= vals[i] for i in range(len(vals) - 1))
    assert vals[0] > vals[-1]


def test_chain_is_reproducible():
    R = region([(0, 0), (1, 1), (1, -1)])
    bv = free_vertex_boundary(R)
    cfg = ChainConfig(R, bv, seed=5, steps=200)
    s1 = run_chain(cfg)
    s2 = run_chain(cfg)
    assert s1.colouring == s2.colouring


def test_step_preserves_properness():
    rng = random.Random(43)
    R = grow_region(rng, 4)
    bv = free_vertex_boundary(R)
    cfg = ChainConfig(R, bv, seed=0, steps=0)
    state = initial_state(cfg)
    r = random.Random(7)
    for _ in range(300):
        state = step(state, cfg, r)
        for v in R:
            for w in R:
                if v != w and adjacent(v, w):
                    assert state.colouring[v] != state.colouring[w]


def test_available_colours_respects_boundary():
    R = region([(0, 0)])
    bv = PartialVertexColouring(
        R, {v: i + 1 for i, v in enumerate(sorted(vertex_boundary(R)))})
    cfg = ChainConfig(R, bv, seed=0, steps=0)
    forb = _static_forbidden(cfg)
    avail = available_colours((0, 0), {}, forb, R, 9)
    assert len(avail) == 3
    assert all(c not in forb[(0, 0)] for c in avail)


def test_long_run_frequencies_uniform_chi_square():
    # chi-square goodness of fit on a small state space
    R = region([(0, 0), (0, 2)])
    bv = free_vertex_boundary(R)
    states = enumerate_states(R, bv)
    n = len(states)
    assert n == 72
    verts = sorted(R.vertices)
    index = {s: i for i, s in enumerate(states)}
    cfg = ChainConfig(R, bv, seed=11, steps=0)
    state = initial_state(cfg)
    r = random.Random(13)
    counts = [0] * n
    total = 40000
    for t in range(total + 500):
        state = step(state, cfg, r)
        if t >= 500:
            counts[index[tuple(state.colouring[v] for v in verts)]] += 1
    expected = total / n
    chi2 = sum((c - expected) ** 2 / expected for c in counts)
    # 0.01 upper quantile of chi2 with 71 dof ≈ 102.8; sequential samples
    # are correlated, which inflates the statistic — allow headroom
    assert chi2 < 400


def test_empirical_tv_tracks_exact_powers():
    R = region([(0, 0), (0, 2)])
    bv = free_vertex_boundary(R)
    _, rows = exact_transition_matrix(R, bv)
    cfg = ChainConfig(R, bv, seed=0, steps=0)
    init = initial_state(cfg).colouring
    trials = 20000
    curve = simulate_tv_curve(R, bv, init, [1, 3, 6], trials, seed=3)
    states = enumerate_states(R, bv)
    verts = sorted(R.vertices)
    start = states.index(tuple(init[v] for v in verts))
    exact = matrix_power_tv(rows, start, [1, 3, 6])
    tol = math.sqrt(len(states) / (4 * trials)) + 0.02
    for t, emp in curve.items():
        assert abs(emp - float(exact[t])) < tol


def test_tv_decay_monotone_and_bounded():
    R = region([(0, 0), (0, 2)])
    bv = free_vertex_boundary(R)
    cfg = ChainConfig(R, bv, seed=1, steps=0)
    out = tv_decay(cfg, steps=[1, 4, 8], trials=4000)
    vals = [val for (_, val, _) in out]
    assert all(vals[i + 1] <= vals[i] for i in range(len(vals) - 1))
    for _, val, half in out:
        assert 0 <= val <= 1
        assert half > 0


def test_approx_count_covers_truth():
    R = region([(0, 0)])
    est, (lo, hi) = approx_count(R, free_vertex_boundary(R), seed=2)
    assert lo <= 9 <= hi
    R2 = region([(0, 0), (0, 2)])
    est, (lo, hi) = approx_count(R2, free_vertex_boundary(R2), seed=2)
    assert lo <= 72 <= hi
