"""Glauber dynamics on boundary-constrained proper colourings.

The primary update rule: pick a region vertex uniformly at random, then
recolour it with a colour drawn uniformly from the colours currently
available at that vertex (not used by region neighbours, not excluded by
the boundary).  With q = 9 on the triangular lattice at least three
colours are always available, the chain never rejects, and the uniform
distribution over agreeing colourings is stationary.

A rejection variant (draw a uniform colour from [q] and keep the state if
it is unavailable) is provided behind a flag; it has the same stationary
distribution but a different transition matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .lattice import Coord, Region, neighbour_ring
from .colouring import (
    DEFAULT_Q, PartialVertexColouring, PartialEdgeColouring,
    vertex_to_edge_colouring, _forbidden_sets, NoValidColouringError,
)


@dataclass(frozen=True)
class ChainConfig:
    region: Region
    boundary: PartialVertexColouring
    q: int = DEFAULT_Q
    seed: int = 0
    steps: int = 1000
    stride: int = 1
    rejection_variant: bool = False


@dataclass
class ChainState:
    colouring: dict[Coord, int]
    step: int = 0


def _static_forbidden(cfg: ChainConfig) -> dict[Coord, frozenset[int]]:
    return _forbidden_sets(vertex_to_edge_colouring(cfg.boundary))


def available_colours(v: Coord, colouring: dict[Coord, int],
                      forbidden: dict[Coord, frozenset[int]],
                      R: Region, q: int) -> list[int]:
    used = {colouring[w] for w in neighbour_ring(v) if w in R.vertices}
    bad = forbidden[v] | used
    return [c for c in range(1, q + 1) if c not in bad]


def initial_state(cfg: ChainConfig, reverse: bool = False) -> ChainState:
    """A deterministic greedy proper colouring agreeing with the boundary."""
    forbidden = _static_forbidden(cfg)
    colouring: dict[Coord, int] = {}
    order = sorted(cfg.region.vertices, reverse=reverse)
    colour_order = range(cfg.q, 0, -1) if reverse else range(1, cfg.q + 1)
    for v in order:
        for c in colour_order:
            if c in forbidden[v]:
                continue
            if any(colouring.get(w) == c for w in neighbour_ring(v)
                   if w in cfg.region.vertices):
                continue
            colouring[v] = c
            break
        else:
            raise NoValidColouringError(f"greedy colouring stuck at {v}")
    return ChainState(colouring, 0)


def step(state: ChainState, cfg: ChainConfig, rng: random.Random) -> ChainState:
    """One Glauber update; mutates nothing, returns the new state."""
    forbidden = _static_forbidden(cfg)
    verts = sorted(cfg.region.vertices)
    v = verts[rng.randrange(len(verts))]
    avail = available_colours(v, state.colouring, forbidden, cfg.region, cfg.q)
    new = dict(state.colouring)
    if cfg.rejection_variant:
        c = rng.randrange(1, cfg.q + 1)
        if c in avail:
            new[v] = c
    else:
        new[v] = avail[rng.randrange(len(avail))]
    return ChainState(new, state.step + 1)


def run_chain(cfg: ChainConfig) -> ChainState:
    rng = random.Random(cfg.seed)
    s = initial_state(cfg)
    forbidden = _static_forbidden(cfg)
    verts = sorted(cfg.region.vertices)
    colouring = dict(s.colouring)
    for t in range(cfg.steps):
        v = verts[rng.randrange(len(verts))]
        avail = available_colours(v, colouring, forbidden, cfg.region, cfg.q)
        if cfg.rejection_variant:
            c = rng.randrange(1, cfg.q + 1)
            if c in avail:
                colouring[v] = c
        else:
            colouring[v] = avail[rng.randrange(len(avail))]
    return ChainState(colouring, cfg.steps)


# ---------------------------------------------------------------------------
# Exact state-space analysis
# ---------------------------------------------------------------------------

def enumerate_states(R: Region, boundary: PartialVertexColouring,
                     q: int = DEFAULT_Q, cap: int = 5000) -> list[tuple]:
    """All agreeing proper colourings, as sorted tuples of (vertex, colour)."""
    forbidden = _forbidden_sets(vertex_to_edge_colouring(boundary))
    verts = sorted(R.vertices)
    adj = {v: tuple(w for w in neighbour_ring(v) if w in R.vertices)
           for v in verts}
    out: list[tuple] = []
    cur: dict[Coord, int] = {}

    def rec(i):
        if len(out) > cap:
            raise ValueError(f"state space exceeds cap {cap}")
        if i == len(verts):
            out.append(tuple(cur[v] for v in verts))
            return
        v = verts[i]
        for c in range(1, q + 1):
            if c in forbidden[v] or any(cur.get(w) == c for w in adj[v]):
                continue
            cur[v] = c
            rec(i + 1)
            del cur[v]

    rec(0)
    return out


def exact_transition_matrix(R: Region, boundary: PartialVertexColouring,
                            q: int = DEFAULT_Q, cap: int = 5000,
                            rejection_variant: bool = False,
                            ) -> tuple[list[tuple], list[dict[int, Fraction]]]:
    """Exact rational transition matrix of the dynamics.

    Returns (states, rows) where rows[i] maps target state index to
    probability.  Rows sum to one and the uniform vector is stationary.
    """
    states = enumerate_states(R, boundary, q, cap)
    index = {s: i for i, s in enumerate(states)}
    verts = sorted(R.vertices)
    n = len(verts)
    forbidden = _forbidden_sets(vertex_to_edge_colouring(boundary))
    rows: list[dict[int, Fraction]] = []
    for s in states:
        row: dict[int, Fraction] = {}
        colouring = dict(zip(verts, s))
        for vi, v in enumerate(verts):
            avail = available_colours(v, colouring, forbidden, R, q)
            if rejection_variant:
                stay = Fraction(q - len(avail), q * n)
                if stay:
                    i = index[s]
                    row[i] = row.get(i, Fraction(0)) + stay
                p = Fraction(1, q * n)
            else:
                p = Fraction(1, n * len(avail))
            for c in avail:
                t = s[:vi] + (c,) + s[vi + 1:]
                j = index[t]
                row[j] = row.get(j, Fraction(0)) + p
        rows.append(row)
    return states, rows


def uniform_is_stationary(rows: list[dict[int, Fraction]]) -> bool:
    """Exact check that the uniform vector is a left eigenvector at 1."""
    n = len(rows)
    mass = [Fraction(0)] * n
    for row in rows:
        for j, p in row.items():
            mass[j] += p
    return all(m == 1 for m in mass)


def matrix_power_tv(rows: list[dict[int, Fraction]], start: int,
                    steps: Sequence[int]) -> dict[int, Fraction]:
    """Exact TV distance to uniform of the chain started at ``start``."""
    n = len(rows)
    dist = [Fraction(0)] * n
    dist[start] = Fraction(1)
    uni = Fraction(1, n)
    out = {}
    want = set(steps)
    upto = max(steps)
    if 0 in want:
        out[0] = sum(abs(d - uni) for d in dist) / 2
    for t in range(1, upto + 1):
        nxt = [Fraction(0)] * n
        for i, d in enumerate(dist):
            if d == 0:
                continue
            for j, p in rows[i].items():
                nxt[j] += d * p
        dist = nxt
        if t in want:
            out[t] = sum(abs(d - uni) for d in dist) / 2
    return out


# ---------------------------------------------------------------------------
# Empirical TV decay
# ---------------------------------------------------------------------------

def _simulation_tables(R: Region, boundary: PartialVertexColouring, q: int):
    """Vectorized per-vertex neighbour index and boundary-mask tables."""
    verts = sorted(R.vertices)
    vidx = {v: i for i, v in enumerate(verts)}
    forbidden = _forbidden_sets(vertex_to_edge_colouring(boundary))
    maxdeg = 6
    nb = np.full((len(verts), maxdeg), -1, dtype=np.int64)
    for i, v in enumerate(verts):
        js = [vidx[w] for w in neighbour_ring(v) if w in R.vertices]
        nb[i, :len(js)] = js
    base_ok = np.ones((len(verts), q + 1), dtype=bool)
    base_ok[:, 0] = False
    for i, v in enumerate(verts):
        for c in forbidden[v]:
            base_ok[i, c] = False
    return verts, nb, base_ok


def simulate_tv_curve(R: Region, boundary: PartialVertexColouring,
                      init: dict[Coord, int], steps: Sequence[int],
                      trials: int, seed: int, q: int = DEFAULT_Q,
                      ) -> dict[int, float]:
    """Empirical TV distance to uniform at the requested step counts.

    Runs ``trials`` independent chains from ``init`` (true single-site
    dynamics, vectorized over trials) and compares the empirical state
    distribution with the uniform distribution over all agreeing states.
    """
    states = enumerate_states(R, boundary, q)
    index = {s: i for i, s in enumerate(states)}
    verts, nb, base_ok = _simulation_tables(R, boundary, q)
    n = len(verts)
    rng = np.random.default_rng(seed)
    cols = np.tile(np.array([init[v] for v in verts], dtype=np.int64),
                   (trials, 1))
    out: dict[int, float] = {}
    want = sorted(set(steps))
    t = 0

    def record(tt):
        packed = np.zeros(trials, dtype=np.int64)
        for i in range(n):
            packed = packed * (q + 1) + cols[:, i]
        keys = np.array([int(np.dot([s[i] for i in range(n)],
                                    [(q + 1) ** (n - 1 - i) for i in range(n)]))
                         for s in states], dtype=np.int64)
        counts = np.zeros(len(states), dtype=np.int64)
        order = np.argsort(keys)
        pos = np.searchsorted(keys[order], packed)
        np.add.at(counts, order[pos], 1)
        emp = counts / trials
        out[tt] = float(np.abs(emp - 1.0 / len(states)).sum() / 2)

    if want and want[0] == 0:
        record(0)
        want = want[1:]
    for target in want:
        while t < target:
            v = rng.integers(0, n, size=trials)
            nbcols = cols[np.arange(trials)[:, None], nb[v]]
            nbcols[nb[v] < 0] = 0
            ok = base_ok[v].copy()
            rows = np.arange(trials)[:, None]
            ok[rows, nbcols] = False
            ok[:, 0] = False
            navail = ok.sum(axis=1)
            pick = (rng.random(trials) * navail).astype(np.int64)
            csum = np.cumsum(ok, axis=1)
            newc = np.argmax(csum > pick[:, None], axis=1)
            cols[np.arange(trials), v] = newc
            t += 1
        record(t)
    return out


def tv_decay(cfg: ChainConfig, steps: Sequence[int], trials: int,
             ) -> list[tuple[int, float, float]]:
    """Worst-of-two-starts empirical TV decay with confidence half-widths.

    The curve is monotone-smoothed (running minimum); the half-width is the
    normal-approximation bound √(|Ω| / (4·trials)) on the empirical TV
    estimate, reported per step.
    """
    states = enumerate_states(cfg.region, cfg.boundary, cfg.q)
    verts = sorted(cfg.region.vertices)
    inits = [dict(zip(verts, states[0])), dict(zip(verts, states[-1]))]
    curves = [simulate_tv_curve(cfg.region, cfg.boundary, ini, steps, trials,
                                cfg.seed + k, cfg.q)
              for k, ini in enumerate(inits)]
    half = (len(states) / (4 * trials)) ** 0.5
    out = []
    best = float("inf")
    for t in sorted(set(steps)):
        val = max(c[t] for c in curves)
        best = min(best, val)
        out.append((t, best, half))
    return out


# ---------------------------------------------------------------------------
# Demonstration-grade approximate counting
# ---------------------------------------------------------------------------

def approx_count(R: Region, boundary: PartialVertexColouring,
                 samples_per_factor: int = 2000, seed: int = 0,
                 q: int = DEFAULT_Q, burn_factor: int = 10,
                 ) -> tuple[float, tuple[float, float]]:
    """Telescoping sampling estimator of the number of agreeing colourings.

    Non-rigorous demonstration: vertices are pinned one at a time to their
    empirically most likely colour; each marginal probability is estimated
    from Glauber samples after a burn-in of ``burn_factor``·n² steps.  The
    interval combines per-factor binomial standard errors (two sigma).
    """
    rng = random.Random(seed)
    verts = sorted(R.vertices)
    pinned: dict[Coord, int] = {}
    estimate = 1.0
    rel_var = 0.0
    edge_form = {v: boundary[v] for v in boundary.assignment}
    for v in verts:
        remaining = [u for u in verts if u not in pinned]
        n = len(remaining)
        forbidden = _pinned_forbidden(R, boundary, pinned, q)
        burn = burn_factor * n * n
        colouring = _greedy(remaining, forbidden, R, q)
        # Phase one picks the pin colour, phase two independently estimates
        # its probability (reusing one sample would bias the maximum up).
        pick_phase = samples_per_factor
        freq = [0] * (q + 1)
        est_count = 0
        c_star = None
        for t in range(burn + 2 * samples_per_factor):
            u = remaining[rng.randrange(n)]
            avail = [c for c in range(1, q + 1)
                     if c not in forbidden[u]
                     and all(colouring.get(w) != c for w in neighbour_ring(u)
                             if w in colouring)]
            colouring[u] = avail[rng.randrange(len(avail))]
            if burn <= t < burn + pick_phase:
                freq[colouring[v]] += 1
            elif t == burn + pick_phase:
                c_star = max(range(1, q + 1), key=lambda c: freq[c])
                est_count += colouring[v] == c_star
            elif t > burn + pick_phase:
                est_count += colouring[v] == c_star
        p_hat = est_count / samples_per_factor
        estimate /= p_hat
        rel_var += (1 - p_hat) / (p_hat * samples_per_factor)
        pinned[v] = c_star
    half = 2 * estimate * rel_var ** 0.5
    return estimate, (estimate - half, estimate + half)


def _pinned_forbidden(R: Region, boundary: PartialVertexColouring,
                      pinned: dict[Coord, int], q: int):
    forbidden = {v: set(_forbidden_sets(vertex_to_edge_colouring(boundary))[v])
                 for v in R.vertices}
    for u, c in pinned.items():
        for w in neighbour_ring(u):
            if w in R.vertices and w not in pinned:
                forbidden[w].add(c)
    return {v: frozenset(s) for v, s in forbidden.items() if v not in pinned}


def _greedy(remaining, forbidden, R: Region, q: int) -> dict[Coord, int]:
    colouring: dict[Coord, int] = {}
    for v in remaining:
        for c in range(1, q + 1):
            if c in forbidden[v]:
                continue
            if any(colouring.get(w) == c for w in neighbour_ring(v)
                   if w in colouring):
                continue
            colouring[v] = c
            break
        else:
            raise NoValidColouringError("greedy stuck")
    return colouring
