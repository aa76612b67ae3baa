"""μ(X): the optimal-coupling disagreement probability at v_X.

For an edge-boundary pair X with discrepancy colours (1, 2) at e_X, let
n_i be the number of proper colourings of the region that agree with the
boundary *disregarding* e_X and give v_X colour i.  With Ω = n_1,
Ω' = n_2 and Ω_both = Σ_{i≥3} n_i,

    μ(X) = max{|Ω|, |Ω'|} / (|Ω_both| + max{|Ω|, |Ω'|}),

which equals the total variation distance between the two conditioned
marginals at v_X.  This module computes μ exactly, maximizes it over the
canonical boundary stream of a pair shape, and provides a randomized
hill-climbing lower-bound estimator for large shapes.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .lattice import Coord, Region, load_region
from .colouring import (
    DEFAULT_Q, CountBreakdown, count, count_breakdown, NoValidColouringError,
)
from .boundary import (
    BoundaryUnit, CanonicalBoundary, EdgeBoundaryPair, boundary_units,
    enumerate_boundaries, forbidden_profile,
)


class UndefinedMuError(NoValidColouringError):
    """No colouring agrees with the boundary even off the distinguished edge."""


@dataclass(frozen=True)
class MuResult:
    value: Fraction
    witness: Optional[CanonicalBoundary]
    omega: int
    omega_prime: int
    omega_both: int


def _mu_from_counts(omega: int, omega_prime: int, omega_both: int) -> Fraction:
    top = max(omega, omega_prime)
    if omega_both + top == 0:
        raise UndefinedMuError("no colouring agrees with the boundary")
    return Fraction(top, omega_both + top)


def mu_exact(X: EdgeBoundaryPair) -> MuResult:
    """Exact μ of a single edge-boundary pair."""
    bd = count_breakdown(X.region, X.B, X.v_x, X.q, ignore_edge=X.e_x)
    omega = bd[X.B[X.e_x]]
    omega_prime = bd[X.Bprime[X.e_x]]
    omega_both = bd.total - omega - omega_prime
    return MuResult(_mu_from_counts(omega, omega_prime, omega_both), None,
                    omega, omega_prime, omega_both)


class _ProfileCache:
    """Memoizes (n_1, n_2, n_other) on the forbidden-set profile of v_X."""

    def __init__(self, R: Region, v_x: Coord, q: int):
        from .colouring import elimination_order
        self.R, self.v_x, self.q = R, v_x, q
        self.order = elimination_order(R)
        self.vlist = sorted(R.vertices)
        self.cache: dict = {}

    def counts(self, profile: dict[Coord, frozenset[int]]) -> tuple[int, int, int]:
        from .colouring import _count_ordered
        key = tuple(profile[v] for v in self.vlist)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        n1 = _count_ordered(self.R, profile, (self.v_x, 1), self.q, self.order)
        n2 = _count_ordered(self.R, profile, (self.v_x, 2), self.q, self.order)
        total = _count_ordered(self.R, profile, None, self.q, self.order)
        val = (n1, n2, total - n1 - n2)
        self.cache[key] = val
        return val


def mu_of_boundary(cb: CanonicalBoundary, R: Region, v_x: Coord,
                   cache: Optional[_ProfileCache] = None,
                   q: int = DEFAULT_Q) -> MuResult:
    """μ of a canonical boundary via the forbidden-set profile."""
    profile = forbidden_profile(cb, R)
    if cache is None:
        cache = _ProfileCache(R, v_x, q)
    n1, n2, nboth = cache.counts(profile)
    return MuResult(_mu_from_counts(n1, n2, nboth), cb, n1, n2, nboth)


def _scan_partition(args):
    R, v_x, w_x, q, prefix = args
    cache = _ProfileCache(R, v_x, q)
    best: Optional[MuResult] = None
    for cb in enumerate_boundaries(R, v_x, w_x, q, prefix=prefix):
        res = mu_of_boundary(cb, R, v_x, cache, q)
        if best is None or res.value > best.value or (
                res.value == best.value
                and res.witness.sort_key() < best.witness.sort_key()):
            best = res
    return best


def _merge(a: Optional[MuResult], b: Optional[MuResult]) -> Optional[MuResult]:
    if a is None:
        return b
    if b is None:
        return a
    if b.value > a.value:
        return b
    if b.value == a.value and b.witness.sort_key() < a.witness.sort_key():
        return b
    return a


def mu_max(R: Region, v_x: Coord, w_x: Coord, q: int = DEFAULT_Q,
           workers: int = 1) -> MuResult:
    """Maximum μ over the canonical boundary stream of the pair shape.

    The witness is the lexicographically least canonical boundary attaining
    the maximum; the (max, least-witness) reduction is associative, so the
    result is independent of the worker count.
    """
    if workers <= 1:
        res = _scan_partition((R, v_x, w_x, q, None))
    else:
        units = boundary_units(R, v_x, w_x)
        free = [i for i, u in enumerate(units) if not u.touches_ex]
        # Partition by the colours of leading units (including the e_X runs,
        # whose values the enumerator fixes itself).
        depth = min(len(units), 2 if free else len(units))
        prefixes = set()
        for cb in enumerate_boundaries(R, v_x, w_x, q):
            prefixes.add(cb.colours[:depth])
        tasks = [(R, v_x, w_x, q, p) for p in sorted(prefixes)]
        res = None
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_scan_partition, tasks):
                res = _merge(res, part)
    if res is None:
        raise UndefinedMuError("empty boundary stream")
    return res


def mu_hill_climb(R: Region, v_x: Coord, w_x: Coord, seed: int,
                  restarts: int = 5, moves_per_restart: int = 500,
                  q: int = DEFAULT_Q) -> MuResult:
    """Randomized local search over per-unit boundary colourings.

    Single-unit colour moves, accepted only on strict μ increase; the result
    is a lower bound on mu_max and is deterministic for a fixed seed.
    """
    rng = random.Random(seed)
    units = boundary_units(R, v_x, w_x)
    nu = len(units)
    cache = _ProfileCache(R, v_x, q)
    ex_idx = [i for i, u in enumerate(units) if u.touches_ex]

    def value(cols: list[int]) -> MuResult:
        cb = CanonicalBoundary(units, tuple(cols))
        return mu_of_boundary(cb, R, v_x, cache, q)

    best: Optional[MuResult] = None
    for _ in range(restarts):
        cols = [0] * nu
        # the flanking units carry one discrepancy colour each
        for i, c in zip(ex_idx, rng.choice([(1, 2), (2, 1)])):
            cols[i] = c
        for i in range(nu):
            if i not in ex_idx:
                cols[i] = rng.randint(0, q)
        cur = value(cols)
        for _ in range(moves_per_restart):
            i = rng.randrange(nu)
            if i in ex_idx:
                if len(ex_idx) == 2:
                    new = list(cols)
                    a, b = ex_idx
                    new[a], new[b] = cols[b], cols[a]
                else:
                    new = list(cols)
                    new[i] = 3 - cols[i]
            else:
                c = rng.randint(0, q)
                if c == cols[i]:
                    continue
                new = list(cols)
                new[i] = c
            cand = value(new)
            if cand.value > cur.value:
                cols, cur = new, cand
        if best is None or cur.value > best.value:
            best = cur
    return best


# ---------------------------------------------------------------------------
# MuTable
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MuEntry:
    index: int
    value: Fraction
    region_file: str


@dataclass(frozen=True)
class MuTable:
    entries: tuple[MuEntry, ...]

    def __getitem__(self, index: int) -> MuEntry:
        for e in self.entries:
            if e.index == index:
                return e
        raise KeyError(index)

    def value(self, index: int) -> Fraction:
        return self[index].value


def parse_mu_table(text: str) -> MuTable:
    entries = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        label, frac, path = line.split()
        if not label.startswith("M"):
            raise ValueError(f"bad μ-table label {label!r}")
        num, den = frac.split("/") if "/" in frac else (frac, "1")
        entries.append(MuEntry(int(label[1:]), Fraction(int(num), int(den)), path))
    return MuTable(tuple(entries))


def format_mu_table(table: MuTable) -> str:
    lines = [f"M{e.index} {e.value.numerator}/{e.value.denominator} {e.region_file}"
             for e in table.entries]
    return "\n".join(lines) + "\n"


def load_mu_table(path) -> MuTable:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_mu_table(fh.read())


def load_mu_regions(table: MuTable, base: Path) -> dict[int, tuple[Region, Coord, Coord]]:
    """Load the region files referenced by a μ-table, resolving against base."""
    out = {}
    for e in table.entries:
        R, dv, dw = load_region(Path(base) / e.region_file)
        if dv is None or dw is None:
            raise ValueError(f"{e.region_file} lacks distinguished vertices")
        out[e.index] = (R, dv, dw)
    return out


def format_mu_record(name: str, res: MuResult) -> str:
    witness = "-" if res.witness is None else \
        "(" + ",".join(map(str, res.witness.colours)) + ")"
    return (f"{name} mu={res.value.numerator}/{res.value.denominator} "
            f"omega={res.omega} omega'={res.omega_prime} both={res.omega_both} "
            f"witness={witness}")
