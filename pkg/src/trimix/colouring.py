"""Proper-colouring semantics on lattice regions.

Colours are 1..q (default q = 9); boundary objects may carry colour 0,
meaning "no colour" / no constraint.  A colouring of a region agrees with a
partial edge colouring of its boundary when, for every boundary edge into a
region vertex v, the edge's colour (if nonzero) differs from the colour of v.

Exact counts are computed by a vertex-elimination dynamic program over a
greedy min-degree order; a q^|R| brute-force enumerator serves as an
independent oracle for small regions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .lattice import (
    Coord, Edge, Region, edge, edge_boundary, vertex_boundary,
    neighbour_ring, other_endpoint,
)

DEFAULT_Q = 9


@dataclass(frozen=True)
class Parameters:
    q: int = DEFAULT_Q

    def __post_init__(self):
        if self.q < 3:
            raise ValueError("need at least 3 colours")


class DomainMismatchError(ValueError):
    pass


class NoValidColouringError(ValueError):
    pass


@dataclass(frozen=True)
class PartialEdgeColouring:
    """Assignment of colours 0..q to every boundary edge of a region."""

    region: Region
    assignment: Mapping[Edge, int]
    q: int = DEFAULT_Q

    def __post_init__(self):
        boundary = edge_boundary(self.region)
        assigned = frozenset(self.assignment)
        if assigned != boundary:
            missing = boundary - assigned
            extra = assigned - boundary
            raise DomainMismatchError(
                f"edge colouring domain mismatch: missing {sorted(missing)}, "
                f"extra {sorted(extra)}")
        for e, c in self.assignment.items():
            if not 0 <= c <= self.q:
                raise ValueError(f"edge {e} colour {c} outside 0..{self.q}")
        object.__setattr__(self, "assignment", dict(self.assignment))

    def __getitem__(self, e: Edge) -> int:
        return self.assignment[e]

    def with_colour(self, e: Edge, c: int) -> "PartialEdgeColouring":
        new = dict(self.assignment)
        new[e] = c
        return PartialEdgeColouring(self.region, new, self.q)


@dataclass(frozen=True)
class PartialVertexColouring:
    """Assignment of colours 0..q to every vertex of ∂R."""

    region: Region
    assignment: Mapping[Coord, int]
    q: int = DEFAULT_Q

    def __post_init__(self):
        boundary = vertex_boundary(self.region)
        if frozenset(self.assignment) != boundary:
            raise DomainMismatchError("vertex colouring domain must equal ∂R")
        for v, c in self.assignment.items():
            if not 0 <= c <= self.q:
                raise ValueError(f"vertex {v} colour {c} outside 0..{self.q}")
        object.__setattr__(self, "assignment", dict(self.assignment))

    def __getitem__(self, v: Coord) -> int:
        return self.assignment[v]


def free_boundary(R: Region, q: int = DEFAULT_Q) -> PartialEdgeColouring:
    """The all-zero (unconstrained) boundary colouring of R."""
    return PartialEdgeColouring(R, {e: 0 for e in edge_boundary(R)}, q)


def vertex_to_edge_colouring(Bv: PartialVertexColouring) -> PartialEdgeColouring:
    """Edge form of a vertex boundary colouring: every edge at w gets Bv(w)."""
    R = Bv.region
    assignment = {}
    for e in edge_boundary(R):
        a, b = e
        w = a if a not in R.vertices else b
        assignment[e] = Bv[w]
    return PartialEdgeColouring(R, assignment, Bv.q)


def agrees(colouring: Mapping[Coord, int], B: PartialEdgeColouring) -> bool:
    """Whether a full colouring of the region agrees with boundary B.

    The colouring must be proper inside the region as well; both conditions
    are checked (the count operations only ever consider proper colourings,
    but agreement alone would be meaningless on improper input).
    """
    R = B.region
    if frozenset(colouring) != R.vertices:
        raise DomainMismatchError("colouring domain must equal the region")
    for v in R.vertices:
        for w in neighbour_ring(v):
            if w in R.vertices and colouring[v] == colouring[w]:
                return False
    for e, c in B.assignment.items():
        if c == 0:
            continue
        a, b = e
        v = a if a in R.vertices else b
        if colouring[v] == c:
            return False
    return True


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

def _forbidden_sets(B: PartialEdgeColouring,
                    ignore_edge: Optional[Edge] = None) -> dict[Coord, frozenset[int]]:
    """Per-region-vertex sets of colours excluded by the boundary."""
    out: dict[Coord, set[int]] = {v: set() for v in B.region.vertices}
    for e, c in B.assignment.items():
        if c == 0 or e == ignore_edge:
            continue
        a, b = e
        v = a if a in B.region.vertices else b
        out[v].add(c)
    return {v: frozenset(s) for v, s in out.items()}


def elimination_order(R: Region) -> list[Coord]:
    """Greedy min-degree order over the internal adjacency graph.

    Ties are broken by lexicographic coordinate; the order determines the
    frontier widths of the counting DP (width ≤ 3 on all shipped regions).
    """
    remaining = set(R.vertices)
    adj = {v: {w for w in neighbour_ring(v) if w in R.vertices} for v in R.vertices}
    order = []
    while remaining:
        v = min(remaining, key=lambda u: (len(adj[u] & remaining), u))
        order.append(v)
        remaining.discard(v)
    return order


def count(R: Region, B: PartialEdgeColouring,
          pin: Optional[tuple[Coord, int]] = None, q: int = DEFAULT_Q,
          ignore_edge: Optional[Edge] = None) -> int:
    """Exact number of proper q-colourings of R agreeing with B.

    ``pin`` optionally fixes one vertex to one colour.  ``ignore_edge``
    disregards the colour of one boundary edge (used for the distinguished
    edge of a boundary pair).
    """
    if pin is not None and pin[0] not in R.vertices:
        raise ValueError(f"pin vertex {pin[0]} not in region")
    forbidden = _forbidden_sets(B, ignore_edge)
    return _count_ordered(R, forbidden, pin, q, elimination_order(R))


def _count_ordered(R: Region, forbidden: Mapping[Coord, frozenset[int]],
                   pin: Optional[tuple[Coord, int]], q: int,
                   order: Sequence[Coord]) -> int:
    """DP core of count(): forbidden colour sets are given directly."""
    pos = {v: i for i, v in enumerate(order)}
    adj_later = {
        v: tuple(w for w in neighbour_ring(v)
                 if w in R.vertices and pos[w] > pos[v])
        for v in order
    }

    # The frontier holds vertices already coloured that still have uncoloured
    # neighbours; states map frontier colour tuples to counts.
    colours = range(1, q + 1)
    states: dict[tuple[int, ...], int] = {(): 1}
    frontier: list[Coord] = []
    for i, v in enumerate(order):
        checks = tuple(j for j, u in enumerate(frontier)
                       if v in adj_later[u])
        bad = forbidden[v]
        if pin is not None and pin[0] == v:
            choice = [pin[1]] if pin[1] not in bad else []
        else:
            choice = [c for c in colours if c not in bad]
        new_states: dict[tuple[int, ...], int] = {}
        for key, n in states.items():
            used = {key[j] for j in checks}
            for c in choice:
                if c in used:
                    continue
                nk = key + (c,)
                new_states[nk] = new_states.get(nk, 0) + n
        frontier.append(v)
        # Retire frontier vertices with no uncoloured neighbours left.
        keep = [j for j, u in enumerate(frontier)
                if any(pos[w] > i for w in adj_later[u])]
        if len(keep) < len(frontier):
            shrunk: dict[tuple[int, ...], int] = {}
            for key, n in new_states.items():
                nk = tuple(key[j] for j in keep)
                shrunk[nk] = shrunk.get(nk, 0) + n
            new_states = shrunk
            frontier = [frontier[j] for j in keep]
        states = new_states
        if not states:
            return 0
    return sum(states.values())


@dataclass(frozen=True)
class CountBreakdown:
    """Per-colour counts n_1..n_q pinning the distinguished vertex."""

    per_colour: tuple[int, ...]

    def __getitem__(self, colour: int) -> int:
        return self.per_colour[colour - 1]

    @property
    def total(self) -> int:
        return sum(self.per_colour)


def count_breakdown(R: Region, B: PartialEdgeColouring, v: Coord,
                    q: int = DEFAULT_Q,
                    ignore_edge: Optional[Edge] = None) -> CountBreakdown:
    """n_i = number of agreeing proper colourings with v coloured i."""
    if v not in R.vertices:
        raise ValueError(f"{v} not in region")
    return CountBreakdown(tuple(
        count(R, B, pin=(v, i), q=q, ignore_edge=ignore_edge)
        for i in range(1, q + 1)))


def brute_force_count(R: Region, B: PartialEdgeColouring,
                      pin: Optional[tuple[Coord, int]] = None,
                      q: int = DEFAULT_Q, cap: int = 8,
                      ignore_edge: Optional[Edge] = None) -> int:
    """Exhaustive q^|R| oracle with the same contract as count()."""
    verts = sorted(R.vertices)
    if len(verts) > cap:
        raise ValueError(f"region too large for brute force (|R|={len(verts)} > {cap})")
    forbidden = _forbidden_sets(B, ignore_edge)
    adj = {v: tuple(w for w in neighbour_ring(v) if w in R.vertices) for v in verts}
    total = 0
    assignment: dict[Coord, int] = {}

    def rec(i: int):
        nonlocal total
        if i == len(verts):
            total += 1
            return
        v = verts[i]
        if pin is not None and pin[0] == v:
            options = [pin[1]]
        else:
            options = range(1, q + 1)
        for c in options:
            if c in forbidden[v]:
                continue
            if any(assignment.get(w) == c for w in adj[v]):
                continue
            assignment[v] = c
            rec(i + 1)
            del assignment[v]

    rec(0)
    return total


def marginal(R: Region, B: PartialEdgeColouring, v: Coord,
             q: int = DEFAULT_Q,
             ignore_edge: Optional[Edge] = None) -> dict[int, Fraction]:
    """Exact marginal distribution of the colour of v under π_B."""
    bd = count_breakdown(R, B, v, q, ignore_edge)
    total = bd.total
    if total == 0:
        raise NoValidColouringError("no proper colouring agrees with the boundary")
    return {i: Fraction(bd[i], total) for i in range(1, q + 1)}


def tv_distance(p: Mapping, r: Mapping) -> Fraction:
    """Total variation distance (1/2)Σ|p − r| over the union support."""
    keys = set(p) | set(r)
    return sum((abs(Fraction(p.get(k, 0)) - Fraction(r.get(k, 0))) for k in keys),
               Fraction(0)) / 2


# ---------------------------------------------------------------------------
# Boundary colouring files
# ---------------------------------------------------------------------------

def parse_boundary(text: str, R: Region, q: int = DEFAULT_Q) -> PartialEdgeColouring:
    assignment: dict[Edge, int] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "e" or len(parts) != 6:
            raise ValueError(f"unrecognized boundary line: {raw!r}")
        x1, y1, x2, y2, c = map(int, parts[1:])
        assignment[edge((x1, y1), (x2, y2))] = c
    return PartialEdgeColouring(R, assignment, q)


def format_boundary(B: PartialEdgeColouring) -> str:
    lines = []
    for e in sorted(B.assignment):
        (x1, y1), (x2, y2) = e
        lines.append(f"e {x1} {y1} {x2} {y2} {B[e]}")
    return "\n".join(lines) + "\n"
