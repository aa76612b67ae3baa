"""Boundary pairs and canonical boundary enumeration.

An *edge-boundary pair* is a region R together with a distinguished boundary
edge e_X = {w_X, v_X} (w_X outside, v_X inside) and two partial colourings
B, B' of the edge boundary that differ exactly at e_X.  Such pairs drive the
recursive coupling: the discrepancy at e_X propagates to child pairs over
the edges E_X from v_X into the region.

The enumeration of boundary colourings for μ-maximization works per
boundary *unit* (one colour variable per boundary vertex, with w_X split
into its runs of consecutive region-edges), and is canonicalized by

  * first-use ordering of the interchangeable colours 3..q, and
  * sorted colours within classes of boundary vertices that have identical
    sets of region neighbours (swapping those colours cannot change any
    count).

Every valid boundary pair in the per-unit space is equivalent, under colour
relabelling and within-class swaps, to a canonical representative that the
stream yields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .lattice import (
    Coord, Edge, Region, edge, edge_boundary, vertex_boundary,
    neighbour_ring, incident_edges, clockwise_adjacent, other_endpoint,
)
from .colouring import DEFAULT_Q, PartialEdgeColouring, PartialVertexColouring


@dataclass(frozen=True)
class EdgeBoundaryPair:
    region: Region
    v_x: Coord
    w_x: Coord
    B: PartialEdgeColouring
    Bprime: PartialEdgeColouring

    def __post_init__(self):
        if self.v_x not in self.region.vertices:
            raise ValueError("v_x must lie in the region")
        if self.w_x in self.region.vertices:
            raise ValueError("w_x must lie outside the region")

    @property
    def e_x(self) -> Edge:
        return edge(self.v_x, self.w_x)

    @property
    def q(self) -> int:
        return self.B.q


@dataclass(frozen=True)
class VertexBoundaryPair:
    region: Region
    w_x: Coord
    Bv: PartialVertexColouring
    Bvprime: PartialVertexColouring


def validate_edge_pair(X: EdgeBoundaryPair) -> list[str]:
    """All violated edge-boundary-pair requirements (empty list = valid)."""
    out: list[str] = []
    R = X.region
    e_x = X.e_x
    if e_x not in X.B.assignment:
        return [f"distinguished edge {e_x} is not a boundary edge"]
    if sum(1 for u in neighbour_ring(X.w_x) if u in R.vertices) > 5:
        out.append("at most five neighbours of w_x may lie in the region")
    for e in X.B.assignment:
        b, bp = X.B[e], X.Bprime[e]
        if e == e_x:
            if b == bp:
                out.append("discrepancy edge colours equal")
            if b <= 0 or bp <= 0:
                out.append("discrepancy edge colours must be positive")
        elif b != bp:
            out.append(f"B and B' differ at non-distinguished edge {e}")
    # Clockwise-adjacent boundary edges at a shared boundary vertex must
    # agree in B or in B'.
    boundary = set(X.B.assignment)
    for w in vertex_boundary(R):
        ring = [e for e in incident_edges(w) if e in boundary]
        for i, e1 in enumerate(ring):
            for e2 in ring[i + 1:]:
                if not clockwise_adjacent(e1, e2, w):
                    continue
                if X.B[e1] != X.B[e2] and X.Bprime[e1] != X.Bprime[e2]:
                    out.append(
                        f"clockwise adjacent edges {e1}, {e2} at {w} "
                        "disagree in both B and B'")
    # The two boundary edges flanking e_X at w_X (when both exist) carry
    # one discrepancy colour each: agreement with e_X is only possible on
    # the B side for one of them and on the B' side for the other.
    flank = [e for e in incident_edges(X.w_x)
             if e in boundary and e != e_x
             and clockwise_adjacent(e, e_x, X.w_x)]
    if len(flank) == 2 and X.B[flank[0]] == X.B[flank[1]]:
        out.append("edges flanking the distinguished edge must take the "
                   "two discrepancy colours, one each")
    return out


def validate_vertex_pair(X: VertexBoundaryPair) -> list[str]:
    out: list[str] = []
    if X.w_x not in vertex_boundary(X.region):
        out.append("w_x must be a boundary vertex")
        return out
    b, bp = X.Bv[X.w_x], X.Bvprime[X.w_x]
    if b == bp:
        out.append("discrepancy colours equal")
    if b <= 0 or bp <= 0:
        out.append("discrepancy colours must be positive")
    for v in X.Bv.assignment:
        if v != X.w_x and X.Bv[v] != X.Bvprime[v]:
            out.append(f"colourings differ at non-distinguished vertex {v}")
    return out


def ordered_EX(X: EdgeBoundaryPair) -> tuple[Edge, ...]:
    """Edges from v_X into the region, clockwise starting after e_X."""
    ring = neighbour_ring(X.v_x)
    start = ring.index(X.w_x)
    out = []
    for j in range(1, 6):
        u = ring[(start + j) % 6]
        if u in X.region.vertices:
            out.append(edge(X.v_x, u))
    return tuple(out)


def child_pair(X: EdgeBoundaryPair, i: int, c: int, cp: int) -> EdgeBoundaryPair:
    """The child pair X_i(c, c'): region loses v_X, discrepancy moves to e_i."""
    ex_edges = ordered_EX(X)
    k = len(ex_edges)
    if not 1 <= i <= k:
        raise ValueError(f"i must be in 1..{k}")
    if c == cp or not (1 <= c <= X.q and 1 <= cp <= X.q):
        raise ValueError("c and c' must be distinct colours in 1..q")
    R2 = X.region.without(X.v_x)
    assignment = {}
    for e in edge_boundary(R2):
        if e in X.B.assignment:
            assignment[e] = X.B[e]
        else:
            j = ex_edges.index(e) + 1  # e must be one of e_1..e_k
            assignment[e] = cp if j < i else c
    B2 = PartialEdgeColouring(R2, assignment, X.q)
    Bp2 = B2.with_colour(ex_edges[i - 1], cp)
    return EdgeBoundaryPair(R2, other_endpoint(ex_edges[i - 1], X.v_x), X.v_x,
                            B2, Bp2)


# ---------------------------------------------------------------------------
# Boundary units and canonical enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryUnit:
    """One colour variable of the boundary search space.

    Either a boundary vertex other than w_X (``vertex`` set, ``run`` empty)
    or one run of w_X's non-e_X boundary edges (``run`` = the edge targets).
    ``targets`` are the region vertices whose colour lists this unit feeds.
    """

    kind: str                      # "vertex" | "wrun"
    vertex: Optional[Coord]
    targets: tuple[Coord, ...]     # region neighbours, sorted
    touches_ex: bool = False       # w_X-run clockwise-adjacent to e_X


def _wx_runs(R: Region, v_x: Coord, w_x: Coord) -> tuple[list[list[Coord]], list[list[Coord]]]:
    """Runs of w_X's region-neighbour slots, split at the e_X slot.

    Returns (runs adjacent to e_X in clockwise order, other runs).  A run is
    the list of region neighbours at consecutive slots around w_X.
    """
    ring = neighbour_ring(w_x)
    ex_slot = ring.index(v_x)
    in_R = [ring[j] in R.vertices for j in range(6)]
    # Clockwise from the slot after e_X.
    run_a: list[Coord] = []
    for j in range(1, 6):
        s = (ex_slot + j) % 6
        if in_R[s]:
            run_a.append(ring[s])
        else:
            break
    run_b: list[Coord] = []
    for j in range(1, 6 - len(run_a)):
        s = (ex_slot - j) % 6
        if in_R[s]:
            run_b.append(ring[s])
        else:
            break
    taken = {v_x} | set(run_a) | set(run_b)
    middle: list[list[Coord]] = []
    cur: list[Coord] = []
    for j in range(1, 6):
        s = (ex_slot + j) % 6
        if in_R[s] and ring[s] not in taken:
            cur.append(ring[s])
        elif cur:
            middle.append(cur)
            cur = []
    if cur:
        middle.append(cur)
    adjacent = [r for r in (run_a, run_b) if r]
    return adjacent, middle


def _angle_key(v: Coord, centre: tuple[float, float], start: float):
    # Geometric embedding of (x, y): X = x·√3/2, Y = y/2.
    dx = (v[0] - centre[0]) * math.sqrt(3) / 2
    dy = (v[1] - centre[1]) / 2
    theta = math.atan2(dy, dx)
    r = math.hypot(dx, dy)
    return ((start - theta) % (2 * math.pi), r, v)


def boundary_units(R: Region, v_x: Coord, w_x: Coord) -> tuple[BoundaryUnit, ...]:
    """The boundary colour variables, in the deterministic scan order.

    Boundary vertices other than w_X are scanned clockwise (by angle around
    the region centroid) starting from w_X's direction; w_X's own runs come
    first.
    """
    if w_x not in vertex_boundary(R) or v_x not in R.vertices:
        raise ValueError("need v_x in R and w_x on its vertex boundary")
    if w_x not in neighbour_ring(v_x):
        raise ValueError("v_x and w_x must be adjacent")
    cx = sum(v[0] for v in R.vertices) / len(R.vertices)
    cy = sum(v[1] for v in R.vertices) / len(R.vertices)
    start = _angle_key(w_x, (cx, cy), 0.0)
    start_theta = -start[0] % (2 * math.pi)
    scan = sorted((u for u in vertex_boundary(R) if u != w_x),
                  key=lambda u: _angle_key(u, (cx, cy), start_theta))
    units: list[BoundaryUnit] = []
    adjacent, middle = _wx_runs(R, v_x, w_x)
    for run in adjacent:
        units.append(BoundaryUnit("wrun", w_x, tuple(sorted(run)), True))
    for run in middle:
        units.append(BoundaryUnit("wrun", w_x, tuple(sorted(run)), False))
    for u in scan:
        targets = tuple(sorted(t for t in neighbour_ring(u) if t in R.vertices))
        units.append(BoundaryUnit("vertex", u, targets))
    return tuple(units)


@dataclass(frozen=True)
class CanonicalBoundary:
    """A canonical assignment of one colour per boundary unit.

    ``colours[i]`` is the colour of ``units[i]``; e_X itself always carries
    colours (1, 2) in (B, B').
    """

    units: tuple[BoundaryUnit, ...]
    colours: tuple[int, ...]

    def sort_key(self) -> tuple[int, ...]:
        return self.colours


def enumerate_boundaries(R: Region, v_x: Coord, w_x: Coord, q: int = DEFAULT_Q,
                         prefix: Optional[tuple[int, ...]] = None,
                         ) -> Iterator[CanonicalBoundary]:
    """Canonical stream of boundary colourings for the pair shape (R, v_x, w_x).

    Units clockwise-adjacent to e_X range over {1, 2}, in both orders when
    there are two of them — they carry one discrepancy colour each, never
    the same one (the equal-colour assignment is not a valid pair).
    Other units range over {0, 1, 2} plus the colours 3.. in first-use
    order; within a swap class colours must be non-decreasing.

    ``prefix`` restricts the stream to assignments starting with the given
    colours, which partitions the space deterministically for parallel work.
    """
    units = boundary_units(R, v_x, w_x)
    nu = len(units)
    # Swap classes: vertex units with identical target sets, in scan order.
    prev_in_class: list[Optional[int]] = [None] * nu
    seen: dict[tuple, int] = {}
    for i, u in enumerate(units):
        if u.kind != "vertex":
            continue
        key = u.targets
        if key in seen:
            prev_in_class[i] = seen[key]
        seen[key] = i

    ex_units = [i for i, u in enumerate(units) if u.touches_ex]
    if len(ex_units) == 2:
        ex_assignments = [(1, 2), (2, 1)]
    elif len(ex_units) == 1:
        ex_assignments = [(1,), (2,)]
    else:
        ex_assignments = [()]

    colours = [0] * nu

    def rec(i: int, hi: int) -> Iterator[CanonicalBoundary]:
        if i == nu:
            yield CanonicalBoundary(units, tuple(colours))
            return
        if units[i].touches_ex:
            # filled in by the outer loop
            yield from rec(i + 1, hi)
            return
        lo = 0
        if prev_in_class[i] is not None:
            lo = colours[prev_in_class[i]]
        if prefix is not None and i < len(prefix):
            options = [prefix[i]] if prefix[i] >= lo else []
        else:
            options = [c for c in range(lo, min(q, hi + 1) + 1) if c <= 2 or c >= 3]
        for c in options:
            if c > min(q, hi + 1):
                continue
            colours[i] = c
            yield from rec(i + 1, max(hi, c) if c >= 3 else hi)
            colours[i] = 0

    for assign in ex_assignments:
        ok = True
        for j, i in enumerate(ex_units):
            colours[i] = assign[j]
            if prefix is not None and i < len(prefix) and prefix[i] != assign[j]:
                ok = False
        if ok:
            yield from rec(0, 2)
    for i in ex_units:
        colours[i] = 0


def forbidden_profile(cb: CanonicalBoundary, R: Region,
                      ) -> dict[Coord, frozenset[int]]:
    """Per-region-vertex forbidden colour sets induced by a canonical boundary.

    The distinguished edge e_X is disregarded, matching the counting
    convention for μ.
    """
    out: dict[Coord, set[int]] = {v: set() for v in R.vertices}
    for unit, c in zip(cb.units, cb.colours):
        if c == 0:
            continue
        for t in unit.targets:
            out[t].add(c)
    return {v: frozenset(s) for v, s in out.items()}


def build_edge_pair(cb: CanonicalBoundary, R: Region, v_x: Coord, w_x: Coord,
                    q: int = DEFAULT_Q) -> EdgeBoundaryPair:
    """Materialize a canonical boundary as a full EdgeBoundaryPair."""
    unit_of: dict[tuple[Coord, Coord], int] = {}
    for i, u in enumerate(cb.units):
        if u.kind == "vertex":
            for t in u.targets:
                unit_of[(u.vertex, t)] = i
        else:
            for t in u.targets:
                unit_of[(w_x, t)] = i
    e_x = edge(v_x, w_x)
    assignment: dict[Edge, int] = {}
    for e in edge_boundary(R):
        if e == e_x:
            assignment[e] = 1
            continue
        a, b = e
        w, t = (a, b) if b in R.vertices else (b, a)
        assignment[e] = cb.colours[unit_of[(w, t)]]
    B = PartialEdgeColouring(R, assignment, q)
    return EdgeBoundaryPair(R, v_x, w_x, B, B.with_colour(e_x, 2))


# ---------------------------------------------------------------------------
# Pair files
# ---------------------------------------------------------------------------

def parse_pair(text: str, q: int = DEFAULT_Q) -> EdgeBoundaryPair:
    from .lattice import parse_region
    from .colouring import parse_boundary
    region_lines, ex_line = [], None
    blocks: dict[str, list[str]] = {}
    current = None
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped == "B:":
            current = "B"
            blocks[current] = []
        elif stripped == "B':":
            current = "B'"
            blocks[current] = []
        elif stripped.startswith("eX "):
            ex_line = stripped
        elif current is not None:
            blocks[current].append(stripped)
        else:
            region_lines.append(stripped)
    if ex_line is None or "B" not in blocks or "B'" not in blocks:
        raise ValueError("pair file needs an eX line and B:/B': blocks")
    R, _, _ = parse_region("\n".join(region_lines))
    x1, y1, x2, y2 = map(int, ex_line.split()[1:])
    a, b = (x1, y1), (x2, y2)
    v_x, w_x = (a, b) if a in R.vertices else (b, a)
    B = parse_boundary("\n".join(blocks["B"]), R, q)
    Bp = parse_boundary("\n".join(blocks["B'"]), R, q)
    return EdgeBoundaryPair(R, v_x, w_x, B, Bp)


def format_pair(X: EdgeBoundaryPair) -> str:
    from .lattice import format_region
    from .colouring import format_boundary
    (x1, y1), (x2, y2) = X.e_x
    parts = [format_region(X.region).rstrip("\n"),
             f"eX {x1} {y1} {x2} {y2}",
             "B:", format_boundary(X.B).rstrip("\n"),
             "B':", format_boundary(X.Bprime).rstrip("\n")]
    return "\n".join(parts) + "\n"
