"""Triangular-lattice geometry.

Vertices of the triangular lattice are represented by integer pairs (x, y)
with x + y even.  Under this embedding every vertex has six neighbours, at
the offsets listed in ``NEIGHBOUR_OFFSETS``; the order of that tuple is the
clockwise cyclic order of the edges around a vertex and is fixed once and
for all so that "clockwise adjacent" is well defined.

The module also provides finite regions, their edge/vertex boundaries,
internal (within-region) distances, balls, and the 12-element dihedral
symmetry group of the lattice.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

Coord = tuple[int, int]
Edge = tuple[Coord, Coord]  # canonically ordered: smaller endpoint first

#: Offsets of the six neighbours of any vertex, in clockwise cyclic order.
NEIGHBOUR_OFFSETS: tuple[Coord, ...] = (
    (0, 2), (1, 1), (1, -1), (0, -2), (-1, -1), (-1, 1),
)


class InvalidCoordError(ValueError):
    """Raised for coordinates violating the x + y even parity rule."""


def check_coord(v: Coord) -> Coord:
    x, y = v
    if (x + y) % 2 != 0:
        raise InvalidCoordError(f"coordinate {v} has odd parity (x + y must be even)")
    return v


def is_valid_coord(v) -> bool:
    try:
        x, y = v
    except (TypeError, ValueError):
        return False
    return isinstance(x, int) and isinstance(y, int) and (x + y) % 2 == 0


def neighbour_ring(v: Coord) -> tuple[Coord, ...]:
    """The six neighbours of ``v`` in clockwise cyclic order."""
    check_coord(v)
    x, y = v
    return tuple((x + dx, y + dy) for dx, dy in NEIGHBOUR_OFFSETS)


def neighbours(v: Coord) -> frozenset[Coord]:
    return frozenset(neighbour_ring(v))


def adjacent(v: Coord, w: Coord) -> bool:
    return (w[0] - v[0], w[1] - v[1]) in _OFFSET_SET


_OFFSET_SET = frozenset(NEIGHBOUR_OFFSETS)


def edge(v: Coord, w: Coord) -> Edge:
    """Canonical (lexicographically ordered) form of the edge {v, w}."""
    if not adjacent(v, w):
        raise ValueError(f"{v} and {w} are not adjacent")
    return (v, w) if v < w else (w, v)


def edge_endpoints(e: Edge) -> tuple[Coord, Coord]:
    return e[0], e[1]


def other_endpoint(e: Edge, v: Coord) -> Coord:
    if e[0] == v:
        return e[1]
    if e[1] == v:
        return e[0]
    raise ValueError(f"edge {e} is not incident to {v}")


def incident_edges(v: Coord) -> tuple[Edge, ...]:
    """Edges at ``v`` in clockwise cyclic order (same order as neighbour_ring)."""
    return tuple(edge(v, w) for w in neighbour_ring(v))


def clockwise_adjacent(e1: Edge, e2: Edge, at: Coord) -> bool:
    """Whether e1 and e2 are consecutive in the clockwise edge cycle at ``at``."""
    if e1 == e2:
        raise ValueError("edges must be distinct")
    ring = incident_edges(at)
    try:
        i, j = ring.index(e1), ring.index(e2)
    except ValueError:
        raise ValueError(f"both edges must be incident to {at}") from None
    return (i - j) % 6 in (1, 5)


# ---------------------------------------------------------------------------
# Axial coordinates: used internally for distances and symmetries.
# (x, y) <-> (m, n) with x = m, y = m + 2n.  In axial form a 60-degree
# clockwise rotation about the origin is (m, n) -> (m + n, -m) and the
# reflection across the y-axis is (m, n) -> (-m, m + n).
# ---------------------------------------------------------------------------

def _to_axial(v: Coord) -> tuple[int, int]:
    x, y = v
    return x, (y - x) // 2


def _from_axial(a: tuple[int, int]) -> Coord:
    m, n = a
    return m, m + 2 * n


def lattice_distance(v: Coord, w: Coord) -> int:
    """Graph distance between two lattice vertices (no region constraint)."""
    m = w[0] - v[0]
    n = (w[1] - v[1] - m) // 2
    return (abs(m) + abs(n) + abs(m + n)) // 2


@dataclass(frozen=True)
class Symmetry:
    """An element of the dihedral symmetry group of the lattice.

    ``rotation`` counts 60-degree clockwise rotations (0..5); if ``reflected``
    the reflection across the vertical axis is applied first.
    """

    rotation: int = 0
    reflected: bool = False

    def __post_init__(self):
        if not 0 <= self.rotation <= 5:
            raise ValueError("rotation must be in 0..5")

    def apply_axial(self, a: tuple[int, int]) -> tuple[int, int]:
        m, n = a
        if self.reflected:
            m, n = -m, m + n
        for _ in range(self.rotation):
            m, n = m + n, -m
        return m, n


SYMMETRIES: tuple[Symmetry, ...] = tuple(
    Symmetry(rotation=k, reflected=r) for r in (False, True) for k in range(6)
)

IDENTITY = Symmetry()


def apply_symmetry(v: Coord, s: Symmetry, anchor: Coord = (0, 0)) -> Coord:
    """Image of ``v`` under the symmetry ``s`` fixing ``anchor``."""
    am, an = _to_axial(anchor)
    m, n = _to_axial(v)
    m, n = s.apply_axial((m - am, n - an))
    return _from_axial((m + am, n + an))


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    """A finite, nonempty set of lattice vertices, optionally named."""

    vertices: frozenset[Coord]
    name: Optional[str] = None

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("region must be nonempty")
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        for v in self.vertices:
            check_coord(v)

    def __contains__(self, v: Coord) -> bool:
        return v in self.vertices

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[Coord]:
        return iter(sorted(self.vertices))

    def without(self, v: Coord, name: Optional[str] = None) -> "Region":
        rest = self.vertices - {v}
        if not rest:
            raise ValueError("removal would empty the region")
        return Region(rest, name)


def region(vertices: Iterable[Coord], name: Optional[str] = None) -> Region:
    return Region(frozenset(vertices), name)


def edge_boundary(R: Region) -> frozenset[Edge]:
    """Edges with exactly one endpoint in R."""
    out = set()
    for v in R.vertices:
        for w in neighbour_ring(v):
            if w not in R.vertices:
                out.add(edge(v, w))
    return frozenset(out)


def vertex_boundary(R: Region) -> frozenset[Coord]:
    """Vertices outside R adjacent to some vertex of R."""
    out = set()
    for v in R.vertices:
        for w in neighbour_ring(v):
            if w not in R.vertices:
                out.add(w)
    return frozenset(out)


def internal_edges(R: Region) -> frozenset[Edge]:
    out = set()
    for v in R.vertices:
        for w in neighbour_ring(v):
            if w in R.vertices:
                out.add(edge(v, w))
    return frozenset(out)


UNREACHABLE = None  # sentinel: internal_distance returns None when no path exists


def internal_distance(R: Region, w: Coord, target: Iterable[Coord]) -> Optional[int]:
    """Length of a shortest path from ``w`` to ``target`` staying inside R.

    ``w`` is a boundary vertex (or any vertex outside R); every path vertex
    other than ``w`` must lie in R.  Returns None when the target cannot be
    reached, which callers treat as an "unreachable" value, not an error.
    """
    targets = set(target)
    if not targets:
        raise ValueError("target must be nonempty")
    if not targets <= R.vertices:
        raise ValueError("target must be a subset of the region")
    seen = {w}
    frontier = deque([(w, 0)])
    while frontier:
        u, d = frontier.popleft()
        if u in targets:
            return d
        for nb in neighbour_ring(u):
            if nb in R.vertices and nb not in seen:
                seen.add(nb)
                frontier.append((nb, d + 1))
    return UNREACHABLE


def ball(v: Coord, d: int) -> Region:
    """All vertices at lattice distance at most ``d`` from ``v``."""
    if d < 0:
        raise ValueError("radius must be nonnegative")
    check_coord(v)
    seen = {v}
    frontier = [v]
    for _ in range(d):
        nxt = []
        for u in frontier:
            for w in neighbour_ring(u):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return Region(frozenset(seen), name=f"ball_{d}")


def transform(R: Region, s: Symmetry, anchor: Coord = (0, 0)) -> Region:
    return Region(frozenset(apply_symmetry(v, s, anchor) for v in R.vertices), R.name)


def translate(R: Region, t: Coord) -> Region:
    check_coord(t)
    return Region(frozenset((v[0] + t[0], v[1] + t[1]) for v in R.vertices), R.name)


# ---------------------------------------------------------------------------
# Region files
# ---------------------------------------------------------------------------

def parse_region(text: str) -> tuple[Region, Optional[Coord], Optional[Coord]]:
    """Parse a region file; returns (region, distinguished_v, distinguished_w)."""
    name = None
    verts: list[Coord] = []
    dv = dw = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        if key == "name":
            name = " ".join(parts[1:])
        elif key == "v":
            verts.append(check_coord((int(parts[1]), int(parts[2]))))
        elif key == "distinguished_v":
            dv = check_coord((int(parts[1]), int(parts[2])))
        elif key == "distinguished_w":
            dw = check_coord((int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"unrecognized region-file line: {raw!r}")
    return Region(frozenset(verts), name), dv, dw


def format_region(R: Region, distinguished_v: Optional[Coord] = None,
                  distinguished_w: Optional[Coord] = None) -> str:
    lines = []
    if R.name:
        lines.append(f"name {R.name}")
    for x, y in sorted(R.vertices):
        lines.append(f"v {x} {y}")
    if distinguished_v is not None:
        lines.append(f"distinguished_v {distinguished_v[0]} {distinguished_v[1]}")
    if distinguished_w is not None:
        lines.append(f"distinguished_w {distinguished_w[0]} {distinguished_w[1]}")
    return "\n".join(lines) + "\n"


def load_region(path) -> tuple[Region, Optional[Coord], Optional[Coord]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_region(fh.read())


def save_region(path, R: Region, distinguished_v: Optional[Coord] = None,
                distinguished_w: Optional[Coord] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_region(R, distinguished_v, distinguished_w))
