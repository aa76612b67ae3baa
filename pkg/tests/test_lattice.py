"""Geometry of the triangular lattice: adjacency, symmetries, regions."""

import random

import pytest

from trimix.lattice import (
    SYMMETRIES, InvalidCoordError, Symmetry, adjacent, apply_symmetry, ball,
    check_coord, clockwise_adjacent, edge, edge_boundary, format_region,
    incident_edges, internal_distance, internal_edges, lattice_distance,
    neighbour_ring, neighbours, other_endpoint, parse_region, region,
    transform, translate, vertex_boundary,
)

from conftest import grow_region


def test_coordinate_parity():
    check_coord((0, 0))
    check_coord((3, 1))
    with pytest.raises(InvalidCoordError):
        check_coord((0, 1))
    with pytest.raises(InvalidCoordError):
        check_coord((2, 5))


def test_six_neighbours_each():
    rng = random.Random(7)
    for _ in range(50):
        v = (rng.randint(-20, 20), 0)
        v = (v[0], rng.randint(-20, 20) * 2 + v[0] % 2 * 1)
        if (v[0] + v[1]) % 2:
            v = (v[0], v[1] + 1)
        ring = neighbour_ring(v)
        assert len(ring) == 6
        assert len(set(ring)) == 6
        for w in ring:
            assert adjacent(v, w) and adjacent(w, v)


def test_neighbour_ring_is_clockwise_hexagon():
    ring = neighbour_ring((0, 0))
    assert ring == ((0, 2), (1, 1), (1, -1), (0, -2), (-1, -1), (-1, 1))
    # consecutive ring vertices are themselves adjacent (unit hexagon)
    for i in range(6):
        assert adjacent(ring[i], ring[(i + 1) % 6])


def test_clockwise_adjacent_is_a_six_cycle():
    v = (2, 0)
    edges = incident_edges(v)
    assert len(edges) == 6
    for i, e1 in enumerate(edges):
        succs = [e2 for e2 in edges
                 if e2 != e1 and clockwise_adjacent(e1, e2, v)]
        assert len(succs) == 2  # predecessor and successor on the cycle


def test_edge_is_unordered():
    assert edge((0, 0), (1, 1)) == edge((1, 1), (0, 0))
    with pytest.raises(ValueError):
        edge((0, 0), (2, 0))
    e = edge((0, 0), (0, 2))
    assert other_endpoint(e, (0, 0)) == (0, 2)
    assert other_endpoint(e, (0, 2)) == (0, 0)


def test_lattice_distance_matches_bfs():
    rng = random.Random(3)
    for _ in range(25):
        v = (0, 0)
        w = (rng.randint(-4, 4), rng.randint(-4, 4))
        if (w[0] + w[1]) % 2:
            w = (w[0], w[1] + 1)
        # BFS on the infinite lattice
        dist = {v: 0}
        frontier = [v]
        while w not in dist:
            nxt = []
            for u in frontier:
                for x in neighbour_ring(u):
                    if x not in dist:
                        dist[x] = dist[u] + 1
                        nxt.append(x)
            frontier = nxt
        assert lattice_distance(v, w) == dist[w]


def test_ball_boundary_sizes():
    for d in range(21):
        B = ball((0, 0), d)
        shell = [v for v in B if lattice_distance((0, 0), v) == d]
        assert len(shell) == (1 if d == 0 else 6 * d)
    # |∂Ball_d| counts the sphere of radius d+1? no: outer vertex boundary
    for d in range(21):
        assert len(vertex_boundary(ball((0, 0), d))) == 6 * (d + 1)


def test_symmetry_group_order_and_involutions():
    assert len(SYMMETRIES) == 12
    ident = Symmetry(0, False)
    v = (3, 1)
    # rotation of order six
    r = Symmetry(1, False)
    u = v
    for _ in range(6):
        u = apply_symmetry(u, r)
    assert u == v
    # reflections are involutions
    for s in SYMMETRIES:
        if s.reflected and s.rotation == 0:
            assert apply_symmetry(apply_symmetry(v, s), s) == v
    assert apply_symmetry(v, ident) == v


def test_symmetries_act_by_distinct_permutations_of_the_ring():
    ring = neighbour_ring((0, 0))
    images = set()
    for s in SYMMETRIES:
        images.add(tuple(apply_symmetry(v, s) for v in ring))
    assert len(images) == 12


def test_transform_preserves_structure(rng):
    for _ in range(10):
        R = grow_region(rng, rng.randint(2, 8))
        s = SYMMETRIES[rng.randrange(12)]
        anchor = sorted(R.vertices)[0]
        R2 = transform(R, s, anchor)
        assert len(R2) == len(R)
        assert len(internal_edges(R2)) == len(internal_edges(R))
        assert len(edge_boundary(R2)) == len(edge_boundary(R))
        assert len(vertex_boundary(R2)) == len(vertex_boundary(R))


def test_translate():
    R = region([(0, 0), (1, 1)])
    R2 = translate(R, (2, 0))
    assert set(R2.vertices) == {(2, 0), (3, 1)}


def test_internal_distance_and_unreachable():
    R = region([(0, 0), (0, 2), (0, 4)])
    assert internal_distance(R, (0, -2), [(0, 4)]) == 3
    assert internal_distance(R, (0, -2), [(0, 0)]) == 1
    # disconnected target: unreachable is a value, not an error
    R3 = region([(0, 0), (4, 0)])
    assert internal_distance(R3, (0, 2), [(4, 0)]) is None


def test_internal_distance_monotone_under_enlargement(rng):
    for _ in range(10):
        R = grow_region(rng, 6)
        big = grow_region(rng, 10)
        both = region(sorted(set(R.vertices) | set(big.vertices)))
        verts = sorted(R.vertices)
        v = verts[0]
        w = next((u for r in verts for u in neighbour_ring(r)
                  if u not in both), None)
        if w is None:
            continue
        d_small = internal_distance(R, w, [v])
        d_big = internal_distance(both, w, [v])
        if d_small is not None:
            assert d_big is not None and d_big <= d_small


def test_region_file_round_trip():
    R = region([(0, 0), (1, 1), (1, -1)], name="tri")
    text = format_region(R, distinguished_v=(0, 0), distinguished_w=(0, 2))
    R2, dv, dw = parse_region(text)
    assert set(R2.vertices) == set(R.vertices)
    assert R2.name == "tri"
    assert (dv, dw) == ((0, 0), (0, 2))


def test_region_file_comments_and_blank_lines():
    text = "# reconstructed\nname demo\n\nv 0 0  # the anchor\nv 1 1\n"
    R, dv, dw = parse_region(text)
    assert set(R.vertices) == {(0, 0), (1, 1)}
    assert dv is None and dw is None


def test_neighbours_frozenset():
    assert neighbours((0, 0)) == frozenset(neighbour_ring((0, 0)))
