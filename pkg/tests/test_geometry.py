"""Domain parsing and dyadic grid construction."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from discmap import (
    DegenerateGeometry,
    DomainParseError,
    EmptyGrid,
    boundary_edges,
    build_grid,
    contains,
    load_domain,
    normalize_origin,
)

DISC = {"type": "disc", "center": [0.0, 0.0], "radius": 1.0}
SQUARE = {
    "type": "polygon",
    "vertices": [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]],
}


def test_load_domain_disc_fields():
    d = load_domain(DISC)
    assert d.kind == "disc"
    assert d.center == (0.0, 0.0)
    assert d.radius == 1.0
    assert d.translation == (0.0, 0.0)


def test_load_domain_polygon_fields():
    d = load_domain(SQUARE)
    assert d.kind == "polygon"
    assert len(d.vertices) == 4


def test_load_domain_rejects_unknown_type():
    with pytest.raises(DomainParseError):
        load_domain({"type": "banana"})


def test_load_domain_rejects_missing_type():
    with pytest.raises(DomainParseError):
        load_domain({"vertices": [[0, 0], [1, 0], [0, 1]]})


def test_load_domain_rejects_two_vertices():
    with pytest.raises(DomainParseError):
        load_domain({"type": "polygon", "vertices": [[0, 0], [1, 0]]})


def test_load_domain_rejects_nonnumeric_vertex():
    with pytest.raises(DomainParseError):
        load_domain({"type": "polygon", "vertices": [[0, 0], [1, 0], ["a", 1]]})


def test_load_domain_rejects_zero_radius():
    with pytest.raises(DegenerateGeometry):
        load_domain({"type": "disc", "center": [0, 0], "radius": 0.0})


def test_load_domain_rejects_self_intersection():
    bowtie = {"type": "polygon", "vertices": [[0, 0], [1, 1], [1, 0], [0, 1]]}
    with pytest.raises(DegenerateGeometry):
        load_domain(bowtie)


def test_load_domain_rejects_repeated_vertex():
    spec = {"type": "polygon", "vertices": [[0, 0], [1, 0], [1, 0], [0, 1]]}
    with pytest.raises(DegenerateGeometry):
        load_domain(spec)


def test_contains_disc_points():
    d = load_domain(DISC)
    assert contains(d, (0.5, 0.0))
    assert not contains(d, (1.5, 0.0))
    assert not contains(d, (1.0, 0.0))  # rim is not interior


def test_contains_nonconvex_polygon():
    ell = load_domain(
        {"type": "polygon", "vertices": [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]}
    )
    assert contains(ell, (0.5, 0.5))
    assert contains(ell, (1.5, 0.5))
    assert not contains(ell, (1.5, 1.5))  # the notch


def test_normalize_origin_translates_ell():
    ell = load_domain(
        {"type": "polygon", "vertices": [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]}
    )
    moved = normalize_origin(ell)
    assert contains(moved, (0.0, 0.0))
    tx, ty = moved.translation
    assert (tx, ty) != (0.0, 0.0)
    # translation recorded so the original coordinates can be recovered
    assert moved.vertices[0] == (tx, ty)


def test_normalize_origin_keeps_offset_disc():
    d = load_domain({"type": "disc", "center": [0.3, 0.0], "radius": 1.0})
    moved = normalize_origin(d)
    assert moved.translation == (0.0, 0.0)
    assert moved.center == (0.3, 0.0)


def test_grid_counts_frozen_disc():
    g3 = build_grid(load_domain(DISC), 3)
    assert (g3.cell_count, g3.node_count) == (164, 193)
    g4 = build_grid(load_domain(DISC), 4)
    assert (g4.cell_count, g4.node_count) == (732, 793)


def test_grid_square_counts_exact():
    # side 0.6 at level 2: exactly the four cells around the origin fit
    sq = load_domain(
        {"type": "polygon", "vertices": [[-0.3, -0.3], [0.3, -0.3], [0.3, 0.3], [-0.3, 0.3]]}
    )
    g = build_grid(sq, 2)
    assert g.cell_count == 4
    assert g.node_count == 9
    assert int(g.interior.sum()) == 1


def test_grid_spacing_and_cell_corner_coordinates():
    g = build_grid(load_domain(DISC), 3)
    h = g.spacing
    assert h == 2.0**-3
    pts = g.node_points()
    for row in range(0, g.cell_count, 17):
        sw, se, nw, ne = g.cell_corners[row]
        assert pts[se, 0] - pts[sw, 0] == pytest.approx(h)
        assert pts[nw, 1] - pts[sw, 1] == pytest.approx(h)
        assert pts[ne, 0] == pytest.approx(pts[nw, 0] + h)
        assert pts[ne, 1] == pytest.approx(pts[se, 1] + h)


def test_grid_neighbor_arms_are_symmetric():
    g = build_grid(load_domain(DISC), 4)
    nb = g.neighbors
    rows = np.arange(g.node_count)
    for k, opp in ((0, 1), (1, 0), (2, 3), (3, 2)):
        have = nb[:, k] >= 0
        assert (nb[nb[have, k], opp] == rows[have]).all()


def test_grid_interior_nodes_have_four_arms():
    g = build_grid(load_domain(DISC), 4)
    assert (g.neighbors[g.interior] >= 0).all()


def test_grid_cells_inside_domain():
    d = load_domain(DISC)
    g = build_grid(d, 4)
    h = g.spacing
    centers = g.cell_centers()
    r = np.hypot(centers[:, 0], centers[:, 1])
    # center of a contained cell is at least half a diagonal from the rim
    assert (r <= 1.0 - h / 2).all()


def test_grid_shift_moves_lattice():
    d = load_domain(DISC)
    lam = 2.0**-4 / 4
    g0 = build_grid(d, 4)
    g1 = build_grid(d, 4, shift=lam)
    assert g1.shift == lam
    p0 = g0.node_points()
    p1 = g1.node_points()
    frac0 = np.unique(np.round((p0 - p0.min()) % g0.spacing, 12))
    frac1 = np.unique(np.round((p1 - lam) % g1.spacing, 12))
    assert set(frac0.tolist()) <= {0.0, g0.spacing}
    assert set(frac1.tolist()) <= {0.0, g1.spacing}


def test_grid_shift_out_of_range():
    d = load_domain(DISC)
    with pytest.raises(ValueError):
        build_grid(d, 4, shift=2.0**-4)
    with pytest.raises(ValueError):
        build_grid(d, 4, shift=-0.01)


def test_grid_rejects_level_zero():
    with pytest.raises(ValueError):
        build_grid(load_domain(DISC), 0)


def test_grid_empty_when_domain_too_small():
    tiny = load_domain({"type": "disc", "center": [0.0, 0.0], "radius": 0.01})
    with pytest.raises(EmptyGrid):
        build_grid(tiny, 2)


def test_boundary_edges_form_closed_cycles():
    for spec in (DISC, SQUARE):
        g = build_grid(load_domain(spec), 3)
        edges = boundary_edges(g)
        starts = {}
        for e in edges:
            assert e.start != e.end
            starts.setdefault(e.start, 0)
            starts[e.start] += 1
        ends = {}
        for e in edges:
            ends.setdefault(e.end, 0)
            ends[e.end] += 1
        assert starts == ends  # every cycle closes


def test_boundary_edges_keep_region_on_left():
    g = build_grid(load_domain(SQUARE), 3)
    for e in boundary_edges(g):
        (a1, a2), (b1, b2) = e.start, e.end
        d1, d2 = b1 - a1, b2 - a2
        # the owning cell sits to the left of the traversal direction
        if d2 == 0:
            left1, left2 = min(a1, b1), (a2 if d1 == 1 else a2 - 1)
        else:
            left1, left2 = (a1 - 1 if d2 == 1 else a1), min(a2, b2)
        assert g.has_cell(left1, left2)


def test_boundary_edges_wind_once_around_origin():
    # the rim cycles together wind once counterclockwise around an
    # interior point; exact per-edge angle increments sum to 2 pi
    for spec in (SQUARE, DISC):
        g = build_grid(load_domain(spec), 3)
        total = 0.0
        for e in boundary_edges(g):
            a = complex(*e.start)
            b = complex(*e.end)
            total += cmath.phase(b / a)
        assert total / (2.0 * math.pi) == pytest.approx(1.0, abs=1e-12)


def test_locate_and_covers_point():
    g = build_grid(load_domain(DISC), 3)
    h = g.spacing
    assert g.covers_point_interior((0.0, 0.0))
    assert not g.covers_point_interior((2.0, 0.0))
    rows, u, v = g.locate(np.array([[h / 3, h / 3], [2.0, 0.0]]))
    assert rows[0] == g.cell_row(0, 0)
    assert rows[1] == -1
    assert u[0] == pytest.approx(1.0 / 3.0)
    assert v[0] == pytest.approx(1.0 / 3.0)


def test_describe_roundtrip():
    d = load_domain(SQUARE)
    desc = d.describe()
    again = load_domain(desc)
    assert again.vertices == d.vertices
