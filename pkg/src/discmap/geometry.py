"""Plane domains and the dyadic-square grids that cover them.

A Domain is an open set: either a simple counterclockwise polygon or a
disc.  ``build_grid`` collects every closed axis-aligned square of side
2**-N (optionally shifted by a small lambda along both axes) that fits
inside the domain.  The squares, their corner nodes and the oriented rim
edges of the covered region are the combinatorial data the rest of the
package computes on.  Lattice coordinates are kept as integers; floats
appear only when a node is evaluated at n * 2**-N + shift.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DegenerateGeometry,
    DomainParseError,
    EmptyGrid,
    EmptyInterior,
    OutsideGrid,
)

Point = Tuple[float, float]

_SCAN_LEVEL_MAX = 8
_CANDIDATE_CAP = 20_000_000  # refuse absurd bbox/level combinations


@dataclass(frozen=True)
class Domain:
    """Open polygon or disc, plus the translation applied so far.

    ``translation`` is the offset already added to the original
    coordinates (see ``normalize_origin``); reports can undo it.
    """

    kind: str
    vertices: Optional[Tuple[Point, ...]] = None
    center: Optional[Point] = None
    radius: Optional[float] = None
    translation: Point = (0.0, 0.0)

    def bounding_box(self) -> Tuple[float, float, float, float]:
        if self.kind == "polygon":
            xs = [v[0] for v in self.vertices]
            ys = [v[1] for v in self.vertices]
            return min(xs), max(xs), min(ys), max(ys)
        cx, cy = self.center
        r = self.radius
        return cx - r, cx + r, cy - r, cy + r

    def describe(self) -> dict:
        """JSON-ready description in the normalized coordinates."""
        if self.kind == "polygon":
            body = {"type": "polygon", "vertices": [list(v) for v in self.vertices]}
        else:
            body = {"type": "disc", "center": list(self.center), "radius": self.radius}
        body["translation"] = list(self.translation)
        return body


class OrientedEdge(NamedTuple):
    """One lattice edge of the covered region's rim, in integer coordinates.

    Traversal follows the counterclockwise orientation of the single cell
    that owns the edge, so the covered region stays on the left.
    """

    start: Tuple[int, int]
    end: Tuple[int, int]


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainParseError(msg)


def _as_point(obj, what: str) -> Point:
    _require(
        isinstance(obj, (list, tuple)) and len(obj) == 2,
        f"{what} must be a pair [x, y]",
    )
    x, y = obj
    _require(
        isinstance(x, (int, float)) and isinstance(y, (int, float)),
        f"{what} coordinates must be numbers",
    )
    x, y = float(x), float(y)
    _require(math.isfinite(x) and math.isfinite(y), f"{what} must be finite")
    return (x, y)


def load_domain(spec: Mapping) -> Domain:
    """Validate a parsed domain description and build a Domain from it."""
    _require(isinstance(spec, Mapping), "domain description must be an object")
    kind = spec.get("type")
    if kind == "polygon":
        verts = spec.get("vertices")
        _require(isinstance(verts, Sequence), "polygon needs a 'vertices' list")
        pts = tuple(_as_point(v, "vertex") for v in verts)
        _require(len(pts) >= 3, "polygon needs at least 3 vertices")
        _validate_polygon(pts)
        return Domain(kind="polygon", vertices=pts)
    if kind == "disc":
        center = _as_point(spec.get("center"), "disc center")
        r = spec.get("radius")
        _require(isinstance(r, (int, float)), "disc needs a numeric 'radius'")
        r = float(r)
        if not (math.isfinite(r) and r > 0.0):
            raise DegenerateGeometry("disc radius must be positive and finite")
        return Domain(kind="disc", center=center, radius=r)
    raise DomainParseError(f"unknown domain type: {kind!r}")


def load_domain_file(path) -> Domain:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainParseError(f"not valid JSON: {exc}") from exc
    return load_domain(spec)


def _orient(a: Point, b: Point, c: Point) -> float:
    """Cross product (b - a) x (c - a); sign gives turn direction."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _within_bbox(a: Point, b: Point, c: Point) -> bool:
    return (
        min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
    )


def _segments_intersect(p1: Point, p2: Point, p3: Point, p4: Point) -> bool:
    """Closed-segment intersection test, exact for the arithmetic used."""
    d1 = _orient(p3, p4, p1)
    d2 = _orient(p3, p4, p2)
    d3 = _orient(p1, p2, p3)
    d4 = _orient(p1, p2, p4)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if d1 == 0 and _within_bbox(p3, p4, p1):
        return True
    if d2 == 0 and _within_bbox(p3, p4, p2):
        return True
    if d3 == 0 and _within_bbox(p1, p2, p3):
        return True
    if d4 == 0 and _within_bbox(p1, p2, p4):
        return True
    return False


def _polygon_area2(verts: Sequence[Point]) -> float:
    """Twice the signed area (positive for counterclockwise order)."""
    total = 0.0
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return total


def _polygon_centroid(verts: Sequence[Point]) -> Point:
    a2 = _polygon_area2(verts)
    cx = cy = 0.0
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        w = x0 * y1 - x1 * y0
        cx += (x0 + x1) * w
        cy += (y0 + y1) * w
    return (cx / (3.0 * a2), cy / (3.0 * a2))


def _validate_polygon(verts: Tuple[Point, ...]) -> None:
    n = len(verts)
    for i in range(n):
        if verts[i] == verts[(i + 1) % n]:
            raise DegenerateGeometry(f"repeated vertex at index {i}")
    if _polygon_area2(verts) <= 0.0:
        raise DegenerateGeometry(
            "vertices must run counterclockwise around positive area"
        )
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        for j in range(i + 1, n):
            c, d = verts[j], verts[(j + 1) % n]
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                continue
            if _segments_intersect(a, b, c, d):
                raise DegenerateGeometry(
                    f"edges {i} and {j} intersect; polygon must be simple"
                )
    for i in range(n):
        a = verts[i - 1]
        b = verts[i]
        c = verts[(i + 1) % n]
        # a straight fold-back (spike) has collinear edges pointing oppositely
        if _orient(a, b, c) == 0.0 and (
            (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1])
        ) < 0.0:
            raise DegenerateGeometry(f"spike at vertex {i}")


def _inside_many(domain: Domain, pts: np.ndarray) -> np.ndarray:
    """Strict-interior test for an (M, 2) array of points.

    Polygon: even-odd ray casting with the half-open edge rule; points
    exactly on an edge report False.  Disc: strict radius comparison.
    """
    px = pts[:, 0]
    py = pts[:, 1]
    if domain.kind == "disc":
        cx, cy = domain.center
        return (px - cx) ** 2 + (py - cy) ** 2 < domain.radius**2
    inside = np.zeros(len(pts), dtype=bool)
    on_edge = np.zeros(len(pts), dtype=bool)
    verts = domain.vertices
    n = len(verts)
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
        on_edge |= (
            (cross == 0.0)
            & (px >= min(ax, bx))
            & (px <= max(ax, bx))
            & (py >= min(ay, by))
            & (py <= max(ay, by))
        )
        cond = (ay > py) != (by > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = ax + (py - ay) * (bx - ax) / (by - ay)
        inside ^= cond & (px < xint)
    return inside & ~on_edge


def contains(domain: Domain, point: Point) -> bool:
    """True when the point lies strictly inside the open domain."""
    pts = np.array([[point[0], point[1]]], dtype=float)
    return bool(_inside_many(domain, pts)[0])


def _translated(domain: Domain, offset: Point) -> Domain:
    dx, dy = offset
    tx, ty = domain.translation
    if domain.kind == "polygon":
        verts = tuple((x + dx, y + dy) for x, y in domain.vertices)
        return replace(domain, vertices=verts, translation=(tx + dx, ty + dy))
    cx, cy = domain.center
    return replace(domain, center=(cx + dx, cy + dy), translation=(tx + dx, ty + dy))


def _scan_interior_point(domain: Domain) -> Point:
    """Center of the first fully contained square found, coarse to fine."""
    for level in range(1, _SCAN_LEVEL_MAX + 1):
        ok, n1lo, n2lo = _contained_cells(domain, level, 0.0)
        if not ok.any():
            continue
        h = 2.0**-level
        idx = np.argwhere(ok.T)  # lexicographic in (n2, n1)
        i2, i1 = idx[0]
        return ((n1lo + i1 + 0.5) * h, (n2lo + i2 + 0.5) * h)
    raise EmptyInterior(
        f"no interior point found scanning up to level {_SCAN_LEVEL_MAX}"
    )


def normalize_origin(domain: Domain) -> Domain:
    """Translate the domain so that the origin is strictly interior.

    Already-interior domains come back unchanged.  The first candidate is
    the polygon centroid (disc center); if that is not interior the domain
    is scanned for any fully contained coarse square.
    """
    if contains(domain, (0.0, 0.0)):
        return domain
    if domain.kind == "polygon":
        cand = _polygon_centroid(domain.vertices)
    else:
        cand = domain.center
    if not contains(domain, cand):
        cand = _scan_interior_point(domain)
    return _translated(domain, (-cand[0], -cand[1]))


def _contained_cells(
    domain: Domain, level: int, shift: float
) -> Tuple[np.ndarray, int, int]:
    """Boolean mask of lattice squares whose closed square fits inside.

    Entry [i1, i2] covers the square with lower corner at
    ((n1lo + i1) * h + shift, (n2lo + i2) * h + shift).
    """
    h = 2.0**-level
    xmin, xmax, ymin, ymax = domain.bounding_box()
    n1lo = math.floor((xmin - shift) / h) - 1
    n1hi = math.ceil((xmax - shift) / h) + 1
    n2lo = math.floor((ymin - shift) / h) - 1
    n2hi = math.ceil((ymax - shift) / h) + 1
    nx = n1hi - n1lo + 1
    ny = n2hi - n2lo + 1
    if nx * ny > _CANDIDATE_CAP:
        raise ValueError(
            f"level {level} over this bounding box needs {nx * ny} candidate "
            "squares; refusing"
        )

    xs = (np.arange(n1lo, n1hi + 2) * h + shift)  # node lattice, one past hi
    ys = (np.arange(n2lo, n2hi + 2) * h + shift)
    xm = xs[:-1] + 0.5 * h  # midpoints along x
    ym = ys[:-1] + 0.5 * h

    def inside_grid(xv: np.ndarray, yv: np.ndarray) -> np.ndarray:
        gx, gy = np.meshgrid(xv, yv, indexing="ij")
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        return _inside_many(domain, pts).reshape(len(xv), len(yv))

    corner = inside_grid(xs, ys)  # (nx+1, ny+1)
    mid_x = inside_grid(xm, ys)  # bottom/top edge midpoints
    mid_y = inside_grid(xs, ym)  # left/right edge midpoints

    ok = (
        corner[:-1, :-1]
        & corner[1:, :-1]
        & corner[:-1, 1:]
        & corner[1:, 1:]
        & mid_x[:, :-1]
        & mid_x[:, 1:]
        & mid_y[:-1, :]
        & mid_y[1:, :]
    )

    if domain.kind == "polygon" and ok.any():
        x0 = xs[:-1][:, None] + np.zeros((1, ny))  # lower corners, broadcast
        y0 = ys[:-1][None, :] + np.zeros((nx, 1))
        x1 = x0 + h
        y1 = y0 + h
        verts = domain.vertices
        m = len(verts)
        for i in range(m):
            px_, py_ = verts[i]
            qx_, qy_ = verts[(i + 1) % m]
            overlap = (
                (np.maximum(px_, qx_) >= x0)
                & (np.minimum(px_, qx_) <= x1)
                & (np.maximum(py_, qy_) >= y0)
                & (np.minimum(py_, qy_) <= y1)
            )
            if not overlap.any():
                continue
            dx = qx_ - px_
            dy = qy_ - py_
            s00 = dx * (y0 - py_) - dy * (x0 - px_)
            s10 = dx * (y0 - py_) - dy * (x1 - px_)
            s01 = dx * (y1 - py_) - dy * (x0 - px_)
            s11 = dx * (y1 - py_) - dy * (x1 - px_)
            all_pos = (s00 > 0) & (s10 > 0) & (s01 > 0) & (s11 > 0)
            all_neg = (s00 < 0) & (s10 < 0) & (s01 < 0) & (s11 < 0)
            ok &= ~(overlap & ~(all_pos | all_neg))
    return ok, n1lo, n2lo


@dataclass
class DyadicGrid:
    """Covered region at one refinement level; immutable after construction.

    ``cells`` and ``nodes`` hold integer lattice coordinates sorted
    lexicographically by (n2, n1).  Window arrays (occupancy, row lookup)
    are offset by (n1lo, n2lo) and padded nowhere; callers go through the
    lookup helpers instead of indexing them directly.
    """

    domain: Domain
    level: int
    shift: float
    cells: np.ndarray  # (C, 2) int64
    nodes: np.ndarray  # (V, 2) int64
    interior: np.ndarray  # (V,) bool, corner of four cells
    neighbors: np.ndarray  # (V, 4) int64 rows W, E, S, N; -1 when absent
    cell_corners: np.ndarray  # (C, 4) int64 node rows SW, SE, NW, NE
    _occ: np.ndarray
    _cell_row: np.ndarray
    _node_row: np.ndarray
    _n1lo: int
    _n2lo: int

    @property
    def spacing(self) -> float:
        return 2.0**-self.level

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def node_points(self) -> np.ndarray:
        """Float coordinates of every node, (V, 2)."""
        return self.nodes * self.spacing + self.shift

    def cell_centers(self) -> np.ndarray:
        return (self.cells + 0.5) * self.spacing + self.shift

    def has_cell(self, n1: int, n2: int) -> bool:
        i1 = n1 - self._n1lo
        i2 = n2 - self._n2lo
        if 0 <= i1 < self._occ.shape[0] and 0 <= i2 < self._occ.shape[1]:
            return bool(self._occ[i1, i2])
        return False

    def cell_row(self, n1: int, n2: int) -> int:
        i1 = n1 - self._n1lo
        i2 = n2 - self._n2lo
        if 0 <= i1 < self._occ.shape[0] and 0 <= i2 < self._occ.shape[1]:
            return int(self._cell_row[i1, i2])
        return -1

    def node_row(self, n1: int, n2: int) -> int:
        i1 = n1 - self._n1lo
        i2 = n2 - self._n2lo
        if 0 <= i1 < self._node_row.shape[0] and 0 <= i2 < self._node_row.shape[1]:
            return int(self._node_row[i1, i2])
        return -1

    def covers_point_interior(self, point: Point) -> bool:
        """True when the point is interior to the union of closed cells.

        A point is interior exactly when every lattice square containing
        it is a cell of the grid (1, 2 or 4 squares depending on whether
        the point sits inside a square, on an edge or on a node).
        """
        h = self.spacing
        t1 = (point[0] - self.shift) / h
        t2 = (point[1] - self.shift) / h
        i1 = math.floor(t1)
        i2 = math.floor(t2)
        xs = [i1 - 1, i1] if t1 == i1 else [i1]
        ys = [i2 - 1, i2] if t2 == i2 else [i2]
        return all(self.has_cell(a, b) for a in xs for b in ys)

    def locate(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Map (M, 2) float points to (cell rows, u, v) local coordinates.

        Points on shared cell edges may sit in several closed squares; any
        containing cell is equivalent for interpolation because bilinear
        values agree along shared edges.  Rows are -1 for points outside
        every cell.
        """
        h = self.spacing
        t1 = (points[:, 0] - self.shift) / h
        t2 = (points[:, 1] - self.shift) / h
        b1 = np.floor(t1).astype(np.int64)
        b2 = np.floor(t2).astype(np.int64)
        exact1 = t1 == b1
        exact2 = t2 == b2
        rows = np.full(len(points), -1, dtype=np.int64)
        n1 = np.empty_like(b1)
        n2 = np.empty_like(b2)
        # try the floor square, then its neighbors for points on lower faces
        for d1, d2 in ((0, 0), (-1, 0), (0, -1), (-1, -1)):
            cand1 = b1 + d1
            cand2 = b2 + d2
            usable = rows < 0
            if d1 == -1:
                usable &= exact1
            if d2 == -1:
                usable &= exact2
            if not usable.any():
                continue
            i1 = cand1 - self._n1lo
            i2 = cand2 - self._n2lo
            inwin = (
                (i1 >= 0)
                & (i1 < self._occ.shape[0])
                & (i2 >= 0)
                & (i2 < self._occ.shape[1])
            )
            hit = usable & inwin
            if not hit.any():
                continue
            occ_hit = np.zeros(len(points), dtype=bool)
            occ_hit[hit] = self._occ[i1[hit], i2[hit]]
            take = hit & occ_hit
            rows[take] = self._cell_row[i1[take], i2[take]]
            n1[take] = cand1[take]
            n2[take] = cand2[take]
        found = rows >= 0
        u = np.zeros(len(points))
        v = np.zeros(len(points))
        u[found] = t1[found] - n1[found]
        v[found] = t2[found] - n2[found]
        return rows, u, v

    @cached_property
    def edge_pairs(self) -> np.ndarray:
        """Node-row pairs of every distinct cell edge, (E, 2)."""
        occ = self._occ
        nx, ny = occ.shape
        occp = np.zeros((nx + 2, ny + 2), dtype=bool)
        occp[1:-1, 1:-1] = occ
        # masks over the node window (nx+1, ny+1); occp[a+1, b+1] is cell (a, b)
        # horizontal edge from node (a, b) to (a+1, b): cell above or below it
        ex_h = occp[1:, 1:] | occp[1:, :-1]
        # vertical edge from node (a, b) to (a, b+1): cell right or left of it
        ex_v = occp[1:, 1:] | occp[:-1, 1:]
        pairs = []
        node_row = self._node_row
        ij = np.argwhere(ex_h)
        if len(ij):
            a = node_row[ij[:, 0], ij[:, 1]]
            b = node_row[ij[:, 0] + 1, ij[:, 1]]
            pairs.append(np.column_stack([a, b]))
        ij = np.argwhere(ex_v)
        if len(ij):
            a = node_row[ij[:, 0], ij[:, 1]]
            b = node_row[ij[:, 0], ij[:, 1] + 1]
            pairs.append(np.column_stack([a, b]))
        out = np.concatenate(pairs, axis=0)
        assert (out >= 0).all()  # a cell edge always joins two grid nodes
        return out


def build_grid(domain: Domain, level: int, shift: float = 0.0) -> DyadicGrid:
    """Collect the closed squares of side 2**-level contained in the domain.

    ``shift`` slides the whole lattice by (shift, shift); it must satisfy
    0 <= shift < 2**-level.  Containment is decided by strict interiority
    of the four corners and four edge midpoints plus, for polygons, the
    absence of any polygon edge meeting the closed square.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    h = 2.0**-level
    if not (0.0 <= shift < h):
        raise ValueError(f"shift must lie in [0, {h})")
    ok, n1lo, n2lo = _contained_cells(domain, level, shift)
    if not ok.any():
        raise EmptyGrid(f"no square of side 2**-{level} fits inside the domain")

    idx = np.argwhere(ok.T)  # sorted by (n2, n1)
    cells = np.column_stack([idx[:, 1] + n1lo, idx[:, 0] + n2lo]).astype(np.int64)
    nx, ny = ok.shape
    cell_row = np.full((nx, ny), -1, dtype=np.int64)
    cell_row[idx[:, 1], idx[:, 0]] = np.arange(len(cells))

    # node occupancy: corners of any cell; node window is one wider
    nocc = np.zeros((nx + 1, ny + 1), dtype=bool)
    nocc[:-1, :-1] |= ok
    nocc[1:, :-1] |= ok
    nocc[:-1, 1:] |= ok
    nocc[1:, 1:] |= ok
    nidx = np.argwhere(nocc.T)  # sorted by (n2, n1)
    nodes = np.column_stack([nidx[:, 1] + n1lo, nidx[:, 0] + n2lo]).astype(np.int64)
    node_row = np.full((nx + 1, ny + 1), -1, dtype=np.int64)
    node_row[nidx[:, 1], nidx[:, 0]] = np.arange(len(nodes))

    occp = np.zeros((nx + 2, ny + 2), dtype=bool)
    occp[1:-1, 1:-1] = ok
    interior2d = occp[:-1, :-1] & occp[1:, :-1] & occp[:-1, 1:] & occp[1:, 1:]
    i1n = nodes[:, 0] - n1lo
    i2n = nodes[:, 1] - n2lo
    interior = interior2d[i1n, i2n]

    # neighbor rows W, E, S, N; an arm exists only when the lattice segment
    # between the nodes is the edge of some cell
    nrp = np.full((nx + 3, ny + 3), -1, dtype=np.int64)
    nrp[1:-1, 1:-1] = node_row
    # node-window masks (nx+1, ny+1); occp[a+1, b+1] is cell (a, b).  The arm
    # toward a neighbor exists when one of the two cells flanking it is present.
    edge_w = occp[:-1, 1:] | occp[:-1, :-1]
    edge_e = occp[1:, 1:] | occp[1:, :-1]
    edge_s = occp[1:, :-1] | occp[:-1, :-1]
    edge_n = occp[1:, 1:] | occp[:-1, 1:]
    neighbors = np.full((len(nodes), 4), -1, dtype=np.int64)
    west = nrp[i1n, i2n + 1]
    east = nrp[i1n + 2, i2n + 1]
    south = nrp[i1n + 1, i2n]
    north = nrp[i1n + 1, i2n + 2]
    neighbors[:, 0] = np.where(edge_w[i1n, i2n], west, -1)
    neighbors[:, 1] = np.where(edge_e[i1n, i2n], east, -1)
    neighbors[:, 2] = np.where(edge_s[i1n, i2n], south, -1)
    neighbors[:, 3] = np.where(edge_n[i1n, i2n], north, -1)

    i1c = cells[:, 0] - n1lo
    i2c = cells[:, 1] - n2lo
    cell_corners = np.column_stack(
        [
            node_row[i1c, i2c],
            node_row[i1c + 1, i2c],
            node_row[i1c, i2c + 1],
            node_row[i1c + 1, i2c + 1],
        ]
    )

    return DyadicGrid(
        domain=domain,
        level=level,
        shift=shift,
        cells=cells,
        nodes=nodes,
        interior=interior,
        neighbors=neighbors,
        cell_corners=cell_corners,
        _occ=ok,
        _cell_row=cell_row,
        _node_row=node_row,
        _n1lo=n1lo,
        _n2lo=n2lo,
    )


def boundary_edges(grid: DyadicGrid) -> Tuple[OrientedEdge, ...]:
    """Rim edges of the covered region, each owned by exactly one cell.

    Opposite orientations of shared edges cancel, so what survives are
    closed counterclockwise cycles; the sum of (end - start) over the
    returned list is zero.
    """
    occ = grid._occ
    nx, ny = occ.shape
    occp = np.zeros((nx + 2, ny + 2), dtype=bool)
    occp[1:-1, 1:-1] = occ
    n1lo, n2lo = grid._n1lo, grid._n2lo
    edges = []
    # node-window masks; occp[a+1, b+1] is cell (a, b)
    # horizontal edge at lattice y = b from (a, b) to (a+1, b)
    above = occp[1:, 1:]  # cell (a, b)
    below = occp[1:, :-1]  # cell (a, b-1)
    for i1, i2 in np.argwhere(above ^ below):
        a, b = int(i1 + n1lo), int(i2 + n2lo)
        if above[i1, i2]:
            edges.append(OrientedEdge((a, b), (a + 1, b)))
        else:
            edges.append(OrientedEdge((a + 1, b), (a, b)))
    # vertical edge at lattice x = a from (a, b) to (a, b+1)
    right = occp[1:, 1:]  # cell (a, b)
    left = occp[:-1, 1:]  # cell (a-1, b)
    for i1, i2 in np.argwhere(right ^ left):
        a, b = int(i1 + n1lo), int(i2 + n2lo)
        if right[i1, i2]:
            edges.append(OrientedEdge((a, b + 1), (a, b)))
        else:
            edges.append(OrientedEdge((a, b), (a, b + 1)))
    edges.sort(key=lambda e: (e.start[1], e.start[0], e.end[1], e.end[0]))
    return tuple(edges)
