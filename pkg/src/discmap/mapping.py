"""Assembly of the disc map from the solved potential.

The potential g (harmonic with boundary data -ln|z|) determines a
conjugate gconj up to a constant; the map is H(z) = z * exp(g + i*gconj).
The conjugate is accumulated on the dual grid (cell centers) where the
loop-closure defect around each plaquette equals the discrete Laplacian
of g at the enclosed node, so closure holds to solver accuracy.  The
additive constant is fixed so the interpolated conjugate vanishes at the
origin, which makes H'(0) = exp(g(0)) real and positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .dirichlet import DEFAULT_TOL, ScalarField, boundary_data, solve_dirichlet
from .errors import ClosureFailure, OutsideGrid
from .geometry import Domain, DyadicGrid, build_grid

Point = Tuple[float, float]


def _cell_rows_at(grid: DyadicGrid, pairs: np.ndarray) -> np.ndarray:
    """Row indices of the cells with the given lattice coordinates, -1 if
    absent."""
    i1 = pairs[:, 0] - grid._n1lo
    i2 = pairs[:, 1] - grid._n2lo
    rows = np.full(len(pairs), -1, dtype=np.int64)
    ok = (
        (i1 >= 0)
        & (i1 < grid._cell_row.shape[0])
        & (i2 >= 0)
        & (i2 < grid._cell_row.shape[1])
    )
    rows[ok] = grid._cell_row[i1[ok], i2[ok]]
    return rows


def _cell_gradients(grid: DyadicGrid, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Average x and y slopes of a node field over each cell."""
    h = grid.spacing
    c = grid.cell_corners  # SW, SE, NW, NE
    gx = (values[c[:, 1]] + values[c[:, 3]] - values[c[:, 0]] - values[c[:, 2]]) / (2.0 * h)
    gy = (values[c[:, 2]] + values[c[:, 3]] - values[c[:, 0]] - values[c[:, 1]]) / (2.0 * h)
    return gx, gy


def conjugate_on_cells(
    grid: DyadicGrid, values: np.ndarray
) -> Tuple[np.ndarray, float, int]:
    """Accumulate the conjugate at cell centers by flux path-integration.

    Stepping east between horizontally adjacent cells adds the difference
    of the node field across the shared vertical edge with a minus sign,
    -(top - bottom); stepping north adds +(right - left) across the shared
    horizontal edge.  These are the midpoint-rule increments of the
    conjugate differential.  Returns (cell values, worst loop-closure
    defect over all adjacent pairs, start cell row).  The start cell is
    the one whose center lies nearest the origin; it carries value 0.
    """
    c = grid.cell_corners
    east_rows = _cell_rows_at(grid, grid.cells + np.array([1, 0]))
    north_rows = _cell_rows_at(grid, grid.cells + np.array([0, 1]))
    west_rows = _cell_rows_at(grid, grid.cells - np.array([1, 0]))
    south_rows = _cell_rows_at(grid, grid.cells - np.array([0, 1]))

    delta_e = -(values[c[:, 3]] - values[c[:, 1]])  # NE - SE across east edge
    delta_n = values[c[:, 3]] - values[c[:, 2]]  # NE - NW across north edge

    centers = grid.cell_centers()
    start = int(np.argmin(centers[:, 0] ** 2 + centers[:, 1] ** 2))

    conj = np.zeros(grid.cell_count)
    seen = np.zeros(grid.cell_count, dtype=bool)
    seen[start] = True
    frontier = np.array([start], dtype=np.int64)
    # walking to a neighbor applies that arm's increment; the reverse arm
    # negates the increment stored on the far cell
    steps = (
        (east_rows, lambda src, dst: delta_e[src]),
        (west_rows, lambda src, dst: -delta_e[dst]),
        (north_rows, lambda src, dst: delta_n[src]),
        (south_rows, lambda src, dst: -delta_n[dst]),
    )
    while len(frontier):
        nxt = []
        for rows, inc in steps:
            targets = rows[frontier]
            ok = targets >= 0
            if not ok.any():
                continue
            src = frontier[ok]
            dst = targets[ok]
            fresh = ~seen[dst]
            if not fresh.any():
                continue
            src = src[fresh]
            dst = dst[fresh]
            dst_unique, first = np.unique(dst, return_index=True)
            src = src[first]
            conj[dst_unique] = conj[src] + inc(src, dst_unique)
            seen[dst_unique] = True
            nxt.append(dst_unique)
        frontier = np.concatenate(nxt) if nxt else np.array([], dtype=np.int64)
    if not seen.all():
        raise ValueError(
            "cell graph is not edge-connected at this level; refine the grid"
        )

    has_e = east_rows >= 0
    has_n = north_rows >= 0
    defect_e = np.abs(conj[east_rows[has_e]] - conj[has_e.nonzero()[0]] - delta_e[has_e])
    defect_n = np.abs(conj[north_rows[has_n]] - conj[has_n.nonzero()[0]] - delta_n[has_n])
    closure = 0.0
    if len(defect_e):
        closure = max(closure, float(defect_e.max()))
    if len(defect_n):
        closure = max(closure, float(defect_n.max()))
    return conj, closure, start


def harmonic_conjugate(grid: DyadicGrid, pot: ScalarField) -> ScalarField:
    """Conjugate of a solved potential, carried back to the grid nodes.

    Cell-center values come from ``conjugate_on_cells``.  Each node then
    averages, over its incident cells, the cell value plus a first-order
    correction along the conjugate's own gradient (-gy, gx); the
    correction makes the transport exact for affine fields, rim nodes
    included, where plain averaging of one or two cells is biased.  The
    returned field's ``residual`` holds the closure defect, and
    ``ClosureFailure`` is raised when it exceeds 1e-6 * (1 + max|g|).
    """
    g = pot.values
    conj, closure, _ = conjugate_on_cells(grid, g)
    bound = 1e-6 * (1.0 + float(np.abs(g).max()))
    if closure > bound:
        raise ClosureFailure(
            f"conjugate loop defect {closure:.3e} exceeds {bound:.3e}; "
            "input field is not harmonic on this grid or the covered "
            "region is not simply connected"
        )

    gx, gy = _cell_gradients(grid, g)
    h = grid.spacing
    sums = np.zeros(grid.node_count)
    counts = np.zeros(grid.node_count)
    # corner offsets from the cell center, in corner-slot order SW SE NW NE
    offsets = ((-0.5, -0.5), (0.5, -0.5), (-0.5, 0.5), (0.5, 0.5))
    for slot, (ox, oy) in enumerate(offsets):
        rows = grid.cell_corners[:, slot]
        contrib = conj + (ox * h) * (-gy) + (oy * h) * gx
        np.add.at(sums, rows, contrib)
        np.add.at(counts, rows, 1.0)
    node_conj = sums / counts
    return ScalarField(grid=grid, values=node_conj, residual=closure)


@dataclass
class ConformalMap:
    """Immutable bundle of the assembled disc map on one grid.

    ``values`` holds H at the nodes, ``factor`` the nonvanishing h with
    H = z * h.  ``slope_x``/``slope_y`` are node derivatives of g used by
    ``eval_derivative``; ``one_sided`` marks nodes where a rim-adjacent
    one-sided difference replaced the central one.
    """

    grid: DyadicGrid
    potential: ScalarField
    conjugate: ScalarField
    factor: np.ndarray  # complex h per node
    values: np.ndarray  # complex H per node
    closure_residual: float
    slope_x: np.ndarray
    slope_y: np.ndarray
    one_sided: np.ndarray  # bool per node
    tol: float = DEFAULT_TOL

    @property
    def domain(self) -> Domain:
        return self.grid.domain

    def boundary_rows(self) -> np.ndarray:
        """Rows of the nodes on the covered region's rim."""
        return np.where(~self.grid.interior)[0]


def _node_slopes(grid: DyadicGrid, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-node x/y slopes: central differences where both arms exist,
    one-sided otherwise, with a mask of the one-sided nodes."""
    h = grid.spacing
    nb = grid.neighbors  # W, E, S, N
    out = []
    fallback = np.zeros(grid.node_count, dtype=bool)
    for lo, hi in ((0, 1), (2, 3)):
        lo_rows, hi_rows = nb[:, lo], nb[:, hi]
        has_lo, has_hi = lo_rows >= 0, hi_rows >= 0
        slope = np.zeros(grid.node_count)
        both = has_lo & has_hi
        slope[both] = (values[hi_rows[both]] - values[lo_rows[both]]) / (2.0 * h)
        only_hi = has_hi & ~has_lo
        slope[only_hi] = (values[hi_rows[only_hi]] - values[only_hi.nonzero()[0]]) / h
        only_lo = has_lo & ~has_hi
        slope[only_lo] = (values[only_lo.nonzero()[0]] - values[lo_rows[only_lo]]) / h
        fallback |= ~both
        out.append(slope)
    return out[0], out[1], fallback


def assemble_map(
    grid: DyadicGrid,
    pot: ScalarField,
    conj: ScalarField,
    tol: float = DEFAULT_TOL,
) -> ConformalMap:
    """Combine potential and conjugate into H(z) = z * exp(g + i*gconj).

    The conjugate's additive constant is re-fixed so its interpolated
    value at the origin is zero; H'(0) = exp(g(0)) is then real positive.
    """
    origin = np.zeros((1, 2))
    conj_values = conj.values - _bilinear(grid, conj.values, origin)[0]
    factor = np.exp(pot.values + 1j * conj_values)
    pts = grid.node_points()
    z = pts[:, 0] + 1j * pts[:, 1]
    values = z * factor
    sx, sy, fallback = _node_slopes(grid, pot.values)
    return ConformalMap(
        grid=grid,
        potential=pot,
        conjugate=ScalarField(grid=grid, values=conj_values, residual=conj.residual),
        factor=factor,
        values=values,
        closure_residual=conj.residual,
        slope_x=sx,
        slope_y=sy,
        one_sided=fallback,
        tol=tol,
    )


def build_map(
    domain: Domain,
    level: int,
    shift: float = 0.0,
    tol: float = DEFAULT_TOL,
) -> ConformalMap:
    """Full pipeline: grid, Dirichlet solve, conjugate, assembly.

    The domain must already contain the origin in its interior (see
    ``normalize_origin``); the solve and closure error bounds propagate.
    """
    grid = build_grid(domain, level, shift)
    data = boundary_data(grid)
    pot = solve_dirichlet(grid, data, tol)
    conj = harmonic_conjugate(grid, pot)
    return assemble_map(grid, pot, conj, tol=tol)


def _bilinear(grid: DyadicGrid, values: np.ndarray, points: np.ndarray) -> np.ndarray:
    rows, u, v = grid.locate(points)
    if (rows < 0).any():
        x, y = points[rows < 0][0]
        raise OutsideGrid(f"point ({x}, {y}) is outside the covered region")
    c = grid.cell_corners[rows]
    return (
        (1.0 - u) * (1.0 - v) * values[c[:, 0]]
        + u * (1.0 - v) * values[c[:, 1]]
        + (1.0 - u) * v * values[c[:, 2]]
        + u * v * values[c[:, 3]]
    )


def _as_points(z) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=float)
    if arr.ndim == 1 and arr.shape == (2,):
        return arr[None, :], True
    if arr.ndim == 2 and arr.shape[1] == 2:
        return arr, False
    raise ValueError("expected a point (x, y) or an (M, 2) array of points")


def eval_map(m: ConformalMap, z):
    """H at a point (or (M, 2) array of points) inside the covered region
    by bilinear interpolation of the node samples.  Raises OutsideGrid for
    points not covered."""
    pts, single = _as_points(z)
    out = _bilinear(m.grid, m.values, pts)
    return complex(out[0]) if single else out


def eval_derivative(m: ConformalMap, z, with_flag: bool = False):
    """H' at a point (or points): h * (1 + z * (g_x - i g_y)) with the
    fields bilinear-interpolated.  With ``with_flag`` the result pairs
    with a bool (per point) marking reliance on one-sided rim stencils."""
    pts, single = _as_points(z)
    g = _bilinear(m.grid, m.potential.values, pts)
    conj = _bilinear(m.grid, m.conjugate.values, pts)
    sx = _bilinear(m.grid, m.slope_x, pts)
    sy = _bilinear(m.grid, m.slope_y, pts)
    zc = pts[:, 0] + 1j * pts[:, 1]
    deriv = np.exp(g + 1j * conj) * (1.0 + zc * (sx - 1j * sy))
    if with_flag:
        rows, _, _ = m.grid.locate(pts)
        flagged = m.one_sided[m.grid.cell_corners[rows]].any(axis=1)
        if single:
            return complex(deriv[0]), bool(flagged[0])
        return deriv, flagged
    return complex(deriv[0]) if single else deriv


def map_csv(m: ConformalMap) -> str:
    """Node table ``x,y,g,gconj,reH,imH`` in grid row order."""
    pts = m.grid.node_points()
    lines = ["x,y,g,gconj,reH,imH"]
    g = m.potential.values
    conj = m.conjugate.values
    for i in range(m.grid.node_count):
        lines.append(
            f"{float(pts[i, 0])!r},{float(pts[i, 1])!r},"
            f"{float(g[i])!r},{float(conj[i])!r},"
            f"{float(m.values[i].real)!r},{float(m.values[i].imag)!r}"
        )
    return "\n".join(lines) + "\n"
