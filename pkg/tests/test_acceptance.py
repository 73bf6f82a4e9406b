"""End-to-end acceptance run: one test per criterion, stated tolerances.

Each test prints the measured numbers next to the threshold it enforces
so a failing run shows exactly which margin collapsed.
"""

from __future__ import annotations

import math
import time

import numpy as np

from discmap import (
    bijectivity_sweep,
    boundary_data,
    boundary_modulus_report,
    boundary_probes,
    build_grid,
    count_preimages,
    dirichlet_energy,
    perron_iterate,
    punctured_disc_profile,
    solve_dirichlet,
    verify_barrier,
    weak_barrier,
)
from discmap.dirichlet import DEFAULT_TOL
from discmap.mapping import eval_derivative

from conftest import DOMAIN_NAMES


def _inner_error(m, center, reference):
    pts = m.grid.node_points()
    z = pts[:, 0] + 1j * pts[:, 1]
    inner = np.abs(z - center) <= 0.5
    return float(np.abs(m.values[inner] - reference(z[inner])).max())


def test_criterion_1_identity_recovery(domains, map_for):
    t0 = time.time()
    m6 = map_for("disc", 6)
    elapsed = time.time() - t0
    err6 = _inner_error(m6, 0.0, lambda z: z)
    err4 = _inner_error(map_for("disc", 4), 0.0, lambda z: z)
    print(
        f"identity: err(N=6) = {err6:.5f} <= 0.05, err(N=4) = {err4:.5f}, "
        f"build {elapsed:.1f}s <= 60s"
    )
    assert err6 <= 0.05
    assert err6 < err4
    assert elapsed <= 60.0


def test_criterion_2_mobius_oracle(map_for):
    m = map_for("offset_disc", 6)
    err = _inner_error(m, 0.3, lambda z: z / (0.91 + 0.3 * z))
    d0 = eval_derivative(m, (0.0, 0.0))
    target = 1.0 / 0.91
    print(
        f"mobius: max inner error = {err:.5f} <= 0.05, "
        f"H'(0) = {d0.real:.5f}{d0.imag:+.1e}i vs {target:.5f} "
        f"(|diff| = {abs(d0 - target):.5f} <= 0.05)"
    )
    assert err <= 0.05
    assert abs(d0 - target) <= 0.05


def test_criterion_3_bijectivity_sweeps(map_for):
    results = {}
    for name in DOMAIN_NAMES:
        m = map_for(name, 6)
        cache = {}
        sweep = bijectivity_sweep(m, radius=0.7, probes=20, seed=0, cache=cache)
        far = count_preimages(m, None, 1.1 + 0.0j, cache=cache)
        results[name] = (sweep.ok_fraction, far.count)
    print(
        "bijectivity: "
        + ", ".join(f"{k}: ok={v[0]:.2f} far={v[1]}" for k, v in results.items())
    )
    for name, (ok_fraction, far_count) in results.items():
        assert ok_fraction == 1.0, name
        assert far_count == 0, name


def test_criterion_4_boundary_modulus(map_for):
    lines = []
    for name in DOMAIN_NAMES:
        node6 = boundary_modulus_report(map_for(name, 6)).node_max
        path = [boundary_modulus_report(map_for(name, n)).path_max for n in (4, 5, 6)]
        lines.append(f"{name}: rim max {node6:.2e} <= 0.1, path {path}")
        assert node6 <= 0.1, name
        assert path[0] > path[1] > path[2], name
    print("boundary modulus: " + "; ".join(lines))


def test_criterion_5_counterexample_regression():
    profiles = [punctured_disc_profile(n) for n in (4, 5, 6)]
    p6 = profiles[-1]
    gap = abs(p6.value_at_half - p6.predicted_at_half)
    values = [p.value_at_half for p in profiles]
    print(
        f"punctured disc: value(N=6) = {p6.value_at_half:.4f} vs predicted "
        f"{p6.predicted_at_half:.4f} (gap {gap:.4f} <= 0.05), "
        f"climbing {values}"
    )
    assert gap <= 0.05
    assert values[0] < values[1] < values[2]


def test_criterion_6_energy_minimality(domains):
    g = build_grid(domains["square"], 5)
    data = boundary_data(g)
    fld = solve_dirichlet(g, data)
    base = dirichlet_energy(g, fld)
    free = g.interior & ~fld.constrained
    rng = np.random.default_rng(0)
    worst = math.inf
    for _ in range(20):
        d = np.zeros(g.node_count)
        d[free] = rng.normal(0.0, 0.05, int(free.sum()))
        gain = dirichlet_energy(g, fld.values + d) - base
        worst = min(worst, gain / dirichlet_energy(g, d))
        assert gain > 0.0
    print(
        f"energy: 20 zero-rim perturbations all increase the energy; "
        f"min gain / perturbation energy = {worst:.6f} >= 0.5"
    )
    assert worst >= 0.5


def test_criterion_7_conjugate_closure(map_for):
    lines = []
    for name in DOMAIN_NAMES:
        m = map_for(name, 6)
        bound = 1e-6 * (1.0 + float(np.abs(m.potential.values).max()))
        lines.append(f"{name}: {m.closure_residual:.2e} <= {bound:.2e}")
        assert m.closure_residual <= bound, name
    print("conjugate closure: " + "; ".join(lines))


def test_criterion_8_barrier_properties(domains, grid_for):
    checked = 0
    for name in ("disc", "square"):
        g = grid_for(name, 6)
        pts = g.node_points()
        span = float(max(np.ptp(pts[:, 0]), np.ptp(pts[:, 1])))
        for q in boundary_probes(domains[name]):
            rep = verify_barrier(g, weak_barrier(g, q), sample_radius=0.5 * span)
            assert rep.subharmonic, (name, q)
            assert rep.negative, (name, q)
            assert rep.limit_zero, (name, q)
            checked += 1
    print(f"barriers: all three checks pass at {checked} probes (N=6)")
    assert checked == 16


def test_criterion_9_perron_consistency(domains):
    g = build_grid(domains["square"], 5)
    data = boundary_data(g)
    direct = solve_dirichlet(g, data, tol=DEFAULT_TOL)
    prev = perron_iterate(g, data, 1).values
    for sweeps in (4, 16, 64):
        cur = perron_iterate(g, data, sweeps).values
        assert (cur >= prev - 1e-15).all()
        prev = cur
    limit = perron_iterate(g, data, 500000)
    gap = float(np.abs(limit.values - direct.values).max())
    print(
        f"perron: iterates nondecreasing; limit agrees with the direct "
        f"solve to {gap:.2e} <= {10.0 * DEFAULT_TOL:.0e}"
    )
    assert gap <= 10.0 * DEFAULT_TOL
