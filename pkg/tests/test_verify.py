import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from halfwave.model import BoundaryCondition
from halfwave.oracle import assemble_fd, leapfrog
from halfwave.propagator import apply_retarded, build_kernel_grid
from halfwave.spectral import resolve
from halfwave.verify import (EnergyReport, bc_residual, causality_report,
                             cone_energy_ratio, emit_report, energy,
                             energy_report, exact_sequence_residuals,
                             gronwall_check, render_report)

DIR = BoundaryCondition.dirichlet()
ROBIN = BoundaryCondition.robin(-1.0)


def bump(x, center, width):
    return np.exp(-((x - center) ** 2) / (2 * width ** 2))


def gaussian_source(t, x, t0, st, x0, sx):
    return np.exp(-((t[:, None] - t0) ** 2) / (2 * st ** 2)
                  - ((x[None, :] - x0) ** 2) / (2 * sx ** 2))


class TestEnergy:
    X = np.linspace(0.0, 20.0, 1024)

    def test_zero_field(self):
        z = np.zeros_like(self.X)
        assert energy(z, z, self.X[1] - self.X[0]) == 0.0

    def test_quadratic_scaling_exact(self):
        u = bump(self.X, 8.0, 0.7)
        ud = bump(self.X, 9.0, 0.9)
        dx = self.X[1] - self.X[0]
        assert energy(2.0 * u, 2.0 * ud, dx) == 4.0 * energy(u, ud, dx)

    def test_dirichlet_conservation(self):
        sysm = assemble_fd(DIR, 0.0, 1024, 20.0)
        u0 = bump(self.X, 7.0, 0.6)
        dt = 0.4 * sysm.dx
        times, U, Udot = leapfrog(sysm, u0, np.zeros_like(u0), dt, 8.0,
                                  sample_stride=10)
        report = energy_report(times, U, Udot, sysm.dx, DIR)
        assert report.drift <= 1e-3
        assert np.all(report.E >= 0)

    def test_robin_boundary_term_is_necessary(self):
        sysm = assemble_fd(ROBIN, 0.0, 1024, 20.0)
        u0 = bump(self.X, 4.0, 0.6)
        dt = 0.4 * sysm.dx
        times, U, Udot = leapfrog(sysm, u0, np.zeros_like(u0), dt, 8.0,
                                  sample_stride=10)
        with_term = energy_report(times, U, Udot, sysm.dx, ROBIN)
        without = energy_report(times, U, Udot, sysm.dx, DIR)
        assert with_term.drift <= 1e-3
        assert without.drift >= 10 * with_term.drift


class TestGronwall:
    def test_zero_trajectory_passes(self):
        times = np.linspace(0, 5, 50)
        report = EnergyReport(times=times, E=np.zeros(50),
                              E_total=np.zeros(50), drift=0.0)
        passed, b = gronwall_check(report)
        assert passed and b == 0.0

    def test_bound_state_growth_rate(self):
        # u = cosh(t) e(x) has bulk energy cosh(2t)/2, growth exponent 2
        x = np.linspace(0.0, 30.0, 3000)
        e = np.sqrt(2.0) * np.exp(-x)
        times = np.linspace(0.0, 6.0, 61)
        U = np.cosh(times)[:, None] * e[None, :]
        Udot = np.sinh(times)[:, None] * e[None, :]
        report = energy_report(times, U, Udot, x[1] - x[0], ROBIN)
        passed, b = gronwall_check(report)
        assert passed
        assert b == pytest.approx(2.0, abs=0.1)
        # conserved total stays put while the bulk energy explodes
        assert report.drift <= 1e-3

    def test_energy_from_nothing_fails(self):
        times = np.linspace(0, 1, 11)
        E = np.linspace(0, 1, 11)
        report = EnergyReport(times=times, E=E, E_total=E, drift=1.0)
        passed, b = gronwall_check(report)
        assert not passed and b == float("inf")

    def test_cap_enforced(self):
        times = np.linspace(0, 1, 11)
        E = np.exp(3.0 * times)
        report = EnergyReport(times=times, E=E, E_total=E, drift=0.0)
        passed, b = gronwall_check(report, b_cap=2.0)
        assert not passed and b >= 3.0 - 1e-6


def test_cone_energy_stays_put():
    grid, L = 1024, 30.0
    sysm = assemble_fd(ROBIN, 0.0, grid, L)
    x = np.linspace(0, L, grid)
    u0 = bump(x, 10.0, 0.5)
    dt = 0.4 * sysm.dx
    times, U, Udot = leapfrog(sysm, u0, np.zeros_like(u0), dt, 6.0,
                              sample_stride=20)
    ratio = cone_energy_ratio(times, U, Udot, x, support=(6.0, 14.0),
                              margin=5 * sysm.dx)
    assert ratio <= 1e-6


class TestCausalityReport:
    def test_zero_time_slice(self):
        res = resolve(DIR, 0.0, np.linspace(0, 12, 64))
        grid = build_kernel_grid(res, np.array([0.0]), np.linspace(0.3, 3, 8),
                                 np.linspace(0.3, 3, 8))
        report = causality_report(grid, tol=1e-3)
        assert report["passed"] and report["max_acausal"] <= 1e-10

    def test_robin_kernel_with_bound_state(self):
        res = resolve(ROBIN, 0.0, np.linspace(0, 12, 64))
        t = np.linspace(0.0, 1.5, 7)
        x = np.linspace(0.3, 3.5, 9)
        report = causality_report(build_kernel_grid(res, t, x, x), tol=1e-3)
        assert report["passed"]

    def test_residual_quarters_when_nodes_double(self):
        t = np.linspace(0.0, 1.5, 7)
        x = np.linspace(0.3, 3.5, 9)
        worst = []
        for nodes in (2000, 4000):
            res = resolve(DIR, 0.0, np.linspace(0, 12, 64), nodes=nodes)
            report = causality_report(build_kernel_grid(res, t, x, x))
            worst.append(report["max_acausal"])
        assert worst[1] <= worst[0] / 2


class TestBcResidual:
    X = np.linspace(0.0, 12.0, 1024)
    T = np.linspace(0.0, 5.0, 400)

    def _field(self, bc, k=0.0, t0=2.0):
        res = resolve(bc, k, self.X)
        f = gaussian_source(self.T, self.X, t0, 0.3, 3.0, 0.4)
        from halfwave.propagator import wentzell_apply
        if bc.is_dynamic:
            return wentzell_apply(res, f, self.T)
        return apply_retarded(res, f, self.T)

    def test_dirichlet_trace_vanishes(self):
        u = self._field(DIR)
        assert bc_residual(u, self.T, self.X, DIR) <= 1e-2

    def test_robin_residual_small(self):
        u = self._field(ROBIN)
        assert bc_residual(u, self.T, self.X, ROBIN) <= 1e-2

    def test_wrong_coefficient_detected(self):
        u = self._field(ROBIN)
        assert bc_residual(u, self.T, self.X,
                           BoundaryCondition.robin(1.0)) >= 1e-1

    def test_static_under_time_translation(self):
        r1 = bc_residual(self._field(ROBIN, t0=2.0), self.T, self.X, ROBIN)
        r2 = bc_residual(self._field(ROBIN, t0=2.4), self.T, self.X, ROBIN)
        assert abs(r1 - r2) <= 5e-3

    def test_dynamic_condition_residual(self):
        bc = BoundaryCondition.wentzell_laplace()
        u = self._field(bc, k=1.0)
        assert bc_residual(u, self.T, self.X, bc, k=1.0) <= 1e-2

    def test_dynamic_field_fails_static_test(self):
        # negative control: the dynamical field does not satisfy the static
        # multiplier condition with the same symbol
        bc = BoundaryCondition.wentzell_laplace()
        u = self._field(bc, k=1.0)
        static = BoundaryCondition.multiplier(lambda k: k * k)
        assert bc_residual(u, self.T, self.X, static, k=1.0) >= 1e-1


class TestExactSequence:
    def test_zero_function(self):
        res = resolve(DIR, 0.0, np.linspace(0, 12, 256))
        sysm = assemble_fd(DIR, 0.0, 256, 12.0)
        t = np.linspace(0, 4, 160)
        rs = exact_sequence_residuals(res, sysm, np.zeros((160, 256)), t)
        assert rs == (0.0, 0.0, 0.0, 0.0)

    @pytest.mark.parametrize("bc", [DIR, ROBIN])
    def test_gaussian_bump(self, bc):
        x = np.linspace(0, 12, 1024)
        res = resolve(bc, 0.0, x)
        sysm = assemble_fd(bc, 0.0, 1024, 12.0)
        t = np.linspace(0, 6, 480)
        g = gaussian_source(t, x, 3.0, 0.4, 4.0, 0.5)
        r1, r2, r3, r4 = exact_sequence_residuals(res, sysm, g, t)
        assert max(r1, r2, r3, r4) <= 1e-2


def test_report_emission(tmp_path):
    payload = {"passed": False,
               "checks": {"alpha": {"passed": True, "residual": 1.5e-7},
                          "beta": {"passed": False, "residual": 0.2}}}
    path = tmp_path / "report.json"
    emit_report(path, payload)
    back = json.loads(path.read_text())
    assert back["checks"]["alpha"]["passed"] is True
    text = (tmp_path / "report.txt").read_text()
    assert "FAIL" in text and "PASS" in text
    assert render_report(payload).startswith("overall: FAIL")
