import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schrobundle.gauge import (
    GaussianPacket,
    GridMismatch,
    GridWave,
    IncommensurateBoost,
    PlaneWave,
    boost_grid,
    l2_distance,
    sample_wave,
    snap_boost,
)
from schrobundle.operator import (
    FunctionPotential,
    HarmonicPotential,
    TabulatedPotential,
    UniformField,
    ZeroPotential,
    apply_free_operator_grid,
)
from schrobundle.solver import (
    ComplexPotentialRejected,
    SolverConfig,
    boundary_tail,
    covariance_experiment,
    evolve,
)
from schrobundle.spacetime import Event, InertialFrame, Params, Velocity

L, N = 64.0, 512


def cfg(dt=1e-3, T=1.0, potential=None, frame=None, params=None, **kw):
    params = params or Params(dim=1)
    frame = frame or InertialFrame.fiducial(params.dim)
    potential = potential or ZeroPotential(params.dim)
    kw.setdefault("box_length", L)
    kw.setdefault("n_points", N)
    return SolverConfig(dt=dt, t_final=T, frame=frame, potential=potential, params=params, **kw)


@pytest.fixture(scope="module")
def packet():
    return GaussianPacket.make([0.0], 2.0, [1.0], Params(dim=1))


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            cfg(n_points=12)
        with pytest.raises(ValueError):
            cfg(n_points=4)
        with pytest.raises(ValueError):
            cfg(dt=2.0, T=1.0)
        with pytest.raises(ValueError):
            cfg(dt=0.3, T=1.0)
        with pytest.raises(ValueError):
            cfg(record_every=0)
        with pytest.raises(ValueError):
            cfg(potential=ZeroPotential(2))

    def test_steps_and_phase(self):
        c = cfg(dt=1e-3)
        assert c.n_steps == 1000
        assert c.max_kinetic_phase() == pytest.approx((np.pi * N / L) ** 2 * 1e-3 / 2)

    def test_poor_resolution_is_reported(self, packet, caplog):
        c = cfg(dt=0.1, T=0.2)
        with caplog.at_level(logging.WARNING):
            r = evolve(sample_wave(packet, L, N), c)
        assert not r.accuracy_ok
        assert "temporal resolution" in caplog.text


class TestEvolve:
    @pytest.mark.parametrize("m", [1, 5, -3])
    def test_plane_wave_eigenmode(self, m):
        params = Params(hbar=1.0, mass=1.0, dim=1)
        k = 2 * np.pi * m / L
        pw = PlaneWave.free([k], params)
        r = evolve(sample_wave(pw, L, N), cfg(params=params))
        expected = np.exp(-1j * pw.omega * 1.0) * sample_wave(pw, L, N).samples
        assert np.max(np.abs(r.final.samples - expected)) <= 1e-10

    def test_gaussian_oracle(self, packet):
        r = evolve(sample_wave(packet, L, N), cfg(record_every=100))
        exact = sample_wave(packet, L, N, 1.0)
        assert r.final.time == pytest.approx(1.0)
        assert l2_distance(r.final, exact) / exact.norm() <= 1e-6
        assert r.norm_drift() <= 1e-12
        assert r.boundary_tail <= 1e-12
        assert np.allclose(r.times, np.arange(11) * 0.1)

    def test_2d_oracle(self):
        params = Params(dim=2)
        g = GaussianPacket.make([0.0, 0.0], 1.5, [1.0, -0.5], params)
        c = cfg(dt=1e-2, T=0.5, params=params, box_length=32.0, n_points=64)
        r = evolve(sample_wave(g, 32.0, 64), c)
        exact = sample_wave(g, 32.0, 64, 0.5)
        assert l2_distance(r.final, exact) / exact.norm() <= 1e-6

    def test_norm_conserved_with_potential(self, packet):
        U = HarmonicPotential(InertialFrame(Event([1.0], 0.0), Velocity([0.5])), 2.0)
        r = evolve(sample_wave(packet, L, N), cfg(potential=U))
        assert len(r.norms) == 1001
        assert r.norm_drift() <= 1e-12

    @settings(max_examples=10)
    @given(st.integers(0, 2**32 - 1))
    def test_norm_conserved_random_real_potential(self, seed):
        rng = np.random.default_rng(seed)
        ys, ts = np.linspace(-20, 20, 33), np.linspace(-1, 2, 7)
        U = TabulatedPotential((ys, ts), rng.normal(size=(33, 7)))
        psi = GridWave(rng.normal(size=64) + 1j * rng.normal(size=64), 16.0, 0.0)
        r = evolve(psi, cfg(dt=1e-3, T=1.0, potential=U, box_length=16.0, n_points=64, record_every=100))
        assert r.norm_drift() <= 1e-12

    def test_energy_conserved_free(self, packet):
        r = evolve(sample_wave(packet, L, N), cfg(record_every=100))
        assert np.ptp(r.energy) <= 1e-10 * abs(r.energy[0])

    def test_second_order_with_potential(self, packet):
        U = HarmonicPotential(InertialFrame.fiducial(1), 1.0)
        finals = [
            evolve(sample_wave(packet, L, N), cfg(dt=dt, potential=U, record_every=10**6)).final
            for dt in (4e-3, 2e-3, 1e-3)
        ]
        e1, e2 = l2_distance(finals[0], finals[1]), l2_distance(finals[1], finals[2])
        assert 3.5 <= e1 / e2 <= 4.5

    def test_grid_solutions_satisfy_free_operator(self, packet):
        dt = 1e-3
        r = evolve(sample_wave(packet, L, N), cfg(dt=dt, T=0.05))
        res = [apply_free_operator_grid(a, b, dt, Params(dim=1)).max_abs() for a, b in zip(r.snapshots, r.snapshots[1:])]
        # the split-step is exact, so the centred residual is the time-stencil error O(dt^2)
        assert max(res) <= 1e-6

    def test_rejects_complex_potential(self, packet):
        U = FunctionPotential(lambda y, t: 1j * np.ones(y.shape[:-1]), 1, is_real=False)
        with pytest.raises(ComplexPotentialRejected):
            evolve(sample_wave(packet, L, N), cfg(potential=U))
        ys, ts = np.linspace(-40, 40, 5), np.linspace(0, 1, 2)
        with pytest.raises(ComplexPotentialRejected):
            evolve(sample_wave(packet, L, N), cfg(potential=TabulatedPotential((ys, ts), np.ones((5, 2)) * 1j)))

    def test_rejects_mismatched_grid(self, packet):
        with pytest.raises(GridMismatch):
            evolve(sample_wave(packet, L, 256), cfg())
        with pytest.raises(GridMismatch):
            evolve(sample_wave(packet, 32.0, N), cfg())

    def test_boundary_tail(self):
        a = np.zeros(16, dtype=complex)
        a[8] = 2.0
        a[0] = 1e-3
        assert boundary_tail(GridWave(a, 4.0, 0.0)) == pytest.approx(5e-4)
        assert boundary_tail(GridWave(np.zeros(16, dtype=complex), 4.0, 0.0)) == 0.0

    def test_deterministic(self, packet):
        U = HarmonicPotential(InertialFrame.fiducial(1), 1.0)
        a = evolve(sample_wave(packet, L, N), cfg(T=0.1, potential=U)).final.samples
        b = evolve(sample_wave(packet, L, N), cfg(T=0.1, potential=U)).final.samples
        assert np.array_equal(a, b)


class TestCovariance:
    def test_zero_boost(self, packet):
        U = HarmonicPotential(InertialFrame.fiducial(1), 1.0)
        r = covariance_experiment(sample_wave(packet, L, N), [0.0], cfg(T=0.2, potential=U, record_every=50))
        assert r.max_l2 <= 1e-13

    def test_free(self, packet):
        v = snap_boost([2.0], L, Params(dim=1))
        r = covariance_experiment(sample_wave(packet, L, N), v, cfg(record_every=100))
        assert r.final_l2 <= 1e-6
        assert r.boundary_tail <= 1e-12
        assert len(r.times) == len(r.l2_errors) == 11

    def test_harmonic(self, packet):
        v = snap_boost([2.0], L, Params(dim=1))
        U = HarmonicPotential(InertialFrame.fiducial(1), 1.0)
        r = covariance_experiment(sample_wave(packet, L, N), v, cfg(dt=5e-4, potential=U, record_every=200))
        assert r.final_l2 <= 1e-5

    def test_harmonic_discrepancy_shrinks_with_dt(self, packet):
        """Discrete covariance is not exact; it improves at the solver's rate."""
        v = snap_boost([2.0], L, Params(dim=1))
        U = HarmonicPotential(InertialFrame.fiducial(1), 1.0)
        errs = [
            covariance_experiment(sample_wave(packet, L, N), v, cfg(dt=dt, potential=U, record_every=10**6)).final_l2
            for dt in (2e-3, 1e-3)
        ]
        assert errs[0] > 1e-10
        assert 3.0 <= errs[0] / errs[1] <= 5.0

    def test_uniform_field(self, packet):
        v = snap_boost([1.0], L, Params(dim=1))
        r = covariance_experiment(sample_wave(packet, L, N), v, cfg(T=0.5, potential=UniformField([0.2]), record_every=100))
        assert r.final_l2 <= 1e-5

    def test_incommensurate(self, packet):
        with pytest.raises(IncommensurateBoost):
            covariance_experiment(sample_wave(packet, L, N), [2.0], cfg())

    def test_boost_preserves_norm(self, packet):
        psi = sample_wave(packet, L, N, 0.4)
        v = snap_boost([-3.0], L, Params(dim=1))
        assert boost_grid(v, psi, Params(dim=1)).norm() == pytest.approx(psi.norm(), rel=1e-13)
