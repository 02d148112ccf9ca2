"""Strang-split spectral propagation and the boost-covariance experiment."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .gauge import (
    GridMismatch,
    GridWave,
    IncommensurateBoost,
    boost_grid,
    commensurate_index,
    grid_coordinates,
    grid_wavenumbers,
    is_commensurate,
    spectral_laplacian,
)
from .operator import Potential, ZeroPotential, boosted_frame
from .spacetime import InertialFrame, Params

log = logging.getLogger(__name__)


class ComplexPotentialRejected(ValueError):
    """The propagator is unitary only for real potentials."""


@dataclass(frozen=True, eq=False)
class SolverConfig:
    box_length: float
    n_points: int
    dt: float
    t_final: float
    frame: InertialFrame
    potential: Potential
    params: Params = field(default_factory=lambda: Params(dim=1))
    record_every: int = 1

    def __post_init__(self):
        n = int(self.n_points)
        if n < 8 or n & (n - 1):
            raise ValueError("n_points must be a power of two >= 8")
        if not self.box_length > 0:
            raise ValueError("box_length must be positive")
        if not (self.dt > 0 and self.t_final > 0):
            raise ValueError("dt and t_final must be positive")
        if self.dt > self.t_final:
            raise ValueError("dt exceeds t_final")
        if int(self.record_every) < 1:
            raise ValueError("record_every must be a positive integer")
        if self.frame.dim != self.params.dim or self.potential.dim != self.params.dim:
            raise ValueError("frame, potential and params disagree on dimension")
        steps = self.t_final / self.dt
        if abs(steps - round(steps)) > 1e-9 * steps:
            raise ValueError("t_final must be an integer multiple of dt")
        object.__setattr__(self, "n_points", n)
        object.__setattr__(self, "record_every", int(self.record_every))

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    @property
    def dim(self) -> int:
        return self.params.dim

    def max_kinetic_phase(self) -> float:
        kmax = np.pi * self.n_points / self.box_length
        return self.params.hbar * self.dim * kmax**2 * self.dt / (2.0 * self.params.mass)


@dataclass
class EvolutionResult:
    snapshots: list
    norms: np.ndarray
    energy: np.ndarray
    max_kinetic_phase: float
    boundary_tail: float

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.snapshots])

    @property
    def final(self) -> GridWave:
        return self.snapshots[-1]

    @property
    def accuracy_ok(self) -> bool:
        return self.max_kinetic_phase < np.pi

    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norms / self.norms[0] - 1.0)))


def boundary_tail(psi: GridWave) -> float:
    """Largest ``|psi|`` on the faces of the box, relative to ``max |psi|``."""
    a = np.abs(psi.samples)
    peak = a.max()
    if peak == 0:
        return 0.0
    faces = [np.take(a, 0, axis=ax).max() for ax in range(psi.dim)]
    faces += [np.take(a, -1, axis=ax).max() for ax in range(psi.dim)]
    return float(max(faces) / peak)


def discrete_energy(psi: GridWave, u_values: np.ndarray, params: Params) -> float:
    h_psi = -params.hbar**2 / (2.0 * params.mass) * spectral_laplacian(psi.samples, psi.box_length)
    h_psi = h_psi + u_values * psi.samples
    num = np.vdot(psi.samples, h_psi).real
    return float(num / np.vdot(psi.samples, psi.samples).real)


def _check_initial(initial: GridWave, cfg: SolverConfig):
    if initial.dim != cfg.dim or initial.n_points != cfg.n_points or initial.box_length != cfg.box_length:
        raise GridMismatch(
            f"initial grid {initial.n_points}^{initial.dim} on L={initial.box_length} "
            f"does not match config {cfg.n_points}^{cfg.dim} on L={cfg.box_length}"
        )


def evolve(initial: GridWave, cfg: SolverConfig) -> EvolutionResult:
    """Propagate ``i hbar psi_t = -(hbar^2/2m) lap psi + U~ psi`` in ``cfg.frame``.

    Each step is ``exp(-i U~ dt / 2 hbar) K exp(-i U~ dt / 2 hbar)`` with the
    kinetic factor ``K`` exact in Fourier space and ``U~`` sampled at the
    step's midpoint time.
    """
    _check_initial(initial, cfg)
    pot = cfg.potential
    if not pot.is_real:
        raise ComplexPotentialRejected(f"{type(pot).__name__} is complex-valued")
    params = cfg.params
    y = grid_coordinates(cfg.box_length, cfg.n_points, cfg.dim)
    k = grid_wavenumbers(cfg.box_length, cfg.n_points, cfg.dim)
    kinetic = np.exp(-1j * params.hbar * np.sum(k * k, axis=-1) * cfg.dt / (2.0 * params.mass))
    u_tilde = pot.in_frame(cfg.frame)
    free = isinstance(pot, ZeroPotential)
    tshape = y.shape[:-1]

    def potential_at(t):
        if free:
            return np.zeros(tshape)
        vals = np.asarray(u_tilde(y, np.full(tshape, t)))
        if np.iscomplexobj(vals):
            if np.any(vals.imag != 0):
                raise ComplexPotentialRejected("potential returned complex values")
            vals = vals.real
        return vals

    phase = cfg.max_kinetic_phase()
    if phase >= np.pi:
        log.warning("dt * max kinetic phase = %.3g >= pi; temporal resolution is poor", phase)

    t0 = initial.time
    psi = initial.samples.copy()
    snaps, norms, energy = [], [], []

    def record(step):
        w = GridWave(psi, cfg.box_length, t0 + step * cfg.dt)
        snaps.append(w)
        norms.append(w.norm())
        energy.append(discrete_energy(w, potential_at(w.time), params))

    record(0)
    for step in range(cfg.n_steps):
        t_mid = t0 + (step + 0.5) * cfg.dt
        if free:
            psi = np.fft.ifftn(kinetic * np.fft.fftn(psi))
        else:
            half = np.exp(-0.5j * potential_at(t_mid) * cfg.dt / params.hbar)
            psi = half * np.fft.ifftn(kinetic * np.fft.fftn(half * psi))
        done = step + 1
        if done % cfg.record_every == 0 or done == cfg.n_steps:
            record(done)

    tail = max(boundary_tail(s) for s in snaps)
    if tail > 1e-12:
        log.info("boundary tail %.3g exceeds 1e-12; periodic images may interact", tail)
    return EvolutionResult(snaps, np.array(norms), np.array(energy), phase, tail)


@dataclass
class CovarianceReport:
    """Discrepancy between evolve-then-boost and boost-then-evolve at matched times."""

    v: np.ndarray
    times: np.ndarray
    l2_errors: np.ndarray
    linf_errors: np.ndarray
    boundary_tail: float

    @property
    def final_l2(self) -> float:
        return float(self.l2_errors[-1])

    @property
    def max_l2(self) -> float:
        return float(np.max(self.l2_errors))


def covariance_experiment(initial: GridWave, v, cfg: SolverConfig) -> CovarianceReport:
    """Evolve ``psi`` in ``cfg.frame`` and ``T_v psi`` in the matching boosted frame, then compare.

    ``l2_errors`` are relative to the norm of the boosted evolution;
    ``linf_errors`` are absolute.
    """
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if not is_commensurate(v, cfg.box_length, cfg.params):
        raise IncommensurateBoost(
            f"m v L / (2 pi hbar) = {commensurate_index(v, cfg.box_length, cfg.params)} is not integral"
        )
    ref = evolve(initial, cfg)
    moved = evolve(boost_grid(v, initial, cfg.params), replace(cfg, frame=boosted_frame(cfg.frame, v)))
    l2, linf = [], []
    for a, b in zip(ref.snapshots, moved.snapshots):
        d = boost_grid(v, a, cfg.params).samples - b.samples
        l2.append(np.sqrt(np.sum(np.abs(d) ** 2)) / np.sqrt(np.sum(np.abs(b.samples) ** 2)))
        linf.append(np.max(np.abs(d)))
    return CovarianceReport(
        v=v,
        times=ref.times,
        l2_errors=np.array(l2),
        linf_errors=np.array(linf),
        boundary_tail=max(ref.boundary_tail, moved.boundary_tail),
    )
