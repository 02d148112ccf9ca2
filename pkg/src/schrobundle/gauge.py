"""Boost gauge phase, the boost representation on wavefunctions, and grid data.

``T_v psi (y, t) = exp(F_v(y, t)) psi(y - v t, t)`` with

    F_v(y, t) = (i m / hbar) (v.y - t |v|^2 / 2) + c.

With ``c = 0`` (more generally ``exp(c) = 1``) the map ``v -> T_v`` is a
representation of the additive group of spatial vectors, and it commutes
with the free Schrodinger operator.  ``T_v`` takes the wavefunction seen by
an observer with velocity ``u`` to the one seen by the observer with
velocity ``u - v``: a plane wave ``k`` becomes a plane wave ``k + m v / hbar``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import qmc

from . import oracles
from .spacetime import Params, Velocity

#: Relative tolerance for deciding that ``m v L / (2 pi hbar)`` is an integer.
COMMENSURATE_TOL = 1e-9


class IncommensurateBoost(ValueError):
    """The boost phase ``exp(i m v.y / hbar)`` is not periodic on the box."""


class GridMismatch(ValueError):
    """Two grid waves (or a wave and a config) disagree on geometry or time."""


def _as_vec(v) -> np.ndarray:
    return np.atleast_1d(np.asarray(v, dtype=float))


def _pts(y, n):
    y = np.asarray(y, dtype=float)
    if y.ndim == 0:
        y = y[None]
    if y.shape[-1] != n:
        raise ValueError(f"points must have trailing dimension {n}, got {y.shape}")
    return y


@dataclass(frozen=True, eq=False)
class GaugePhase:
    v: np.ndarray
    params: Params
    c: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "v", _as_vec(self.v))
        object.__setattr__(self, "c", complex(self.c))

    def __call__(self, y, t):
        y = _pts(y, self.v.size)
        t = np.asarray(t, dtype=float)
        mh = self.params.mass / self.params.hbar
        return 1j * mh * (y @ self.v - 0.5 * t * float(np.dot(self.v, self.v))) + self.c

    evaluate = __call__


def gauge_phase_eval(F: GaugePhase, y, t):
    return F(y, t)


# --------------------------------------------------------------------------
# closed-form waves


class ClosedFormWave:
    """A complex function of ``(y, t)`` that can be evaluated anywhere.

    Subclasses implement ``__call__(y, t)`` with ``y`` of shape ``(..., n)``
    and ``t`` broadcasting against ``(...)``.
    """

    dim: int

    def __call__(self, y, t):  # pragma: no cover - abstract
        raise NotImplementedError

    def __add__(self, other: "ClosedFormWave") -> "LinearCombination":
        return LinearCombination(((1.0, self), (1.0, other)))

    def __rmul__(self, a: complex) -> "LinearCombination":
        return LinearCombination(((a, self),))


@dataclass(frozen=True, eq=False)
class PlaneWave(ClosedFormWave):
    """``amplitude * exp(i (k.y - omega t))``; ``omega`` is not tied to ``k``."""

    k: np.ndarray
    omega: float
    amplitude: complex = 1.0 + 0j

    def __post_init__(self):
        object.__setattr__(self, "k", _as_vec(self.k))
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    @classmethod
    def free(cls, k, params: Params, amplitude: complex = 1.0) -> "PlaneWave":
        return cls(k, oracles.plane_wave_frequency(k, params), amplitude)

    @classmethod
    def constant(cls, dim: int, value: complex = 1.0) -> "PlaneWave":
        return cls(np.zeros(dim), 0.0, value)

    @property
    def dim(self) -> int:
        return self.k.size

    def __call__(self, y, t):
        y = _pts(y, self.dim)
        t = np.asarray(t, dtype=float)
        return self.amplitude * np.exp(1j * (y @ self.k - self.omega * t))


@dataclass(frozen=True, eq=False)
class GaussianPacket(ClosedFormWave):
    packet: oracles.GaussianPacketParams
    params: Params

    @classmethod
    def make(cls, center, width, k0, params: Params, t0: float = 0.0) -> "GaussianPacket":
        return cls(oracles.GaussianPacketParams(center, width, k0, t0), params)

    @property
    def dim(self) -> int:
        return self.packet.dim

    def __call__(self, y, t):
        return oracles.gaussian_packet_eval(self.packet, y, t, self.params)


@dataclass(frozen=True, eq=False)
class LinearCombination(ClosedFormWave):
    terms: tuple

    def __post_init__(self):
        terms = tuple((complex(a), w) for a, w in self.terms)
        if not terms:
            raise ValueError("empty linear combination")
        if len({w.dim for _, w in terms}) != 1:
            raise ValueError("terms have different dimensions")
        object.__setattr__(self, "terms", terms)

    @property
    def dim(self) -> int:
        return self.terms[0][1].dim

    def __call__(self, y, t):
        return sum(a * w(y, t) for a, w in self.terms)


@dataclass(frozen=True, eq=False)
class Boosted(ClosedFormWave):
    """``exp(phase(y, t)) * inner(y - v t, t)``."""

    phase: GaugePhase
    inner: ClosedFormWave

    @property
    def dim(self) -> int:
        return self.inner.dim

    def __call__(self, y, t):
        y = _pts(y, self.dim)
        t = np.asarray(t, dtype=float)
        shifted = y - t[..., None] * self.phase.v
        return np.exp(self.phase(y, t)) * self.inner(shifted, t)


def boost_closed_form(v, psi: ClosedFormWave, params: Params, c: complex = 0j) -> ClosedFormWave:
    """Apply ``T_v`` (with integration constant ``c``) to a closed-form wave."""
    v = _as_vec(v)
    if v.size != psi.dim:
        raise ValueError("boost and wave dimensions differ")
    if isinstance(psi, PlaneWave):
        mh = params.mass / params.hbar
        return PlaneWave(
            k=psi.k + mh * v,
            omega=psi.omega + float(psi.k @ v) + 0.5 * mh * float(v @ v),
            amplitude=psi.amplitude * np.exp(complex(c)),
        )
    if isinstance(psi, LinearCombination):
        return LinearCombination(tuple((a, boost_closed_form(v, w, params, c)) for a, w in psi.terms))
    return Boosted(GaugePhase(v, params, c), psi)


def probe_points(dim: int, n: int = 100, half_width: float = 10.0, t_window=(0.0, 2.0)):
    """Deterministic quasi-random ``(y, t)`` probes in ``[-w, w]^dim x t_window``."""
    sample = qmc.Halton(d=dim + 1, scramble=False).random(n + 1)[1:]
    lo = np.r_[np.full(dim, -half_width), t_window[0]]
    hi = np.r_[np.full(dim, half_width), t_window[1]]
    pts = qmc.scale(sample, lo, hi)
    return pts[:, :dim], pts[:, dim]


def representation_defect(v, v2, c, psi: ClosedFormWave, params: Params, probe=None) -> float:
    """``max |T_v T_v2 psi - T_(v+v2) psi|`` over the probe set, gauge constant ``c``."""
    v, v2 = _as_vec(v), _as_vec(v2)
    # the generic (non-symbolic) path so that c enters through the phase factor
    lhs = Boosted(GaugePhase(v, params, c), Boosted(GaugePhase(v2, params, c), psi))
    rhs = Boosted(GaugePhase(v + v2, params, c), psi)
    y, t = probe_points(psi.dim) if probe is None else probe
    return float(np.max(np.abs(lhs(y, t) - rhs(y, t))))


def transition_map(u: Velocity, v, params: Params) -> Callable:
    """Coordinate change between the trivialisations at ``u`` and ``u + v``.

    ``(y, t, z) -> (y - v t, t, exp(-F_v(y, t)) z)``.  The result does not
    depend on ``u``.  A wavefunction transforms inversely to the fibre
    coordinate, so ``psi_u = T_v psi_(u+v)``.
    """
    F = GaugePhase(v, params)

    def phi(y, t, z):
        y = _pts(y, F.v.size)
        t = np.asarray(t, dtype=float)
        return y - t[..., None] * F.v, t, np.exp(-F(y, t)) * z

    return phi


# --------------------------------------------------------------------------
# grid waves


@dataclass(frozen=True, eq=False)
class GridWave:
    """Samples on the periodic box ``[-L/2, L/2)^dim`` at time ``time``."""

    samples: np.ndarray
    box_length: float
    time: float = 0.0
    n_points: int = field(init=False)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim < 1 or s.ndim > 3 or len(set(s.shape)) != 1:
            raise ValueError("samples must be an N, NxN or NxNxN array")
        n = s.shape[0]
        if n < 2 or n & (n - 1):
            raise ValueError("points per axis must be a power of two")
        if not self.box_length > 0:
            raise ValueError("box_length must be positive")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "n_points", n)
        object.__setattr__(self, "box_length", float(self.box_length))
        object.__setattr__(self, "time", float(self.time))

    @property
    def dim(self) -> int:
        return self.samples.ndim

    @property
    def spacing(self) -> float:
        return self.box_length / self.n_points

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    def axis(self) -> np.ndarray:
        return grid_axis(self.box_length, self.n_points)

    def coordinates(self) -> np.ndarray:
        return grid_coordinates(self.box_length, self.n_points, self.dim)

    def wavenumbers(self) -> np.ndarray:
        return grid_wavenumbers(self.box_length, self.n_points, self.dim)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.cell_volume))

    def same_geometry(self, other: "GridWave") -> bool:
        return (
            self.dim == other.dim
            and self.n_points == other.n_points
            and self.box_length == other.box_length
        )

    def with_samples(self, samples, time: float | None = None) -> "GridWave":
        return GridWave(samples, self.box_length, self.time if time is None else time)


def grid_axis(box_length: float, n_points: int) -> np.ndarray:
    return -0.5 * box_length + box_length * np.arange(n_points) / n_points


def grid_coordinates(box_length: float, n_points: int, dim: int) -> np.ndarray:
    ax = grid_axis(box_length, n_points)
    return np.stack(np.meshgrid(*([ax] * dim), indexing="ij"), axis=-1)


def grid_wavenumbers(box_length: float, n_points: int, dim: int) -> np.ndarray:
    k = 2.0 * np.pi * np.fft.fftfreq(n_points, d=box_length / n_points)
    return np.stack(np.meshgrid(*([k] * dim), indexing="ij"), axis=-1)


def sample_wave(psi: ClosedFormWave, box_length: float, n_points: int, t: float = 0.0) -> GridWave:
    y = grid_coordinates(box_length, n_points, psi.dim)
    return GridWave(psi(y, np.full(y.shape[:-1], float(t))), box_length, t)


def l2_distance(a: GridWave, b: GridWave) -> float:
    if not a.same_geometry(b):
        raise GridMismatch("grid geometries differ")
    return float(np.sqrt(np.sum(np.abs(a.samples - b.samples) ** 2) * a.cell_volume))


def commensurate_index(v, box_length: float, params: Params) -> np.ndarray:
    """Real-valued ``m v L / (2 pi hbar)`` per axis."""
    return params.mass * _as_vec(v) * box_length / (2.0 * np.pi * params.hbar)


def is_commensurate(v, box_length: float, params: Params, tol: float = COMMENSURATE_TOL) -> bool:
    q = commensurate_index(v, box_length, params)
    return bool(np.all(np.abs(q - np.round(q)) <= tol * np.maximum(1.0, np.abs(q))))


def snap_boost(v, box_length: float, params: Params) -> np.ndarray:
    """Nearest velocity whose boost phase is periodic on the box."""
    q = np.round(commensurate_index(v, box_length, params))
    return q * 2.0 * np.pi * params.hbar / (params.mass * box_length)


def spectral_shift(samples: np.ndarray, shift, box_length: float) -> np.ndarray:
    """Trigonometric interpolation of ``f(y - shift)`` on the periodic grid."""
    shift = _as_vec(shift)
    if not np.any(shift):
        return samples.copy()
    k = grid_wavenumbers(box_length, samples.shape[0], samples.ndim)
    return np.fft.ifftn(np.fft.fftn(samples) * np.exp(-1j * (k @ shift)))


def spectral_laplacian(samples: np.ndarray, box_length: float) -> np.ndarray:
    k = grid_wavenumbers(box_length, samples.shape[0], samples.ndim)
    return np.fft.ifftn(-np.sum(k * k, axis=-1) * np.fft.fftn(samples))


def boost_grid(v, psi: GridWave, params: Params) -> GridWave:
    """``T_v`` on grid data at the wave's own time."""
    v = _as_vec(v)
    if v.size != psi.dim:
        raise ValueError("boost and wave dimensions differ")
    if not is_commensurate(v, psi.box_length, params):
        raise IncommensurateBoost(
            f"m v L / (2 pi hbar) = {commensurate_index(v, psi.box_length, params)} is not integral"
        )
    if not np.any(v):
        return psi.with_samples(psi.samples.copy())
    t = psi.time
    shifted = spectral_shift(psi.samples, v * t, psi.box_length)
    phase = GaugePhase(v, params)(psi.coordinates(), np.full(psi.samples.shape, t))
    return psi.with_samples(np.exp(phase) * shifted)


def momentum_mean(psi: GridWave) -> np.ndarray:
    """First moment of the discrete Fourier power spectrum, in wavenumber units."""
    power = np.abs(np.fft.fftn(psi.samples)) ** 2
    k = psi.wavenumbers()
    return np.tensordot(power, k, axes=(tuple(range(psi.dim)), tuple(range(psi.dim)))) / power.sum()
