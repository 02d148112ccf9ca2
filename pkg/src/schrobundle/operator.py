"""The Schrodinger operator ``i hbar d_t + (hbar^2 / 2m) lap - U~`` in a chosen frame.

Potentials are functions on events (given in fiducial coordinates).  The
coefficient seen in a frame is ``U~ = U o chart_inverse(frame)``, which is
what makes the operator covariant under a change of observer.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .gauge import (
    ClosedFormWave,
    GaugePhase,
    GridMismatch,
    GridWave,
    LinearCombination,
    boost_closed_form,
    spectral_laplacian,
)
from .spacetime import InertialFrame, Params, chart_inverse_points, chart_points

DEFAULT_STEP = 1e-3


class Potential:
    """Real (by default) function on events, evaluated on fiducial coordinates."""

    dim: int
    is_real: bool = True

    def __call__(self, y_fid, t_fid):  # pragma: no cover - abstract
        raise NotImplementedError

    def in_frame(self, frame: InertialFrame) -> Callable:
        """``U~(y, t)`` for chart coordinates of ``frame``."""

        def u_tilde(y, t):
            return self(*chart_inverse_points(frame, y, t))

        return u_tilde


@dataclass(frozen=True)
class ZeroPotential(Potential):
    dim: int

    def __call__(self, y_fid, t_fid):
        y = np.asarray(y_fid, dtype=float)
        return np.zeros(y.shape[:-1])


@dataclass(frozen=True, eq=False)
class UniformField(Potential):
    """``U(x) = gradient . y_fid(x)``."""

    gradient: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gradient", np.atleast_1d(np.asarray(self.gradient, dtype=float)))

    @property
    def dim(self) -> int:
        return self.gradient.size

    def __call__(self, y_fid, t_fid):
        return np.asarray(y_fid, dtype=float) @ self.gradient


@dataclass(frozen=True, eq=False)
class HarmonicPotential(Potential):
    """``(stiffness / 2) |y|^2`` with ``y`` the position seen from ``worldline_frame``."""

    worldline_frame: InertialFrame
    stiffness: float

    def __post_init__(self):
        if not self.stiffness > 0:
            raise ValueError("stiffness must be positive")

    @property
    def dim(self) -> int:
        return self.worldline_frame.dim

    def __call__(self, y_fid, t_fid):
        y, _ = chart_points(self.worldline_frame, y_fid, t_fid)
        return 0.5 * self.stiffness * np.sum(y * y, axis=-1)


@dataclass(frozen=True, eq=False)
class TabulatedPotential(Potential):
    """Samples on a rectilinear grid over ``(y_1, ..., y_n, t)``, multilinear in between."""

    axes: tuple
    values: np.ndarray

    def __post_init__(self):
        axes = tuple(np.asarray(a, dtype=float) for a in self.axes)
        values = np.asarray(self.values)
        if values.shape != tuple(a.size for a in axes):
            raise ValueError("values shape does not match axes")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", values)
        object.__setattr__(
            self,
            "_interp",
            RegularGridInterpolator(axes, values, bounds_error=False, fill_value=None),
        )

    @property
    def dim(self) -> int:
        return len(self.axes) - 1

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    def __call__(self, y_fid, t_fid):
        y = np.asarray(y_fid, dtype=float)
        t = np.broadcast_to(np.asarray(t_fid, dtype=float), y.shape[:-1])
        pts = np.concatenate([y, t[..., None]], axis=-1)
        return self._interp(pts.reshape(-1, self.dim + 1)).reshape(y.shape[:-1])


@dataclass(frozen=True, eq=False)
class FunctionPotential(Potential):
    """Wraps ``fn(y_fid, t_fid)``; set ``is_real=False`` for complex potentials."""

    fn: Callable
    dim: int
    is_real: bool = True

    def __call__(self, y_fid, t_fid):
        return self.fn(np.asarray(y_fid, dtype=float), np.asarray(t_fid, dtype=float))


@dataclass(frozen=True, eq=False)
class OperatorResidual:
    values: np.ndarray
    stencil_step: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite operator residual")

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def _probe(probe, dim):
    y, t = probe
    y = np.asarray(y, dtype=float).reshape(-1, dim)
    t = np.broadcast_to(np.asarray(t, dtype=float), y.shape[:1]).copy()
    return y, t


def _fd_operator(psi: Callable, u_tilde: Callable, y, t, params: Params, h: float):
    """Second-order central differences of ``i hbar psi_t + (hbar^2/2m) lap psi - U~ psi``.

    Linear combinations are differenced term by term, so the stencil's
    ``1 / h^2`` amplification of rounding cannot break linearity.
    """
    if isinstance(psi, LinearCombination):
        out = 0j
        for a, term in psi.terms:
            out = out + a * _fd_operator(term, u_tilde, y, t, params, h)
        return out
    n = y.shape[-1]
    c0 = psi(y, t)
    dpsi_dt = (psi(y, t + h) - psi(y, t - h)) / (2.0 * h)
    lap = np.zeros_like(c0)
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        lap += (psi(y + e, t) - 2.0 * c0 + psi(y - e, t)) / (h * h)
    return 1j * params.hbar * dpsi_dt + params.hbar**2 / (2.0 * params.mass) * lap - u_tilde(y, t) * c0


def apply_operator_closed_form(
    psi: ClosedFormWave,
    U: Potential,
    frame: InertialFrame,
    probe,
    params: Params,
    h: float = DEFAULT_STEP,
) -> OperatorResidual:
    """Finite-difference ``S psi`` at the probe points ``(y, t)`` (chart coordinates of ``frame``)."""
    if not h > 0:
        raise ValueError("stencil step must be positive")
    y, t = _probe(probe, psi.dim)
    return OperatorResidual(_fd_operator(psi, U.in_frame(frame), y, t, params, h), h)


def apply_free_operator_grid(psi: GridWave, psi_next: GridWave, dt: float, params: Params) -> OperatorResidual:
    """Free operator at the mid time of two slices: spectral in space, centred in time."""
    if not psi.same_geometry(psi_next):
        raise GridMismatch("slices have different grids")
    if abs((psi_next.time - psi.time) - dt) > 1e-12 * max(1.0, abs(psi.time), abs(psi_next.time)):
        raise GridMismatch(f"slices are {psi_next.time - psi.time} apart, expected {dt}")
    mid = 0.5 * (psi.samples + psi_next.samples)
    res = 1j * params.hbar * (psi_next.samples - psi.samples) / dt
    res = res + params.hbar**2 / (2.0 * params.mass) * spectral_laplacian(mid, psi.box_length)
    return OperatorResidual(res, dt)


def boosted_frame(frame: InertialFrame, v) -> InertialFrame:
    """Observer in whose chart ``T_v psi`` describes the state that ``psi`` describes for ``frame``."""
    return frame.boosted(-np.atleast_1d(np.asarray(v, dtype=float)))


def invariance_defect(
    psi: ClosedFormWave,
    v,
    U: Potential,
    frame: InertialFrame,
    probe,
    params: Params,
    h: float = DEFAULT_STEP,
) -> float:
    """``max |S'(T_v psi)(y, t) - exp(F_v(y, t)) (S psi)(y - v t, t)|`` over the probes.

    ``S`` carries the potential as seen by ``frame`` and ``S'`` the same
    potential seen by :func:`boosted_frame`.  Vanishes as ``h -> 0``.
    """
    v = np.atleast_1d(np.asarray(v, dtype=float))
    y, t = _probe(probe, psi.dim)
    lhs = _fd_operator(
        boost_closed_form(v, psi, params), U.in_frame(boosted_frame(frame, v)), y, t, params, h
    )
    rhs = _fd_operator(psi, U.in_frame(frame), y - t[:, None] * v, t, params, h)
    rhs = np.exp(GaugePhase(v, params)(y, t)) * rhs
    return float(np.max(np.abs(lhs - rhs)))


def invariance_convergence(psi, v, U, frame, probe, params, h: float = DEFAULT_STEP):
    """Defects at ``h`` and ``h / 2``, their ratio, and ``C = defect(h) / h^2``."""
    d1 = invariance_defect(psi, v, U, frame, probe, params, h)
    d2 = invariance_defect(psi, v, U, frame, probe, params, h / 2)
    return {"defect": d1, "defect_half": d2, "ratio": d1 / d2 if d2 > 0 else np.inf, "constant": d1 / h**2}
