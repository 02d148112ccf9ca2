"""Analytic ground truth for the free equation and for the gauge phase.

Nothing here imports the gauge or operator modules: these functions are the
independent side of every cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .spacetime import Params

QUADRATURE_STEPS = 10_000


@dataclass(frozen=True)
class GaussianPacketParams:
    """Normalised free Gaussian packet.

    ``width`` is the position-space standard deviation of ``|psi|^2`` at
    ``t = t0``; ``k0`` is the carrier wavenumber.
    """

    center: np.ndarray
    width: float
    k0: np.ndarray
    t0: float = 0.0

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float))
        k = np.atleast_1d(np.asarray(self.k0, dtype=float))
        if c.shape != k.shape:
            raise ValueError("center and k0 must have the same length")
        if not self.width > 0:
            raise ValueError("width must be positive")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "k0", k)
        object.__setattr__(self, "width", float(self.width))
        object.__setattr__(self, "t0", float(self.t0))

    @property
    def dim(self) -> int:
        return self.center.size


def _pts(y, n):
    y = np.asarray(y, dtype=float)
    if y.ndim == 0:
        y = y[None]
    if y.shape[-1] != n:
        raise ValueError(f"points must have trailing dimension {n}")
    return y


def _gaussian_parts(p: GaussianPacketParams, y, t, params: Params):
    n = p.dim
    y = _pts(y, n)
    tau = np.asarray(t, dtype=float) - p.t0
    s2 = p.width**2
    a = params.hbar * tau / (2.0 * params.mass * s2)
    q = 1.0 + 1j * a
    vg = params.hbar * p.k0 / params.mass
    d = y - p.center - tau[..., None] * vg
    d2 = np.sum(d * d, axis=-1)
    k2 = float(np.dot(p.k0, p.k0))
    log_psi = (
        -0.25 * n * np.log(2.0 * np.pi * s2)
        - 0.5 * n * np.log(q)
        - d2 / (4.0 * s2 * q)
        + 1j * ((y - p.center) @ p.k0)
        - 1j * params.hbar * k2 * tau / (2.0 * params.mass)
    )
    return np.exp(log_psi), d, d2, q, tau


def gaussian_packet_eval(p: GaussianPacketParams, y, t, params: Params):
    """Spreading Gaussian solving ``i hbar psi_t = -(hbar^2/2m) lap psi``.

    ``y`` has shape ``(..., n)``; ``t`` broadcasts against ``(...)``.
    Position variance at time t is ``width^2 (1 + (hbar (t-t0) / (2 m width^2))^2)``.
    """
    return _gaussian_parts(p, y, t, params)[0]


def gaussian_packet_derivatives(p: GaussianPacketParams, y, t, params: Params):
    """Return ``(psi, d psi/dt, laplacian psi)`` in closed form."""
    psi, d, d2, q, _ = _gaussian_parts(p, y, t, params)
    n = p.dim
    s2 = p.width**2
    adot = params.hbar / (2.0 * params.mass * s2)
    vg = params.hbar * p.k0 / params.mass
    grad = -d / (2.0 * s2 * q[..., None]) + 1j * p.k0
    lap = psi * (np.sum(grad * grad, axis=-1) - n / (2.0 * s2 * q))
    dlog_dt = (
        -0.5 * n * 1j * adot / q
        + (d @ vg) / (2.0 * s2 * q)
        + d2 * 1j * adot / (4.0 * s2 * q**2)
        - 1j * params.hbar * float(np.dot(p.k0, p.k0)) / (2.0 * params.mass)
    )
    return psi, psi * dlog_dt, lap


def gaussian_packet_variance(p: GaussianPacketParams, t, params: Params):
    a = params.hbar * (np.asarray(t, dtype=float) - p.t0) / (2.0 * params.mass * p.width**2)
    return p.width**2 * (1.0 + a**2)


def plane_wave_frequency(k, params: Params) -> float:
    k = np.atleast_1d(np.asarray(k, dtype=float))
    return params.hbar * float(np.dot(k, k)) / (2.0 * params.mass)


def plane_wave_eval(k, y, t, params: Params):
    """``exp(i (k.y - omega t))`` with the free dispersion relation."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    y = _pts(y, k.size)
    omega = plane_wave_frequency(k, params)
    return np.exp(1j * (y @ k - omega * np.asarray(t, dtype=float)))


def plane_wave_derivatives(k, y, t, params: Params):
    k = np.atleast_1d(np.asarray(k, dtype=float))
    psi = plane_wave_eval(k, y, t, params)
    return psi, -1j * plane_wave_frequency(k, params) * psi, -float(np.dot(k, k)) * psi


def free_residual(psi_t, lap, params: Params):
    """``i hbar psi_t + (hbar^2 / 2m) lap`` from precomputed derivatives."""
    return 1j * params.hbar * psi_t + params.hbar**2 / (2.0 * params.mass) * lap


# --------------------------------------------------------------------------
# gauge phase reconstruction by quadrature


def _phase_gradient(v, params: Params):
    """Constant gradient ``(dF/dy_1..n, dF/dt)`` fixed by the boost PDE system."""
    v = np.asarray(v, dtype=float)
    mh = params.mass / params.hbar
    return np.concatenate([1j * mh * v, [-0.5j * mh * float(np.dot(v, v))]])


def integrate_gauge_phase(v, params: Params, waypoints: Sequence, steps: int = QUADRATURE_STEPS):
    """Integrate dF along a polyline of ``(y_1..y_n, t)`` waypoints.

    Composite trapezoid rule with ``steps`` panels per segment.  The first
    waypoint is where ``F = 0``.
    """
    pts = np.asarray(waypoints, dtype=float)
    grad = _phase_gradient(v, params)
    s = np.linspace(0.0, 1.0, steps + 1)
    total = 0.0 + 0.0j
    for a, b in zip(pts[:-1], pts[1:]):
        seg = b - a
        # integrand evaluated at each sample of the segment; constant for this field
        samples = np.broadcast_to(grad @ seg, s.shape)
        total += np.trapezoid(samples, s)
    return total


def axis_path(y, t) -> np.ndarray:
    """Origin -> along t -> along y_1 -> ... -> along y_n."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    n = y.size
    pts = [np.zeros(n + 1)]
    p = pts[0].copy()
    p[n] = t
    pts.append(p.copy())
    for k in range(n):
        p[k] = y[k]
        pts.append(p.copy())
    return np.array(pts)


def spatial_first_path(y, t) -> np.ndarray:
    """Origin -> along every y_k (in reverse order) -> along t."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    n = y.size
    pts = [np.zeros(n + 1)]
    p = pts[0].copy()
    for k in reversed(range(n)):
        p[k] = y[k]
        pts.append(p.copy())
    p[n] = t
    pts.append(p.copy())
    return np.array(pts)


def detour_path(y, t, via=None) -> np.ndarray:
    """Two straight segments through an off-axis intermediate point."""
    end = np.append(np.atleast_1d(np.asarray(y, dtype=float)), float(t))
    if via is None:
        via = 0.5 * end + np.linspace(1.0, 2.0, end.size)
    return np.array([np.zeros_like(end), np.asarray(via, dtype=float), end])


def reconstruct_gauge_phase(
    v, params: Params, path: Callable = axis_path
) -> Callable[..., complex]:
    """Quadrature reconstruction of the boost gauge phase, normalised by F(0, 0) = 0.

    ``path(y, t)`` returns polyline waypoints from the chart origin to ``(y, t)``.
    """
    v = np.atleast_1d(np.asarray(v, dtype=float))

    def F(y, t) -> complex:
        pts = path(y, t)
        if np.any(pts[0] != 0.0):
            raise ValueError("path must start at the chart origin")
        return integrate_gauge_phase(v, params, pts)

    return F
