"""The Schrodinger line bundle as orbits of triples ``(u, x, z)``.

The additive group of spatial vectors acts on ``E1 x N x C`` by

    R_v(u, x, z) = (u + v, x, z exp[(m / i hbar)(<v | y_u(x)> - tau(x) |v|^2 / 2)])

where ``tau(x) = t(x) - t(x0)`` and ``y_u(x)`` is the spatial position of
``x`` seen by the observer ``(x0, u)``.  Bundle points are stored as one
representative of their orbit; every operation here is checked to be
independent of that choice.

Sign conventions: ``R_v`` above fixes everything.  The trivialisation at
``u`` reads off the fibre coordinate of the representative based at ``u``,
which makes the change of trivialisation from ``u`` to ``u + v`` multiply
fibre values by ``exp(-F_v)`` (see :func:`schrobundle.gauge.transition_map`).
For phase-space covectors the increment is ``m`` times the differential of
the Z_m shift, which equals ``-m sigma(u', u)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gauge import GridWave, grid_coordinates
from .spacetime import Event, InertialFrame, Params, Velocity, chart, chart_inverse

FIBER_TOL = 1e-12


class DifferentFibers(ValueError):
    """Bundle elements over different events cannot be added."""


class FiberMismatch(ValueError):
    """A section returned an element outside the fibre it was asked for."""


@dataclass(frozen=True, eq=False)
class BundleElement:
    u: Velocity
    x: Event
    z: complex

    def __post_init__(self):
        if not isinstance(self.u, Velocity):
            object.__setattr__(self, "u", Velocity(self.u))
        object.__setattr__(self, "z", complex(self.z))
        if self.u.w.size != self.x.dim:
            raise ValueError("velocity and event dimensions differ")


@dataclass(frozen=True, eq=False)
class AffinePhasePoint:
    """``p`` holds components dual to the fiducial ``(y_1..y_n, t)`` coordinates."""

    u: Velocity
    x: Event
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (self.x.dim + 1,):
            raise ValueError(f"covector must have {self.x.dim + 1} components")
        object.__setattr__(self, "p", p)


def _x0(x0, dim):
    return Event.origin(dim) if x0 is None else x0


def _local(u: Velocity, x: Event, x0: Event | None):
    """``(y_u(x), tau(x))`` for the observer ``(x0, u)``."""
    return chart(InertialFrame(_x0(x0, x.dim), u), x)


def act_multiplier(v, u: Velocity, x: Event, params: Params, x0: Event | None = None) -> complex:
    v = np.atleast_1d(np.asarray(v, dtype=float))
    y, tau = _local(u, x, x0)
    arg = float(v @ y) - 0.5 * tau * float(v @ v)
    return complex(np.exp(params.mass / (1j * params.hbar) * arg))


def act(v, e: BundleElement, params: Params, x0: Event | None = None) -> BundleElement:
    """The group action ``R_v`` on a representative."""
    return BundleElement(e.u + v, e.x, e.z * act_multiplier(v, e.u, e.x, params, x0))


def normalize_to(u_base: Velocity, e: BundleElement, params: Params, x0: Event | None = None) -> BundleElement:
    """Representative of the orbit of ``e`` with base velocity ``u_base``."""
    if u_base == e.u:
        return e
    return act(u_base - e.u, e, params, x0)


def same_orbit(e1: BundleElement, e2: BundleElement, params: Params, x0=None, tol: float = FIBER_TOL) -> bool:
    if not _same_event(e1.x, e2.x, tol):
        return False
    return abs(normalize_to(e1.u, e2, params, x0).z - e1.z) <= tol


def orbit_distance(e1: BundleElement, e2: BundleElement, params: Params, x0=None) -> float:
    """``|z1 - z2|`` after normalising ``e2`` to the base of ``e1`` (same fibre assumed)."""
    return abs(normalize_to(e1.u, e2, params, x0).z - e1.z)


def _same_event(a: Event, b: Event, tol: float = FIBER_TOL) -> bool:
    return abs(a.t - b.t) <= tol and bool(np.all(np.abs(a.y - b.y) <= tol))


def add(e1: BundleElement, e2: BundleElement, params: Params, x0: Event | None = None) -> BundleElement:
    """Fibre addition; the result is based at ``e1.u``."""
    if not _same_event(e1.x, e2.x):
        raise DifferentFibers(f"events {e1.x} and {e2.x} differ")
    return BundleElement(e1.u, e1.x, e1.z + normalize_to(e1.u, e2, params, x0).z)


def scale(a: complex, e: BundleElement) -> BundleElement:
    return BundleElement(e.u, e.x, complex(a) * e.z)


def fiber_norm(e: BundleElement) -> float:
    return abs(e.z)


def trivialize(u: Velocity, e: BundleElement, params: Params, x0: Event | None = None):
    """``(y, t, z)`` of ``e`` in the global trivialisation attached to ``u``."""
    y, t = _local(u, e.x, x0)
    return y, t, normalize_to(u, e, params, x0).z


def untrivialize(u: Velocity, y, t: float, z: complex, x0: Event | None = None) -> BundleElement:
    y = np.atleast_1d(np.asarray(y, dtype=float))
    x = chart_inverse(InertialFrame(_x0(x0, y.size), u), y, t)
    return BundleElement(u, x, z)


def unit_section(u: Velocity) -> Callable[[Event], BundleElement]:
    """The nowhere-vanishing section ``x -> [u, x, 1]``."""
    return lambda x: BundleElement(u, x, 1.0)


def section_as_wave(
    u: Velocity,
    section: Callable[[Event], BundleElement],
    box_length: float,
    n_points: int,
    t: float,
    params: Params,
    x0: Event | None = None,
) -> GridWave:
    """Sample a section over the trivialisation grid of ``u`` at chart time ``t``."""
    dim = u.w.size
    frame = InertialFrame(_x0(x0, dim), u)
    ys = grid_coordinates(box_length, n_points, dim)
    out = np.empty(ys.shape[:-1], dtype=complex)
    for idx in np.ndindex(out.shape):
        x = chart_inverse(frame, ys[idx], t)
        e = section(x)
        if not _same_event(e.x, x):
            raise FiberMismatch(f"section value lies over {e.x}, expected {x}")
        out[idx] = trivialize(u, e, params, x0)[2]
    return GridWave(out, box_length, t)


# --------------------------------------------------------------------------
# Z_m and affine phase space


def zm_shift(u: Velocity, u2: Velocity, x: Event, params: Params, x0: Event | None = None) -> float:
    """``r' - r`` relating the Z_m representatives at ``u`` and ``u2`` over ``x``."""
    w = u2 - u
    y, tau = _local(u, x, x0)
    return params.mass * (0.5 * tau * float(w @ w) - float(y @ w))


def sigma(u2: Velocity, u: Velocity, v, params: Params | None = None) -> float:
    """``<u2 - u | v - tau(v) (u2 + u) / 2>`` for ``v = (spatial..., tau(v))``."""
    v = np.asarray(v, dtype=float)
    vs, tv = v[:-1], v[-1]
    return float((u2 - u) @ (vs - 0.5 * tv * (u2.w + u.w)))


def shift_differential(u: Velocity, u2: Velocity) -> np.ndarray:
    """Components of ``d(tau |w|^2 / 2 - <y_u | w>)``, ``w = u2 - u``.

    Evaluated on ``v`` this is ``|w|^2 tau(v) / 2 - <v - tau(v) u | w>``.
    """
    w = u2 - u
    return np.append(-w, 0.5 * float(w @ w) + float(w @ u.w))


def covector_transform(q: AffinePhasePoint, u2: Velocity, params: Params, x0: Event | None = None) -> AffinePhasePoint:
    # the differential does not depend on x or x0; both stay in the signature for symmetry with zm_shift
    return AffinePhasePoint(u2, q.x, q.p + params.mass * shift_differential(q.u, u2))
