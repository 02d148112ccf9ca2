"""Newtonian space-time in a fixed fiducial chart.

Events, velocities and spatial vectors are stored as coordinates with
respect to one fiducial inertial frame (origin at the zero event, velocity
u0).  Everything observable is chart-relative, so that choice never leaks
into results.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Largest |dt| for which two events count as simultaneous.
SIMULTANEITY_TOL = 1e-12


class NonSimultaneousEvents(ValueError):
    """Raised when a spatial distance is requested between non-simultaneous events."""


def _vec(w) -> np.ndarray:
    a = np.atleast_1d(np.asarray(w, dtype=float)).copy()
    if a.ndim != 1:
        raise ValueError(f"expected a 1-d coordinate vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("coordinates must be finite")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Params:
    """Physical constants and spatial dimension."""

    hbar: float = 1.0
    mass: float = 1.0
    dim: int = 3

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if not 1 <= int(self.dim) <= 3:
            raise ValueError("dim must be 1, 2 or 3")
        object.__setattr__(self, "dim", int(self.dim))

    @property
    def m_over_hbar(self) -> float:
        return self.mass / self.hbar


@dataclass(frozen=True)
class Event:
    y: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "y", _vec(self.y))
        t = float(self.t)
        if not np.isfinite(t):
            raise ValueError("event time must be finite")
        object.__setattr__(self, "t", t)

    @property
    def dim(self) -> int:
        return self.y.size

    @classmethod
    def origin(cls, dim: int) -> "Event":
        return cls(np.zeros(dim), 0.0)

    def __eq__(self, other):
        if not isinstance(other, Event):
            return NotImplemented
        return self.t == other.t and np.array_equal(self.y, other.y)

    def __hash__(self):
        return hash((self.t, self.y.tobytes()))


@dataclass(frozen=True, eq=False)
class SpatialVector:
    """Element of the simultaneity space ker(tau)."""

    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w", _vec(self.w))

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.w, self.w)))

    def dot(self, other: "SpatialVector") -> float:
        return float(np.dot(self.w, other.w))


@dataclass(frozen=True)
class Velocity:
    """Spatial coordinates of ``u - u0`` for a velocity ``u`` with tau(u) = 1."""

    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w", _vec(self.w))

    @classmethod
    def zero(cls, dim: int) -> "Velocity":
        return cls(np.zeros(dim))

    def __add__(self, v) -> "Velocity":
        v = v.w if isinstance(v, (Velocity, SpatialVector)) else v
        return Velocity(self.w + np.asarray(v, dtype=float))

    def __sub__(self, other: "Velocity") -> np.ndarray:
        # the difference of two velocities lives in ker(tau)
        return self.w - other.w

    def __eq__(self, other):
        if not isinstance(other, Velocity):
            return NotImplemented
        return np.array_equal(self.w, other.w)

    def __hash__(self):
        return hash(self.w.tobytes())


@dataclass(frozen=True)
class InertialFrame:
    origin: Event
    velocity: Velocity

    def __post_init__(self):
        if self.origin.dim != self.velocity.w.size:
            raise ValueError("origin and velocity dimensions differ")

    @classmethod
    def fiducial(cls, dim: int) -> "InertialFrame":
        return cls(Event.origin(dim), Velocity.zero(dim))

    @property
    def dim(self) -> int:
        return self.origin.dim

    def boosted(self, v) -> "InertialFrame":
        """Same origin, velocity shifted by ``v``."""
        return InertialFrame(self.origin, self.velocity + v)


@dataclass(frozen=True, eq=False)
class FrameChange:
    """Coordinate map ``(y, t) -> (y - dy - v t, t - dt)``."""

    dy: np.ndarray
    dt: float
    v: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "dy", _vec(self.dy))
        object.__setattr__(self, "dt", float(self.dt))
        v = np.zeros_like(self.dy) if self.v is None else self.v
        object.__setattr__(self, "v", _vec(v))

    def __call__(self, y, t):
        y = np.asarray(y, dtype=float)
        t = np.asarray(t, dtype=float)
        return y - self.dy - t[..., None] * self.v, t - self.dt

    def then(self, other: "FrameChange") -> "FrameChange":
        """The map ``other o self``."""
        # other(self(y,t)) = y - dy1 - v1 t - dy2 - v2 (t - dt1), t - dt1 - dt2
        return FrameChange(
            dy=self.dy + other.dy - other.v * self.dt,
            dt=self.dt + other.dt,
            v=self.v + other.v,
        )

    def inverse(self) -> "FrameChange":
        # y' = y - dy - v t,  t' = t - dt   =>   y = y' + dy + v (t' + dt)
        return FrameChange(dy=-self.dy - self.v * self.dt, dt=-self.dt, v=-self.v)


def chart(frame: InertialFrame, e: Event) -> tuple[np.ndarray, float]:
    """Coordinates ``(y, t)`` of ``e`` for the observer ``frame``."""
    dt = e.t - frame.origin.t
    return e.y - frame.origin.y - dt * frame.velocity.w, dt


def chart_inverse(frame: InertialFrame, y, t: float) -> Event:
    y = np.asarray(y, dtype=float)
    return Event(y + frame.origin.y + t * frame.velocity.w, frame.origin.t + t)


def chart_points(frame: InertialFrame, y_fid, t_fid):
    """Vectorised :func:`chart` for arrays of fiducial coordinates.

    ``y_fid`` has shape ``(..., n)`` and ``t_fid`` broadcasts against ``(...)``.
    """
    t = np.asarray(t_fid, dtype=float) - frame.origin.t
    y = np.asarray(y_fid, dtype=float) - frame.origin.y - t[..., None] * frame.velocity.w
    return y, t


def chart_inverse_points(frame: InertialFrame, y, t):
    """Vectorised :func:`chart_inverse`; returns fiducial ``(y, t)`` arrays."""
    t = np.asarray(t, dtype=float)
    y_fid = np.asarray(y, dtype=float) + frame.origin.y + t[..., None] * frame.velocity.w
    return y_fid, t + frame.origin.t


def frame_change(a: InertialFrame, b: InertialFrame) -> FrameChange:
    """Map taking ``chart(a, e)`` to ``chart(b, e)`` for every event ``e``."""
    if a.dim != b.dim:
        raise ValueError("frames of different dimension")
    dt = b.origin.t - a.origin.t
    dy = b.origin.y - a.origin.y - dt * b.velocity.w
    return FrameChange(dy=dy, dt=dt, v=b.velocity.w - a.velocity.w)


def time_between(e1: Event, e2: Event) -> float:
    return e1.t - e2.t


def distance(e1: Event, e2: Event, tol: float = SIMULTANEITY_TOL) -> float:
    dt = time_between(e1, e2)
    if abs(dt) > tol:
        raise NonSimultaneousEvents(f"events are {dt!r} apart in time")
    return float(np.linalg.norm(e1.y - e2.y))
