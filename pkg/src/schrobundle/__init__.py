"""Frame-independent Schrodinger operator on Newtonian space-time.

Submodules: ``spacetime`` (events, frames, charts), ``gauge`` (boost phase and
its representation on waves), ``bundle`` (the Schrodinger line bundle),
``operator`` (the operator and its invariance defect), ``oracles`` (analytic
ground truth), ``solver`` (split-step propagation) and ``cli``.
"""
from .spacetime import Event, FrameChange, InertialFrame, Params, SpatialVector, Velocity

__all__ = ["Event", "FrameChange", "InertialFrame", "Params", "SpatialVector", "Velocity"]
__version__ = "0.1.0"
