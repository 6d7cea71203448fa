"""Intelligent Driver Model acceleration law for longitudinal speed control.

The model combines a free-flow term ``(v/v0)**delta`` with an interaction
term ``(s_star/s)**2`` built from a dynamic desired gap.  Of the seven
parameters only the time headway ``T`` is personalized per driver; the
remaining six default to widely used highway defaults.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import kmh_to_mps
from .errors import GapViolationError

#: default hard deceleration limit applied to the model output, m/s^2.
#: The desired deceleration ``b`` shapes the law; this is the physical cap.
DEFAULT_MAX_DECEL = 4.0


@dataclass(frozen=True)
class IdmParams:
    """IDM parameter set; ``T`` is the personalized time headway slot.

    Defaults (other than ``T``) are the standard highway calibration:
    desired velocity 120 km/h, max acceleration 0.73 m/s^2, desired
    deceleration 1.67 m/s^2, exponent 4, jam distances 2 m and 0 m.
    """

    T: float
    v0: float = kmh_to_mps(120.0)
    a: float = 0.73
    b: float = 1.67
    delta: float = 4.0
    s0: float = 2.0
    s1: float = 0.0
    b_max: float = DEFAULT_MAX_DECEL

    def __post_init__(self) -> None:
        if self.v0 <= 0 or self.a <= 0 or self.b <= 0 or self.delta <= 0:
            raise ValueError("v0, a, b, delta must be positive")
        if self.T < 0 or self.s0 < 0 or self.s1 < 0:
            raise ValueError("T, s0, s1 must be non-negative")
        if self.b_max <= 0:
            raise ValueError("b_max must be positive")


@dataclass(frozen=True)
class FollowState:
    """Inputs of the car-following law: ego speed, gap, closing speed.

    ``dv`` is ``v_ego - v_lead`` (positive while closing in).
    """

    v: float
    s: float
    dv: float

    def __post_init__(self) -> None:
        if self.v < 0:
            raise ValueError("ego speed must be non-negative")
        if self.s <= 0:
            raise GapViolationError(f"gap {self.s} m is not positive (crash state)")


def desired_gap(params: IdmParams, state: FollowState) -> float:
    """Dynamic desired gap s*.

    ``s* = s0 + s1*sqrt(v/v0) + T*v + v*dv / (2*sqrt(a*b))``.  The value
    may drop below ``s0`` (even below zero) while the gap is opening fast;
    it is not clamped here, only where it is squared.
    """
    p, st = params, state
    return (
        p.s0
        + p.s1 * math.sqrt(st.v / p.v0)
        + p.T * st.v
        + st.v * st.dv / (2.0 * math.sqrt(p.a * p.b))
    )


def idm_acceleration(params: IdmParams, state: FollowState) -> float:
    """IDM acceleration ``a * [1 - (v/v0)**delta - (s*/s)**2]``.

    A negative desired gap is floored at zero before squaring so that a
    rapidly opening gap does not cause spurious braking.  The output is
    clamped to ``[-b_max, a]``.

    Raises:
        GapViolationError: if the gap is not positive (crash state).
    """
    if state.s <= 0:
        raise GapViolationError(f"gap {state.s} m is not positive (crash state)")
    s_star = max(desired_gap(params, state), 0.0)
    accel = params.a * (
        1.0 - (state.v / params.v0) ** params.delta - (s_star / state.s) ** 2
    )
    return min(max(accel, -params.b_max), params.a)


def free_flow_acceleration(params: IdmParams, v: float) -> float:
    """IDM acceleration with no leader: ``a * [1 - (v/v0)**delta]``.

    Clamped to ``[-b_max, a]`` like the full law.
    """
    if v < 0:
        raise ValueError("speed must be non-negative")
    accel = params.a * (1.0 - (v / params.v0) ** params.delta)
    return min(max(accel, -params.b_max), params.a)


def equilibrium_gap(params: IdmParams, v_lead: float) -> float:
    """Steady-state gap while following a constant-speed leader.

    Solves ``idm_acceleration == 0`` for ``dv == 0``:
    ``s_eq = s*(v_lead, 0) / sqrt(1 - (v_lead/v0)**delta)``.  Only defined
    for ``0 <= v_lead < v0``; the gap diverges as ``v_lead`` approaches
    the desired velocity.
    """
    if not 0 <= v_lead < params.v0:
        raise ValueError("equilibrium gap requires 0 <= v_lead < v0")
    s_star = params.s0 + params.s1 * math.sqrt(v_lead / params.v0) + params.T * v_lead
    return s_star / math.sqrt(1.0 - (v_lead / params.v0) ** params.delta)
