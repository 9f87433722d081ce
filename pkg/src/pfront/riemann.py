"""Exact wave curves and Riemann solver for isentropic gas dynamics in
Lagrangean coordinates with p(v) = 1/(3 v^3) = rho^3 / 3.

States live in the u-rho half plane.  The Riemann invariants
w1 = rho - u and w2 = rho + u are straight coordinate lines there:
1-waves move w1 and keep w2, 2-waves move w2 and keep w1.  Admissible
shocks of family 1 have density increasing left to right, family 2 the
mirror image; both satisfy u_+ < u_-.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

from scipy.optimize import brentq

from .config import DEFAULT_TOL, Tolerances
from .errors import (
    DomainError,
    HypothesisViolation,
    InadmissibleOrientation,
    NonConvergence,
    VacuumFormation,
)


class WaveFamily(IntEnum):
    ONE = 1   # slow family, characteristic speed -rho^2
    TWO = 2   # fast family, characteristic speed +rho^2

    @property
    def sign(self) -> int:
        return -1 if self is WaveFamily.ONE else 1

    @property
    def other(self) -> "WaveFamily":
        return WaveFamily.TWO if self is WaveFamily.ONE else WaveFamily.ONE


@dataclass(frozen=True)
class GasState:
    """Constant state (u, rho); the specific volume v = 1/rho is derived."""

    u: float
    rho: float

    def __post_init__(self):
        if self.rho < 0:
            raise DomainError(f"negative density {self.rho}")

    @property
    def w1(self) -> float:
        return self.rho - self.u

    @property
    def w2(self) -> float:
        return self.rho + self.u

    def mirror(self) -> "GasState":
        return GasState(-self.u, self.rho)


@dataclass(frozen=True)
class RiemannInvariants:
    w1: float
    w2: float

    def __post_init__(self):
        if self.w1 + self.w2 < 0:
            raise DomainError(f"w1 + w2 = {self.w1 + self.w2} < 0 means negative density")


def to_invariants(s: GasState) -> RiemannInvariants:
    return RiemannInvariants(s.rho - s.u, s.rho + s.u)


def from_invariants(w: RiemannInvariants) -> GasState:
    return GasState((w.w2 - w.w1) / 2.0, (w.w1 + w.w2) / 2.0)


def pressure(rho: float) -> float:
    """p = rho^3 / 3."""
    if rho <= 0:
        raise DomainError(f"pressure needs rho > 0, got {rho}")
    return rho**3 / 3.0


def char_speed(rho: float, family: WaveFamily) -> float:
    """lambda = -rho^2 for family 1, +rho^2 for family 2."""
    if rho <= 0:
        raise DomainError(f"char_speed needs rho > 0, got {rho}")
    return family.sign * rho * rho


def shock_delta_u(rho_minus: float, rho_plus: float) -> float:
    """Velocity jump u_+ - u_- across an admissible shock; always negative.

    Valid for either family; the radicand is nonnegative whenever both
    densities are positive and distinct.
    """
    if rho_minus <= 0 or rho_plus <= 0:
        raise DomainError("shock_delta_u needs positive densities")
    rad = (1.0 / rho_plus - 1.0 / rho_minus) * (rho_minus**3 - rho_plus**3) / 3.0
    return -math.sqrt(max(rad, 0.0))


def shock_speed(rho_minus: float, rho_plus: float, family: WaveFamily) -> float:
    """Rankine-Hugoniot speed, sign chosen by family."""
    if rho_minus <= 0 or rho_plus <= 0:
        raise DomainError("shock_speed needs positive densities")
    if rho_minus == rho_plus:
        return char_speed(rho_minus, family)
    rad = (rho_minus**3 - rho_plus**3) / (1.0 / rho_plus - 1.0 / rho_minus)
    return family.sign * math.sqrt(max(rad, 0.0) / 3.0)


def psi(theta: float) -> float:
    """(1 - theta)(1 - theta^3) / (3 theta); zero only at theta = 1.

    With theta the density ratio across a shock, rho_- * sqrt(psi(theta))
    is the velocity jump u_- - u_+.
    """
    if theta <= 0:
        raise DomainError(f"psi needs theta > 0, got {theta}")
    return (1.0 - theta) * (1.0 - theta**3) / (3.0 * theta)


def psi_prime(theta: float) -> float:
    """Derivative of psi: (3 theta^4 - 2 theta^3 - 1) / (3 theta^2)."""
    if theta <= 0:
        raise DomainError(f"psi_prime needs theta > 0, got {theta}")
    return (3.0 * theta**4 - 2.0 * theta**3 - 1.0) / (3.0 * theta**2)


LEFT_GIVEN = "left"
RIGHT_GIVEN = "right"


def shock_curve(anchor: GasState, family: WaveFamily, side: str, rho_other: float,
                tol: Tolerances = DEFAULT_TOL) -> GasState:
    """State on the admissible shock curve of `family` through `anchor`.

    `side` names which state the anchor is ("left" or "right"); `rho_other`
    is the density of the state to construct.  Lax admissibility pins the
    density ordering: a 1-shock is denser on the right, a 2-shock on the left.
    """
    if rho_other <= 0:
        raise DomainError("shock_curve needs rho_other > 0")
    if anchor.rho <= tol.rho_floor:
        raise VacuumFormation("shock_curve anchor at vacuum", anchor.rho)
    if side not in (LEFT_GIVEN, RIGHT_GIVEN):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if rho_other == anchor.rho:
        return anchor
    anchor_is_left = side == LEFT_GIVEN
    # density must increase in the family's compression direction
    denser_on_right = family is WaveFamily.ONE
    other_is_right = anchor_is_left
    other_should_be_denser = denser_on_right == other_is_right
    if other_should_be_denser != (rho_other > anchor.rho):
        raise InadmissibleOrientation(
            f"family-{int(family)} shock with {side} anchor rho={anchor.rho} "
            f"cannot reach rho={rho_other}")
    if anchor_is_left:
        du = shock_delta_u(anchor.rho, rho_other)
        return GasState(anchor.u + du, rho_other)
    du = shock_delta_u(rho_other, anchor.rho)
    return GasState(anchor.u - du, rho_other)


def rarefaction_curve(anchor: GasState, family: WaveFamily, dw: float,
                      tol: Tolerances = DEFAULT_TOL) -> GasState:
    """Move the family's own Riemann invariant by dw, keeping the other fixed.

    In the u-rho plane this is the straight line of slope -1 (family 1) or
    +1 (family 2) through the anchor.
    """
    rho = anchor.rho + dw / 2.0
    if rho <= tol.rho_floor:
        raise VacuumFormation(f"rarefaction_curve reaches rho={rho}", rho)
    u = anchor.u - dw / 2.0 if family is WaveFamily.ONE else anchor.u + dw / 2.0
    return GasState(u, rho)


@dataclass(frozen=True)
class WaveDescriptor:
    """One outgoing wave of a Riemann solution."""

    family: WaveFamily
    kind: str                  # "shock" or "rarefaction"
    left: GasState
    right: GasState
    strength: float            # magnitude of the family's own invariant jump
    speed_exact: float         # RH speed, or midpoint characteristic speed

    @property
    def is_null(self) -> bool:
        return self.strength == 0.0


@dataclass(frozen=True)
class RiemannSolution:
    left: GasState
    middle: GasState
    right: GasState
    wave1: WaveDescriptor
    wave2: WaveDescriptor


def _wave_between(left: GasState, right: GasState, family: WaveFamily) -> WaveDescriptor:
    """Classify and package the wave joining two states on a wave curve."""
    jump = (right.w1 - left.w1) if family is WaveFamily.ONE else (right.w2 - left.w2)
    compressive = jump > 0 if family is WaveFamily.ONE else jump < 0
    if jump == 0.0:
        return WaveDescriptor(family, "shock", left, right, 0.0,
                              char_speed(left.rho, family))
    if compressive:
        speed = shock_speed(left.rho, right.rho, family)
        return WaveDescriptor(family, "shock", left, right, abs(jump), speed)
    mid = 0.5 * (char_speed(left.rho, family) + char_speed(right.rho, family))
    return WaveDescriptor(family, "rarefaction", left, right, abs(jump), mid)


def _u_forward_1(left: GasState, rho: float) -> float:
    """u on the forward 1-wave curve from `left` at density rho."""
    if rho <= left.rho:
        return left.u + (left.rho - rho)          # rarefaction branch, w2 const
    return left.u + shock_delta_u(left.rho, rho)  # shock branch


def _u_backward_2(right: GasState, rho: float) -> float:
    """u of the state that connects to `right` by a 2-wave, at density rho."""
    if rho <= right.rho:
        return right.u - (right.rho - rho)        # rarefaction branch, w1 const
    return right.u - shock_delta_u(rho, right.rho)  # shock branch


def solve_riemann(left: GasState, right: GasState,
                  tol: Tolerances = DEFAULT_TOL) -> RiemannSolution:
    """Exact Riemann solution: middle state plus one wave of each family.

    The forward 1-curve from the left state is strictly decreasing in u as a
    function of the middle density; the backward 2-curve from the right state
    is strictly increasing, so the intersection is unique.  Vacuum forms when
    w2(left) + w1(right) <= 0.
    """
    if left.rho <= tol.rho_floor or right.rho <= tol.rho_floor:
        raise VacuumFormation("solve_riemann side state at vacuum",
                              min(left.rho, right.rho))
    mid_2rho = left.w2 + right.w1   # = 2 rho_mid when both waves are rarefactions
    if mid_2rho <= 2.0 * tol.rho_floor:
        raise VacuumFormation(f"vacuum middle state (2 rho = {mid_2rho})", mid_2rho / 2)

    def gap(rho: float) -> float:
        return _u_forward_1(left, rho) - _u_backward_2(right, rho)

    lo = tol.rho_floor
    hi = max(left.rho, right.rho, mid_2rho / 2.0)
    it = 0
    while gap(hi) > 0:
        hi *= 2.0
        it += 1
        if it > tol.max_iter:
            raise NonConvergence("solve_riemann bracket expansion failed")
    if gap(lo) <= 0:
        raise VacuumFormation("curves meet only at the density floor", lo)
    try:
        rho_m = brentq(gap, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=tol.max_iter)
    except (RuntimeError, ValueError) as exc:
        raise NonConvergence(f"solve_riemann root finding failed: {exc}") from exc
    middle = GasState(_u_forward_1(left, rho_m), rho_m)
    w1 = _wave_between(left, middle, WaveFamily.ONE)
    w2 = _wave_between(middle, right, WaveFamily.TWO)
    return RiemannSolution(left, middle, right, w1, w2)


def lemma1_G(rho_l: float, B1: GasState, A2: GasState) -> float:
    """Difference of the two shock-curve square roots as a function of rho_l.

    Strictly decreasing on 0 < rho_l < min(rho(B1), rho(A2)) and diverging
    as rho_l -> 0+, so G(rho_l) = u(A2) - u(B1) has a unique root.
    """
    r1, r2 = B1.rho, A2.rho
    if not 0 < rho_l < min(r1, r2):
        raise DomainError(f"lemma1_G needs 0 < rho_l < {min(r1, r2)}, got {rho_l}")
    t1 = math.sqrt((1.0 / r1 - 1.0 / rho_l) * (rho_l**3 - r1**3) / 3.0)
    t2 = math.sqrt((1.0 / r2 - 1.0 / rho_l) * (rho_l**3 - r2**3) / 3.0)
    return t1 - t2


def lemma1_left_state(B1: GasState, A2: GasState,
                      tol: Tolerances = DEFAULT_TOL) -> GasState:
    """Unique left state whose 1-shock curve passes through both B1 and A2.

    Hypotheses checked explicitly: (i) u(B1) < u(A2) and rho(B1) > rho(A2);
    (ii) the point on the 1-shock curve with right state B1 at the
    u-component of A2 lies below A2 in density.
    """
    u1, r1 = B1.u, B1.rho
    u2, r2 = A2.u, A2.rho
    if not (u1 < u2 and r1 > r2):
        raise HypothesisViolation(
            f"need u(B1) < u(A2) and rho(B1) > rho(A2); got ({u1},{r1}) vs ({u2},{r2})")
    # (ii): on the curve through B1, the density where u reaches u2
    def u_of(rm: float) -> float:
        return u1 - shock_delta_u(rm, r1)

    lo = tol.rho_floor
    if u_of(lo) <= u2:
        raise HypothesisViolation("1-shock curve through B1 never reaches u(A2)")
    rho_star = brentq(lambda rm: u_of(rm) - u2, lo, r1 * (1 - 1e-14),
                      xtol=1e-300, rtol=8.9e-16, maxiter=tol.max_iter)
    margin = r2 - rho_star
    if margin <= 0:
        raise HypothesisViolation(
            f"hypothesis (ii) fails: rho* = {rho_star} >= rho(A2) = {r2}", margin)

    target = u2 - u1

    def g(rho_l: float) -> float:
        return lemma1_G(rho_l, B1, A2) - target

    hi = r2 * (1.0 - 1e-14)
    lo = r2 * 1e-4
    it = 0
    while g(lo) < 0:
        lo /= 10.0
        it += 1
        if lo <= 1e-300 or it > tol.max_iter:
            raise NonConvergence("lemma1 bracket expansion failed")
    try:
        rho_l = brentq(g, lo, hi, xtol=1e-300, rtol=8.9e-16, maxiter=tol.max_iter)
    except (RuntimeError, ValueError) as exc:
        raise NonConvergence(f"lemma1 root finding failed: {exc}") from exc
    u_l = u1 - shock_delta_u(rho_l, r1)
    state = GasState(u_l, rho_l)
    for pt in (B1, A2):
        resid = abs(pt.u - (state.u + shock_delta_u(state.rho, pt.rho)))
        if resid > 1e-8 * max(1.0, abs(pt.u)):
            raise NonConvergence(f"lemma1 residual {resid} at {pt}")
    return state


def rh_residual(left: GasState, right: GasState, speed: float) -> float:
    """Max absolute residual of the two Rankine-Hugoniot equations."""
    r1 = speed * (1.0 / right.rho - 1.0 / left.rho) - (left.u - right.u)
    r2 = speed * (right.u - left.u) - (pressure(right.rho) - pressure(left.rho))
    return max(abs(r1), abs(r2))
