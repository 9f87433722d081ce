"""Exact maps for a small wave meeting a shock of the other family, the
reflection of a small wave at a large shock, and the closed-form
amplification estimates built from them.

Conventions.  A "small" front here is a jump along a rarefaction curve
(compression = reversed orientation).  Crossings are parametrized the way
the defining implicit relation is written: epsilon is the common shift of
(u, rho) across the incoming front, i.e. half its own-invariant jump.
Amplification factors eta/epsilon are unit-free, so they are unaffected by
that choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .config import DEFAULT_TOL, Tolerances
from .errors import DomainError, NonConvergence, VacuumFormation
from .riemann import (
    GasState,
    WaveFamily,
    psi,
    psi_prime,
    shock_delta_u,
    shock_speed,
)


def theta_for_strength(sigma1: float, rho_minus: float,
                       tol: Tolerances = DEFAULT_TOL) -> float:
    """Density ratio theta > 1 of the 1-shock with Riemann-invariant strength
    sigma1 and left density rho_minus: sigma1 = (theta-1+sqrt(psi(theta))) rho_-."""
    if sigma1 <= 0:
        raise DomainError("shock strength must be positive")
    if rho_minus <= tol.rho_floor:
        raise VacuumFormation("shock left state at vacuum", rho_minus)

    def f(th: float) -> float:
        return (th - 1.0 + math.sqrt(psi(th))) * rho_minus - sigma1

    hi = 1.0 + sigma1 / rho_minus
    while f(hi) < 0:
        hi *= 2.0
        if hi > 1e30:
            raise NonConvergence("theta bracket expansion failed")
    return brentq(f, 1.0 + 1e-300, hi, xtol=1e-300, rtol=8.9e-16,
                  maxiter=tol.max_iter)


def shock_from_strength(sigma1: float, rho_minus: float, u_minus: float = 0.0,
                        tol: Tolerances = DEFAULT_TOL) -> tuple[GasState, GasState]:
    """Left and right states of the 1-shock with strength sigma1 and left
    density rho_minus (left velocity a free gauge)."""
    th = theta_for_strength(sigma1, rho_minus, tol)
    left = GasState(u_minus, rho_minus)
    right = GasState(u_minus + shock_delta_u(rho_minus, th * rho_minus),
                     th * rho_minus)
    return left, right


def transmit_through_1shock(ahead: GasState, behind: GasState, epsilon: float,
                            tol: Tolerances = DEFAULT_TOL) -> tuple[GasState, float]:
    """Exact crossing of a small 2-front by the 1-shock (ahead | behind).

    The incoming 2-front has already shifted the state ahead of the shock
    from `ahead` to ahead - (eps, eps) in (u, rho).  Returns the new state
    behind the shock, behind - (eta, eta), and eta itself.  The shock's own
    1-invariant jump is preserved exactly by this parametrization.
    """
    uA = ahead.u - epsilon
    rA = ahead.rho - epsilon
    if rA <= tol.rho_floor:
        raise VacuumFormation(f"crossing would push ahead density to {rA}", rA)
    uQ, rQ = behind.u, behind.rho

    def F(eta: float) -> float:
        rM = rQ - eta
        rad = (1.0 / rM - 1.0 / rA) * (rA**3 - rM**3) / 3.0
        return (uQ - eta - uA) + math.sqrt(max(rad, 0.0))

    # F is strictly decreasing; F(rQ - rA) = -(shock strength) < 0.
    hi = (rQ - rA) * (1.0 - 1e-15)
    lo = -abs(epsilon) if epsilon != 0.0 else -1e-12
    it = 0
    while F(lo) <= 0.0:
        lo *= 2.0
        it += 1
        if it > tol.max_iter:
            raise NonConvergence("transmit bracket expansion failed")
    if F(hi) >= 0.0:
        raise NonConvergence("transmit bracket invalid at upper end")
    eta = brentq(F, lo, hi, xtol=1e-300, rtol=8.9e-16, maxiter=tol.max_iter)
    new_behind = GasState(uQ - eta, rQ - eta)
    if new_behind.rho <= tol.rho_floor:
        raise VacuumFormation("crossing pushed behind density to the floor",
                              new_behind.rho)
    return new_behind, eta


@dataclass(frozen=True)
class CrossingResult:
    eta: float                      # outgoing small-front shift
    amplification: float            # eta / epsilon
    shock_left: GasState            # transmitted shock, ahead state
    shock_right: GasState           # transmitted shock, behind state
    shock_strength: float           # 1-invariant jump (preserved exactly)
    shock_speed: float


def cross_shock_exact(sigma1: float, rho_minus: float, epsilon: float,
                      tol: Tolerances = DEFAULT_TOL) -> CrossingResult:
    """Small 2-front of shift epsilon crossing the 1-shock (sigma1, rho_minus)."""
    if abs(epsilon) >= rho_minus:
        raise VacuumFormation("epsilon would empty the state ahead of the shock",
                              rho_minus - abs(epsilon))
    left, right = shock_from_strength(sigma1, rho_minus, 0.0, tol)
    if epsilon == 0.0:
        return CrossingResult(0.0, 1.0, left, right,
                              right.w1 - left.w1,
                              shock_speed(left.rho, right.rho, WaveFamily.ONE))
    new_right, eta = transmit_through_1shock(left, right, epsilon, tol)
    new_left = GasState(left.u - epsilon, left.rho - epsilon)
    return CrossingResult(eta, eta / epsilon, new_left, new_right,
                          new_right.w1 - new_left.w1,
                          shock_speed(new_left.rho, new_right.rho, WaveFamily.ONE))


def eta_prime_exact(sigma1: float, rho_minus: float,
                    tol: Tolerances = DEFAULT_TOL) -> float:
    """d eta / d epsilon at epsilon = 0: the infinitesimal crossing gain.

    Solves the linear relation obtained by differentiating the crossing's
    implicit equation at epsilon = 0.
    """
    th = theta_for_strength(sigma1, rho_minus, tol)
    s_over_rho = math.sqrt(psi(th))
    K = psi_prime(th) / (2.0 * s_over_rho)
    return (1.0 - s_over_rho + K * th) / (1.0 + K)


def eta_prime_fd(sigma1: float, rho_minus: float,
                 tol: Tolerances = DEFAULT_TOL) -> float:
    """Central finite difference of the exact crossing map at epsilon = 0.

    Step h = eps_machine^(1/3) * scale, the standard choice for first
    derivatives; independent check of eta_prime_exact.
    """
    h = (2.0**-52) ** (1.0 / 3.0) * min(1.0, rho_minus)
    ep = cross_shock_exact(sigma1, rho_minus, h, tol).eta
    em = cross_shock_exact(sigma1, rho_minus, -h, tol).eta
    return (ep - em) / (2.0 * h)


def eta_prime_small_shock(s: float, rho_minus: float) -> float:
    """Leading-order gain 1 + (1/3)(s/rho_-)^3 for a weak shock of velocity
    jump s, as reported with the small-amplitude expansion."""
    if s < 0 or rho_minus <= 0:
        raise DomainError("need s >= 0 and rho_minus > 0")
    return 1.0 + (s / rho_minus) ** 3 / 3.0


def eta_prime_near_vacuum(sigma1: float, rho_minus: float) -> float:
    """Leading-order gain near vacuum: 3^(-2/3) (sigma1/rho_-)^(2/3)."""
    if sigma1 <= 0 or rho_minus <= 0:
        raise DomainError("need sigma1 > 0 and rho_minus > 0")
    return 3.0 ** (-2.0 / 3.0) * (sigma1 / rho_minus) ** (2.0 / 3.0)


def _u_on_1shock_curve(rho_m: float) -> float:
    """u of the left state of a 1-shock with right state (0, 1), at rho_m < 1."""
    return math.sqrt((1.0 - 1.0 / rho_m) * (rho_m**3 - 1.0) / 3.0)


def _u_on_2shock_curve(rho_m: float) -> float:
    """u of the left state of a 2-shock with right state (0, 1), at rho_m > 1."""
    return math.sqrt((1.0 - 1.0 / rho_m) * (rho_m**3 - 1.0) / 3.0)


def a1b2_slope(s: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Exact slope of the segment joining (0, 1) to the midpoint vertex B2.

    Construction: 1-shock left state C at density 1-s and 2-shock left state
    D at density 1+r, both with right state (0, 1), with r chosen so the two
    left velocities agree; B2 is the square vertex between C and D.  The
    result approaches s^3/12 as s -> 0.
    """
    if not 0.0 < s < 1.0:
        raise DomainError(f"need 0 < s < 1, got {s}")
    u_c = _u_on_1shock_curve(1.0 - s)

    def f(r: float) -> float:
        return _u_on_2shock_curve(1.0 + r) - u_c

    hi = 2.0 * s + 1e-6
    while f(hi) < 0:
        hi *= 2.0
        if hi > 1e6:
            raise NonConvergence("a1b2 bracket expansion failed")
    r = brentq(f, 1e-300, hi, xtol=1e-300, rtol=8.9e-16, maxiter=tol.max_iter)
    du = u_c + (r + s) / 2.0
    drho = (r - s) / 2.0
    return drho / du


def reflection_coefficient(s: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Relative size of the front reflected off a large shock: 1 - 2 psi'(u)
    with psi'(u) the slope of the large-shock curve, here taken as the exact
    chord slope of the A1-B2 segment.  Approaches 1 - s^3/6 as s -> 0."""
    return 1.0 - 2.0 * a1b2_slope(s, tol)


def period_gain(s: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Gain of a small front over one period of the four-front pattern,
    assembled from exact factors: two opposite-family crossings of the
    intermediate shock (left density 1-s, right state (0,1)) and two
    reflections at the large shocks."""
    if not 0.0 < s < 1.0:
        raise DomainError(f"need 0 < s < 1, got {s}")
    rho_c = 1.0 - s
    sigma1 = (1.0 - rho_c) + _u_on_1shock_curve(rho_c)   # invariant jump of C->(0,1)
    crossing = eta_prime_exact(sigma1, rho_c, tol)
    refl = reflection_coefficient(s, tol)
    return (crossing * refl) ** 2


def reflect_off_big_shock(incoming_base: GasState, shock_near: GasState,
                          shock_far: GasState, family: WaveFamily,
                          tol: Tolerances = DEFAULT_TOL) -> GasState:
    """Small front absorbed by a large shock, re-emitting the opposite family.

    `family` is the big shock's family; `shock_near` its state on the side
    the small front comes from, `shock_far` the state on the other side.
    `incoming_base` is the state beyond the small front.  Returns the new
    near-side shock state M, kept exactly on the Rankine-Hugoniot curve with
    the far state; the emitted opposite-family front joins incoming_base to M
    along a rarefaction curve.
    """
    uf, rf = shock_far.u, shock_far.rho
    if family is WaveFamily.TWO:
        # near side is the left: M on the 2-shock curve with right state far,
        # and w2(M) = w2(incoming_base)
        target = incoming_base.u + incoming_base.rho

        def g(rho: float) -> float:
            return (uf - shock_delta_u(rho, rf)) + rho - target

    else:
        # near side is the right: M on the 1-shock curve with left state far,
        # and w1(M) = w1(incoming_base)
        target = incoming_base.rho - incoming_base.u

        def g(rho: float) -> float:
            return rho - (uf + shock_delta_u(rf, rho)) - target

    lo = rf * (1.0 + 1e-15)
    hi = max(shock_near.rho * 2.0, rf * 4.0)
    it = 0
    while g(hi) < 0:
        hi *= 2.0
        it += 1
        if it > tol.max_iter:
            raise NonConvergence("reflection bracket expansion failed")
    if g(lo) > 0:
        # shock (numerically) fully cancelled: collapse onto the far state
        return GasState(uf, rf)
    rho_m = brentq(g, lo, hi, xtol=1e-300, rtol=8.9e-16, maxiter=tol.max_iter)
    if family is WaveFamily.TWO:
        return GasState(uf - shock_delta_u(rho_m, rf), rho_m)
    return GasState(uf + shock_delta_u(rf, rho_m), rho_m)
