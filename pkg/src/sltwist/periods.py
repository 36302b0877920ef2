"""Periods, partial periods and the angular period, each by two routes.

Route one is singular quadrature of the energy-level integrals

    p+ = int_{y_min}^{q/n} dy / (2 sqrt(f(y) - 4 tau^2)),
    p- = int_{q/n}^{y_max} dy / (2 sqrt(f(y) - 4 tau^2)),

with the square-root endpoint singularities removed by the substitution
y = y_end +/- s^2 (the radicand divided by s^2 is then a polynomial in
s^2, evaluated by the exact Taylor expansion of f about the root, so
there is no cancellation at the endpoint).  Route two locates the
extrema of y along the integrated curve as events and reads the angles
psi_i off the same trajectory.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .ode_engine import Tolerances, locate_event
from .twisted_curve import (TwistParam, TwistTrajectory, f_poly, f_prime,
                            f_taylor_coeffs, solve_w, tau_max, y_extrema)

__all__ = [
    "PeriodData", "partial_periods_quadrature", "pthat_quadrature",
    "branch_integral", "period_ode", "verify_psi_constraint",
]

_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-13, limit=200)


def _quad(fn, a, b) -> float:
    # QUADPACK flags roundoff saturation near sharp weights; the achieved
    # accuracy is certified by the independent trajectory route instead.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return quad(fn, a, b, **_QUAD_OPTS)[0]


@dataclass(frozen=True)
class PeriodData:
    """Half-period of y, its split at the extrema, and the angle data.

    p_tau = p_plus + p_minus; pthat = (p/2) psi1(2 p_tau).  For p = 1 the
    convention is p_plus = p_tau, p_minus = 0 (y starts at its maximum).
    """

    p_plus: float
    p_minus: float
    p_tau: float
    pthat: float
    psi1_2p: float
    psi2_2p: float


def _root_weight(pair, y0: float, sign: int):
    """Polynomial G with f(y0 + sign s^2) - f(y0) = s^2 G(s^2) exactly."""
    coeffs = f_taylor_coeffs(pair, y0)
    signed = tuple(c * sign**k for k, c in enumerate(coeffs, start=1))

    def G(s):
        s2 = s * s
        acc = 0.0
        for c in signed[::-1]:
            acc = acc * s2 + c
        return acc  # f(y0 + sign s^2) - f(y0) = s^2 * acc, positive inside

    return G


def branch_integral(param: TwistParam, h) -> float:
    """int_{y_min}^{y_max} h(y) dy / (2 sqrt(f(y) - 4 tau^2)).

    This is the integral of h(y(t)) dt over one monotone branch of y.
    Split at q/n; each half is regularised by the s^2 substitution at
    its singular endpoint.
    """
    pair = param.pair
    y_min, y_max = y_extrema(param)
    qn = pair.q / pair.n
    G_lo = _root_weight(pair, y_min, +1)
    G_hi = _root_weight(pair, y_max, -1)
    lo = _quad(lambda s: h(y_min + s * s) / math.sqrt(G_lo(s)),
               0.0, math.sqrt(qn - y_min))
    hi = _quad(lambda s: h(y_max - s * s) / math.sqrt(G_hi(s)),
               0.0, math.sqrt(y_max - qn))
    return lo + hi


def partial_periods_quadrature(param: TwistParam) -> tuple[float, float]:
    """(p_plus, p_minus) by singular quadrature.

    For p = 1 returns (p_tau, 0.0): the partial split is a p > 1 notion
    and the whole branch integral is the half-period.
    """
    pair, tau = param.pair, abs(param.tau)
    tm = tau_max(pair)
    if tau == 0.0:
        raise ValueError("tau = 0: the period integral diverges")
    if tau >= tm * (1 - 1e-10):
        raise ValueError("|tau| at tau_max: the orbit is a point, no period")
    y_min, y_max = y_extrema(param)
    qn = pair.q / pair.n
    G_lo = _root_weight(pair, y_min, +1)
    G_hi = _root_weight(pair, y_max, -1)
    p_plus = _quad(lambda s: 1.0 / math.sqrt(G_lo(s)),
                   0.0, math.sqrt(qn - y_min))
    p_minus = _quad(lambda s: 1.0 / math.sqrt(G_hi(s)),
                    0.0, math.sqrt(y_max - qn))
    if pair.p == 1:
        return p_plus + p_minus, 0.0
    return p_plus, p_minus


def pthat_quadrature(param: TwistParam) -> float:
    """Angular period by quadrature: p * (change of psi1 over one branch)."""
    p, tau = param.pair.p, param.tau
    return p * branch_integral(param, lambda y: 2.0 * tau / (1.0 - y))


def pthat_quadrature_psi2(param: TwistParam) -> float:
    """Angular period from the psi2 side: q * int 2 tau / y.

    Equal to :func:`pthat_quadrature` because p psi1 + q psi2 vanishes
    over a full period.
    """
    q, tau = param.pair.q, param.tau
    return q * branch_integral(param, lambda y: 2.0 * tau / y)


def period_ode(param: TwistParam, tol: Tolerances = Tolerances(),
               traj: TwistTrajectory | None = None) -> PeriodData:
    """Period data from extremum events on the integrated curve.

    The events are the zeros of y' = -2 Re(w1^p w2^q), refined on the
    dense output with a Newton polish through y'' = 2 f'(y); the angles
    psi_i ride along as integrated components so they carry integrator
    accuracy rather than interpolation accuracy.
    """
    pair = param.pair
    p_est_plus, p_est_minus = partial_periods_quadrature(param)
    p_est = p_est_plus + p_est_minus
    if traj is None:
        fwd = 2.0 * p_est * (1.0 + 1e-6) + 1e-3
        bwd = -(1.5 * p_est_minus + 1e-3) if pair.p > 1 else 0.0
        traj = solve_w(param, (bwd, fwd), tol)

    def g(t, s):
        return -2.0 * (complex(s[0], s[1]) ** pair.p
                       * complex(s[2], s[3]) ** pair.q).real

    def g_prime(t, s):
        return 2.0 * f_prime(pair, s[2] ** 2 + s[3] ** 2)

    if param.tau == 0.0:
        raise ValueError("tau = 0: y is not periodic")

    if pair.p > 1:
        piece_fwd = traj.pieces[0]
        p_plus = locate_event(piece_fwd, g, (0.5 * p_est_plus, 1.5 * p_est_plus), g_prime)
        piece_bwd = traj.pieces[1]
        t_back = locate_event(piece_bwd, g, (-0.5 * p_est_minus, -1.5 * p_est_minus), g_prime)
        p_minus = -t_back
    else:
        piece_fwd = traj.pieces[0]
        p_plus = locate_event(piece_fwd, g, (0.5 * p_est, 1.5 * p_est), g_prime)
        p_minus = 0.0
    p_tau = p_plus + p_minus
    psi1_2p, psi2_2p = traj.psi(2.0 * p_tau)
    pthat = 0.5 * pair.p * psi1_2p
    return PeriodData(p_plus=float(p_plus), p_minus=float(p_minus),
                      p_tau=float(p_tau), pthat=float(pthat),
                      psi1_2p=float(psi1_2p), psi2_2p=float(psi2_2p))


def verify_psi_constraint(param: TwistParam, samples: int = 100,
                          traj: TwistTrajectory | None = None,
                          data: PeriodData | None = None) -> float:
    """Residual of the algebraic angle constraint along the curve.

    With Psi = p psi1 + q psi2 and a = arcsin(-tau/tau_max):
    p = 1 requires 2 tau = sqrt(f(y)) cos(Psi) with Psi in (-pi/2, pi/2);
    p > 1 requires -2 tau = sqrt(f(y)) sin(Psi + a) with Psi + a in (-pi, 0).
    Returns the max residual; raises if a sign condition is violated.
    """
    from .twisted_curve import alpha_tau

    pair, tau = param.pair, param.tau
    if not 0.0 < tau < tau_max(pair):
        raise ValueError("psi constraint check requires 0 < tau < tau_max")
    if data is None:
        data = period_ode(param)
    if traj is None:
        traj = solve_w(param, (0.0, 2.0 * data.p_tau))
    res = 0.0
    for t in np.linspace(0.0, 2.0 * data.p_tau, samples):
        s = traj.state(t)
        y = s[2] ** 2 + s[3] ** 2
        Psi = pair.p * s[4] + pair.q * s[5]
        root = math.sqrt(max(f_poly(pair, y), 0.0))
        if pair.p == 1:
            if not -math.pi / 2 < Psi < math.pi / 2:
                raise AssertionError(f"Psi={Psi} outside (-pi/2, pi/2) at t={t}")
            res = max(res, abs(2.0 * tau - root * math.cos(Psi)))
        else:
            shifted = Psi + alpha_tau(param)
            if not -math.pi < shifted < 0.0:
                raise AssertionError(f"Psi+alpha={shifted} outside (-pi, 0) at t={t}")
            res = max(res, abs(-2.0 * tau - root * math.sin(shifted)))
    return res
