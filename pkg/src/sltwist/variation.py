"""Rotationally invariant linearisation and small-tau asymptotic laws.

The scalar linearised equation along the curve is

    phi'' = -2 n |w'|^2 phi,      |w'|^2 = y^(q-1) (1-y)^(p-1),

with the closed-form solution q - n y.  The companion solution Q is
normalised so that the Wronskian (q - n y) Q' + n y' Q is identically 1;
the derivative of the angular period with respect to tau is then read
off the values of Q at the extrema of y.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .catenoid import catenoid_lifetime
from .ode_engine import Tolerances, integrate, locate_event
from .periods import PeriodData, partial_periods_quadrature, period_ode, pthat_quadrature
from .twisted_curve import TwistParam, solve_w, tau_max, y_extrema

__all__ = [
    "LinearisedSolution", "AsymptoticsReport", "solve_Q", "dpthat_dtau",
    "dpthat_dtau_cross_check", "asymptotic_constants", "time_scale",
    "check_asymptotics", "ASYMPTOTIC_LAWS",
]


class CrossCheckWarning(UserWarning):
    """A dual-route consistency check exceeded its diagnostic threshold."""


@dataclass
class LinearisedSolution:
    """The normalised companion solution Q of the linearised equation.

    ``Q`` and ``Qdot`` are callables on [-2 p_tau, 2 p_tau].  ``p_star``
    is the anchor time (the unique t in (0, p_tau) with y = q/n) for
    p = 1, or 0 for p > 1.  ``wronskian_drift`` is the measured maximum
    of |(q - ny) Q' + n y' Q - 1| over the covered interval.
    """

    param: TwistParam
    period: PeriodData
    p_star: float
    wronskian_drift: float
    _fwd: object
    _bwd: object

    def _state(self, t):
        traj = self._fwd if t >= self.p_star else self._bwd
        return traj(t)

    def Q(self, t) -> float:
        return float(self._state(t)[6])

    def Qdot(self, t) -> float:
        return float(self._state(t)[7])

    def y(self, t) -> float:
        s = self._state(t)
        return float(s[2] ** 2 + s[3] ** 2)

    def ydot(self, t) -> float:
        s = self._state(t)
        p, q = self.param.pair.p, self.param.pair.q
        return -2.0 * (complex(s[0], s[1]) ** p * complex(s[2], s[3]) ** q).real

    def wronskian(self, t) -> float:
        s = self._state(t)
        n, q = self.param.pair.n, self.param.pair.q
        y = s[2] ** 2 + s[3] ** 2
        return float((q - n * y) * s[7] + n * self.ydot(t) * s[6])


def _augmented_field(p: int, q: int, tau: float):
    n = p + q

    def rhs(t, s):
        w1 = complex(s[0], s[1])
        w2 = complex(s[2], s[3])
        c1 = w1.conjugate() ** (p - 1) * w2.conjugate() ** q
        c2 = -(w1.conjugate() ** p) * w2.conjugate() ** (q - 1)
        y = w2.real * w2.real + w2.imag * w2.imag
        wdot2 = y ** (q - 1) * (1.0 - y) ** (p - 1)
        return (c1.real, c1.imag, c2.real, c2.imag,
                2.0 * tau / (1.0 - y), -2.0 * tau / y,
                s[7], -2.0 * n * wdot2 * s[6])

    return rhs


def solve_Q(param: TwistParam, tol: Tolerances = Tolerances(),
            span_factor: float = 2.2) -> LinearisedSolution:
    """Integrate Q along the curve, anchored where y crosses q/n.

    Q rides as two extra components (Q, Q') on the curve system so that
    every quantity shares one error control.  Initial data: n y'(t0)
    Q(t0) = 1 and Q'(t0) = 0 at t0 = p_star (p = 1) or t0 = 0 (p > 1).
    """
    pair, tau = param.pair, param.tau
    if not 0.0 < abs(tau) < tau_max(pair) * (1 - 1e-10):
        raise ValueError("solve_Q requires 0 < |tau| < tau_max")
    p, q, n = pair.p, pair.q, pair.n
    data = period_ode(param, tol)
    base = solve_w(param, (0.0, 1.05 * data.p_tau), tol)
    if p == 1:
        def g(t, s):
            return (s[2] ** 2 + s[3] ** 2) - q / n

        p_star = locate_event(base.pieces[0], g, (1e-6, data.p_tau))
    else:
        p_star = 0.0
    s0 = base.state(p_star)
    ydot0 = base.ydot(p_star)
    state0 = np.concatenate([s0, [1.0 / (n * ydot0), 0.0]])
    fld = _augmented_field(p, q, tau)
    hi = span_factor * data.p_tau
    fwd = integrate(fld, state0, (p_star, hi), tol)
    bwd = integrate(fld, state0, (p_star, -hi), tol)
    sol = LinearisedSolution(param=param, period=data, p_star=p_star,
                             wronskian_drift=0.0, _fwd=fwd, _bwd=bwd)
    ts = np.linspace(-2.0 * data.p_tau, 2.0 * data.p_tau, 101)
    sol.wronskian_drift = float(max(abs(sol.wronskian(t) - 1.0) for t in ts))
    return sol


def dpthat_dtau(param: TwistParam, solution: LinearisedSolution | None = None) -> float:
    """Exact derivative of the angular period with respect to tau.

    p = 1: 4(n-1) [Q(p_tau)/(q - n y(p_tau)) - Q(0)/(q - n y(0))];
    p > 1: 4 p q [Q(p+)/(q - n y(p+)) - Q(-p-)/(q - n y(-p-))].
    """
    if solution is None:
        solution = solve_Q(param)
    pair = param.pair
    p, q, n = pair.p, pair.q, pair.n
    data = solution.period
    if p == 1:
        t_hi, t_lo = data.p_tau, 0.0
        factor = 4.0 * (n - 1)
    else:
        t_hi, t_lo = data.p_plus, -data.p_minus
        factor = 4.0 * p * q
    hi = solution.Q(t_hi) / (q - n * solution.y(t_hi))
    lo = solution.Q(t_lo) / (q - n * solution.y(t_lo))
    return float(factor * (hi - lo))


def dpthat_dtau_cross_check(param: TwistParam, h: float | None = None) -> dict:
    """Formula value vs central finite differences of the angular period.

    The step default h = max(1e-6, 1e-4 tau) balances truncation against
    the achievable accuracy of the period computation.  A relative gap
    above 1e-4 is reported as a diagnostic warning, never swallowed.
    """
    tau = param.tau
    if h is None:
        h = max(1e-6, 1e-4 * tau)
    value = dpthat_dtau(param)
    up = period_ode(TwistParam(param.pair, tau + h)).pthat
    dn = period_ode(TwistParam(param.pair, tau - h)).pthat
    fd = (up - dn) / (2.0 * h)
    rel = abs(value - fd) / max(abs(fd), 1e-300)
    if rel > 1e-4:
        warnings.warn(
            f"dpthat/dtau mismatch at tau={tau}: formula {value}, fd {fd}, rel {rel}",
            CrossCheckWarning)
    return {"formula": value, "finite_difference": fd, "rel_err": rel}


# ---------------------------------------------------------------------------
# asymptotic laws


def asymptotic_constants(k: int) -> float:
    """Neck-scale constant b_k.

    For k > 2, b_k = 4^(1/k - 1) * int_1^inf dz / sqrt(z^k - 1), i.e.
    4^(1/k - 1) times twice the unit-profile lifetime, cross-checked
    against the Beta closed form inside :func:`catenoid_lifetime`.
    b_2 = 1/2 = 4^(1/2 - 1): the divergent integral is replaced by the
    logarithmic time scale with unit coefficient, and the measured
    periods converge to b_2 T_2 only with this prefactor.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if k == 2:
        return 0.5
    return 4.0 ** (-1.0 + 1.0 / k) * 2.0 * catenoid_lifetime(k)


def time_scale(k: int, tau: float) -> float:
    """T_k(tau): tau^(2/k - 1) for k > 2, log(1/tau) for k = 2."""
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must lie in (0, 1)")
    if k == 2:
        return math.log(1.0 / tau)
    return tau ** (-1.0 + 2.0 / k)


@dataclass(frozen=True)
class AsymptoticsReport:
    """Measured quantity vs leading-order prediction at one tau."""

    tau: float
    measured: float
    predicted: float
    ratio: float
    law_id: str


ASYMPTOTIC_LAWS = ("pt_plus", "pt_minus", "pt", "pthat_excess", "ymin", "ymax_gap")


def _law_values(pair, tau: float, law_id: str) -> tuple[float, float]:
    p, q = pair.p, pair.q
    param = TwistParam(pair, tau)
    if law_id == "ymin":
        y_min, _ = y_extrema(param)
        return y_min, (2.0 * tau) ** (2.0 / q)
    if law_id == "ymax_gap":
        _, y_max = y_extrema(param)
        return 1.0 - y_max, (2.0 * tau) ** (2.0 / p)
    pp, pm = partial_periods_quadrature(param)
    if law_id == "pt_plus":
        return pp, asymptotic_constants(q) * time_scale(q, tau)
    if law_id == "pt_minus":
        if p == 1:
            raise ValueError("pt_minus law applies only to p > 1")
        return pm, asymptotic_constants(p) * time_scale(p, tau)
    if law_id == "pt":
        mult = 2.0 if p == q else 1.0
        return pp + pm, mult * asymptotic_constants(q) * time_scale(q, tau)
    if law_id == "pthat_excess":
        phat = pthat_quadrature(param)
        return phat - math.pi / 2.0, (4.0 * p / q) * tau * (pp + pm)
    raise ValueError(f"unknown law {law_id!r}; choose from {ASYMPTOTIC_LAWS}")


def check_asymptotics(pair, tau_list, law_id: str | None = None) -> list[AsymptoticsReport]:
    """Ratio measured/predicted for each tau and each requested law.

    With law_id None, all laws applicable to the pair are evaluated.
    The reports are observational: the caller decides what trend or
    band to demand of the ratios.
    """
    laws = [law_id] if law_id else [
        l for l in ASYMPTOTIC_LAWS if not (l == "pt_minus" and pair.p == 1)]
    out = []
    for law in laws:
        for tau in tau_list:
            measured, predicted = _law_values(pair, float(tau), law)
            out.append(AsymptoticsReport(
                tau=float(tau), measured=float(measured),
                predicted=float(predicted),
                ratio=float(measured / predicted), law_id=law))
    return out
