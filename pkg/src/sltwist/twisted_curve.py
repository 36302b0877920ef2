"""The twisted special Legendrian curve system on S^3.

For an admissible integer pair (p, q), n = p + q, the curves solve

    w1' =  conj(w1)^(p-1) conj(w2)^q,
    w2' = -conj(w1)^p conj(w2)^(q-1),

with the two conserved quantities I1 = |w|^2 and I2 = Im(w1^p w2^q).
The canonical one-parameter family is labelled by tau = -I2/2 with
|tau| <= tau_max(p, q).  The radius function y = |w2|^2 obeys

    y'^2 = 4 (f(y) - 4 tau^2),      f(y) = y^q (1 - y)^p,

which drives everything else in the package: periods, angles, closure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from .ode_engine import Tolerances, Trajectory, integrate

__all__ = [
    "AdmissiblePair", "TwistParam", "SphereState", "TwistTrajectory",
    "tau_max", "alpha_tau", "f_poly", "f_prime", "f_taylor_coeffs",
    "y_extrema", "initial_state", "solve_w", "conjugate_family_check",
]

# tau this close to tau_max is treated as the constant-y solution; the two
# roots of f(y) = 4 tau^2 coalesce and refining them is meaningless.
_TAU_MAX_MARGIN = 1e-10


@dataclass(frozen=True)
class AdmissiblePair:
    """Integer pair (p, q) with 1 <= p <= q and q >= 2."""

    p: int
    q: int

    def __post_init__(self):
        if not (isinstance(self.p, int) and isinstance(self.q, int)):
            raise TypeError("p and q must be integers")
        if not (1 <= self.p <= self.q and self.q >= 2):
            raise ValueError(f"pair ({self.p},{self.q}) is not admissible")

    @property
    def n(self) -> int:
        return self.p + self.q


@dataclass(frozen=True)
class TwistParam:
    """An admissible pair together with the conserved label tau."""

    pair: AdmissiblePair
    tau: float

    def __post_init__(self):
        tm = tau_max(self.pair)
        if abs(self.tau) > tm * (1 + 1e-12):
            raise ValueError(f"|tau|={abs(self.tau)} exceeds tau_max={tm}")

    @property
    def tau_max(self) -> float:
        return tau_max(self.pair)


@dataclass(frozen=True)
class SphereState:
    """A point (w1, w2) on the unit 3-sphere in C^2."""

    w1: complex
    w2: complex

    def __post_init__(self):
        r = abs(self.w1) ** 2 + abs(self.w2) ** 2
        if abs(r - 1.0) > 1e-10:
            raise ValueError(f"|w|^2 = {r} is not 1 within 1e-10")

    @property
    def y(self) -> float:
        return abs(self.w2) ** 2

    def as_real(self) -> np.ndarray:
        return np.array([self.w1.real, self.w1.imag, self.w2.real, self.w2.imag])


def tau_max(pair: AdmissiblePair) -> float:
    """Extreme value of |Im(w1^p w2^q)| / 2 on the unit sphere."""
    p, q, n = pair.p, pair.q, pair.n
    return 0.5 * math.sqrt(p**p * q**q / n**n)


def alpha_tau(param: TwistParam) -> float:
    """Phase angle arcsin(-tau/tau_max) in [-pi/2, pi/2]."""
    return math.asin(max(-1.0, min(1.0, -param.tau / tau_max(param.pair))))


def f_poly(pair: AdmissiblePair, y):
    """f(y) = y^q (1-y)^p."""
    y = np.asarray(y, dtype=float) if np.ndim(y) else float(y)
    return y**pair.q * (1.0 - y) ** pair.p


def f_prime(pair: AdmissiblePair, y):
    """f'(y) = y^(q-1) (1-y)^(p-1) (q - n y)."""
    y = np.asarray(y, dtype=float) if np.ndim(y) else float(y)
    return y ** (pair.q - 1) * (1.0 - y) ** (pair.p - 1) * (pair.q - pair.n * y)


@lru_cache(maxsize=None)
def _f_derivative_polys(p: int, q: int):
    f = Polynomial([0.0] * q + [1.0]) * Polynomial([1.0, -1.0]) ** p
    return tuple(f.deriv(k) for k in range(1, p + q + 1))


def f_taylor_coeffs(pair: AdmissiblePair, y0: float) -> np.ndarray:
    """Coefficients c_k = f^(k)(y0)/k! for k = 1..n.

    Since f is a degree-n polynomial, f(y0+d) - f(y0) = sum_k c_k d^k
    exactly; this is how differences of f are evaluated near its roots
    without catastrophic cancellation.
    """
    derivs = _f_derivative_polys(pair.p, pair.q)
    return np.array([d(y0) / math.factorial(k + 1) for k, d in enumerate(derivs)])


def y_extrema(param: TwistParam) -> tuple[float, float]:
    """The two roots of f(y) = 4 tau^2 in (0, 1), bracketing q/n.

    Refuses |tau| within a relative 1e-10 of tau_max (coalescing roots)
    and tau = 0 (double roots at the endpoints).
    """
    pair, tau = param.pair, abs(param.tau)
    tm = tau_max(pair)
    if tau == 0.0:
        raise ValueError("tau = 0: f(y) = 0 has no interior double root to split")
    if tau >= tm * (1 - _TAU_MAX_MARGIN):
        raise ValueError("|tau| too close to tau_max: extrema coalesce at q/n")
    p, q, n = pair.p, pair.q, pair.n
    target = 4.0 * tau * tau

    def g(y):
        return f_poly(pair, y) - target

    # Brackets from the leading-order root asymptotics, shrunk 4x to
    # guarantee the sign; the while-loops only fire very close to tau_max.
    lo = min((2.0 * tau) ** (2.0 / q) / 4.0, 0.5 * q / n)
    while g(lo) >= 0.0:
        lo *= 0.5
    hi = 1.0 - min((2.0 * tau) ** (2.0 / p) / 4.0, 0.5 * p / n)
    while g(hi) >= 0.0:
        hi = 1.0 - 0.5 * (1.0 - hi)
    y_min = brentq(g, lo, q / n, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    y_max = brentq(g, q / n, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return float(y_min), float(y_max)


def initial_state(param: TwistParam) -> SphereState:
    """Canonical initial condition of the family.

    p > 1: (sqrt(p/n) e^{i a/2p}, sqrt(q/n) e^{i a/2q}) with
    a = arcsin(-tau/tau_max); p = 1: (-i sgn(tau) sqrt(1-y_max), sqrt(y_max)).
    Either way Im(w1^p w2^q) = -2 tau.
    """
    pair, tau = param.pair, param.tau
    p, q, n = pair.p, pair.q, pair.n
    if p > 1:
        a = alpha_tau(param)
        return SphereState(
            w1=math.sqrt(p / n) * np.exp(1j * a / (2 * p)),
            w2=math.sqrt(q / n) * np.exp(1j * a / (2 * q)),
        )
    tm = tau_max(pair)
    if tau == 0.0 or abs(tau) >= tm * (1 - _TAU_MAX_MARGIN):
        y_max = 1.0 if tau == 0.0 else q / n
    else:
        _, y_max = y_extrema(param)
    s = 0.0 if tau == 0.0 else math.copysign(1.0, tau)
    return SphereState(w1=-1j * s * math.sqrt(1.0 - y_max), w2=math.sqrt(y_max))


# ---------------------------------------------------------------------------
# the integrated curve


def _field(p: int, q: int, tau: float):
    """Right-hand side for the real 6-vector (w1, w2, psi1, psi2)."""

    def rhs(t, s):
        w1 = complex(s[0], s[1])
        w2 = complex(s[2], s[3])
        c1 = w1.conjugate() ** (p - 1) * w2.conjugate() ** q
        c2 = -(w1.conjugate() ** p) * w2.conjugate() ** (q - 1)
        y = w2.real * w2.real + w2.imag * w2.imag
        return (c1.real, c1.imag, c2.real, c2.imag,
                2.0 * tau / (1.0 - y), -2.0 * tau / y)

    return rhs


def _tau0_field(pair: AdmissiblePair):
    def rhs(t, s):
        return (s[1], 2.0 * f_prime(pair, s[0]))

    return rhs


# linear map implementing w -> conj(w), psi -> -psi on the 6-vector
_CONJ = np.array([1.0, -1.0, 1.0, -1.0, -1.0, -1.0])


class TwistTrajectory:
    """Dense solution of the curve system over an interval containing 0.

    Accessors return the curve w(t) = (w1, w2), the radius y = |w2|^2 and
    its derivative, and the accumulated angles (psi1, psi2) with
    psi(0) = 0.  For tau < 0 the tau > 0 solution is conjugated rather
    than re-integrated, which enforces the conjugation symmetry exactly.
    For tau = 0 the scalar y-equation drives the explicit real solution.
    """

    def __init__(self, param: TwistParam, t_span=(0.0, 1.0),
                 tol: Tolerances = Tolerances()):
        self.param = param
        self.tol = tol
        lo = min(0.0, float(t_span[0]))
        hi = max(0.0, float(t_span[1]))
        self.t_lo, self.t_hi = lo, hi
        pair, tau = param.pair, param.tau
        self._neg = tau < 0.0
        self._tau0 = tau == 0.0

        if self._tau0:
            p, q, n = pair.p, pair.q, pair.n
            if p > 1:
                y0 = [q / n, -4.0 * tau_max(pair)]
            else:
                y0 = [1.0, 0.0]
            fld = _tau0_field(pair)
            inv = {"energy": (lambda s: s[1] ** 2 - 4.0 * f_poly(pair, s[0]), 0.0)}
            self._fwd = integrate(fld, y0, (0.0, hi), tol, inv) if hi > 0 else None
            self._bwd = integrate(fld, y0, (0.0, lo), tol, inv) if lo < 0 else None
            return

        base = abs(tau)
        w0 = initial_state(TwistParam(pair, base))
        s0 = np.concatenate([w0.as_real(), [0.0, 0.0]])
        fld = _field(pair.p, pair.q, base)
        p, q = pair.p, pair.q

        def i1(s):
            return s[0] ** 2 + s[1] ** 2 + s[2] ** 2 + s[3] ** 2

        def i2(s):
            return (complex(s[0], s[1]) ** p * complex(s[2], s[3]) ** q).imag

        inv = {"I1": (i1, 1.0), "I2": (i2, -2.0 * base)}
        self._fwd = integrate(fld, s0, (0.0, hi), tol, inv) if hi > 0 else None
        self._bwd = integrate(fld, s0, (0.0, lo), tol, inv) if lo < 0 else None

    # -- raw state access ---------------------------------------------------

    def _raw(self, t):
        t = float(t)
        traj = self._fwd if t >= 0.0 else self._bwd
        if traj is None or not traj.covers(t):
            raise ValueError(f"t={t} outside integrated span [{self.t_lo}, {self.t_hi}]")
        return traj(t)

    def state(self, t) -> np.ndarray:
        """Real 6-vector (Re w1, Im w1, Re w2, Im w2, psi1, psi2)."""
        if self._tau0:
            y, ydot = self._raw(t)
            y = min(max(y, 0.0), 1.0)
            w1 = math.sqrt(1.0 - y)
            if self.param.pair.p == 1 and t < 0.0:
                w1 = -w1
            return np.array([w1, 0.0, math.sqrt(y), 0.0, 0.0, 0.0])
        s = self._raw(t)
        return s * _CONJ if self._neg else s

    def w(self, t) -> tuple[complex, complex]:
        s = self.state(t)
        return complex(s[0], s[1]), complex(s[2], s[3])

    def y(self, t) -> float:
        if self._tau0:
            return float(min(max(self._raw(t)[0], 0.0), 1.0))
        s = self._raw(t)
        return float(s[2] ** 2 + s[3] ** 2)

    def ydot(self, t) -> float:
        if self._tau0:
            return float(self._raw(t)[1])
        w1, w2 = self.w(t)
        return -2.0 * (w1**self.param.pair.p * w2**self.param.pair.q).real

    def psi(self, t) -> tuple[float, float]:
        s = self.state(t)
        return float(s[4]), float(s[5])

    # -- bookkeeping ----------------------------------------------------------

    @property
    def drift(self) -> dict:
        out: dict[str, float] = {}
        for traj in (self._fwd, self._bwd):
            if traj is not None:
                for k, v in traj.drift.items():
                    out[k] = max(out.get(k, 0.0), v)
        return out

    @property
    def pieces(self) -> list[Trajectory]:
        return [t for t in (self._fwd, self._bwd) if t is not None]


def solve_w(param: TwistParam, t_span, tol: Tolerances = Tolerances()) -> TwistTrajectory:
    """Integrate the canonical curve over an interval containing 0."""
    return TwistTrajectory(param, t_span, tol)


def conjugate_family_check(param: TwistParam, samples: int = 50,
                           t_max: float | None = None,
                           tol: Tolerances = Tolerances()) -> float:
    """max |w_{-tau}(t) - conj(w_tau(t))| over a sample grid.

    The -tau member is integrated directly from its own initial condition
    (bypassing the conjugation shortcut used by :func:`solve_w`), so the
    two sides are genuinely independent integrations.
    """
    if t_max is None:
        t_max = 2.0
    tau = abs(param.tau)
    plus = solve_w(TwistParam(param.pair, tau), (0.0, t_max), tol)
    if tau == 0.0:
        return max(abs(complex(*plus.state(t)[:2].tolist()).imag) +
                   abs(complex(*plus.state(t)[2:4].tolist()).imag)
                   for t in np.linspace(0.0, t_max, samples))
    pair = param.pair
    w0 = initial_state(TwistParam(pair, -tau))
    s0 = np.concatenate([w0.as_real(), [0.0, 0.0]])
    minus = integrate(_field(pair.p, pair.q, -tau), s0, (0.0, t_max), tol)
    res = 0.0
    for t in np.linspace(0.0, t_max, samples):
        a1, a2 = plus.w(t)
        s = minus(t)
        res = max(res, abs(complex(s[0], s[1]) - a1.conjugate()),
                  abs(complex(s[2], s[3]) - a2.conjugate()))
    return res
