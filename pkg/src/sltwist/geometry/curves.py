"""Explicit curve families: contact-stationary twists and planar-phase circles."""

from __future__ import annotations

import math

import numpy as np

from ..twisted_curve import AdmissiblePair
from .immersion import CurveSampler

__all__ = [
    "cs_curve", "cs_parameters", "cs_curve_sampler", "cs_residual",
    "cs_closing_period", "hs_curve", "hs_curve_sampler",
]


def cs_parameters(pair: AdmissiblePair, c: float) -> tuple[float, float]:
    """Phase-drift parameters (a, b) of the explicit twisted CS curve.

    a = pi/2 and b = sin^(q-2)c cos^(p-2)c (p sin^2 c - q cos^2 c);
    b = 0 exactly when tan^2 c = q/p, the minimal (untwisted-phase) case.
    """
    if not 0.0 < c < math.pi / 2:
        raise ValueError("c must lie in (0, pi/2)")
    p, q = pair.p, pair.q
    s, co = math.sin(c), math.cos(c)
    b = s ** (q - 2) * co ** (p - 2) * (p * s * s - q * co * co)
    return math.pi / 2.0, b


def cs_curve(pair: AdmissiblePair, c: float, t) -> tuple[complex, complex]:
    """The explicit contact-stationary curve at angle c.

    w = (cos c e^{i t sin^q c cos^(p-2) c}, sin c e^{-i t sin^(q-2) c cos^p c}).
    The rotation rates are pinned by the defining relation itself: the
    first equality forces rate2/rate1 = cot^2 c and matching the modulus
    of e^{i(a+bt)} conj(w1)^p conj(w2)^q forces rate1 = sin^q c cos^(p-2) c
    (these also reproduce the homogeneous curve at the extreme twist).
    """
    if not 0.0 < c < math.pi / 2:
        raise ValueError("c must lie in (0, pi/2)")
    p, q = pair.p, pair.q
    s, co = math.sin(c), math.cos(c)
    rate1 = s**q * co ** (p - 2)
    rate2 = s ** (q - 2) * co**p
    return (co * np.exp(1j * rate1 * np.asarray(t)),
            s * np.exp(-1j * rate2 * np.asarray(t)))


def cs_curve_sampler(pair: AdmissiblePair, c: float) -> CurveSampler:
    p, q = pair.p, pair.q
    s, co = math.sin(c), math.cos(c)
    rate1 = s**q * co ** (p - 2)
    rate2 = s ** (q - 2) * co**p

    def fn(t):
        return (co * complex(math.cos(rate1 * t), math.sin(rate1 * t)),
                s * complex(math.cos(rate2 * t), -math.sin(rate2 * t)))

    def dfn(t):
        w1, w2 = fn(t)
        return (1j * rate1 * w1, -1j * rate2 * w2)

    return CurveSampler(fn, dfn, name=f"CS curve ({p},{q}) c={c}")


def cs_residual(pair: AdmissiblePair, c: float,
                samples: int = 100, t_max: float = 20.0) -> tuple[float, float, float]:
    """(a, b, residual) of the defining relation of the CS curve.

    Checks conj(w1) w1' = -conj(w2) w2' = e^{i(a+bt)} conj(w1)^p conj(w2)^q
    pointwise with the analytic parameterisation.
    """
    a, b = cs_parameters(pair, c)
    sampler = cs_curve_sampler(pair, c)
    p, q = pair.p, pair.q
    res = 0.0
    for t in np.linspace(-t_max, t_max, samples):
        w1, w2 = sampler(t)
        d1, d2 = sampler.derivative(t)
        lhs1 = w1.conjugate() * d1
        lhs2 = -w2.conjugate() * d2
        rhs = (np.exp(1j * (a + b * t))
               * w1.conjugate() ** p * w2.conjugate() ** q)
        res = max(res, abs(lhs1 - rhs), abs(lhs2 - rhs))
    return a, b, float(res)


def cs_closing_period(pair: AdmissiblePair, m: int, n: int) -> tuple[float, float]:
    """(c, period) of the closed CS curve with tan^2 c = m/n (coprime).

    The two factors rotate at rates whose ratio is tan^2 c; the curve
    closes after T = 2 pi m / rate1 = 2 pi n / rate2.
    """
    if math.gcd(m, n) != 1 or m <= 0 or n <= 0:
        raise ValueError("m, n must be coprime positive integers")
    c = math.atan(math.sqrt(m / n))
    p, q = pair.p, pair.q
    rate1 = math.sin(c) ** q * math.cos(c) ** (p - 2)
    return c, 2.0 * math.pi * m / rate1


def hs_curve(m: int, n: int, s) -> np.ndarray:
    """The closed planar-phase curve labelled by coprime (m, n) in S^3.

    gamma(s) = (sqrt(n) e^{i s sqrt(m/n)}, i sqrt(m) e^{-i s sqrt(n/m)})
    / sqrt(m+n), periodic with period 2 pi sqrt(m n).
    """
    if math.gcd(m, n) != 1 or m <= 0 or n <= 0:
        raise ValueError("m, n must be coprime positive integers")
    root = math.sqrt(m + n)
    s = np.asarray(s, dtype=float)
    return np.array([
        math.sqrt(n) / root * np.exp(1j * s * math.sqrt(m / n)),
        1j * math.sqrt(m) / root * np.exp(-1j * s * math.sqrt(n / m)),
    ])


def hs_curve_sampler(m: int, n: int) -> CurveSampler:
    root = math.sqrt(m + n)
    r1 = math.sqrt(m / n)
    r2 = math.sqrt(n / m)

    def fn(t):
        z = hs_curve(m, n, t)
        return complex(z[0]), complex(z[1])

    def dfn(t):
        w1, w2 = fn(t)
        return 1j * r1 * w1, -1j * r2 * w2

    return CurveSampler(fn, dfn, name=f"HS curve ({m},{n})")
