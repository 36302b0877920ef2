"""Deterministic initial-value solver with dense output and event location.

Thin layer over scipy's DOP853 (embedded Runge-Kutta of order 8 with a
7th-order continuous extension).  Everything downstream talks to
:class:`Trajectory` and :func:`locate_event`; nothing else in the package
calls scipy's integrators directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq


class IntegrationError(RuntimeError):
    """Step-size underflow or non-finite field evaluation.

    ``last_time`` holds the furthest time the integrator reached.
    """

    def __init__(self, message, last_time=None):
        super().__init__(message)
        self.last_time = last_time


class EventError(RuntimeError):
    """No sign change of the event function in the given bracket."""


@dataclass(frozen=True)
class Tolerances:
    """Integrator tolerances.

    event_tol is in time units and must not exceed abs_tol so that event
    times are at least as accurate as the states they are read from.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_step: float = np.inf
    event_tol: float = 1e-13

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "max_step", "event_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.event_tol > self.abs_tol:
            raise ValueError("event_tol must not exceed abs_tol")


@dataclass
class Trajectory:
    """Dense-output solution of an autonomous first-order system.

    States are real vectors; complex pairs are stored as consecutive
    (re, im) components.  ``drift`` records, for each named invariant,
    the maximum deviation from its reference value over the accepted
    integration steps.  Immutable after construction in practice: nothing
    in the package mutates a built trajectory.
    """

    t0: float
    t1: float
    time_grid: np.ndarray
    states: np.ndarray            # shape (len(time_grid), dim)
    interpolant: object           # scipy OdeSolution
    field: object                 # the right-hand side, kept for derivatives
    tol: Tolerances
    drift: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def __call__(self, t):
        """State at time t (scalar -> 1-d array, array -> dim x len)."""
        return self.interpolant(t)

    def derivative(self, t):
        """Time derivative at t, evaluated through the field."""
        return np.asarray(self.field(t, self.interpolant(t)), dtype=float)

    def covers(self, t) -> bool:
        lo, hi = min(self.t0, self.t1), max(self.t0, self.t1)
        return bool(np.all((np.asarray(t) >= lo - 1e-12) & (np.asarray(t) <= hi + 1e-12)))


def integrate(field, state0, span, tol: Tolerances = Tolerances(),
              invariants=None) -> Trajectory:
    """Integrate ``state' = field(t, state)`` over span = (t0, t1).

    Backward integration (t1 < t0) is allowed.  ``invariants`` maps a name
    to ``(fn, reference)``; the drift of ``fn(state)`` from ``reference``
    is recorded over the accepted steps.
    """
    t0, t1 = float(span[0]), float(span[1])
    y0 = np.asarray(state0, dtype=float)
    if t0 == t1:
        raise ValueError("empty integration span")
    sol = solve_ivp(field, (t0, t1), y0, method="DOP853",
                    rtol=tol.rel_tol, atol=tol.abs_tol,
                    max_step=tol.max_step, dense_output=True)
    if not sol.success:
        last = sol.t[-1] if len(sol.t) else t0
        raise IntegrationError(
            f"integration stalled at t={last!r}: {sol.message}", last_time=last)
    traj = Trajectory(t0=t0, t1=t1, time_grid=sol.t, states=sol.y.T,
                      interpolant=sol.sol, field=field, tol=tol)
    if invariants:
        for name, (fn, ref) in invariants.items():
            vals = np.array([fn(s) for s in traj.states])
            traj.drift[name] = float(np.max(np.abs(vals - ref)))
    return traj


def _grid_bracket(h, ta, tb, n=400):
    """First sign-change subinterval of h on [ta, tb], scanning from ta."""
    ts = np.linspace(ta, tb, n)
    vals = np.array([h(t) for t in ts])
    if vals[0] == 0.0:
        return ta, ta
    sign0 = np.sign(vals[0])
    for i in range(1, n):
        if vals[i] == 0.0 or np.sign(vals[i]) != sign0:
            return ts[i - 1], ts[i]
    raise EventError(f"no sign change of event function in [{ta}, {tb}]")


def locate_event(traj: Trajectory, g, bracket, g_prime=None) -> float:
    """First zero of ``g(t, state(t))`` in the bracket, on the dense output.

    The bracket endpoints must produce a sign change of g (a grid scan is
    used to localise the first crossing when g wiggles).  Refinement is
    bisection/Brent on the interpolant, followed by one Newton step when
    ``g_prime`` (dg/dt along the trajectory) is supplied.
    """
    ta, tb = float(bracket[0]), float(bracket[1])
    if not (traj.covers(ta) and traj.covers(tb)):
        raise ValueError("bracket not covered by trajectory")

    def h(t):
        return g(t, traj(t))

    a, b = _grid_bracket(h, ta, tb)
    if a == b:
        return a
    a, b = min(a, b), max(a, b)
    t_star = brentq(h, a, b, xtol=traj.tol.event_tol, rtol=4 * np.finfo(float).eps)
    if g_prime is not None:
        deriv = g_prime(t_star, traj(t_star))
        if deriv != 0.0:
            step = h(t_star) / deriv
            if abs(step) < 10 * traj.tol.event_tol:
                t_star -= step
    lo, hi = min(ta, tb), max(ta, tb)
    return float(min(max(t_star, lo), hi))
