"""Softmax calculus behind the lower bound and the constant system (sigma, epsilon, delta).

Everything here is floating point. The lower inequality is checked numerically: analytic
minima plus a grid sweep, with an absolute slack of 1e-9.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .staircase import Point2, Staircase

LOG2 = math.log(2.0)
LOG3 = math.log(3.0)
LOG4 = math.log(4.0)
SLACK = 1e-9


class SolverError(RuntimeError):
    def __init__(self, msg, residuals=None):
        super().__init__(msg if residuals is None else f"{msg}; last residuals {residuals}")
        self.residuals = residuals


@dataclass(frozen=True)
class LowerConstants:
    sigma: float
    epsilon: float
    delta: float
    residuals: tuple = field(default=(), compare=False)

    @property
    def exponent(self) -> float:
        return 2.0 * self.delta / LOG3

    def to_json(self) -> str:
        fmt = lambda x: float(f"{x:.15g}")
        d = {"sigma": fmt(self.sigma), "epsilon": fmt(self.epsilon), "delta": fmt(self.delta),
             "residuals": [fmt(r) for r in self.residuals], "exponent": fmt(self.exponent)}
        return json.dumps(d, indent=1)


# Constants rounded to five digits; handy for checks that must not
# depend on the solver.
ROUNDED = LowerConstants(2.01979, 0.10995, 0.5667)


def sm(a, b):
    """log(e^a + e^b) without overflow."""
    return np.maximum(a, b) + np.log1p(np.exp(-np.abs(np.subtract(a, b))))


def f0(phi, tau, c: LowerConstants):
    e = c.epsilon
    return (sm((e - phi) * tau - LOG2, e) - e + sm(phi + LOG2, 0.0) * tau) / (1.0 + tau)


def f0_critical_phi(tau, c: LowerConstants):
    return ((tau - 1.0) * c.epsilon - LOG4) / (1.0 + tau)


def f1(phi, tau, c: LowerConstants):
    return sm(0.0, (tau - 1.0) * c.epsilon - phi * tau) / (1.0 + tau)


def f2(phi, tau, c: LowerConstants):
    return (sm(0.0, (tau - 1.0) * c.epsilon - phi * tau) + (phi + LOG2) * tau) / (1.0 + tau)


def residuals(sigma: float, epsilon: float) -> tuple:
    c = LowerConstants(sigma, epsilon, 0.0)
    a = float(f1(-LOG2, sigma, c))
    r1 = a - float(f1(-LOG2, 1.0 / sigma, c))
    r2 = a - float(f0(f0_critical_phi(1.0 / sigma, c), 1.0 / sigma, c))
    return r1, r2


def _finish(sigma: float, epsilon: float) -> LowerConstants:
    c = LowerConstants(sigma, epsilon, 0.0)
    delta = float(f1(-LOG2, sigma, c))
    c = LowerConstants(sigma, epsilon, delta, residuals(sigma, epsilon))
    if not f0(f0_critical_phi(sigma, c), sigma, c) > delta:
        raise SolverError("sigma branch of f0 does not stay above delta")
    return c


def _newton(tolerance: float, x0=(2.0, 0.1), max_iter: int = 60):
    x = np.array(x0, dtype=float)
    r = np.array(residuals(*x))
    for _ in range(max_iter):
        if np.max(np.abs(r)) < tolerance:
            return x, r
        J = np.empty((2, 2))
        for k in range(2):
            hk = 1e-7 * max(1.0, abs(x[k]))
            dx = np.zeros(2)
            dx[k] = hk
            J[:, k] = (np.array(residuals(*(x + dx))) - np.array(residuals(*(x - dx)))) / (2 * hk)
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            return None, r
        t = 1.0
        # damping: halve until the residual norm drops
        while t > 1e-6:
            xn = x + t * step
            if xn[0] > 1.0:
                rn = np.array(residuals(*xn))
                if np.max(np.abs(rn)) < np.max(np.abs(r)):
                    break
            t *= 0.5
        else:
            return None, r
        x, r = xn, rn
    return (x, r) if np.max(np.abs(r)) < tolerance else (None, r)


def _bisect(fn, lo, hi, tol):
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise SolverError("no sign change in bracket")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def _nested_bisection(tolerance: float, box=((1.5, 2.5), (0.0, 0.3))):
    """r1 is monotone in epsilon for fixed sigma; the outer search drives r2."""
    (s_lo, s_hi), (e_lo, e_hi) = box

    def eps_of(sigma):
        return _bisect(lambda e: residuals(sigma, e)[0], e_lo, e_hi, 1e-15)

    def outer(sigma):
        return residuals(sigma, eps_of(sigma))[1]

    sigma = _bisect(outer, s_lo, s_hi, 1e-15)
    eps = eps_of(sigma)
    r = np.array(residuals(sigma, eps))
    if np.max(np.abs(r)) >= tolerance:
        raise SolverError("bisection did not reach tolerance", tuple(r))
    return np.array([sigma, eps]), r


def solve_constants(tolerance: float = 1e-10, method: str = "newton") -> LowerConstants:
    """Solve the two-equation system for (sigma, epsilon) and set delta."""
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    x = None
    if method == "newton":
        x, r = _newton(tolerance)
    if x is None:
        x, r = _nested_bisection(tolerance)
    return _finish(float(x[0]), float(x[1]))


def exponent(delta: float) -> float:
    return 2.0 * delta / LOG3


def lemma_minima(c: LowerConstants, grid: int = 10_000) -> dict:
    """Minima of f0 and max(f1, f2) per branch; analytic points plus a sweep on [-20, 20]."""
    phis = np.linspace(-20.0, 20.0, grid)
    out = {}
    for name, tau in (("sigma", c.sigma), ("inv_sigma", 1.0 / c.sigma)):
        m0 = min(float(f0(f0_critical_phi(tau, c), tau, c)), float(np.min(f0(phis, tau, c))))
        g = np.maximum(f1(phis, tau, c), f2(phis, tau, c))
        m12 = min(float(max(f1(-LOG2, tau, c), f2(-LOG2, tau, c))), float(np.min(g)))
        out[name] = (m0, m12)
    return out


def verify_lower_lemma(c: LowerConstants, grid: int = 10_000) -> bool:
    if grid < 100:
        raise ValueError("grid must be at least 100")
    mins = lemma_minima(c, grid)
    return all(m0 >= c.delta - SLACK and m12 >= c.delta - SLACK for m0, m12 in mins.values())


def base_case_bound(c: LowerConstants) -> float:
    return math.exp(c.epsilon - LOG3 / c.sigma)


def verify_base_case(c: LowerConstants) -> bool:
    """(3, 2) lies in the curve's upper closure."""
    return 2.0 >= base_case_bound(c)


def curve_eta(omega, c: LowerConstants):
    """Log-height of the seed curve at log-width omega."""
    omega = np.asarray(omega, dtype=float)
    return c.epsilon + np.maximum(-omega / c.sigma, -omega * c.sigma)


def curve_front(c: LowerConstants, omega_range=(-5.0, 5.0), samples: int = 101) -> Staircase:
    if samples < 2:
        raise ValueError("samples must be at least 2")
    om = np.linspace(omega_range[0], omega_range[1], samples)
    eta = curve_eta(om, c)
    pts = tuple(Point2(float(math.exp(a)), float(math.exp(b))) for a, b in zip(om, eta))
    return Staircase(pts, False, None)
