"""Fixed point of P(S) = shift(N_inf(S), -delta) in log coordinates, and exact certificates.

A boundary is a piecewise-linear log-height ``eta(omega)`` on a uniform grid,
extended outside the grid by two rays. ``apply_P`` evaluates the lower envelope
of both advance-at-infinity constructions over the *continuous* boundary:
construction 2 in closed form and construction 1 by a bounded 1-D minimisation
over the side generator. Enveloping only sample pairs biases the result by an
amount proportional to the grid step, which shows up as a spurious drift.
"""
from __future__ import annotations

import bisect
import gzip
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from .lower import LowerConstants, curve_eta, solve_constants
from .upper import RHO_18, ExponentReport, derive_shift_for_epsilon, exponent

LOG2 = math.log(2.0)
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class FixedPointError(RuntimeError):
    pass


@dataclass(frozen=True)
class LogBoundary:
    omega: np.ndarray
    eta: np.ndarray
    left_slope: float
    right_slope: float

    def __post_init__(self):
        om, eta = self.omega, self.eta
        if om.ndim != 1 or om.shape != eta.shape or len(om) < 2:
            raise FixedPointError("boundary needs matching 1-D samples")
        if not np.all(np.diff(om) > 0):
            raise FixedPointError("omega must be strictly increasing")
        if not np.all(np.diff(eta) < 0):
            raise FixedPointError("eta must be strictly decreasing")
        if not (self.left_slope < 0 and self.right_slope < 0):
            raise FixedPointError("asymptote slopes must be negative")

    def f(self, x):
        """eta at log-width x, with ray extension."""
        x = np.asarray(x, dtype=float)
        om, eta = self.omega, self.eta
        out = np.interp(x, om, eta)
        lo = x < om[0]
        hi = x > om[-1]
        out = np.where(lo, eta[0] + self.left_slope * (x - om[0]), out)
        out = np.where(hi, eta[-1] + self.right_slope * (x - om[-1]), out)
        return out

    def finv(self, y):
        """Log-width where the boundary reaches log-height y."""
        y = np.asarray(y, dtype=float)
        om, eta = self.omega, self.eta
        out = np.interp(-y, -eta, om)
        hi = y > eta[0]
        lo = y < eta[-1]
        out = np.where(hi, om[0] + (y - eta[0]) / self.left_slope, out)
        out = np.where(lo, om[-1] + (y - eta[-1]) / self.right_slope, out)
        return out

    def with_eta(self, eta: np.ndarray, fit_tails: bool = True, tail_fraction: float = 0.1) -> "LogBoundary":
        ls, rs = self.left_slope, self.right_slope
        if fit_tails:
            ls, rs = fit_slopes(self.omega, eta, tail_fraction)
        return LogBoundary(self.omega, eta, ls, rs)


def fit_slopes(om: np.ndarray, eta: np.ndarray, tail_fraction: float = 0.1) -> tuple:
    n = max(2, int(round(len(om) * tail_fraction)))
    ls = np.polyfit(om[:n], eta[:n], 1)[0]
    rs = np.polyfit(om[-n:], eta[-n:], 1)[0]
    return float(ls), float(rs)


def seed_boundary(c: LowerConstants, samples: int = 4001, span: tuple = (-25.0, 25.0)) -> LogBoundary:
    om = np.linspace(span[0], span[1], samples)
    return LogBoundary(om, curve_eta(om, c), -c.sigma, -1.0 / c.sigma)


def env2(b: LogBoundary, x: np.ndarray) -> np.ndarray:
    """Least log-height of construction 2 at log-width x.

    The side generator is the narrowest one with 2h_l <= X, the bottom the
    lowest one with w_b <= X; both are read off the continuous boundary.
    """
    return np.logaddexp(b.finv(x - LOG2), b.f(x))


def _c1_height(b: LogBoundary, x, wl):
    """Construction-1 log-height at log-width x with the side generator at log-width wl."""
    hl = b.f(wl)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        wb = x + np.log1p(-np.exp(hl + LOG2 - x))
    ok = np.isfinite(wb)
    hb = np.where(ok, b.f(np.where(ok, wb, 0.0)), np.inf)
    return np.logaddexp(wl - LOG2, np.maximum(wl - LOG2, hb))


def env1(b: LogBoundary, x: np.ndarray, upper: np.ndarray, samples: int = 192, refine: int = 48) -> np.ndarray:
    """Least log-height of construction 1 at log-width x.

    A feasible side generator needs 2h_l < X, so it sits right of finv(x - log 2);
    its width alone bounds the height, so anything right of ``upper`` cannot win.
    """
    lo = b.finv(x - LOG2)
    hi = np.maximum(upper, lo + 1e-9)
    t = np.linspace(0.0, 1.0, samples)
    out = np.full(len(x), np.inf)
    arg = np.zeros(len(x))
    chunk = max(1, 2_000_000 // samples)
    for s in range(0, len(x), chunk):
        sl = slice(s, s + chunk)
        wl = lo[sl, None] + (hi - lo)[sl, None] * t[None, :]
        v = _c1_height(b, x[sl, None], wl)
        i = np.argmin(v, axis=1)
        out[sl] = v[np.arange(len(i)), i]
        arg[sl] = wl[np.arange(len(i)), i]
    cell = (hi - lo) / (samples - 1)
    a = np.maximum(arg - cell, lo)
    c = np.minimum(arg + cell, hi)
    for _ in range(refine):
        p = c - GOLDEN * (c - a)
        q = a + GOLDEN * (c - a)
        fp = _c1_height(b, x, p)
        fq = _c1_height(b, x, q)
        left = fp < fq
        c = np.where(left, q, c)
        a = np.where(left, a, p)
    return np.minimum(out, _c1_height(b, x, 0.5 * (a + c)))


def envelope(b: LogBoundary, x: np.ndarray) -> np.ndarray:
    """log-height of the lower boundary of N_inf(S) at log-width x."""
    e2 = env2(b, x)
    return np.minimum(env1(b, x, e2), e2)


def apply_P(b: LogBoundary, delta_guess: float, fit_tails: bool = False) -> LogBoundary:
    """One application of P, resampled on the same omega grid."""
    x = b.omega + delta_guess
    eta = envelope(b, x) - delta_guess
    if not np.all(np.isfinite(eta)):
        raise FixedPointError("window too narrow")
    # strict decrease can fail only through float ties in flat numerical noise
    if not np.all(np.diff(eta) < 0):
        eta = _force_decreasing(eta)
    return b.with_eta(eta, fit_tails)


def _force_decreasing(eta: np.ndarray) -> np.ndarray:
    out = np.minimum.accumulate(eta)
    tie = np.concatenate(([False], np.diff(out) >= 0))
    if tie.any():
        out = out - np.cumsum(tie) * 1e-15
    return out


@dataclass
class FixedPointResult:
    boundary: LogBoundary
    residual: float
    delta: float
    iterations: int
    converged: bool
    drift: float
    history: list = field(default_factory=list)

    def __iter__(self):
        # unpacks as (boundary, residual)
        return iter((self.boundary, self.residual))


def interior_mask(b: LogBoundary, fraction: float = 0.5) -> np.ndarray:
    lo, hi = b.omega[0], b.omega[-1]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo) * fraction
    return np.abs(b.omega - mid) <= half


def drift_rate(old: LogBoundary, new: LogBoundary, mask: np.ndarray) -> float:
    """Diagonal translation per step: eta_new(w) ~ eta_old(w - g) + g."""
    slope = np.gradient(old.eta, old.omega)
    g = (new.eta - old.eta)[mask] / (1.0 - slope[mask])
    return float(np.median(g))


def iterate_to_fixed_point(seed: LogBoundary, delta_guess: float, max_iters: int = 2000, tol: float = 1e-9,
                           warmup: int = 20, blowup: float = 1e-3, correct_drift: bool = True,
                           fit_tails: bool = False, callback=None) -> FixedPointResult:
    """Iterate P until the interior residual drops below ``tol``.

    The rate is tuned on the fly: a persistent diagonal drift g means the
    trial delta is off by g, so delta is moved by the measured drift once the
    shape has settled. Drift beyond ``blowup`` per step after the warm-up
    means the trial rate is far from the true one.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    b = seed
    delta = float(delta_guess)
    mask = interior_mask(b)
    history = []
    residual = math.inf
    g = 0.0
    last_fix = 0
    for k in range(1, max_iters + 1):
        nb = apply_P(b, delta, fit_tails)
        diff = nb.eta - b.eta
        residual = float(np.max(np.abs(diff[mask])))
        g = drift_rate(b, nb, mask)
        history.append((k, delta, residual, g))
        if callback is not None:
            callback(k, delta, residual, g)
        b = nb
        if k >= warmup and abs(g) > blowup:
            raise FixedPointError("delta too small" if g > 0 else "delta too large")
        if residual < tol:
            return FixedPointResult(b, residual, delta, k, True, g, history)
        if correct_drift and k - last_fix >= warmup:
            # the shape has settled when the residual is almost a pure translation
            slope = np.gradient(b.eta, b.omega)
            pure = g * (1.0 - slope[mask])
            if np.max(np.abs(diff[mask] - pure)) < 0.1 * abs(g * 1.0) + tol:
                delta += g
                last_fix = k
    return FixedPointResult(b, residual, delta, max_iters, False, g, history)


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class UpperCertificate:
    points: tuple  # exact (w, h) pairs, strict antichain
    rho: Fraction
    window: tuple  # (w_lo, w_hi) as Fractions
    epsilon_margin: float
    derived_d: float

    def to_json(self) -> str:
        def q(x: Fraction):
            return [str(x.numerator), str(x.denominator)]

        d = {"points": [q(w) + q(h) for w, h in self.points], "rho": q(self.rho),
             "window": [q(self.window[0]), q(self.window[1])],
             "epsilon_margin": self.epsilon_margin, "derived_d": self.derived_d}
        return json.dumps(d, separators=(",", ":"))

    @staticmethod
    def from_json(text: str) -> "UpperCertificate":
        try:
            d = json.loads(text)
            fr = lambda a: Fraction(int(a[0]), int(a[1]))
            pts = tuple((Fraction(int(p[0]), int(p[1])), Fraction(int(p[2]), int(p[3]))) for p in d["points"])
            cert = UpperCertificate(pts, fr(d["rho"]), (fr(d["window"][0]), fr(d["window"][1])),
                                    float(d["epsilon_margin"]), float(d["derived_d"]))
        except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError) as e:
            raise FixedPointError(f"format: {e}") from None
        cert.check_format()
        return cert

    def check_format(self) -> None:
        if not self.points:
            raise FixedPointError("format: no points")
        for (w0, h0), (w1, h1) in zip(self.points, self.points[1:]):
            if not (w0 < w1 and h0 > h1):
                raise FixedPointError("format: points are not a sorted strict antichain")
        if any(w <= 0 or h <= 0 for w, h in self.points):
            raise FixedPointError("format: non-positive coordinate")
        if not self.rho > 1:
            raise FixedPointError("format: rho must exceed 1")
        if not self.window[0] < self.window[1]:
            raise FixedPointError("format: empty window interval")


def save_certificate(cert: UpperCertificate, path) -> None:
    path = Path(path)
    data = cert.to_json().encode()
    if path.suffix == ".gz":
        # fixed mtime keeps the compressed bytes reproducible
        with open(path, "wb") as fh, gzip.GzipFile(fileobj=fh, mode="wb", mtime=0, filename="") as gz:
            gz.write(data)
    else:
        path.write_bytes(data)


def load_certificate(path) -> UpperCertificate:
    path = Path(path)
    raw = path.read_bytes()
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    return UpperCertificate.from_json(raw.decode())


def shipped_certificate_path() -> Path:
    return Path(__file__).with_name("data") / "upper_certificate.json.gz"


def _fraction_near(x: float, max_den: int = 10**6) -> Fraction:
    return Fraction(x).limit_denominator(max_den)


def extract_certificate(b: LogBoundary, delta_prime: float, window: tuple = (-1.5, 1.5),
                        spacing: float = 1.5e-4, epsilon_margin: float = 1e-5, coarse: float = 0.25,
                        extension: float = 3.0, scale_digits: int = 15) -> UpperCertificate:
    """Rational staircase T from a converged boundary plus a rational rate rho.

    rho is e^delta_prime rounded down to denominator 10^6. The fine part of T is
    sampled at omega = i*s with s dividing log(rho) (up to a hair), so each
    target's bottom witness is exactly m grid steps to its right. ``window`` is
    in log-width units and bounds where the shifted points are checked.
    """
    a, z = window
    if not a < z:
        raise FixedPointError("window not covered by samples")
    rho = Fraction(math.floor(math.exp(delta_prime) * 10**6), 10**6)
    if not rho > 1:
        raise FixedPointError("delta_prime too small for a rational rho")
    dstar = math.log(rho.numerator) - math.log(rho.denominator) - 1e-12
    m = max(1, math.ceil(dstar / spacing))
    s = dstar / m
    # span needed by the witnesses: bottoms up to the window's right end,
    # side generators where 2h_l meets the window edges
    side = b.finv(np.array([z - LOG2, a - dstar - LOG2]))
    lo = min(a - dstar, float(side.min())) - 0.05
    hi = max(z, float(side.max())) + 0.05
    if lo < b.omega[0] or hi > b.omega[-1]:
        raise FixedPointError("window not covered by samples")
    fine = np.arange(math.floor(lo / s), math.ceil(hi / s) + 1) * s
    ext_lo = min(lo, a) - extension
    ext_hi = max(hi, z) + extension
    left = np.arange(fine[0] - coarse, ext_lo - coarse, -coarse)[::-1]
    right = np.arange(fine[-1] + coarse, ext_hi + coarse, coarse)
    om = np.concatenate((left, fine, right))
    eta = b.f(om)
    D = 10**scale_digits
    pts = []
    for wv, hv in zip(np.exp(om), np.exp(eta)):
        W = int(round(float(wv) * D))
        H = math.ceil(float(hv) * D)
        pts.append((Fraction(W, D), Fraction(H, D)))
    pts.sort()
    clean = []
    for w, h in pts:
        if not clean or (w > clean[-1][0] and h < clean[-1][1]):
            clean.append((w, h))
    window_w = (_fraction_below(math.exp(a)), _fraction_above(math.exp(z)))
    return UpperCertificate(tuple(clean), rho, window_w, epsilon_margin, derive_shift_for_epsilon(epsilon_margin))


def _fraction_below(x: float) -> Fraction:
    q = Fraction(x).limit_denominator(10**6)
    return q if q <= Fraction(x) else q - Fraction(1, 10**6)


def _fraction_above(x: float) -> Fraction:
    q = Fraction(x).limit_denominator(10**6)
    return q if q >= Fraction(x) else q + Fraction(1, 10**6)


@dataclass
class VerificationReport:
    passed: bool
    checked: int
    failures: list
    margin: Optional[float]
    exponent: ExponentReport
    exponent_with_margin: ExponentReport
    warnings: list
    edge_witnesses: int
    by_construction: dict

    def to_json(self) -> str:
        d = {"passed": self.passed, "checked": self.checked, "failures": self.failures[:20],
             "margin": self.margin, "delta": self.exponent.delta, "exponent": self.exponent.exponent,
             "exponent_with_epsilon": self.exponent_with_margin.exponent, "warnings": self.warnings,
             "edge_witnesses": self.edge_witnesses, "by_construction": self.by_construction,
             "scope": "window-restricted inequality verified exactly; asymptotic step by the epsilon-shift argument, instance-checked"}
        return json.dumps(d, indent=1)


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def verify_certificate(cert: UpperCertificate, fail_fast: bool = False, max_failures: int = 50) -> VerificationReport:
    """Exact check that every shifted point inside the window lies in C(N_inf(T)).

    All comparisons are on Python integers after clearing denominators; floats
    appear only in the reported margin and exponent. ``margin`` is the height
    slack of the tightest target under its chosen witness.
    """
    cert.check_format()
    L = 1
    for w, h in cert.points:
        L = _lcm(_lcm(L, w.denominator), h.denominator)
    W = [int(w * L) for w, _ in cert.points]
    H = [int(h * L) for _, h in cert.points]
    negH = [-x for x in H]
    k = len(W)
    p, q = cert.rho.numerator, cert.rho.denominator
    (lo_n, lo_d), (hi_n, hi_d) = ((x.numerator, x.denominator) for x in cert.window)
    failures, warnings = [], []
    checked = 0
    edge = 0
    worst = None  # largest used fraction of the available height, as (num, den)
    counts = {"1": 0, "2": 0}
    for t in range(k):
        X = p * W[t]  # shifted width in units of 1/(q*L)
        # window test: lo <= X/(q L) <= hi
        if X * lo_d < lo_n * q * L or X * hi_d > hi_n * q * L:
            continue
        checked += 1
        Y = p * H[t]
        best = None
        # construction 2: lowest bottom with w_b <= X and narrowest side with 2h_l <= X
        bi = bisect.bisect_right(W, X // q) - 1
        li = bisect.bisect_left(negH, -(X // (2 * q)))
        if bi >= 0 and li < k:
            cw = max(2 * H[li], W[bi]) * q
            ch = (W[li] + H[bi]) * q
            if cw <= X and ch <= Y:
                best = (2, li, bi, cw, X, ch, Y)
        if best is None:
            best = _construction_one(W, H, negH, X, Y, q)
        if best is None:
            failures.append(t)
            if fail_fast or len(failures) >= max_failures:
                warnings.append(f"stopped after {len(failures)} failing targets")
                break
            continue
        c, li, bi, cw, xx, ch, yy = best
        counts[str(c)] += 1
        if li in (0, k - 1) or bi in (0, k - 1):
            edge += 1
        # widths are tight by design (bottom witnesses sit on the rho grid), so the
        # informative slack is in the height
        if worst is None or ch * worst[1] > worst[0] * yy:
            worst = (ch, yy)
    if checked == 0:
        warnings.append("empty window")
    passed = not failures
    margin = None
    if worst is not None and passed:
        margin = float(1 - Fraction(worst[0], worst[1]))
    if edge:
        warnings.append(f"{edge} witnesses use an end point of the staircase")
    rho_log = math.log(p) - math.log(q)
    return VerificationReport(passed, checked, failures, margin, exponent(rho_log),
                              exponent(rho_log + cert.epsilon_margin), warnings, edge, counts)


def _construction_one(W, H, negH, X, Y, q):
    """Exhaustive exact search for a construction-1 cover of (X, Y)."""
    k = len(W)
    # 2h_l < X/q, and w_l <= height <= Y/q bounds the side index from above
    start = bisect.bisect_left(negH, -((X // q) // 2))
    stop = bisect.bisect_right(W, Y // q)
    for li in range(start, stop):
        room = X // q - 2 * H[li]
        if room <= 0:
            continue
        bi = bisect.bisect_right(W, room) - 1
        if bi < 0:
            continue
        cw = (2 * H[li] + W[bi]) * q
        # height w_l/2 + max(w_l/2, h_b), doubled to stay integral
        ch2 = (W[li] + max(W[li], 2 * H[bi])) * q
        if cw <= X and ch2 <= 2 * Y:
            return (1, li, bi, cw, X, ch2, 2 * Y)
    return None


def certify(constants: Optional[LowerConstants] = None, samples: int = 4001, span: tuple = (-25.0, 25.0),
            tol: float = 1e-9, max_iters: int = 2000, offset: float = 1e-4, window: tuple = (-1.5, 1.5),
            callback=None) -> tuple:
    """Full pipeline: seed, iterate, extract; returns (result, certificate)."""
    c = constants or solve_constants(1e-12)
    seed = seed_boundary(c, samples, span)
    res = iterate_to_fixed_point(seed, c.delta, max_iters=max_iters, tol=tol, callback=callback)
    cert = extract_certificate(res.boundary, res.delta + offset, window)
    return res, cert
