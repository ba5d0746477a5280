"""Exact induction certificates for the level-to-level growth factor."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .pareto import advance_integer, compute_fronts
from .staircase import Staircase, StaircaseError, advance, from_pairs, minimal_shift, set_leq, shift

LOG3 = math.log(3.0)
RHO_18 = Fraction(63761, 35808)


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class ExponentReport:
    delta: float
    exponent: float


def exponent(delta) -> ExponentReport:
    """Area exponent 2*delta/log 3 for per-level growth e^delta."""
    delta = float(delta)
    if delta < 0:
        raise ValueError("domain")
    return ExponentReport(delta, 2.0 * delta / LOG3)


def exponent_of_factor(rho) -> ExponentReport:
    return exponent(_log_fraction(Fraction(rho)))


def _log_fraction(q: Fraction) -> float:
    # log of a ratio of big integers without float overflow
    return math.log(q.numerator) - math.log(q.denominator)


def derive_shift_for_epsilon(epsilon: float) -> float:
    """Log-shift d large enough that every coordinate clears 1/(2(1-e^-eps)), plus one unit."""
    if not epsilon > 0:
        raise ValueError("domain")
    return math.log(1.0 / (2.0 * (1.0 - math.exp(-epsilon)))) + 1.0


@dataclass(frozen=True)
class InductionCertificate:
    base_level: int
    base_front: Staircase
    rho: Fraction
    next_front: Staircase

    def to_json(self) -> str:
        def pts(s):
            return [[str(p.w), str(p.h)] for p in s.points]

        return json.dumps({"base_level": self.base_level,
                           "rho": [str(self.rho.numerator), str(self.rho.denominator)],
                           "base_front": pts(self.base_front),
                           "next_front": pts(self.next_front)})

    @staticmethod
    def from_json(text: str) -> "InductionCertificate":
        try:
            d = json.loads(text)
            rho = Fraction(int(d["rho"][0]), int(d["rho"][1]))
            base = from_pairs([(Fraction(w), Fraction(h)) for w, h in d["base_front"]])
            nxt = from_pairs([(Fraction(w), Fraction(h)) for w, h in d["next_front"]])
            return InductionCertificate(int(d["base_level"]), base, rho, nxt)
        except (KeyError, TypeError, ValueError, ZeroDivisionError, StaircaseError) as e:
            raise CertificateError(f"format: {e}") from None


def _integral_odd(s: Staircase) -> bool:
    return all(p.w.denominator == 1 and p.h.denominator == 1 and p.w.numerator % 2 == 1 for p in s.points)


def exact_advance(s: Staircase) -> Staircase:
    """Advance an exact staircase, through the integer kernel when the front is integral."""
    if s.exact and _integral_odd(s):
        w = np.array([int(p.w) for p in s.points], dtype=np.int64)
        h = np.array([int(p.h) for p in s.points], dtype=np.int64)
        return advance_integer(w, h).staircase()
    return advance(s)


def verify_induction(cert: InductionCertificate) -> bool:
    """The next front is the advance of the base, and it contains the base scaled by rho."""
    if not (cert.base_front.exact and cert.next_front.exact):
        raise StaircaseError("numeric kind mismatch")
    if not isinstance(cert.rho, Fraction):
        raise StaircaseError("numeric kind mismatch")
    if cert.rho <= 0:
        return False
    if exact_advance(cert.base_front).points != cert.next_front.points:
        return False
    return set_leq(cert.next_front, shift(cert.base_front, cert.rho))


def induction_certificate(base_level: int = 18, fronts=None) -> InductionCertificate:
    if base_level < 1:
        raise ValueError("base_level must be at least 1")
    if fronts is None or len(fronts) < base_level + 1:
        fronts = compute_fronts(base_level + 1)
    a = fronts[base_level - 1].staircase()
    b = fronts[base_level].staircase()
    return InductionCertificate(base_level, a, minimal_shift(a, b), b)


def shift_monotone_instance(t: Staircase, factor) -> bool:
    """Instance of the advance/shift inequality: N(shift(T, c)) <= shift(N(T), c) for c >= 1."""
    return set_leq(advance(shift(t, factor)), shift(advance(t), factor))
