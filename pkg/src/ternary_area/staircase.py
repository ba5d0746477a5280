"""Upper-closed sets in the positive quadrant, stored by their minimal points.

A staircase is the antichain of minimal points, sorted by increasing width and
strictly decreasing height. Coordinates are either all exact (``Fraction``) or
all binary floats; the same code paths serve both.

Order convention: ``set_leq(a, b)`` holds when ``C(b)`` is a subset of ``C(a)``,
so a *smaller* staircase is a *larger* set of achievable sizes.
"""
from __future__ import annotations

import bisect
import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, NamedTuple, Optional, Sequence


class StaircaseError(ValueError):
    """Raised on empty input or non-positive coordinates."""


class Point2(NamedTuple):
    w: object
    h: object


# (construction id, side source index, bottom source index); None for seeds
Tag = Optional[tuple]


@dataclass(frozen=True)
class Staircase:
    points: tuple
    exact: bool
    tags: Optional[tuple] = None

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @property
    def numeric_kind(self) -> str:
        return "exact" if self.exact else "float"

    @property
    def widths(self) -> list:
        return [p.w for p in self.points]

    @property
    def heights(self) -> list:
        return [p.h for p in self.points]

    def same_points(self, other: "Staircase") -> bool:
        return self.points == other.points


def _is_exact(x) -> bool:
    return isinstance(x, Rational) and not isinstance(x, bool)


def _coerce(p, exact: bool) -> Point2:
    w, h = p
    if exact:
        return Point2(Fraction(w), Fraction(h))
    return Point2(float(w), float(h))


def normalize(points: Iterable, tags: Optional[Iterable] = None, exact: Optional[bool] = None) -> Staircase:
    """Antichain of the non-dominated points, sorted by width.

    Equal widths keep the smaller height. Exact duplicates keep the one whose
    tag sorts first, so construction 1 wins over 2 and then lower source indices.
    """
    pts = list(points)
    if not pts:
        raise StaircaseError("empty set")
    if exact is None:
        exact = all(_is_exact(p[0]) and _is_exact(p[1]) for p in pts)
    pts = [_coerce(p, exact) for p in pts]
    for p in pts:
        if not (p.w > 0 and p.h > 0):
            raise StaircaseError("domain")
    tag_list = list(tags) if tags is not None else None
    if tag_list is not None and len(tag_list) != len(pts):
        raise StaircaseError("tag count does not match point count")

    def key(i):
        t = tag_list[i] if tag_list is not None else None
        return (pts[i].w, pts[i].h, () if t is None else t)

    order = sorted(range(len(pts)), key=key)
    kept, kept_tags = [], []
    best_h = None
    for i in order:
        p = pts[i]
        if best_h is None or p.h < best_h:
            kept.append(p)
            kept_tags.append(tag_list[i] if tag_list is not None else None)
            best_h = p.h
    return Staircase(tuple(kept), exact, tuple(kept_tags) if tag_list is not None else None)


def staircase(points: Iterable, exact: Optional[bool] = None) -> Staircase:
    """Shorthand for ``normalize`` without tags."""
    return normalize(points, exact=exact)


def contains(s: Staircase, p) -> bool:
    """True iff ``p`` lies in the upper closure of ``s``."""
    pw, ph = p
    # rightmost minimal point with w <= pw has the smallest height among candidates
    i = bisect.bisect_right(s.widths, pw) - 1
    return i >= 0 and s.points[i].h <= ph


def set_leq(a: Staircase, b: Staircase) -> bool:
    """``C(b)`` is a subset of ``C(a)``: every minimal point of ``b`` is in ``a``."""
    if a.exact != b.exact:
        raise StaircaseError("numeric kind mismatch")
    ws = a.widths
    hs = a.heights
    for q in b.points:
        i = bisect.bisect_right(ws, q.w) - 1
        if i < 0 or hs[i] > q.h:
            return False
    return True


def shift(s: Staircase, factor) -> Staircase:
    """Scale every coordinate by ``factor`` (the multiplicative form of a log shift)."""
    if s.exact:
        if not _is_exact(factor):
            raise StaircaseError("domain")
        factor = Fraction(factor)
    else:
        factor = float(factor)
    if not factor > 0:
        raise StaircaseError("domain")
    # scaling by a positive factor preserves the antichain order
    pts = tuple(Point2(p.w * factor, p.h * factor) for p in s.points)
    return Staircase(pts, s.exact, s.tags)


def _half(x, exact: bool):
    return x / 2 if exact else 0.5 * x


def _advance(s: Staircase, infinite: bool) -> Staircase:
    exact = s.exact
    half = Fraction(1, 2) if exact else 0.5
    one = 1
    pts = s.points
    cands, tags = [], []
    for i, l in enumerate(pts):
        wl2 = _half(l.w, exact)
        for j, b in enumerate(pts):
            if infinite:
                cands.append((2 * l.h + b.w, wl2 + max(wl2, b.h)))
            else:
                cands.append((2 * l.h + b.w, wl2 + max(wl2, b.h + half)))
            tags.append((1, i, j))
    for i, l in enumerate(pts):
        for j, b in enumerate(pts):
            if infinite:
                cands.append((max(2 * l.h, b.w), l.w + b.h))
            else:
                cands.append((max(2 * l.h + one, b.w), l.w + b.h))
            tags.append((2, i, j))
    return normalize(cands, tags, exact=exact)


def advance(s: Staircase) -> Staircase:
    """The finite advance: sizes reachable one level up from ``s`` by either construction."""
    return _advance(s, infinite=False)


def advance_inf(s: Staircase) -> Staircase:
    """Advance with the additive constants dropped; commutes with ``shift``."""
    return _advance(s, infinite=True)


def _ratio_max(q: Point2, p: Point2):
    return max(q.w / p.w, q.h / p.h)


def minimal_shift(a: Staircase, b: Staircase):
    """Smallest factor r with ``set_leq(b, shift(a, r))``.

    For each minimal point p of ``a`` the cheapest cover in ``b`` sits where
    ``q.w/p.w`` and ``q.h/p.h`` cross, found by bisection on the antichain.
    """
    if a.exact != b.exact:
        raise StaircaseError("numeric kind mismatch")
    bw, bh = b.widths, b.heights
    n = len(bw)
    worst = None
    for p in a.points:
        # first j with bw[j]*p.h >= bh[j]*p.w; the predicate is monotone in j
        lo, hi = 0, n
        while lo < hi:
            mid = (lo + hi) // 2
            if bw[mid] * p.h >= bh[mid] * p.w:
                hi = mid
            else:
                lo = mid + 1
        best = None
        for j in (lo - 1, lo):
            if 0 <= j < n:
                r = _ratio_max(b.points[j], p)
                if best is None or r < best:
                    best = r
        if worst is None or best > worst:
            worst = best
    return worst


def to_csv(s: Staircase) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    tags = s.tags or (None,) * len(s)
    if s.exact:
        wr.writerow(["w_num", "w_den", "h_num", "h_den", "construction", "src_l", "src_b"])
        for p, t in zip(s.points, tags):
            t = t or ("", "", "")
            wr.writerow([p.w.numerator, p.w.denominator, p.h.numerator, p.h.denominator, *t])
    else:
        wr.writerow(["w", "h", "construction"])
        for p, t in zip(s.points, tags):
            wr.writerow([repr(p.w), repr(p.h), t[0] if t else ""])
    return buf.getvalue()


def from_csv(text: str) -> Staircase:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise StaircaseError("empty set")
    fields = set(rows[0])
    pts, tags = [], []
    if {"w_num", "w_den", "h_num", "h_den"} <= fields:
        for r in rows:
            pts.append((Fraction(int(r["w_num"]), int(r["w_den"])), Fraction(int(r["h_num"]), int(r["h_den"]))))
            c = r.get("construction") or ""
            tags.append((int(c), int(r["src_l"]), int(r["src_b"])) if c else None)
        exact = True
    elif {"w", "h"} <= fields:
        for r in rows:
            pts.append((float(r["w"]), float(r["h"])))
            c = r.get("construction") or ""
            tags.append((int(c), -1, -1) if c else None)
        exact = False
    else:
        raise StaircaseError("unrecognised staircase header")
    return normalize(pts, tags, exact=exact)


def as_float(s: Staircase) -> Staircase:
    return Staircase(tuple(Point2(float(p.w), float(p.h)) for p in s.points), False, s.tags)


def from_pairs(pairs: Sequence) -> Staircase:
    """Exact staircase from integer or rational pairs."""
    return normalize([(Fraction(w), Fraction(h)) for w, h in pairs], exact=True)
