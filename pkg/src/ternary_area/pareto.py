"""Pareto fronts of symmetric 1-2 drawing sizes, level by level.

All front coordinates are integers (widths odd), so the advance runs on int64
arrays: for odd ``w_l`` the construction-1 height ``w_l/2 + max(w_l/2, h_b + 1/2)``
equals ``max(w_l, (w_l+1)//2 + h_b)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .drawing import LEAF, ConstructionTree, node
from .staircase import Point2, Staircase

_BIG = np.iinfo(np.int64).max


@dataclass(frozen=True)
class LevelFront:
    level: int
    widths: np.ndarray
    heights: np.ndarray
    construction: np.ndarray  # 0 at level 1
    src_l: np.ndarray
    src_b: np.ndarray

    def __len__(self) -> int:
        return len(self.widths)

    def points(self) -> list:
        return list(zip(self.widths.tolist(), self.heights.tolist()))

    def staircase(self) -> Staircase:
        tags = None
        if self.level > 1:
            tags = tuple(zip(self.construction.tolist(), self.src_l.tolist(), self.src_b.tolist()))
        pts = tuple(Point2(Fraction(w), Fraction(h)) for w, h in self.points())
        return Staircase(pts, True, tags)

    def index_of(self, w: int, h: int) -> int:
        i = int(np.searchsorted(self.widths, w))
        if i < len(self.widths) and self.widths[i] == w and self.heights[i] == h:
            return i
        raise KeyError("not found")


def first_front() -> LevelFront:
    one = np.ones(1, dtype=np.int64)
    zero = np.zeros(1, dtype=np.int64)
    return LevelFront(1, one, one.copy(), zero, zero.copy(), zero.copy())


def advance_integer(w: np.ndarray, h: np.ndarray, level: int = 0) -> LevelFront:
    """Integer advance of an odd-width antichain, with first-producer provenance.

    Candidates are applied in the tie order (construction 1 rows, then
    construction 2 rows, each by side index then bottom index) with strict
    improvements only, so every width keeps its earliest minimal producer.
    """
    k = len(w)
    if k == 0:
        raise ValueError("empty front")
    if np.any(w % 2 == 0):
        raise ValueError("widths must be odd")
    size = int(2 * h.max() + w.max() + 2)
    best = np.full(size, _BIG, dtype=np.int64)
    cons = np.zeros(size, dtype=np.int8)
    sl = np.zeros(size, dtype=np.int64)
    sb = np.zeros(size, dtype=np.int64)
    neg_h = -h

    def put(idx, hh, c, i, bs):
        better = hh < best[idx]
        if better.any():
            idx = idx[better]
            best[idx] = hh[better]
            cons[idx] = c
            sl[idx] = i
            sb[idx] = bs[better]

    for i in range(k):
        wl, hl = int(w[i]), int(h[i])
        # beyond the first bottom with h_b <= (w_l-1)/2 the height saturates at w_l
        # while the width keeps growing, so those candidates are dominated
        nb = int(np.searchsorted(neg_h, -((wl - 1) // 2), side="left"))
        nb = min(k, nb + 1)
        bs = np.arange(nb)
        put(2 * hl + w[:nb], np.maximum(wl, (wl + 1) // 2 + h[:nb]), 1, i, bs)
    for i in range(k):
        wl, hl = int(w[i]), int(h[i])
        # all bottoms narrower than 2h_l+1 collapse to one width; the last is lowest
        b0 = int(np.searchsorted(w, 2 * hl + 1, side="right")) - 1
        start = max(b0, 0)
        bs = np.arange(start, k)
        put(np.maximum(2 * hl + 1, w[start:]), wl + h[start:], 2, i, bs)
    running = np.minimum.accumulate(best)
    keep = np.zeros(size, dtype=bool)
    keep[0] = best[0] < _BIG
    keep[1:] = best[1:] < running[:-1]
    ws = np.nonzero(keep)[0]
    return LevelFront(level, ws.astype(np.int64), best[ws].copy(), cons[ws].astype(np.int64), sl[ws].copy(), sb[ws].copy())


def compute_fronts(max_level: int) -> list:
    """Fronts for levels 1..max_level; index ``l-1`` holds level ``l``."""
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    fronts = [first_front()]
    while len(fronts) < max_level:
        f = fronts[-1]
        fronts.append(advance_integer(f.widths, f.heights, f.level + 1))
    return fronts


def witness(fronts: list, level: int, index: int) -> ConstructionTree:
    """Rebuild a construction tree for a front point through its provenance."""
    if not 1 <= level <= len(fronts) or not 0 <= index < len(fronts[level - 1]):
        raise KeyError("not found")
    memo: dict = {}

    def build(lv: int, i: int) -> ConstructionTree:
        if lv == 1:
            return LEAF
        key = (lv, i)
        if key not in memo:
            f = fronts[lv - 1]
            c = int(f.construction[i])
            memo[key] = node(c, build(lv - 1, int(f.src_l[i])), build(lv - 1, int(f.src_b[i])))
        return memo[key]

    return build(level, index)


def witness_for_size(fronts: list, level: int, w: int, h: int) -> tuple:
    """Front point dominated by (w, h) with the smallest width; returns (index, tree)."""
    if not 1 <= level <= len(fronts):
        raise KeyError("not found")
    f = fronts[level - 1]
    i = int(np.searchsorted(f.widths, w, side="right")) - 1
    if i < 0 or f.heights[i] > h:
        raise KeyError("not found")
    # leftmost point still inside the grid keeps the drawing as narrow as possible
    j = int(np.searchsorted(-f.heights, -h, side="left"))
    return j, witness(fronts, level, j)


def scatter_export(fronts: list) -> str:
    lines = ["level,w,h,construction"]
    for f in fronts:
        for w, h, c in zip(f.widths.tolist(), f.heights.tolist(), f.construction.tolist()):
            lines.append(f"{f.level},{w},{h},{c if f.level > 1 else ''}")
    return "\n".join(lines) + "\n"


def fronts_csv(fronts: list) -> str:
    """Exact front rows for several levels, with a leading level column."""
    lines = ["level,w_num,w_den,h_num,h_den,construction,src_l,src_b"]
    for f in fronts:
        for w, h, c, a, b in zip(f.widths.tolist(), f.heights.tolist(), f.construction.tolist(),
                                 f.src_l.tolist(), f.src_b.tolist()):
            prov = f"{c},{a},{b}" if f.level > 1 else ",,"
            lines.append(f"{f.level},{w},1,{h},1,{prov}")
    return "\n".join(lines) + "\n"
