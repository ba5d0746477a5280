"""Exhaustive search over drawings of tiny complete ternary trees.

Nodes are placed in BFS order. A child is placed by walking from its parent in
one of four directions over free cells, so edges never cross or touch other
elements by construction; subtree boxes are checked against sibling boxes as
soon as they grow. Sibling subtrees are interchangeable, so each parent's
children are placed in increasing cell order and a drawing is counted once
per unlabeled configuration.
"""
from __future__ import annotations

from dataclasses import dataclass

from .drawing import Drawing, all_paths, validate
from .staircase import Staircase, normalize

DIRS = ((1, 0), (-1, 0), (0, 1), (0, -1))


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class SearchSpec:
    levels: int
    max_width: int
    max_height: int
    require_predicate: bool = True

    def check(self) -> None:
        if not 1 <= self.levels <= 3:
            raise SearchError("search too large")
        if self.max_width < 1 or self.max_height < 1:
            raise SearchError("grid caps must be positive")
        if self.levels == 3 and self.max_width * self.max_height > 64:
            raise SearchError("search too large")


class _Search:
    def __init__(self, levels: int, w: int, h: int, predicate: bool, mirror_break: bool):
        self.levels, self.w, self.h = levels, w, h
        self.predicate = predicate
        self.mirror_break = mirror_break
        self.order = all_paths(levels)
        self.grid = [[None] * w for _ in range(h)]  # None free, else a marker
        self.pos: dict = {}
        self.box: dict = {}

    def free(self, x, y) -> bool:
        return 0 <= x < self.w and 0 <= y < self.h and self.grid[y][x] is None

    def run(self, visit) -> None:
        """Call ``visit(pos)`` for every drawing; stop when it returns True."""
        self._stop = False
        w, h = self.w, self.h
        roots = [((w - 1) // 2, y) for y in range(h)] if self.predicate else [(x, y) for y in range(h) for x in range(w)]
        if self.predicate and w % 2 == 0:
            return
        for rx, ry in roots:
            ray = [(rx, y) for y in range(ry)] if self.predicate else []
            for x, y in ray:
                self.grid[y][x] = "ray"
            self.grid[ry][rx] = "node"
            self.pos[()] = (rx, ry)
            self.box[()] = [rx, ry, rx, ry]
            self._place(1, visit)
            del self.pos[()]
            del self.box[()]
            self.grid[ry][rx] = None
            for x, y in ray:
                self.grid[y][x] = None
            if self._stop:
                return

    def _sibling_clash(self, p) -> bool:
        for i in range(1, len(p) + 1):
            a = p[:i]
            ba = self.box[a]
            for k in (0, 1, 2):
                if k == a[-1]:
                    continue
                bs = self.box.get(a[:-1] + (k,))
                if bs and ba[0] <= bs[2] and bs[0] <= ba[2] and ba[1] <= bs[3] and bs[1] <= ba[3]:
                    return True
        return False

    def _mirror_ok(self) -> bool:
        rx = self.pos[()][0]
        left = sum(1 for k in (0, 1, 2) if self.pos[(k,)][0] < rx)
        right = sum(1 for k in (0, 1, 2) if self.pos[(k,)][0] > rx)
        return left >= right

    def _place(self, i: int, visit) -> None:
        if i == len(self.order):
            if visit(dict(self.pos)):
                self._stop = True
            return
        p = self.order[i]
        px, py = self.pos[p[:-1]]
        prev = None
        if p[-1] > 0:
            sx, sy = self.pos[p[:-1] + (p[-1] - 1,)]
            prev = sy * self.w + sx
        for dx, dy in DIRS:
            path = []
            x, y = px + dx, py + dy
            while self.free(x, y):
                if prev is None or y * self.w + x > prev:
                    self._try(i, p, x, y, path, visit)
                    if self._stop:
                        return
                path.append((x, y))
                x, y = x + dx, y + dy

    def _try(self, i, p, x, y, path, visit) -> None:
        for cx, cy in path:
            self.grid[cy][cx] = "edge"
        self.grid[y][x] = "node"
        self.pos[p] = (x, y)
        saved = []
        for j in range(1, len(p) + 1):
            a = p[:j]
            b = self.box.get(a)
            saved.append((a, None if b is None else list(b)))
            if b is None:
                self.box[a] = [x, y, x, y]
            else:
                self.box[a] = [min(b[0], x), min(b[1], y), max(b[2], x), max(b[3], y)]
        ok = not self._sibling_clash(p)
        if ok and self.mirror_break and p == (2,):
            ok = self._mirror_ok()
        if ok:
            self._place(i + 1, visit)
        for a, b in saved:
            if b is None:
                del self.box[a]
            else:
                self.box[a] = b
        del self.pos[p]
        self.grid[y][x] = None
        for cx, cy in path:
            self.grid[cy][cx] = None


def find_drawing(levels: int, w: int, h: int, predicate: bool = True):
    """Some valid drawing on exactly w x h, or None."""
    found = []

    def visit(pos):
        found.append(pos)
        return True

    _Search(levels, w, h, predicate, mirror_break=True).run(visit)
    return Drawing(levels, w, h, found[0]) if found else None


def count_drawings(spec: SearchSpec, w: int, h: int) -> int:
    """Unlabeled drawings on exactly the w x h grid."""
    spec.check()
    if w > spec.max_width or h > spec.max_height:
        raise SearchError("search too large")
    n = [0]

    def visit(pos):
        n[0] += 1
        return False

    _Search(spec.levels, w, h, spec.require_predicate, mirror_break=False).run(visit)
    return n[0]


def all_drawings(levels: int, w: int, h: int, predicate: bool = True) -> list:
    out = []

    def visit(pos):
        out.append(Drawing(levels, w, h, pos))
        return False

    _Search(levels, w, h, predicate, mirror_break=False).run(visit)
    return out


def enumerate_min_grids(spec: SearchSpec) -> Staircase:
    """Antichain of grid sizes (within the caps) that admit a drawing.

    Adding a row below, or a column on each side, preserves a drawing, so the
    least feasible height can only drop as the width grows.
    """
    spec.check()
    step = 2 if spec.require_predicate else 1
    pts = []
    h_cap = spec.max_height
    for w in range(1, spec.max_width + 1, step):
        for h in range(1, h_cap + 1):
            if find_drawing(spec.levels, w, h, spec.require_predicate) is not None:
                pts.append((w, h))
                h_cap = h - 1
                break
        if h_cap < 1:
            break
    if not pts:
        raise SearchError("no drawing fits inside the caps")
    return normalize(pts, exact=True)
