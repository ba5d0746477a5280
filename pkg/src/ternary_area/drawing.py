"""Complete ternary trees, symmetric 1-2 drawings and their geometric checks.

Nodes are addressed by root paths over {0, 1, 2} (left, below, right).
Positions are (x, y) grid cells with y = 0 the top row.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional
from xml.sax.saxutils import escape


class DrawingError(ValueError):
    pass


@dataclass(frozen=True)
class ConstructionTree:
    """Leaf when ``construction`` is None; otherwise a node with two sub-choices."""

    construction: Optional[int] = None
    side: Optional["ConstructionTree"] = None
    bottom: Optional["ConstructionTree"] = None

    @property
    def is_leaf(self) -> bool:
        return self.construction is None

    @property
    def depth(self) -> int:
        return _depth(self)

    def levels(self) -> int:
        """Number of tree layers drawn: a leaf draws T_1."""
        return self.depth + 1

    def __repr__(self) -> str:
        if self.is_leaf:
            return "Leaf"
        return f"Node({self.construction}, {self.side!r}, {self.bottom!r})"


LEAF = ConstructionTree()


def node(construction: int, side: ConstructionTree, bottom: ConstructionTree) -> ConstructionTree:
    if construction not in (1, 2):
        raise DrawingError("construction must be 1 or 2")
    if _depth(side) != _depth(bottom):
        raise DrawingError("side and bottom must have equal depth")
    return ConstructionTree(construction, side, bottom)


@lru_cache(maxsize=None)
def _depth(c: ConstructionTree) -> int:
    return 0 if c.is_leaf else 1 + _depth(c.side)


@lru_cache(maxsize=None)
def predicted_size(c: ConstructionTree) -> tuple:
    """(width, height) from the recursion formulas of the two constructions."""
    if c.is_leaf:
        return (1, 1)
    wl, hl = predicted_size(c.side)
    wb, hb = predicted_size(c.bottom)
    if c.construction == 1:
        return (2 * hl + wb, max(wl, (wl + 1) // 2 + hb))
    return (max(2 * hl + 1, wb), wl + hb)


def node_count(levels: int) -> int:
    return (3 ** levels - 1) // 2


def all_paths(levels: int) -> list:
    """Every node id of T_levels in BFS order."""
    out = [()]
    frontier = [()]
    for _ in range(levels - 1):
        frontier = [p + (d,) for p in frontier for d in (0, 1, 2)]
        out.extend(frontier)
    return out


def subtree_disjoint(a: tuple, b: tuple) -> bool:
    """Subtrees rooted at a and b share no node iff neither path prefixes the other."""
    n = min(len(a), len(b))
    return tuple(a[:n]) != tuple(b[:n])


@dataclass(frozen=True)
class Drawing:
    levels: int
    width: int
    height: int
    position: dict = field(hash=False, compare=True)

    def to_json(self) -> str:
        nodes = [{"path": "".join(map(str, p)), "x": x, "y": y}
                 for p, (x, y) in sorted(self.position.items(), key=lambda kv: (len(kv[0]), kv[0]))]
        return json.dumps({"levels": self.levels, "width": self.width, "height": self.height, "nodes": nodes},
                          indent=1)

    @staticmethod
    def from_json(text: str) -> "Drawing":
        try:
            d = json.loads(text)
            pos = {tuple(int(ch) for ch in n["path"]): (int(n["x"]), int(n["y"])) for n in d["nodes"]}
            return Drawing(int(d["levels"]), int(d["width"]), int(d["height"]), pos)
        except (KeyError, TypeError, ValueError) as e:
            raise DrawingError(f"format: {e}") from None

    def mirrored(self) -> "Drawing":
        """Reflect x and swap the left/right child digits."""
        swap = {0: 2, 1: 1, 2: 0}
        pos = {tuple(swap[d] for d in p): (self.width - 1 - x, y) for p, (x, y) in self.position.items()}
        return Drawing(self.levels, self.width, self.height, pos)

    def translated(self, dx: int, dy: int, width: int, height: int) -> "Drawing":
        pos = {p: (x + dx, y + dy) for p, (x, y) in self.position.items()}
        return Drawing(self.levels, width, height, pos)


def _layout(c: ConstructionTree) -> dict:
    """Positions of a symmetric 1-2 drawing in its own predicted box."""
    if c.is_leaf:
        return {(): (0, 0)}
    wl, hl = predicted_size(c.side)
    wb, hb = predicted_size(c.bottom)
    W, _ = predicted_size(c)
    side = _layout(c.side)
    bottom = _layout(c.bottom)
    root_row = (wl - 1) // 2
    root_col = (W - 1) // 2
    pos = {(): (root_col, root_row)}
    if c.construction == 1:
        left0, right0 = 0, W - hl
        bx, by = hl, root_row + 1
    else:
        left0, right0 = root_col - hl, root_col + 1
        bx, by = root_col - (wb - 1) // 2, wl
    for p, (x, y) in side.items():
        # the sub-drawing's top edge faces the root on both sides
        pos[(0,) + p] = (left0 + hl - 1 - y, x)
        pos[(2,) + p] = (right0 + y, wl - 1 - x)
    for p, (x, y) in bottom.items():
        pos[(1,) + p] = (bx + x, by + y)
    return pos


def generate(c: ConstructionTree) -> Drawing:
    w, h = predicted_size(c)
    return Drawing(c.levels(), w, h, _layout(c))


@dataclass
class ValidationReport:
    checks: dict
    messages: dict

    @property
    def separated(self) -> bool:
        """Checks (a)-(e): a valid drawing with the subtree separation property."""
        return all(self.checks[k] for k in "abcde")

    @property
    def predicate(self) -> bool:
        """All checks including root column and free upward ray."""
        return all(self.checks.values())

    def __bool__(self) -> bool:
        return self.predicate

    def failed(self) -> list:
        return [k for k, v in self.checks.items() if not v]


def _edge_cells(a: tuple, b: tuple) -> Optional[list]:
    """Interior cells of the segment a-b, or None when it is not axis-aligned."""
    (x0, y0), (x1, y1) = a, b
    if x0 == x1:
        step = 1 if y1 > y0 else -1
        return [(x0, y) for y in range(y0 + step, y1, step)]
    if y0 == y1:
        step = 1 if x1 > x0 else -1
        return [(x, y0) for x in range(x0 + step, x1, step)]
    return None


def validate(d: Drawing) -> ValidationReport:
    """Run the seven checks independently; none short-circuits another."""
    expected = set(all_paths(d.levels))
    got = set(d.position)
    if got != expected:
        raise DrawingError("structure")
    pos = d.position
    checks: dict = {}
    msgs: dict = {}

    # (a) in bounds and distinct
    cells = list(pos.values())
    inb = all(0 <= x < d.width and 0 <= y < d.height for x, y in cells)
    distinct = len(set(cells)) == len(cells)
    checks["a"] = inb and distinct
    if not checks["a"]:
        msgs["a"] = "out of bounds" if not inb else "two nodes share a cell"

    edges = [(p[:-1], p) for p in pos if p]
    interiors = {}
    ok_b = True
    for e in edges:
        cs = _edge_cells(pos[e[0]], pos[e[1]])
        if cs is None or pos[e[0]] == pos[e[1]]:
            ok_b = False
            msgs.setdefault("b", f"edge {e} is not axis-aligned")
            continue
        interiors[e] = cs
    checks["b"] = ok_b

    # (c) node inside an edge interior
    node_cells = set(cells)
    bad_c = [e for e, cs in interiors.items() if any(c in node_cells for c in cs)]
    checks["c"] = not bad_c
    if bad_c:
        msgs["c"] = f"edge {bad_c[0]} passes through a node"

    # (d) a cell covered by two edges must be an endpoint of both
    cover: dict = {}
    for e, cs in interiors.items():
        for c in cs:
            cover.setdefault(c, []).append((e, False))
        for c in (pos[e[0]], pos[e[1]]):
            cover.setdefault(c, []).append((e, True))
    bad_d = None
    for c, lst in cover.items():
        if len(lst) > 1 and not all(end for _, end in lst):
            bad_d = c
            break
    checks["d"] = bad_d is None
    if bad_d is not None:
        msgs["d"] = f"segments overlap or cross at {bad_d}"

    # (e) sibling subtree bounding boxes pairwise disjoint
    box: dict = {}
    for p in sorted(pos, key=len, reverse=True):
        x, y = pos[p]
        b = [x, y, x, y]
        for k in (0, 1, 2):
            cb = box.get(p + (k,))
            if cb:
                b = [min(b[0], cb[0]), min(b[1], cb[1]), max(b[2], cb[2]), max(b[3], cb[3])]
        box[p] = b
    bad_e = None
    for p in pos:
        if len(p) >= d.levels - 1:
            continue
        kids = [box[p + (k,)] for k in (0, 1, 2)]
        for i in range(3):
            for j in range(i + 1, 3):
                u, v = kids[i], kids[j]
                if u[0] <= v[2] and v[0] <= u[2] and u[1] <= v[3] and v[1] <= u[3]:
                    bad_e = (p, i, j)
                    break
            if bad_e:
                break
        if bad_e:
            break
    checks["e"] = bad_e is None
    if bad_e:
        msgs["e"] = f"children {bad_e[1]} and {bad_e[2]} of {bad_e[0]} have overlapping boxes"

    rx, ry = pos[()]
    checks["f"] = d.width % 2 == 1 and rx == (d.width - 1) // 2
    if not checks["f"]:
        msgs["f"] = "root is not on the middle column"

    used = set(node_cells)
    for cs in interiors.values():
        used.update(cs)
    blocked = [(rx, y) for y in range(ry) if (rx, y) in used]
    checks["g"] = not blocked
    if blocked:
        msgs["g"] = f"upward ray from the root is blocked at {blocked[-1]}"
    return ValidationReport(checks, msgs)


def render(d: Drawing, fmt: str = "ascii") -> str:
    rep = validate(d)
    if not all(rep.checks[k] for k in "abcd"):
        raise DrawingError("invalid drawing")
    if fmt == "ascii":
        return _ascii(d)
    if fmt == "svg":
        return _svg(d)
    raise DrawingError(f"unknown format {fmt!r}")


def _ascii(d: Drawing) -> str:
    # doubled canvas: even cells are grid points, odd cells carry edge strokes
    W, H = 2 * d.width - 1, 2 * d.height - 1
    canvas = [["."] * W for _ in range(H)]
    for p, (x, y) in d.position.items():
        if p:
            px, py = d.position[p[:-1]]
            if px == x:
                for yy in range(2 * min(py, y) + 1, 2 * max(py, y)):
                    canvas[yy][2 * x] = "|"
            else:
                for xx in range(2 * min(px, x) + 1, 2 * max(px, x)):
                    canvas[2 * y][xx] = "-"
    for x, y in d.position.values():
        canvas[2 * y][2 * x] = "o"
    return "\n".join("".join(r) for r in canvas) + "\n"


def _svg(d: Drawing, unit: int = 20) -> str:
    pad = unit
    W = (d.width - 1) * unit + 2 * pad
    H = (d.height - 1) * unit + 2 * pad
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
           f"<title>{escape(f'T_{d.levels} on a {d.width} x {d.height} grid')}</title>",
           f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>']
    for x in range(d.width):
        out.append(f'<line x1="{pad + x * unit}" y1="{pad}" x2="{pad + x * unit}" '
                   f'y2="{pad + (d.height - 1) * unit}" stroke="#ddd" stroke-width="1"/>')
    for y in range(d.height):
        out.append(f'<line x1="{pad}" y1="{pad + y * unit}" x2="{pad + (d.width - 1) * unit}" '
                   f'y2="{pad + y * unit}" stroke="#ddd" stroke-width="1"/>')
    for p in sorted(d.position, key=lambda q: (len(q), q)):
        if p:
            (x0, y0), (x1, y1) = d.position[p[:-1]], d.position[p]
            out.append(f'<line x1="{pad + x0 * unit}" y1="{pad + y0 * unit}" x2="{pad + x1 * unit}" '
                       f'y2="{pad + y1 * unit}" stroke="black" stroke-width="2"/>')
    r = unit // 4
    for p in sorted(d.position, key=lambda q: (len(q), q)):
        x, y = d.position[p]
        fill = "#c0392b" if not p else "#2c3e50"
        rr = r + 2 if not p else r
        out.append(f'<circle cx="{pad + x * unit}" cy="{pad + y * unit}" r="{rr}" fill="{fill}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
