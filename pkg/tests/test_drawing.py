from __future__ import annotations

import random
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ternary_area.drawing import (LEAF, Drawing, DrawingError, all_paths, generate, node, node_count, predicted_size,
                                  render, subtree_disjoint, validate)

C2 = node(2, LEAF, LEAF)


def random_tree(rng: random.Random, depth: int):
    if depth == 0:
        return LEAF
    return node(rng.choice((1, 2)), random_tree(rng, depth - 1), random_tree(rng, depth - 1))


trees = st.recursive(st.just(LEAF), lambda sub: st.tuples(st.sampled_from((1, 2)), sub), max_leaves=6)


def build(spec):
    if spec is LEAF:
        return LEAF
    c, sub = spec
    t = build(sub)
    return node(c, t, t)


def test_predicted_size_examples():
    assert predicted_size(LEAF) == (1, 1)
    assert predicted_size(node(1, LEAF, LEAF)) == (3, 2)
    assert predicted_size(node(1, C2, C2)) == (7, 4)
    assert predicted_size(node(2, node(1, LEAF, LEAF), node(1, LEAF, LEAF))) == (5, 5)


def test_node_requires_equal_depth():
    with pytest.raises(DrawingError):
        node(1, LEAF, C2)
    with pytest.raises(DrawingError):
        node(3, LEAF, LEAF)


def test_generate_small():
    d = generate(LEAF)
    assert (d.width, d.height, d.position) == (1, 1, {(): (0, 0)})
    d = generate(node(1, LEAF, LEAF))
    assert (d.width, d.height) == (3, 2)
    assert d.position == {(): (1, 0), (0,): (0, 0), (2,): (2, 0), (1,): (1, 1)}


def test_integer_form_of_construction_one_height():
    for wl in range(1, 100, 2):
        for hb in range(1, 100):
            assert wl / 2 + max(wl / 2, hb + 0.5) == max(wl, (wl + 1) // 2 + hb)


def test_random_trees_validate_and_match_size():
    rng = random.Random(7)
    for _ in range(60):
        t = random_tree(rng, rng.randint(0, 6))
        d = generate(t)
        assert (d.width, d.height) == predicted_size(t)
        assert d.width % 2 == 1
        rep = validate(d)
        assert rep.predicate, rep.messages
        assert len(d.position) == node_count(t.levels())


@settings(max_examples=40, deadline=None)
@given(trees)
def test_generated_drawings_are_mirror_symmetric(spec):
    d = generate(build(spec))
    assert d.mirrored().position == d.position


def test_sibling_sufficiency_exhaustive_small():
    # if sibling boxes are disjoint then every pair of disjoint subtrees is
    rng = random.Random(3)
    for _ in range(12):
        d = generate(random_tree(rng, rng.randint(1, 4)))
        box = {}
        for p in d.position:
            xs = [xy for q, xy in d.position.items() if q[:len(p)] == p]
            box[p] = (min(x for x, _ in xs), min(y for _, y in xs), max(x for x, _ in xs), max(y for _, y in xs))
        paths = list(d.position)
        for a in paths:
            for b in paths:
                if subtree_disjoint(a, b):
                    u, v = box[a], box[b]
                    assert not (u[0] <= v[2] and v[0] <= u[2] and u[1] <= v[3] and v[1] <= u[3])


def test_validate_detects_overlapping_sibling_boxes():
    # two sibling subtrees interleaved: their bounding boxes overlap but nothing crosses
    pos = {(): (2, 0), (0,): (1, 0), (1,): (2, 2), (2,): (3, 0),
           (0, 0): (0, 0), (0, 1): (1, 3), (0, 2): (1, 1)}
    pos.update({(1, 0): (0, 2), (1, 1): (2, 4), (1, 2): (4, 2)})
    pos.update({(2, 0): (4, 0), (2, 1): (3, 1), (2, 2): (3, 3)})
    rep = validate(Drawing(3, 5, 5, pos))
    assert not rep.checks["e"]


def test_validate_detects_diagonal_edge():
    d = Drawing(2, 3, 3, {(): (1, 0), (0,): (0, 1), (1,): (1, 1), (2,): (2, 0)})
    rep = validate(d)
    assert not rep.checks["b"]
    assert "b" in rep.failed()


def test_validate_independent_checks():
    # root off the middle column with a blocked ray, otherwise fine
    d = Drawing(2, 3, 3, {(): (0, 1), (0,): (0, 0), (1,): (0, 2), (2,): (1, 1)})
    rep = validate(d)
    assert rep.separated
    assert not rep.checks["f"] and not rep.checks["g"]


def test_validate_node_in_edge_and_crossing():
    d = Drawing(2, 4, 1, {(): (0, 0), (0,): (1, 0), (1,): (2, 0), (2,): (3, 0)})
    rep = validate(d)
    assert not rep.checks["c"] and not rep.checks["d"]


def test_validate_structure_error():
    with pytest.raises(DrawingError, match="structure"):
        validate(Drawing(2, 3, 2, {(): (1, 0)}))


def test_subtree_disjoint():
    assert not subtree_disjoint((), (0, 1))
    assert subtree_disjoint((0,), (2,))
    assert not subtree_disjoint((0,), (0, 1))


def test_render_ascii():
    assert render(generate(LEAF), "ascii") == "o\n"
    art = render(generate(node(1, LEAF, LEAF)), "ascii").splitlines()
    assert art == ["o-o-o", "..|..", "..o.."]


def test_render_svg_parses():
    d = generate(node(2, C2, C2))
    root = ET.fromstring(render(d, "svg"))
    circles = [e for e in root.iter() if e.tag.endswith("circle")]
    assert len(circles) == node_count(d.levels)


def test_render_rejects_invalid():
    d = Drawing(2, 4, 1, {(): (0, 0), (0,): (1, 0), (1,): (2, 0), (2,): (3, 0)})
    with pytest.raises(DrawingError, match="invalid drawing"):
        render(d)


def test_json_roundtrip():
    d = generate(node(1, C2, C2))
    back = Drawing.from_json(d.to_json())
    assert back == d
    with pytest.raises(DrawingError):
        Drawing.from_json("{}")


def test_all_paths_bfs():
    p = all_paths(3)
    assert len(p) == 13 and p[0] == () and p[1:4] == [(0,), (1,), (2,)]
