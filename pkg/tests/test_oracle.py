from __future__ import annotations

import itertools

import pytest

from ternary_area.drawing import LEAF, Drawing, all_paths, generate, node, validate
from ternary_area.oracle import SearchError, SearchSpec, all_drawings, count_drawings, enumerate_min_grids, find_drawing
from ternary_area.pareto import compute_fronts


def pts(s):
    return [(int(p.w), int(p.h)) for p in s.points]


def test_levels_one_and_two_match_fronts():
    fr = compute_fronts(2)
    assert pts(enumerate_min_grids(SearchSpec(1, 5, 5))) == fr[0].points() == [(1, 1)]
    assert pts(enumerate_min_grids(SearchSpec(2, 7, 7))) == fr[1].points() == [(3, 2)]


def test_counts():
    assert count_drawings(SearchSpec(1, 1, 1), 1, 1) == 1
    assert count_drawings(SearchSpec(2, 3, 2), 3, 2) == 1  # regression
    assert count_drawings(SearchSpec(2, 3, 1, False), 3, 1) == 0


def test_caps():
    with pytest.raises(SearchError, match="search too large"):
        SearchSpec(3, 9, 9).check()
    with pytest.raises(SearchError, match="search too large"):
        enumerate_min_grids(SearchSpec(4, 3, 3))
    with pytest.raises(SearchError):
        count_drawings(SearchSpec(2, 3, 3), 5, 3)


@pytest.mark.parametrize("w,h", [(3, 2), (3, 3), (4, 3), (5, 3), (4, 4)])
@pytest.mark.parametrize("pred", [True, False])
def test_level_two_counts_match_brute_force_validation(w, h, pred):
    # independent route: try every labeled placement and ask the validator
    paths = all_paths(2)
    cells = [(x, y) for y in range(h) for x in range(w)]
    n = 0
    for perm in itertools.permutations(cells, 4):
        rep = validate(Drawing(2, w, h, dict(zip(paths, perm))))
        n += rep.predicate if pred else rep.separated
    assert n % 6 == 0  # three children permute freely
    expect = count_drawings(SearchSpec(2, 5, 5, pred), w, h)
    assert n // 6 == expect


def _shape(d):
    # unlabeled form: the node cells plus the edge set
    cells = frozenset(d.position.values())
    edges = frozenset(frozenset((d.position[p[:-1]], d.position[p])) for p in d.position if p)
    return cells, edges


def test_oracle_drawings_validate_and_include_generated():
    for w, h, tree in ((3, 2, node(1, LEAF, LEAF)),):
        found = all_drawings(2, w, h)
        assert all(validate(d).predicate for d in found)
        assert _shape(generate(tree)) in {_shape(d) for d in found}


def test_find_drawing():
    assert find_drawing(2, 3, 1) is None
    d = find_drawing(2, 3, 2)
    assert d is not None and validate(d).predicate


def test_level_three_matches_front():
    assert pts(enumerate_min_grids(SearchSpec(3, 7, 7))) == compute_fronts(3)[2].points()
    for w, h in ((5, 5), (7, 4)):
        found = all_drawings(3, w, h)
        assert found and all(validate(d).predicate for d in found)
    c2 = node(2, LEAF, LEAF)
    c1 = node(1, LEAF, LEAF)
    assert _shape(generate(node(1, c2, c2))) in {_shape(d) for d in all_drawings(3, 7, 4)}
    assert _shape(generate(node(2, c1, c1))) in {_shape(d) for d in all_drawings(3, 5, 5)}
