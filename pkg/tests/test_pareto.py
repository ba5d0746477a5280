from __future__ import annotations

import numpy as np
import pytest

from ternary_area.drawing import LEAF, generate, node, predicted_size, validate
from ternary_area.pareto import compute_fronts, fronts_csv, scatter_export, witness, witness_for_size
from ternary_area.staircase import advance, normalize, set_leq


def test_small_fronts():
    fr = compute_fronts(3)
    assert [f.points() for f in fr] == [[(1, 1)], [(3, 2)], [(5, 5), (7, 4)]]
    assert fr[2].construction.tolist() == [2, 1]


def test_bad_level():
    with pytest.raises(ValueError):
        compute_fronts(0)


def test_kernel_matches_exact_advance(fronts8):
    for lo, hi in zip(fronts8, fronts8[1:]):
        exact = advance(lo.staircase())
        got = hi.staircase()
        assert exact.points == got.points
        assert exact.tags == got.tags  # same first-producer tie rule


def test_front_invariants(fronts8):
    prev = None
    for f in fronts8:
        w, h = f.widths, f.heights
        assert np.all(w % 2 == 1) and np.all(h >= 1)
        assert np.all(np.diff(w) > 0) and np.all(np.diff(h) < 0)
        n = (3 ** f.level - 1) // 2
        assert np.all(w * h >= n)
        if prev is not None:
            assert w.min() >= prev.widths.min() and h.min() >= prev.heights.min()
        prev = f


def test_witness_examples(fronts8):
    assert witness(fronts8, 1, 0) is LEAF
    t = witness(fronts8, 3, fronts8[2].index_of(7, 4))
    assert t.construction == 1 and t.side == t.bottom and t.side.depth == 1
    assert predicted_size(t) == (7, 4)
    with pytest.raises(KeyError):
        witness(fronts8, 3, 5)
    with pytest.raises(KeyError):
        witness(fronts8, 12, 0)


def test_every_witness_regenerates(fronts8):
    for f in fronts8:
        for i, (w, h) in enumerate(f.points()):
            d = generate(witness(fronts8, f.level, i))
            assert (d.width, d.height) == (w, h)
            assert validate(d).predicate


def test_witness_for_size(fronts8):
    j, t = witness_for_size(fronts8, 3, 5, 6)
    assert predicted_size(t) == (5, 5)
    j, t = witness_for_size(fronts8, 3, 9, 9)
    assert predicted_size(t) == (5, 5)
    with pytest.raises(KeyError):
        witness_for_size(fronts8, 3, 5, 4)


def test_scatter_rows():
    text = scatter_export(compute_fronts(3))
    rows = text.strip().splitlines()
    assert rows[0] == "level,w,h,construction"
    assert rows[1:] == ["1,1,1,", "2,3,2,1", "3,5,5,2", "3,7,4,1"]


def test_fronts_csv_has_level_column():
    rows = fronts_csv(compute_fronts(2)).strip().splitlines()
    assert rows == ["level,w_num,w_den,h_num,h_den,construction,src_l,src_b", "1,1,1,1,1,,,", "2,3,1,2,1,1,0,0"]
