from __future__ import annotations

import dataclasses
import gzip
import json
import math
from fractions import Fraction as F

import numpy as np
import pytest

from ternary_area.fixedpoint import (FixedPointError, LogBoundary, UpperCertificate, apply_P, extract_certificate,
                                     fit_slopes, iterate_to_fixed_point, load_certificate, save_certificate,
                                     seed_boundary, shipped_certificate_path, verify_certificate)
from ternary_area.lower import solve_constants
from ternary_area.upper import derive_shift_for_epsilon


@pytest.fixture(scope="module")
def c():
    return solve_constants(1e-12)


@pytest.fixture(scope="module")
def seed(c):
    return seed_boundary(c, 1201, (-15.0, 15.0))


@pytest.fixture(scope="module")
def result(c, seed):
    return iterate_to_fixed_point(seed, c.delta, tol=1e-8)


@pytest.fixture(scope="module")
def shipped():
    return load_certificate(shipped_certificate_path())


def test_boundary_validation():
    om = np.linspace(-1, 1, 5)
    with pytest.raises(FixedPointError):
        LogBoundary(om, np.zeros(5), -2.0, -0.5)
    with pytest.raises(FixedPointError):
        LogBoundary(om, -om, 2.0, -0.5)


def test_boundary_rays_and_inverse(seed, c):
    x = np.array([-40.0, -3.0, 0.0, 2.5, 40.0])
    y = seed.f(x)
    expect = c.epsilon + np.maximum(-x / c.sigma, -x * c.sigma)
    assert np.allclose(y, expect, atol=1e-12)
    assert np.allclose(seed.finv(y), x, atol=1e-9)


def test_one_application_shrinks_the_seed(seed, c):
    # the seed satisfies the lower inequality, so P(S) lies inside S: eta never drops
    nb = apply_P(seed, c.delta)
    assert np.min(nb.eta - seed.eta) > -1e-12
    assert np.max(nb.eta - seed.eta) > 1e-3


def test_iteration_is_monotone(seed, c):
    b = seed
    for _ in range(6):
        nb = apply_P(b, c.delta)
        assert np.min(nb.eta - b.eta) > -1e-12
        b = nb


def test_converges_with_asymptotic_slopes(result, c):
    assert result.converged and result.residual < 1e-8
    ls, rs = fit_slopes(result.boundary.omega, result.boundary.eta)
    assert abs(ls + c.sigma) < 1e-3 and abs(rs + 1 / c.sigma) < 1e-3
    b, r = result
    assert r == result.residual and b is result.boundary


def test_rate_is_bracketed(result, c):
    assert result.delta >= c.delta - 1e-4
    assert result.delta < math.log(63761 / 35808)
    assert 1.0316 <= 2 * result.delta / math.log(3) < 1.032


@pytest.mark.parametrize("off", [3e-4, -3e-4])
def test_drift_correction_recovers_rate(seed, c, result, off):
    r = iterate_to_fixed_point(seed, c.delta + off, tol=1e-8)
    assert r.converged
    assert abs(r.delta - result.delta) < 1e-6


def test_bad_rates_are_reported(seed):
    with pytest.raises(FixedPointError, match="delta too small"):
        iterate_to_fixed_point(seed, 0.50)
    with pytest.raises(FixedPointError, match="delta too large"):
        iterate_to_fixed_point(seed, 0.65)
    with pytest.raises(ValueError):
        iterate_to_fixed_point(seed, 0.5667, tol=0)


def test_extract_and_verify_roundtrip(result):
    dp = result.delta + 1e-4
    cert = extract_certificate(result.boundary, dp, (-1.0, 1.0))
    assert cert.rho <= F(math.exp(dp))
    assert cert.rho.denominator <= 10**6
    rep = verify_certificate(cert)
    assert rep.passed and rep.checked > 1000
    assert rep.edge_witnesses == 0
    # every point clears 1 once shifted by the derived d
    k = math.exp(cert.derived_d)
    assert all(float(w) * k >= 1 and float(h) * k >= 1 for w, h in cert.points)
    assert cert.derived_d == pytest.approx(derive_shift_for_epsilon(cert.epsilon_margin))
    # the extension reaches at least three log-units past the window on both sides
    lo, hi = (math.log(float(x)) for x in cert.window)
    assert math.log(float(cert.points[0][0])) <= lo - 3 and math.log(float(cert.points[-1][0])) >= hi + 3


def test_extract_rejects_uncovered_window(result):
    with pytest.raises(FixedPointError):
        extract_certificate(result.boundary, result.delta + 1e-4, (-12.0, 12.0))
    with pytest.raises(FixedPointError):
        extract_certificate(result.boundary, result.delta + 1e-4, (1.0, -1.0))


def test_shipped_certificate(shipped):
    rep = verify_certificate(shipped)
    assert rep.passed
    assert 1.0316 <= rep.exponent.exponent < 1.032
    assert rep.exponent_with_margin.exponent < 1.032
    assert rep.margin is not None and 0 < rep.margin < 1e-3
    assert rep.edge_witnesses == 0 and not rep.warnings


def test_shipped_certificate_rate_sensitivity(shipped):
    down = dataclasses.replace(shipped, rho=shipped.rho * (1 - F(1, 1000)))
    assert not verify_certificate(down, fail_fast=True).passed
    up = dataclasses.replace(shipped, rho=shipped.rho * (1 + F(1, 1000)))
    assert verify_certificate(up).passed


def _tiny(points, rho, window):
    return UpperCertificate(tuple(points), F(rho), window, 1e-5, derive_shift_for_epsilon(1e-5))


def test_tiny_certificates_by_hand():
    # N_inf({(1,1)}) = {(2,2), (3,3/2)}: scaling by 2 lands exactly on the construction-2 point
    rep = verify_certificate(_tiny([(F(1), F(1))], 2, (F(1), F(3))))
    assert rep.passed and rep.checked == 1 and rep.by_construction == {"1": 0, "2": 1}
    assert not verify_certificate(_tiny([(F(1), F(1))], F(19, 10), (F(1), F(3)))).passed
    # N_inf({(2,1)}) = {(2,3), (4,2)}: (4,2) needs construction 1
    rep = verify_certificate(_tiny([(F(2), F(1))], 2, (F(3), F(5))))
    assert rep.passed and rep.by_construction == {"1": 1, "2": 0}
    assert not verify_certificate(_tiny([(F(2), F(1))], F(199, 100), (F(3), F(5)))).passed
    # an extra point with a different denominator only adds candidates
    rep = verify_certificate(_tiny([(F(1, 3), F(5)), (F(2), F(1))], 2, (F(3), F(5))))
    assert rep.passed and rep.checked == 1


def test_empty_window_is_flagged():
    cert = UpperCertificate(((F(1), F(1)),), F(2), (F(1, 2), F(1)), 1e-5, derive_shift_for_epsilon(1e-5))
    rep = verify_certificate(cert)
    assert rep.passed and rep.checked == 0 and "empty window" in rep.warnings


def test_format_errors(tmp_path):
    with pytest.raises(FixedPointError, match="format"):
        UpperCertificate.from_json('{"points": []}')
    bad = {"points": [["3", "1", "1", "1"], ["2", "1", "2", "1"]], "rho": ["2", "1"],
           "window": [["1", "1"], ["2", "1"]], "epsilon_margin": 1e-5, "derived_d": 12.0}
    with pytest.raises(FixedPointError, match="format"):
        UpperCertificate.from_json(json.dumps(bad))
    bad["points"] = [["1", "1", "1", "1"]]
    bad["rho"] = ["1", "2"]
    with pytest.raises(FixedPointError, match="format"):
        UpperCertificate.from_json(json.dumps(bad))


def test_save_load_roundtrip(tmp_path, shipped):
    small = dataclasses.replace(shipped, points=shipped.points[:50])
    for name in ("c.json", "c.json.gz"):
        p = tmp_path / name
        save_certificate(small, p)
        assert load_certificate(p) == small
    a = (tmp_path / "c.json.gz").read_bytes()
    save_certificate(small, tmp_path / "c.json.gz")
    assert (tmp_path / "c.json.gz").read_bytes() == a
