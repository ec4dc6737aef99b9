"""Sup norms, modulus of continuity, and the net-sampling map."""

import math

import numpy as np
import pytest

from thickcover.hyperbolic import disk_net, hyp_radius
from thickcover.quaddiff import (
    PolyQuadDiff,
    attainment_radius,
    empirical_bilipschitz,
    empirical_variation,
    family_q_norms,
    q_norm,
    random_family,
    sample_map,
    variation_delta_for_xi,
    variation_upper_bound,
    weight,
)

XI = 0.2  # unit tests run a coarser net than the acceptance suite


@pytest.fixture(scope="module")
def small_family():
    phis, norms = random_family(60, degree=10, seed=3)
    return phis, norms


@pytest.fixture(scope="module")
def small_net():
    delta = variation_delta_for_xi(XI)
    region = hyp_radius(attainment_radius(10)) + 1e-9
    return disk_net(region, delta, validation_samples=500, seed=0)


# -- q_norm ---------------------------------------------------------------


def test_zero_and_constant():
    assert q_norm(PolyQuadDiff((0j,))).value == 0.0
    res = q_norm(PolyQuadDiff((4.0,)), radius=0.5)
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert res.attained_at == 0j


def test_monomial_exact_suprema():
    # sup of (1-x^2)^2 x^k / 4 sits at x^2 = k/(k+4)
    for k in (3, 10, 20):
        x2 = k / (k + 4)
        exact = 4.0 / (k + 4) ** 2 * x2 ** (k / 2)
        res = q_norm(PolyQuadDiff((0,) * k + (1.0,)))
        assert res.value == pytest.approx(exact, rel=1e-9)
        assert res.value <= exact + 1e-15
        assert exact <= res.value + res.error_bound


def test_norm_homogeneous():
    phi = PolyQuadDiff((1.0, 0.5j, -0.25))
    base = q_norm(phi).value
    for t in (0.5, 2.0, 7.5):
        assert q_norm(phi.scaled(t)).value == pytest.approx(t * base, rel=1e-12)


def test_region_restriction_monotone():
    phi = PolyQuadDiff((0.3, -1.0, 0.8j, 0.1))
    full = q_norm(phi, radius=1.0)
    half = q_norm(phi, radius=0.5)
    assert half.value <= full.value + 1e-12


def test_disk_center_value_bound():
    # norm-one differentials keep |phi| <= 64/9 on |z| <= 1/2
    phis, _ = random_family(100, degree=12, seed=5)
    rng = np.random.default_rng(6)
    zs = rng.uniform(-0.5, 0.5, 200) + 1j * rng.uniform(-0.5, 0.5, 200)
    zs = zs[np.abs(zs) <= 0.5]
    for phi in phis:
        vals = np.abs(phi(zs))
        # tolerance covers the sampled-norm bracket
        assert np.max(vals) <= 64.0 / 9.0 * 1.05


# -- variation -------------------------------------------------------------


def test_variation_delta_values_and_cap():
    assert variation_delta_for_xi(1e4) == 0.49
    d = variation_delta_for_xi(0.1)
    assert 0 < d < 0.5
    assert variation_upper_bound(d) < 0.1


def test_variation_delta_monotone():
    ds = [variation_delta_for_xi(x) for x in (0.02, 0.1, 0.5, 2.0)]
    assert all(a <= b for a, b in zip(ds, ds[1:]))


def test_empirical_variation_zero_cases():
    assert empirical_variation([PolyQuadDiff((0j,))], 0.1, trials=16) == 0.0
    phi = PolyQuadDiff((1.0, 1.0))
    zs = np.array([0.1 + 0.2j, -0.3j])
    assert np.all(phi.weighted(zs) - phi.weighted(zs) == 0)


def test_empirical_variation_below_xi(small_family):
    phis, _ = small_family
    delta = variation_delta_for_xi(XI)
    observed = empirical_variation(phis, delta, trials=24, seed=7)
    assert observed < XI


# -- sampling map -----------------------------------------------------------


def test_sample_map_linear(small_net):
    rng = np.random.default_rng(8)
    a = PolyQuadDiff(tuple(rng.normal(size=5) + 1j * rng.normal(size=5)))
    b = PolyQuadDiff(tuple(rng.normal(size=5) + 1j * rng.normal(size=5)))
    fa = sample_map(a, small_net).values
    fb = sample_map(b, small_net).values
    fab = sample_map(a + b, small_net).values
    assert np.max(np.abs(fab - (fa + fb))) < 1e-12
    fsa = sample_map(a.scaled(2.5), small_net).values
    assert np.max(np.abs(fsa - 2.5 * fa)) < 1e-12


def test_sample_map_zero(small_net):
    sv = sample_map(PolyQuadDiff((0j,)), small_net)
    assert sv.sup_norm() == 0.0
    assert len(sv) == len(small_net)


def test_sample_sup_below_norm(small_family, small_net):
    phis, norms = small_family
    for phi, q in zip(phis[:30], norms[:30]):
        sv = sample_map(phi, small_net)
        assert sv.sup_norm() <= q.value + q.error_bound + 1e-12


def test_empirical_bilipschitz_window(small_family, small_net):
    phis, norms = small_family
    chk = empirical_bilipschitz(phis, small_net, q_norms=norms)
    assert chk.upper <= 1.0 + chk.norm_rel_error + 1e-12
    assert chk.lower >= 1.0 - XI
    assert chk.family_size == len(phis) and chk.net_size == len(small_net)


def test_constant_family_ratios_collapse(small_net):
    phis = [PolyQuadDiff((c,)) for c in (4.0, 2.0j, -1.0 + 1.0j)]
    norms = family_q_norms(phis)
    chk = empirical_bilipschitz(phis, small_net, q_norms=norms)
    # all constants attain their sup at the net point nearest 0
    assert chk.upper - chk.lower < 1e-12


def test_json_round_trip():
    phi = PolyQuadDiff((1.0 + 2.0j, -0.5, 0.25j))
    back = PolyQuadDiff.from_json(phi.to_json())
    assert back.coeffs == phi.coeffs


def test_weight_values():
    assert weight(0j) == pytest.approx(0.25)
    assert weight(0.5) == pytest.approx((0.75) ** 2 / 4)
