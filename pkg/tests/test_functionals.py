"""Scale-invariant functionals, quasimodes, negative counts, annulus sweeps.

Solver-backed values are cross-checked against the separation-of-variables
oracles in reference.py; closed-form examples are asserted directly. The
fast solver configuration (uniform N=256) resolves every smooth shape used
here to well below the asserted tolerances.
"""

import csv
import warnings

import numpy as np
import pytest

from steklov import geometry, reference
from steklov.functionals import (
    F_WINDOW,
    AdmissibleWindowWarning,
    AnnulusSweepResult,
    ExceptionalValueError,
    F,
    FunctionalError,
    FunctionalSpec,
    G,
    _quasimode_list,
    annulus_sweep,
    evaluate_functional,
    f1_upper_bound,
    negative_count,
    quasimode_deviation,
)
from steklov.geometry import ShapeVector, disk, fourier_shape, kite, transformed
from steklov.special import bessel_zero

FAST = {"N": 256}


# ---------------------------------------------------------------------------
# FunctionalSpec construction

def test_spec_rejects_non_invariant_exponents():
    with pytest.raises(ValueError, match="scale invariance"):
        FunctionalSpec(alpha=0.0, beta=1.0, gamma=0.4, delta=0.0, k=1)
    with pytest.raises(ValueError, match="scale invariance"):
        FunctionalSpec(alpha=0.2, beta=0.9, gamma=0.5, delta=0.0, k=1)


def test_spec_rejects_bad_index():
    with pytest.raises(ValueError, match="1-based"):
        FunctionalSpec(alpha=0.0, beta=1.0, gamma=0.5, delta=0.0, k=0)


def test_named_specs():
    f2 = F(2)
    assert (f2.alpha, f2.beta, f2.gamma, f2.delta, f2.k) == (0.0, 1.0, 0.5, 0.0, 2)
    g1 = G(1)
    assert (g1.alpha, g1.beta, g1.gamma, g1.delta, g1.k) == (0.0, 1.0, 0.0, 1.0, 1)


# ---------------------------------------------------------------------------
# reference values and invariance

def test_f2_disk_reference_values():
    v = evaluate_functional(F(2), disk(1.0), float(np.pi), FAST)
    assert abs(v - 0.541834100559795) < 1e-10
    v = evaluate_functional(F(2), disk(1.0), 4.2, FAST)
    assert abs(v - (-5.762316721805390)) < 1e-9


@pytest.mark.parametrize("radius", [0.5, 2.0, 3.7])
def test_disk_radius_invariance(radius):
    ref = evaluate_functional(F(2), disk(1.0), float(np.pi), FAST)
    v = evaluate_functional(F(2), disk(radius), float(np.pi), FAST)
    assert abs(v - ref) < 1e-10


@pytest.mark.parametrize("spec", [F(1), G(1), F(2), G(2)], ids=lambda s: s.name)
def test_dilation_invariance(spec):
    base = kite(0.3)
    v0 = evaluate_functional(spec, base, 2.0, FAST)
    for s in (0.5, 2.0, 3.7):
        v = evaluate_functional(spec, transformed(base, scale=s), 2.0, FAST)
        assert abs(v - v0) <= 1e-9 * abs(v0)


# ---------------------------------------------------------------------------
# upper bound on the first functional

def test_f1_upper_bound_f_scaling_is_minus_mu_squared():
    # alpha - 2 gamma + 1 = 0 and beta - 2 delta - 1 = 0: the measure
    # factors drop out for every shape
    for curve in (disk(1.0), kite(0.65)):
        assert f1_upper_bound(F(1), curve, 1.7) == pytest.approx(-1.7**2, rel=1e-14)


def test_f1_upper_bound_g_scaling():
    curve = kite(0.4)
    ar = geometry.area(curve)
    per = geometry.perimeter(curve)
    assert f1_upper_bound(G(1), curve, 2.3) == pytest.approx(
        -2.3**2 * ar / per**2, rel=1e-13)


def test_f1_upper_bound_mu_zero():
    assert f1_upper_bound(F(1), kite(0.4), 0.0) == 0.0
    assert f1_upper_bound(G(1), kite(0.4), 0.0) == 0.0


def test_mu_zero_functional_vanishes():
    # sigma_1 of the mu=0 problem is the zero mode, so E_1(0) = 0 and the
    # bound holds with equality; mu=0 sits outside the F window and warns
    with pytest.warns(AdmissibleWindowWarning):
        v = evaluate_functional(F(1), kite(0.4), 0.0, FAST)
    assert abs(v) < 1e-9
    assert v <= f1_upper_bound(F(1), kite(0.4), 0.0) + 1e-9


def test_f1_bound_on_random_fourier_shapes():
    rng = np.random.default_rng(11)
    for _ in range(10):
        c = rng.uniform(-0.08, 0.08, 6)
        curve = fourier_shape(ShapeVector(1.0, tuple(c[:3]), tuple(c[3:])))
        for mu in (1.0, 2.0, 4.0):
            v = evaluate_functional(F(1), curve, mu, FAST)
            assert v <= -mu**2 + 1e-8


def test_kite_beats_disk_counterexample():
    # the disk does not minimize F_1: at mu=1 the kappa=0.65 kite sits below
    kv = evaluate_functional(F(1), kite(0.65), 1.0, FAST)
    dv = evaluate_functional(F(1), disk(1.0), 1.0, FAST)
    assert kv < dv - 1e-4


# ---------------------------------------------------------------------------
# admissible window and error signalling

def test_window_warning_outside_and_silence_inside():
    with pytest.warns(AdmissibleWindowWarning):
        evaluate_functional(F(1), disk(1.0), F_WINDOW + 0.05, FAST)
    with warnings.catch_warnings():
        warnings.simplefilter("error", AdmissibleWindowWarning)
        evaluate_functional(F(1), disk(1.0), 2.0, FAST)
        # G carries no window restriction
        evaluate_functional(G(1), disk(1.0), 9.0, FAST)


def test_exceptional_scaled_wavenumber_raises():
    # G scales by the perimeter, so mu = 2 pi j_{0,1} lands the disk solve
    # exactly on the first Dirichlet resonance
    mu = float(2 * np.pi * bessel_zero(0, 1))
    with pytest.raises(ExceptionalValueError, match="exceptional"):
        evaluate_functional(G(1), disk(1.0), mu, {"N": 256, "tol": 1e-10})


def test_evaluate_validates_inputs():
    with pytest.raises(FunctionalError, match="mu"):
        evaluate_functional(F(1), disk(1.0), -1.0, FAST)
    with pytest.raises(FunctionalError, match="exceeds"):
        evaluate_functional(F(200), disk(1.0), 2.0, {"N": 64})


# ---------------------------------------------------------------------------
# quasimodes

def test_quasimode_list_square():
    qm = _quasimode_list("square", 8)
    expect = [np.pi / 2] * 4 + [3 * np.pi / 2] * 4
    np.testing.assert_allclose(qm, expect, rtol=0, atol=0)


def test_quasimode_list_triangle():
    # legs contribute pi*k twice, hypotenuse (pi/sqrt 2)(k - 1/2) once
    qm = _quasimode_list("isoceles_triangle", 6)
    expect = np.sort([
        np.pi, np.pi, 2 * np.pi, 2 * np.pi,
        np.pi / np.sqrt(2) * 0.5, np.pi / np.sqrt(2) * 1.5,
        np.pi / np.sqrt(2) * 2.5,
    ])[:6]
    np.testing.assert_allclose(qm, expect, rtol=1e-15)


def test_quasimode_unknown_shape():
    with pytest.raises(FunctionalError, match="no quasimode formula"):
        quasimode_deviation("hexagon", 1.0, 4, FAST)


@pytest.mark.slow
def test_quasimode_tail_decays():
    dev = quasimode_deviation("square", 1.0, 64)
    w1, w2, w3 = (dev[40:48].mean(), dev[48:56].mean(), dev[56:64].mean())
    assert w1 > w2 > w3
    assert w3 < 1e-3


@pytest.mark.slow
def test_quasimode_head_is_order_one_at_mu_five():
    dev = quasimode_deviation("square", 5.0, 1)
    assert 0.05 < dev[0] < 5.0


def test_quasimode_exceptional_mu_raises():
    mu = float(np.pi * np.sqrt(2))  # first Dirichlet wavenumber, unit square
    with pytest.raises(FunctionalError, match="exceptional"):
        quasimode_deviation("square", mu, 4, {"N": 256, "p": 6})


# ---------------------------------------------------------------------------
# negative counts

def test_negative_count_disk_small_mu():
    assert negative_count(disk(1.0), 0.1, FAST) == 1


def test_negative_count_mu_zero():
    assert negative_count(kite(0.3), 0.0, FAST) == 0


def test_negative_count_matches_disk_oracle():
    vals = reference.disk_spectrum(reference.DiskSpectrumQuery(mu=10.0, count=80))
    expect = int(np.sum(vals < -1e-10))
    assert negative_count(disk(1.0), 10.0, FAST) == expect


def test_negative_count_includes_sentinels():
    mu = bessel_zero(0, 1)
    ell, finite = reference.disk_spectrum_exceptional(mu, 40)
    expect = ell + int(np.sum(np.asarray(finite) < -1e-10))
    assert negative_count(disk(1.0), float(mu), FAST) == expect


# ---------------------------------------------------------------------------
# annulus sweep

def test_annulus_sweep_grid_and_signs():
    res = annulus_sweep([0.3, 0.6], [1.0, 2.0], k=1, solver_params=FAST)
    assert res.values.shape == (2, 2)
    assert res.signs.shape == (2, 2)
    assert np.all(np.isfinite(res.values))
    assert np.all(res.values > res.disk_values[None, :])
    assert np.all(res.signs == 1.0)


def test_annulus_small_hole_continuity():
    # per-component budget keeps the eps=1e-3 inner circle meshed; the cell
    # must agree with the radial oracle to solver accuracy and with the disk
    # to the size of the genuine O(eps) perturbation
    eps, mu = 1e-3, 1.0
    res = annulus_sweep([eps], [mu], k=1, solver_params={"N": [256, 64]})
    cell = res.values[0, 0]
    per = 2 * np.pi * (1 + eps)
    nu = mu / np.sqrt(np.pi * (1 - eps**2))
    oracle = per * reference.annulus_radial_spectrum(nu, eps, 1)[0]
    assert abs(cell - oracle) < 1e-8
    assert abs(cell - res.disk_values[0]) < 3e-4


def test_annulus_cell_failure_records_nan():
    # a scalar budget starves the tiny inner circle; the cell is marked NaN
    # and the sweep carries on instead of aborting
    with pytest.warns(UserWarning, match="failed"):
        res = annulus_sweep([1e-3], [2.0], k=1, solver_params={"N": 256})
    assert np.isnan(res.values[0, 0])
    assert np.isfinite(res.disk_values[0])


def test_annulus_sweep_validates_eps():
    with pytest.raises(FunctionalError, match="inner radii"):
        annulus_sweep([0.0], [1.0], k=1, solver_params=FAST)
    with pytest.raises(FunctionalError, match="inner radii"):
        annulus_sweep([1.0], [1.0], k=1, solver_params=FAST)


def test_sweep_csv_round_trip(tmp_path):
    values = np.array([[-1.0, -np.inf], [np.nan, -4.0]])
    disk_values = np.array([-1.1, -4.1])
    res = AnnulusSweepResult(
        eps=np.array([0.2, 0.5]), mu=np.array([1.0, 2.0]), values=values,
        disk_values=disk_values, signs=np.sign(values - disk_values[None, :]))
    vp, sp = tmp_path / "vals.csv", tmp_path / "signs.csv"
    res.write_csv(vp, sign_path=sp)

    with open(vp, newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["eps", repr(1.0), repr(2.0)]
    assert [float(v) for v in rows[1]] == [0.2, -1.0, -np.inf]
    back = [float(v) for v in rows[2]]
    assert back[0] == 0.5 and np.isnan(back[1]) and back[2] == -4.0

    with open(sp, newline="") as f:
        srows = list(csv.reader(f))
    assert srows[1] == [repr(0.2), "1", "-1"]
    assert srows[2] == [repr(0.5), "", "1"]
