"""Eigensolvers against the disk quotient law and each other."""

import json
import warnings

import numpy as np
import pytest

from steklov.geometry import disk, kite, semicircle_mixed, square, transformed
from steklov.mesh import make_discretization, uniform_grid
from steklov.operators import assemble
from steklov.reference import (
    DiskSpectrumQuery,
    disk_spectrum,
    disk_spectrum_exceptional,
)
from steklov.solver import (
    ProbeMismatchWarning,
    SingularOperatorError,
    SolverError,
    Spectrum,
    eigenfunction_at,
    mre,
    solve_bio,
    solve_biomod,
)
from steklov.special import bessel_j, bessel_j_prime, bessel_zero


def bio(curve, N, mu, **kw):
    return solve_bio(assemble(curve, uniform_grid(curve, N), mu), **kw)


# ---------------------------------------------------------------------------
# BIO on the disk

def test_disk_spectrum_matches_quotient_law():
    spec = bio(disk(), 192, 1.3)
    ref = disk_spectrum(DiskSpectrumQuery(mu=1.3, count=20))
    assert mre(spec, ref, 20) < 1e-12


def test_eigenvalues_sorted_real_finite():
    spec = bio(kite(), 128, 2.0)
    w = spec.eigenvalues
    assert np.all(np.diff(w) >= 0)
    assert np.isrealobj(w) and np.all(np.isfinite(w))
    assert spec.rank_deficiency == 0
    assert spec.method == "BIO"


def test_densities_normalized_with_real_positive_pivot():
    spec = bio(disk(), 96, 1.1)
    V = spec.densities
    amax = np.abs(V).max(axis=0)
    assert np.allclose(amax, 1.0, atol=1e-12)
    piv = V[np.argmax(np.abs(V), axis=0), np.arange(V.shape[1])]
    assert np.all(piv.real > 0)
    assert np.abs(piv.imag).max() < 1e-12


def test_exceptional_guard_names_the_robust_method():
    mu = bessel_zero(0, 1)
    with pytest.raises(SingularOperatorError, match="solve_biomod"):
        bio(disk(), 128, mu)
    # force pushes through the ill-conditioned solve anyway
    spec = bio(disk(), 128, mu, force=True)
    assert len(spec) > 0


def test_mixed_boundary_subset_of_disk():
    # Neumann diameter selects the even (cosine) disk modes, each once
    mu = 2.0
    spec = solve_biomod(semicircle_mixed(), {"N": 480, "p": 6}, mu)
    assert spec.metadata.get("mixed_bc")
    n = np.arange(0, 30)
    ref = np.sort(mu * bessel_j_prime(n, mu) / bessel_j(n, mu))
    assert np.abs(spec.finite[:10] - ref[:10]).max() < 1e-6


# ---------------------------------------------------------------------------
# BIO-MOD: fall-through, sentinels, junk deflation

def test_biomod_equals_bio_off_resonance():
    # identical code path off resonance: exact equality, including densities
    for N, mu in [(128, 1.3), (400, 2.2)]:
        a = bio(disk(), N, mu)
        b = solve_biomod(disk(), {"N": N}, mu)
        assert b.method == "BIO-MOD"
        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert np.array_equal(a.densities, b.densities)


def test_biomod_equals_bio_random_wavenumbers():
    rng = np.random.default_rng(7)
    for mu in rng.uniform(0.5, 6.0, size=20):
        a = bio(kite(), 96, mu)
        b = solve_biomod(kite(), {"N": 96}, mu)
        ra, rb = a.finite[:16], b.finite[:16]
        assert np.abs((ra - rb) / rb).max() < 1e-10


@pytest.mark.parametrize("n,expect", [(0, 1), (1, 2), (2, 2)])
def test_sentinel_count_equals_dirichlet_multiplicity(n, expect):
    mu = bessel_zero(n, 1)
    spec = solve_biomod(disk(), {"N": 256}, mu, tol=1e-10)
    assert spec.rank_deficiency == expect
    assert np.all(spec.eigenvalues[:expect] == -np.inf)
    assert np.all(np.isfinite(spec.eigenvalues[expect:]))


def test_exceptional_finite_values_match_oracle():
    # j_{1,2}: two sentinels, finite part excludes the resonant order n=1
    mu = bessel_zero(1, 2)
    spec = solve_biomod(disk(), {"N": 256}, mu, tol=1e-10)
    ell, ref = disk_spectrum_exceptional(mu, 16)
    assert spec.rank_deficiency == ell == 2
    ref = np.asarray(ref)
    err = np.abs(spec.finite[:16] - ref) / np.maximum(1.0, np.abs(ref))
    assert err.max() < 1e-10


def test_laplace_limit_disk_spectrum():
    spec = solve_biomod(disk(), {"N": 128}, 0.0)
    assert np.abs(spec.finite[:7] - [0, 1, 1, 2, 2, 3, 3]).max() < 1e-11


def test_probe_mismatch_full_count_wins():
    # coarse probe (N/3 per arc) misses the mu = 5 resonance of the pi square;
    # the full-N SVD recounts and warns
    with pytest.warns(ProbeMismatchWarning, match="full grid"):
        spec = solve_biomod(square(), {"N": 512, "p": 6}, 5.0)
    assert spec.rank_deficiency == 2
    assert spec.metadata["probe_ell"] == 0


def test_full_probe_suppresses_mismatch():
    with warnings.catch_warnings():
        warnings.simplefilter("error", ProbeMismatchWarning)
        spec = solve_biomod(square(), {"N": 512, "p": 6}, 5.0, full_probe=True)
    assert spec.rank_deficiency == 2
    assert spec.metadata["probe_ell"] == 2


def test_corner_junk_deflated_without_sentinels():
    # strongly graded square at a non-exceptional wavenumber: S loses rank
    # to localized corner directions, which are deflated rather than
    # reported as resonances
    spec = solve_biomod(square(), {"N": 512, "p": 6}, 2.0)
    assert spec.rank_deficiency == 0
    assert spec.metadata["deflated"] > 0
    assert np.all(np.isfinite(spec.eigenvalues))


def test_rigid_motion_invariance():
    base = kite()
    moved = transformed(base, rotation=0.7, translation=(2.0, -1.3))
    a = solve_biomod(base, {"N": 160}, 2.0)
    b = solve_biomod(moved, {"N": 160}, 2.0)
    ra, rb = a.finite[:16], b.finite[:16]
    assert np.abs((ra - rb) / ra).max() < 1e-11


def test_tol_range_guard():
    with pytest.raises(SolverError):
        solve_biomod(disk(), {"N": 64}, 1.0, tol=1e-20)
    with pytest.raises(SolverError):
        solve_biomod(disk(), {"N": 64}, 1.0, tol=1e-3)


def test_accepts_prebuilt_discretization():
    disc = uniform_grid(disk(), 96)
    a = solve_biomod(disk(), disc, 1.3)
    b = solve_biomod(disk(), {"N": 96}, 1.3)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)


def test_metadata_records_resolution():
    spec = solve_biomod(square(), {"N": 128, "p": 4}, 1.0)
    assert spec.metadata["N"] == 128
    assert spec.metadata["p"] == 4
    assert spec.metadata["imag_tol"] == 1e-6


# ---------------------------------------------------------------------------
# serialization

def test_spectrum_json_round_trip_with_sentinels():
    mu = bessel_zero(1, 1)
    spec = solve_biomod(disk(), {"N": 256}, mu, tol=1e-10)
    doc = json.loads(spec.to_json())
    assert doc["eigenvalues"][:2] == ["-inf", "-inf"]
    assert doc["method"] == "BIO-MOD" and doc["N"] == 256
    back = Spectrum.from_json(spec.to_json())
    assert np.array_equal(back.eigenvalues, spec.eigenvalues)
    assert back.mu == spec.mu
    assert back.rank_deficiency == 2
    assert back.tol == spec.tol
    assert back.densities is None


# ---------------------------------------------------------------------------
# eigenfunction evaluation

@pytest.fixture(scope="module")
def disk_mu2():
    curve = disk()
    disc = uniform_grid(curve, 256)
    ops = assemble(curve, disc, 2.0)
    return ops, solve_bio(ops)


def test_eigenfunction_rotational_symmetry(disk_mu2):
    # first eigenpair at mu=2 has angular order 0
    _, spec = disk_mu2
    th = 2 * np.pi * np.arange(32) / 32
    pts = 0.5 * np.column_stack([np.cos(th), np.sin(th)])
    u = eigenfunction_at(spec, 0, pts)
    assert np.abs(u - u.mean()).max() <= 1e-8 * np.abs(u.mean())


def test_eigenfunction_radial_profile(disk_mu2):
    _, spec = disk_mu2
    u = eigenfunction_at(spec, 0, [(0.5, 0.0), (0.25, 0.25)])
    r2 = np.hypot(0.25, 0.25)
    ratio = bessel_j(0, 2 * 0.5) / bessel_j(0, 2 * r2)
    assert u[0] / u[1] == pytest.approx(ratio, rel=1e-10)


def test_eigenfunction_helmholtz_residual(disk_mu2):
    _, spec = disk_mu2
    h = 1e-3
    x0 = np.array([0.3, 0.0])
    stencil = np.array([[0, 0], [h, 0], [-h, 0], [0, h], [0, -h]]) + x0
    for k in (0, 1, 3):
        u = eigenfunction_at(spec, k, stencil)
        lap = (u[1:].sum() - 4 * u[0]) / h**2
        assert abs(lap + 4.0 * u[0]) < 1e-4


def test_eigenfunction_boundary_condition_trace():
    # one-sided normal difference 1e-2 inside the boundary vs sigma times
    # the boundary trace S@phi; the 5-spacing near-field guard forces a
    # fine grid for evaluation this close
    curve = disk()
    disc = uniform_grid(curve, 3200)
    ops = assemble(curve, disc, 2.0)
    spec = solve_bio(ops)
    sigma = spec.eigenvalues[0]
    trace = (ops.S @ spec.densities[:, 0])[0]  # node 0 sits at (1, 0)
    h = 1e-3
    u1 = eigenfunction_at(spec, 0, (0.99, 0.0))
    u2 = eigenfunction_at(spec, 0, (0.99 - h, 0.0))
    fd = (u1 - u2) / h
    assert abs(fd - sigma * trace) / abs(sigma * trace) < 0.01


def test_eigenfunction_symmetry_on_kite():
    # kite is mirror-symmetric about the x axis, so |u| is too
    spec = solve_biomod(kite(), {"N": 256}, 2.0)
    for k in (0, 1, 2, 3):
        up = eigenfunction_at(spec, k, [(0.0, 0.4), (-0.3, 0.6)])
        dn = eigenfunction_at(spec, k, [(0.0, -0.4), (-0.3, -0.6)])
        assert np.abs(np.abs(up) - np.abs(dn)).max() < 1e-8


def test_eigenfunction_guards(disk_mu2):
    _, spec = disk_mu2
    with pytest.raises(ValueError, match="mesh spacings"):
        eigenfunction_at(spec, 0, (0.999, 0.0))
    with pytest.raises(IndexError):
        eigenfunction_at(spec, 500, (0.0, 0.0))
    # sentinel index has no density
    mu = bessel_zero(0, 1)
    exc = solve_biomod(disk(), {"N": 256}, mu, tol=1e-10)
    with pytest.raises(SolverError, match="sentinel"):
        eigenfunction_at(exc, 0, (0.0, 0.0))
    # deserialized spectra carry no densities
    bare = Spectrum.from_json(spec.to_json())
    with pytest.raises(SolverError, match="densities"):
        eigenfunction_at(bare, 0, (0.0, 0.0))


# ---------------------------------------------------------------------------
# mean relative error

def test_mre_hand_values():
    assert mre([1.0, 2.0], [1.0, 2.0], 2) == 0.0
    assert mre([1.1, 2.0], [1.0, 2.0], 2) == pytest.approx(0.05, abs=1e-15)
    # absolute error replaces relative at exact zeros of the reference
    assert mre([0.01, 3.0], [0.0, 3.0], 2) == pytest.approx(0.005, abs=1e-15)


def test_mre_spectrum_inputs_skip_sentinels():
    mu = bessel_zero(1, 1)
    spec = solve_biomod(disk(), {"N": 256}, mu, tol=1e-10)
    _, ref = disk_spectrum_exceptional(mu, 8)
    assert mre(spec, ref, 8) < 1e-10


def test_mre_requires_enough_eigenvalues():
    with pytest.raises(SolverError):
        mre([1.0], [1.0, 2.0], 2)
    with pytest.raises(SolverError):
        mre([1.0, 2.0], [1.0], 2)
