"""Reference spectra: internal consistency and solver cross-validation.

The disk/square/annulus oracles never touch the operator code, so agreement
with the Nystrom solvers here is double-entry bookkeeping, not circularity.
"""

import numpy as np
import pytest

from steklov.geometry import annulus, disk, square
from steklov.mesh import uniform_grid
from steklov.operators import assemble
from steklov.reference import (
    DiskSpectrumQuery,
    OracleError,
    annulus_radial_spectrum,
    disk_spectrum,
    disk_spectrum_exceptional,
    exceptional_wavenumbers,
    save_reference_csv,
    square_spectrum,
)
from steklov.solver import mre, solve_bio, solve_biomod
from steklov.special import bessel_j, bessel_j_prime, bessel_zero


# ---------------------------------------------------------------------------
# disk

def test_disk_near_exceptional_pair_values():
    # reference values bracketing the j_{1,2} ~ 7.0156 resonance
    assert disk_spectrum(DiskSpectrumQuery(mu=7.1, count=2))[1] == pytest.approx(
        -14.2232, abs=5e-4
    )
    assert disk_spectrum(DiskSpectrumQuery(mu=7.015, count=2))[1] == pytest.approx(
        -11957.8208, abs=0.5
    )


def test_disk_laplace_limit():
    vals = disk_spectrum(DiskSpectrumQuery(mu=1e-6, count=9))
    assert np.abs(vals - [0, 1, 1, 2, 2, 3, 3, 4, 4]).max() < 1e-9


def test_disk_radius_scaling():
    # sigma(mu; R) = values of mu J_n'(mu R)/J_n(mu R)
    mu, R = 1.3, 2.0
    vals = disk_spectrum(DiskSpectrumQuery(mu=mu, count=5, radius=R))
    n = np.arange(0, 4)
    sig = mu * bessel_j_prime(n, mu * R) / bessel_j(n, mu * R)
    ref = np.sort(np.concatenate([sig, sig[1:]]))[:5]
    assert np.allclose(vals, ref, rtol=1e-13)


def test_disk_multiplicity_structure():
    vals = disk_spectrum(DiskSpectrumQuery(mu=1.3, count=9))
    # n = 0 simple, each n >= 1 double
    assert vals[1] == vals[2] and vals[3] == vals[4] and vals[5] == vals[6]
    assert vals[0] not in vals[1:]


def test_disk_prefix_stable_under_count_growth():
    a = disk_spectrum(DiskSpectrumQuery(mu=3.3, count=25))
    b = disk_spectrum(DiskSpectrumQuery(mu=3.3, count=50))
    assert np.array_equal(a, b[:25])


@pytest.mark.parametrize("mu,N", [(0.1, 140), (2.0, 160), (7.1, 200), (30.0, 200)])
def test_disk_oracle_vs_bio_first_fifty(mu, N):
    spec = solve_bio(assemble(disk(), uniform_grid(disk(), N), mu))
    ref = disk_spectrum(DiskSpectrumQuery(mu=mu, count=50))
    assert mre(spec, ref, 50) < 1e-11


def test_disk_resonant_wavenumber_rejected():
    with pytest.raises(OracleError, match="exceptional"):
        disk_spectrum(DiskSpectrumQuery(mu=bessel_zero(0, 1), count=5))


def test_disk_query_validation():
    with pytest.raises(OracleError):
        DiskSpectrumQuery(mu=1.0, count=0)
    with pytest.raises(OracleError):
        DiskSpectrumQuery(mu=-1.0, count=5)
    with pytest.raises(OracleError):
        DiskSpectrumQuery(mu=1.0, count=5, radius=0.0)


def test_disk_exceptional_sentinel_counts():
    ell, _ = disk_spectrum_exceptional(bessel_zero(0, 1), 8)
    assert ell == 1
    ell, _ = disk_spectrum_exceptional(bessel_zero(1, 2), 8)
    assert ell == 2


def test_disk_exceptional_finite_list_construction():
    mu = bessel_zero(1, 2)  # ~7.0156, resonant order n* = 1
    ell, vals = disk_spectrum_exceptional(mu, 12)
    assert np.all(np.isfinite(vals)) and len(vals) == 12
    # finite list = quotients over n != 1, each n >= 1 doubled
    n = np.array([0, 2, 3, 4, 5, 6, 7, 8])
    sig = mu * bessel_j_prime(n, mu) / bessel_j(n, mu)
    manual = np.sort(np.concatenate([sig, sig[1:]]))[:12]
    assert np.allclose(vals, manual, rtol=1e-12, atol=1e-12)
    # and the excluded order is exactly the degenerate one
    assert abs(bessel_j(1, mu)) < 1e-12


def test_disk_exceptional_requires_bessel_zero():
    with pytest.raises(OracleError, match="not a Bessel zero"):
        disk_spectrum_exceptional(3.0, 5)


# ---------------------------------------------------------------------------
# square

def test_square_laplace_limit_has_zero_ground_state():
    for side in (np.pi, 1.0, 2.5):
        vals = square_spectrum(side, 0.0, 5)
        assert vals[0] == pytest.approx(0.0, abs=1e-12)
        assert vals[1] > 0.1


def test_square_exceptional_mu5_sentinels_and_zeros():
    # 25 = 3^2 + 4^2 with two ordered representations -> ell = 2;
    # mu = 5 also carries Neumann-type modes (cos(3x)cos(4y) etc.) with
    # sigma exactly 0, a quadruple
    vals = square_spectrum(np.pi, 5.0, 14)
    assert np.all(vals[:2] == -np.inf)
    assert np.all(np.isfinite(vals[2:]))
    assert np.count_nonzero(vals == 0.0) == 4


def test_square_all_sentinels_when_count_small():
    vals = square_spectrum(np.pi, 5.0, 2)
    assert np.all(vals == -np.inf)


def test_square_prefix_stable_under_count_growth():
    a = square_spectrum(np.pi, 3.3, 40)
    b = square_spectrum(np.pi, 3.3, 80)
    assert np.allclose(a, b[:40], rtol=1e-12)


def test_square_oracle_vs_biomod_moderate_grid():
    # independent cross-check at a generic wavenumber; imag_tol relaxed
    # because genuine corner-domain modes carry ~1e-5 imaginary dust at
    # this resolution (documented deviation surface)
    spec = solve_biomod(square(), {"N": 512, "p": 5}, 3.3, imag_tol=1e-4)
    ref = square_spectrum(np.pi, 3.3, 16)
    assert mre(spec, ref, 16) < 1e-5


def test_square_oracle_vs_biomod_mu7_fine_grid():
    # the full-resolution agreement bound the acceptance suite leans on
    spec = solve_biomod(square(), {"N": 2048, "p": 6}, 7.0)
    ref = square_spectrum(np.pi, 7.0, 20)
    assert mre(spec, ref, 20) < 1e-8


def test_square_side_scaling():
    # sigma scales like 1/L at fixed mu*L: sigma(L, mu) = sigma(1, mu L)/L
    base = square_spectrum(1.0, 2.0, 8)
    scaled = square_spectrum(2.0, 1.0, 8)
    assert np.allclose(scaled, base / 2.0, rtol=1e-10)


def test_square_validation():
    with pytest.raises(OracleError):
        square_spectrum(-1.0, 2.0, 5)
    with pytest.raises(OracleError):
        square_spectrum(np.pi, -2.0, 5)


# ---------------------------------------------------------------------------
# annulus

def test_annulus_oracle_vs_bio():
    ref = annulus_radial_spectrum(1.7, 0.5, 12)
    curve = annulus(1.0, 0.5)
    spec = solve_bio(assemble(curve, uniform_grid(curve, 360), 1.7))
    assert np.abs((spec.finite[:12] - ref) / ref).max() < 1e-10


def test_annulus_laplace_limit_ground_state():
    # mu -> 0: sigma_1 -> 0 (constant eigenfunction survives on the ring)
    vals = annulus_radial_spectrum(1e-7, 0.5, 3)
    assert abs(vals[0]) < 1e-6


# ---------------------------------------------------------------------------
# exceptional-wavenumber catalogs

def test_exceptional_catalog_disk():
    out = exceptional_wavenumbers("disk", 4.0)
    assert len(out) == 2
    assert out[0][0] == pytest.approx(2.404825557695773, abs=1e-12)
    assert out[0][1] == 1
    assert out[1][0] == pytest.approx(3.8317059702075125, abs=1e-12)
    assert out[1][1] == 2
    # radius scaling: zeros divide by R
    half = exceptional_wavenumbers("disk", 8.0, radius=0.5)
    assert half[0][0] == pytest.approx(2 * 2.404825557695773, rel=1e-13)


def test_exceptional_catalog_square():
    out = exceptional_wavenumbers("square", 5.1)
    as_dict = {round(m, 9): mult for m, mult in out}
    assert as_dict[round(np.sqrt(2), 9)] == 1
    assert as_dict[5.0] == 2  # 25 = 3^2+4^2 = 4^2+3^2
    assert exceptional_wavenumbers("square", 1.5) == [(np.sqrt(2), 1)]
    # monotone sorted
    mus = [m for m, _ in out]
    assert mus == sorted(mus)


def test_exceptional_catalog_guards():
    with pytest.raises(OracleError):
        exceptional_wavenumbers("kite", 4.0)
    with pytest.raises(OracleError):
        exceptional_wavenumbers("disk", 101.0)


# ---------------------------------------------------------------------------
# CSV export

def test_save_reference_csv(tmp_path):
    vals = square_spectrum(np.pi, 5.0, 6)
    path = tmp_path / "ref.csv"
    save_reference_csv(vals, path)
    lines = path.read_text().strip().splitlines()
    body = lines[1:]  # header row
    assert body[0].endswith("-inf") and body[1].endswith("-inf")
    # finite entries round-trip at full precision
    assert float(body[2].split(",")[-1]) == vals[2]
