import math

import numpy as np
import pytest

from symspec.cumulants import cumulant_grid, lattice_points
from symspec.errors import SymmetryError, ValidationError
from symspec.kernels import flat_top_conical, optimal_kernel, optimal_lag_window
from symspec.representation import Domain
from symspec.spectra import (
    FrequencyGrid,
    SpectralEstimate,
    _periodic_kernel_weights,
    default_max_lag,
    kernel_convolution_estimate,
    lag_window_estimate,
    periodogram,
    span_mask,
    spectral_symmetry_check,
)
from symspec.symmetrize import WindowFunction
from symspec.synth import SynthKind, SynthSpec, generate_synthetic


def ones_window(k):
    return WindowFunction(k, Domain.LAG, lambda X: np.ones(len(X)), "ones")


def direct_sum(series, k, L, omega, region="span"):
    """Brute-force (2 pi)^-(k-1) sum_t C(t) exp(-i t.w) one lattice point at a time."""
    x = np.asarray(series, float)
    g = cumulant_grid(x - x.mean(), k, L)
    total = 0j
    for t in lattice_points(L, k - 1):
        full = np.concatenate([[0], t])
        if region == "span" and full.max() - full.min() > L:
            continue
        total += g.at(t) * np.exp(-1j * np.dot(t, omega))
    return total / (2 * math.pi) ** (k - 1)


@pytest.fixture(scope="module")
def white():
    return np.random.default_rng(2).standard_normal(2048)


def test_grid_basics():
    g = FrequencyGrid.periodic(2, 8)
    assert g.shape == (8, 8) and g.is_periodic()
    assert g.step() == pytest.approx(math.pi / 4)
    assert g.points()[1].tolist() == pytest.approx([-math.pi, -3 * math.pi / 4])
    u = FrequencyGrid.uniform(1, 0, 1.5, 31)
    assert not u.is_periodic()
    assert u.nearest_index([0.61]) == (12,)
    with pytest.raises(ValidationError):
        FrequencyGrid(((1.0, 0.0, 3),))
    with pytest.raises(ValidationError):
        FrequencyGrid(((0.0, 1.0, 0),))


def test_span_region():
    m = span_mask(2, 2)
    assert m[2 + 2, 2 + 2] and m[2 + 2, 2 + 0] and not m[2 + 2, 2 - 2]
    assert span_mask(3, 1).all()


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("region", ["span", "box"])
def test_periodogram_matches_direct_sum(k, region, white, rng):
    x = white[:300]
    L = 5
    grid = FrequencyGrid.uniform(k - 1, -3.0, 3.0, 7)
    est = periodogram(x, k, grid, L, region=region)
    for _ in range(4):
        i = tuple(rng.integers(0, 7, size=k - 1))
        omega = [grid.axis(d)[i[d]] for d in range(k - 1)]
        assert est.values[i] == pytest.approx(direct_sum(x, k, L, omega, region), rel=1e-10, abs=1e-14)


def test_periodogram_origin_is_lattice_sum(white):
    x = white[:400]
    L = 4
    grid = FrequencyGrid.uniform(2, -1, 1, 3)
    est = periodogram(x, 3, grid, L)
    g = cumulant_grid(x - x.mean(), 3, L)
    want = g.values[span_mask(L, 2)].sum() / (2 * math.pi) ** 2
    assert est.at([0, 0]).real == pytest.approx(want, rel=1e-12)
    assert abs(est.at([0, 0]).imag) < 1e-15


def test_zero_series():
    est = periodogram(np.zeros(64), 3, FrequencyGrid.periodic(2, 8), 4)
    assert np.all(est.values == 0)


def test_white_noise_flat_mean():
    x = np.random.default_rng(9).standard_normal(10_000)
    est = periodogram(x, 2, FrequencyGrid.periodic(1, 64), 50)
    assert est.values.real.mean() == pytest.approx(1 / (2 * math.pi), rel=0.15)


def test_power_spectrum_conjugate_symmetry(white):
    grid = FrequencyGrid.uniform(1, -3, 3, 61)
    v = periodogram(white, 2, grid, 30).values
    assert np.allclose(v[::-1], np.conj(v), atol=1e-15)


def test_unit_window_reduces_to_periodogram(white):
    grid = FrequencyGrid.periodic(2, 16)
    a = lag_window_estimate(white, 3, ones_window(3), 3.0, grid, max_lag=12)
    b = periodogram(white, 3, grid, 12)
    assert np.allclose(a.values, b.values, rtol=1e-12, atol=1e-15)


def test_ar1_spectrum_at_zero():
    phi = 0.5
    x = generate_synthetic(SynthSpec(SynthKind.AR1, 20_000, seed=4, phi=phi))
    grid = FrequencyGrid.uniform(1, 0, 0, 1)
    est = lag_window_estimate(x, 2, optimal_lag_window(2), 12.0, grid)
    want = 1 / (2 * math.pi * (1 - phi) ** 2)
    assert est.values.ravel()[0].real == pytest.approx(want, rel=0.2)


def test_linearity(white):
    grid = FrequencyGrid.periodic(2, 8)
    w = flat_top_conical(0.5)
    a = lag_window_estimate(white[:500], 3, w, 4.0, grid)
    b = lag_window_estimate(3 * white[:500], 3, w, 4.0, grid)
    assert np.allclose(b.values, 27 * a.values, rtol=1e-10, atol=1e-14)


def test_window_validation(white):
    grid = FrequencyGrid.periodic(1, 8)
    skew = WindowFunction(2, Domain.LAG, lambda X: np.exp(-X[:, 0]) * (X[:, 0] > -50), "skew")
    with pytest.raises(SymmetryError):
        lag_window_estimate(white, 2, skew, 2.0, grid)
    half = WindowFunction(2, Domain.LAG, lambda X: 0.5 * np.ones(len(X)))
    with pytest.raises(ValidationError):
        lag_window_estimate(white, 2, half, 2.0, grid)
    with pytest.raises(ValidationError):
        lag_window_estimate(white, 3, optimal_lag_window(2), 2.0, grid)
    with pytest.raises(ValidationError):
        lag_window_estimate(white, 2, optimal_lag_window(2), 0.0, grid)


def test_asymmetric_window_fails_symmetry_check(white):
    grid = FrequencyGrid.periodic(2, 16)
    skew = WindowFunction(3, Domain.LAG, lambda X: np.exp(-X[:, 0] ** 2) * (1 + 0.3 * np.tanh(X[:, 0])),
                          "skew")
    est = lag_window_estimate(white, 3, skew, 3.0, grid, check_window=False)
    rep = spectral_symmetry_check(est, tol=1e-8)
    assert not rep.passed and rep.witness_point is not None


@pytest.mark.parametrize("sym", [False, True])
def test_k3_estimate_symmetric(sym, white):
    grid = FrequencyGrid.periodic(2, 32)
    est = lag_window_estimate(white, 3, flat_top_conical(0.5), 5.0, grid, symmetrize=sym)
    assert spectral_symmetry_check(est, tol=1e-8).passed
    # the origin is a fixed point of every substitution, so the value is real
    v0 = est.at([0, 0])
    assert abs(v0.imag) <= 1e-10 * np.abs(est.values).max()


def test_symmetry_check_on_partial_grid(white):
    grid = FrequencyGrid.uniform(2, -1.0, 2.0, 31)
    est = lag_window_estimate(white, 3, optimal_lag_window(3), 4.0, grid)
    assert spectral_symmetry_check(est).passed
    odd = FrequencyGrid(((-1.0, 1.0, 5), (0.0, 1.0, 3)))
    with pytest.raises(ValidationError):
        spectral_symmetry_check(lag_window_estimate(white, 3, optimal_lag_window(3), 4.0, odd))


def test_convolution_of_constant():
    for k in (2, 3):
        grid = FrequencyGrid.periodic(k - 1, 32)
        P = SpectralEstimate(k, grid, np.full(grid.shape, 2.5 + 0j), None, "const", 0, 100)
        out = kernel_convolution_estimate(P, optimal_kernel(k), 4.0)
        assert np.allclose(out.values, 2.5, rtol=1e-12)


@pytest.mark.parametrize("k", [2, 3])
def test_fft_matches_direct_circular_sum(k, white):
    grid = FrequencyGrid.periodic(k - 1, 12)
    P = periodogram(white, k, grid, 6)
    K = optimal_kernel(k)
    out = kernel_convolution_estimate(P, K, 2.0).values
    w = _periodic_kernel_weights(K, 2.0, grid)
    n = grid.shape[0]
    ref = np.zeros(grid.shape, complex)
    for i in np.ndindex(*grid.shape):
        for j in np.ndindex(*grid.shape):
            ref[i] += P.values[j] * w[tuple((a - b) % n for a, b in zip(i, j))]
    assert np.max(np.abs(out - ref)) <= 1e-10 * np.abs(ref).max()


def test_dirac_limit(white):
    grid = FrequencyGrid.periodic(1, 64)
    P = periodogram(white, 2, grid, 40)
    devs = []
    for beta in (0.5, 5.0, 50.0, 500.0):
        out = kernel_convolution_estimate(P, optimal_kernel(2, beta), 1.0)
        devs.append(np.linalg.norm(out.values - P.values) / np.linalg.norm(P.values))
    assert all(a > b for a, b in zip(devs, devs[1:]))
    assert devs[-1] < 1e-12


def test_convolution_validation(white):
    grid = FrequencyGrid.periodic(1, 16)
    P = periodogram(white, 2, grid, 8)
    K = optimal_kernel(2)
    heavy = WindowFunction(2, Domain.FREQUENCY, lambda W: 2 * K.evaluate(W), "2K", K.support)
    with pytest.raises(ValidationError):
        kernel_convolution_estimate(P, heavy, 2.0)
    with pytest.raises(ValidationError):
        kernel_convolution_estimate(P, optimal_kernel(3), 2.0)
    Pu = periodogram(white, 2, FrequencyGrid.uniform(1, 0, 3, 16), 8)
    with pytest.raises(ValidationError):
        kernel_convolution_estimate(Pu, K, 2.0)


def test_default_max_lag():
    assert default_max_lag(2048, 2, 4.0) == 16
    assert default_max_lag(2048, 3, 2.2) == 9
    assert default_max_lag(20, 3, 10.0) == 9
    assert default_max_lag(20, 2, 10.0) == 19


def test_metadata(white):
    est = lag_window_estimate(white, 3, optimal_lag_window(3), 4.0, FrequencyGrid.periodic(2, 8))
    md = est.metadata()
    assert (md["k"], md["M"], md["L"], md["N"]) == (3, 4.0, 16, 2048)
    assert md["window_label"].startswith("optimal-lag")
