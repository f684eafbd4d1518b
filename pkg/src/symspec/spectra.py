"""Higher-order spectral density estimates.

Three estimators share one cumulant lattice:

* ``periodogram``: (2 pi)^-(k-1) sum_t C(t) exp(-i t.w) over the truncated lattice;
* ``lag_window_estimate``: the same sum weighted by lambda(t / M);
* ``kernel_convolution_estimate``: the periodogram convolved with the
  kernel M^(k-1) Lambda(M s) on a periodic frequency grid.

Lag sums run over lattice points whose span max_{i,j} |t_i - t_j| (with
t_0 = 0) is at most L. That region is mapped onto itself by every lag
symmetry, so truncation does not break the symmetry of the estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cumulants import CumulantGrid, as_series, cumulant_grid, lattice_points
from .errors import SymmetryError, ValidationError
from .representation import Domain, generator_matrices
from .symmetrize import SymmetryReport, WindowFunction, check_symmetry

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FrequencyGrid:
    """Tensor grid of frequencies in radians per sample; axes are (min, max, count)."""

    axes: tuple[tuple[float, float, int], ...]

    def __post_init__(self):
        ax = []
        for lo, hi, n in self.axes:
            lo, hi, n = float(lo), float(hi), int(n)
            if n < 1 or lo > hi:
                raise ValidationError(f"bad grid axis ({lo}, {hi}, {n})")
            ax.append((lo, hi, n))
        if not ax:
            raise ValidationError("grid needs at least one axis")
        object.__setattr__(self, "axes", tuple(ax))

    @classmethod
    def uniform(cls, dim: int, lo: float, hi: float, count: int) -> "FrequencyGrid":
        return cls(((lo, hi, count),) * dim)

    @classmethod
    def periodic(cls, dim: int, count: int) -> "FrequencyGrid":
        """``count`` points per axis spaced 2 pi / count, starting at -pi."""
        h = _TWO_PI / count
        return cls(((-math.pi, -math.pi + h * (count - 1), count),) * dim)

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(n for _, _, n in self.axes)

    def axis(self, d: int) -> np.ndarray:
        lo, hi, n = self.axes[d]
        return np.linspace(lo, hi, n)

    def points(self) -> np.ndarray:
        """All grid points, shape (npts, dim), last axis fastest."""
        g = np.meshgrid(*[self.axis(d) for d in range(self.dim)], indexing="ij")
        return np.stack([a.ravel() for a in g], axis=1)

    def step(self, d: int = 0) -> float:
        lo, hi, n = self.axes[d]
        return (hi - lo) / (n - 1) if n > 1 else 0.0

    def is_periodic(self) -> bool:
        """True when every axis is the full periodic grid starting at -pi."""
        for lo, hi, n in self.axes:
            h = _TWO_PI / n
            if n < 2 or abs(lo + math.pi) > 1e-12 or abs(hi - (-math.pi + h * (n - 1))) > 1e-9:
                return False
        return True

    def nearest_index(self, omega: Sequence[float]) -> tuple[int, ...]:
        idx = []
        for d, w in enumerate(omega):
            idx.append(int(np.argmin(np.abs(self.axis(d) - w))))
        return tuple(idx)

    def to_dict(self) -> dict:
        return {"axes": [list(a) for a in self.axes]}


@dataclass(frozen=True)
class SpectralEstimate:
    order: int
    grid: FrequencyGrid
    values: np.ndarray
    bandwidth: float | None
    window_label: str
    max_lag: int
    series_length: int
    meta: dict = field(default_factory=dict)

    def at(self, omega: Sequence[float]) -> complex:
        return complex(self.values[self.grid.nearest_index(omega)])

    def metadata(self) -> dict:
        return {"k": self.order, "M": self.bandwidth, "L": self.max_lag,
                "window_label": self.window_label, "N": self.series_length,
                "grid": self.grid.to_dict(), **self.meta}


def default_max_lag(n_samples: int, k: int, M: float) -> int:
    """min(N - 1, ceil(4 M)), further capped so every lag span fits in N."""
    L = min(n_samples - 1, math.ceil(4.0 * M))
    if k > 2:
        L = min(L, (n_samples - 1) // 2)
    return max(L, 0)


def span_mask(L: int, n: int) -> np.ndarray:
    """Lattice points t with max |t_i - t_j| <= L, where t_0 = 0."""
    pts = lattice_points(L, n)
    full = np.concatenate([np.zeros((len(pts), 1), dtype=pts.dtype), pts], axis=1)
    span = full.max(axis=1) - full.min(axis=1)
    return (span <= L).reshape((2 * L + 1,) * n)


def _lattice_transform(weights: np.ndarray, L: int, grid: FrequencyGrid) -> np.ndarray:
    """(2 pi)^-n sum_t w(t) exp(-i t.w), summed directly one axis at a time."""
    n = weights.ndim
    if grid.dim != n:
        raise ValidationError(f"grid dimension {grid.dim} does not match order (needs {n})")
    t = np.arange(-L, L + 1)
    res = weights.astype(complex)
    for d in range(n):
        E = np.exp(-1j * np.outer(grid.axis(d), t))
        res = np.tensordot(res, E, axes=([0], [1]))
    return res / _TWO_PI ** n


def _prepare_cumulants(series, k: int, L: int, center: bool, symmetrize: bool,
                       cumulants: CumulantGrid | None) -> CumulantGrid:
    if cumulants is not None:
        if cumulants.order != k or cumulants.max_lag < L:
            raise ValidationError("supplied cumulant grid does not cover the requested order/lag")
        if cumulants.max_lag > L:
            sl = (slice(cumulants.max_lag - L, cumulants.max_lag + L + 1),) * (k - 1)
            part = None if cumulants.partial_orbit is None else cumulants.partial_orbit[sl]
            return CumulantGrid(k, L, cumulants.values[sl], cumulants.series_length,
                                cumulants.symmetrized, part)
        return cumulants
    x = as_series(series)
    if center:
        x = x - x.mean()
    return cumulant_grid(x, k, L, symmetrize=symmetrize)


def _region(L: int, n: int, region: str) -> np.ndarray:
    if region == "span":
        return span_mask(L, n)
    if region == "box":
        return np.ones((2 * L + 1,) * n, dtype=bool)
    raise ValidationError(f"unknown lag region {region!r}; use 'span' or 'box'")


def periodogram(series, k: int, grid: FrequencyGrid, max_lag: int, *,
                center: bool = True, symmetrize: bool = False, region: str = "span",
                cumulants: CumulantGrid | None = None) -> SpectralEstimate:
    """Raw transform of the estimated cumulants over the truncated lattice."""
    L = int(max_lag)
    C = _prepare_cumulants(series, k, L, center, symmetrize, cumulants)
    w = np.where(_region(L, k - 1, region), C.values, 0.0)
    vals = _lattice_transform(w, L, grid)
    return SpectralEstimate(k, grid, vals, None, "periodogram", L, C.series_length,
                            {"region": region, "symmetrized_cumulants": C.symmetrized})


def lag_window_estimate(series, k: int, window: WindowFunction, M: float,
                        grid: FrequencyGrid, max_lag: int | None = None, *,
                        center: bool = True, symmetrize: bool = False,
                        region: str = "span", cumulants: CumulantGrid | None = None,
                        check_window: bool = True) -> SpectralEstimate:
    """(2 pi)^-(k-1) sum_t lambda(t / M) C(t) exp(-i t.w).

    The window must be a lag-domain window of order k with lambda(0) = 1 that
    passes ``check_symmetry`` at 1e-8; ``check_window=False`` bypasses the
    symmetry check (for tests only).
    """
    if window.order != k or window.domain is not Domain.LAG:
        raise ValidationError(f"need a lag-domain window of order {k}")
    if not M > 0:
        raise ValidationError("bandwidth M must be positive")
    v0 = float(window.evaluate(np.zeros((1, k - 1)))[0])
    if abs(v0 - 1.0) > 1e-9:
        raise ValidationError(f"lag-window must equal 1 at the origin, got {v0}")
    if check_window:
        rep = check_symmetry(window, n_samples=1000, tol=1e-8, seed=0)
        if not rep.passed:
            raise SymmetryError(f"window {window.label!r} is not symmetric "
                                f"(violation {rep.worst_violation:.3g} at {rep.witness_point})")
    N = cumulants.series_length if cumulants is not None else as_series(series).size
    L = default_max_lag(N, k, M) if max_lag is None else int(max_lag)
    C = _prepare_cumulants(series, k, L, center, symmetrize, cumulants)
    pts = lattice_points(L, k - 1)
    lam = window.evaluate(pts / M).reshape(C.values.shape)
    w = np.where(_region(L, k - 1, region), lam * C.values, 0.0)
    vals = _lattice_transform(w, L, grid)
    return SpectralEstimate(k, grid, vals, float(M), window.label, L, C.series_length,
                            {"region": region, "symmetrized_cumulants": C.symmetrized})


def kernel_mass(kernel: WindowFunction, points_per_axis: int | None = None,
                box: float | None = None) -> tuple[float, float]:
    """Trapezoidal integral and minimum of a kernel over its support box."""
    n = kernel.dim
    s = box if box is not None else (kernel.support * 1.001 if kernel.support else 10.0)
    npts = points_per_axis or {1: 4001, 2: 401, 3: 101}.get(n, 31)
    g = np.linspace(-s, s, npts)
    h = g[1] - g[0]
    mesh = np.meshgrid(*([g] * n), indexing="ij")
    vals = kernel.evaluate(np.stack([a.ravel() for a in mesh], axis=1))
    return float(vals.sum() * h ** n), float(vals.min())


def _periodic_kernel_weights(kernel: WindowFunction, M: float, grid: FrequencyGrid) -> np.ndarray:
    """Kernel M^n Lambda(M s) folded onto the period cell and sampled at grid offsets.

    The array is laid out in FFT order (offset 0 at index 0) and scaled to
    unit discrete mass.
    """
    n = grid.dim
    counts = grid.shape
    offs = [np.fft.fftfreq(c, d=1.0 / c) * (_TWO_PI / c) for c in counts]
    mesh = np.meshgrid(*offs, indexing="ij")
    S = np.stack([a.ravel() for a in mesh], axis=1)
    reach = (kernel.support / M) if kernel.support else math.pi
    r = int(math.ceil(reach / _TWO_PI + 0.5))
    total = np.zeros(len(S))
    shifts = np.arange(-r, r + 1)
    for m in np.stack([a.ravel() for a in np.meshgrid(*([shifts] * n), indexing="ij")], axis=1):
        total += kernel.evaluate(M * (S + _TWO_PI * m)) * M ** n
    w = total.reshape(counts)
    mass = w.sum()
    if not mass > 0:
        raise ValidationError("kernel has no mass on this grid")
    return w / mass


def kernel_convolution_estimate(pgram: SpectralEstimate, kernel: WindowFunction, M: float,
                                grid: FrequencyGrid | None = None, *,
                                validate: bool = True) -> SpectralEstimate:
    """Periodic convolution of a periodogram with the kernel scaled by M.

    The scaled kernel M^(k-1) Lambda(M s) has unit integral; on the grid its
    samples are renormalised to unit discrete mass so that a constant
    periodogram is returned unchanged.
    """
    k = pgram.order
    if kernel.order != k or kernel.domain is not Domain.FREQUENCY:
        raise ValidationError(f"need a frequency-domain kernel of order {k}")
    if grid is not None and grid != pgram.grid:
        raise ValidationError("convolution output grid must equal the periodogram grid")
    if not pgram.grid.is_periodic():
        raise ValidationError("kernel convolution needs a full periodic grid (FrequencyGrid.periodic)")
    if not M > 0:
        raise ValidationError("bandwidth M must be positive")
    if validate:
        mass, low = kernel_mass(kernel)
        if low < -1e-12 or abs(mass - 1.0) > 1e-3:
            raise ValidationError(f"kernel must be nonnegative with unit integral "
                                  f"(integral {mass:.6g}, minimum {low:.3g})")
    w = _periodic_kernel_weights(kernel, M, pgram.grid)
    vals = np.fft.ifftn(np.fft.fftn(pgram.values) * np.fft.fftn(w))
    return SpectralEstimate(k, pgram.grid, vals, float(M), kernel.label, pgram.max_lag,
                            pgram.series_length, {**pgram.meta, "estimator": "convolution"})


def _orbit_index_map(grid: FrequencyGrid, B: np.ndarray):
    """Grid index of B w for every grid point (or -1 when it leaves the grid)."""
    if len({a for a in grid.axes}) != 1:
        raise ValidationError("symmetry check needs identical axes")
    lo, hi, count = grid.axes[0]
    periodic = grid.is_periodic()
    h = grid.step(0) if count > 1 else 1.0
    i0 = -lo / h
    if abs(i0 - round(i0)) > 1e-6:
        raise ValidationError("symmetry check needs the origin on the grid lattice")
    i0 = int(round(i0))
    n = grid.dim
    mesh = np.meshgrid(*([np.arange(count)] * n), indexing="ij")
    I = np.stack([a.ravel() for a in mesh], axis=1) - i0
    J = I @ B.T + i0
    if periodic:
        J = np.mod(J, count)
        ok = np.ones(len(J), dtype=bool)
    else:
        ok = np.all((J >= 0) & (J < count), axis=1)
    flat = np.zeros(len(J), dtype=np.int64)
    for d in range(n):
        flat = flat * count + np.clip(J[:, d], 0, count - 1)
    return np.where(ok, flat, -1)


def spectral_symmetry_check(est: SpectralEstimate, tol: float = 1e-8) -> SymmetryReport:
    """Worst |f(w) - f(B w)| / max|f| over generators B of the frequency orbit.

    Periodic grids wrap images modulo 2 pi; other grids only compare images
    that land on the grid.
    """
    vals = est.values.ravel()
    scale = max(float(np.abs(vals).max()), np.finfo(float).tiny)
    pts = est.grid.points()
    worst, w_pt, w_mat = 0.0, None, None
    compared = 0
    for G in generator_matrices(est.order, Domain.FREQUENCY):
        idx = _orbit_index_map(est.grid, G.entries)
        ok = idx >= 0
        compared += int(ok.sum())
        diff = np.where(ok, np.abs(vals - vals[np.maximum(idx, 0)]), 0.0) / scale
        i = int(np.argmax(diff))
        if w_pt is None or diff[i] > worst:
            worst, w_pt, w_mat = float(diff[i]), pts[i].tolist(), G.tolist()
    if compared == 0:
        raise ValidationError("no symmetry images fall on this grid")
    passed = worst <= tol
    return SymmetryReport(passed, worst, None if passed else w_pt,
                          None if passed else w_mat, compared, tol)
