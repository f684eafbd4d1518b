"""Set partitions, joint cumulants from moments, and sample auto-cumulants.

The k-th order auto-cumulant at lags ``(x_1, ..., x_{k-1})`` is the sum over
all set partitions of the points ``{0, x_1, ..., x_{k-1}}`` of
``(-1)^(p-1) (p-1)! * mu_block_1 * ... * mu_block_p``. The estimator plugs in
sample means; each block's mean is taken over its own maximal valid range.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import InsufficientDataError, ValidationError
from .representation import Domain, symmetry_orbit

MAX_PARTITION_ITEMS = 10


@dataclass(frozen=True)
class SetPartition:
    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __str__(self) -> str:
        return "|".join("".join(str(i) for i in b) for b in self.blocks)


def set_partitions(n: int) -> list[SetPartition]:
    """All partitions of {0, ..., n-1} in restricted-growth-string order."""
    if int(n) != n or not 1 <= n <= MAX_PARTITION_ITEMS:
        raise ValidationError(f"set_partitions needs 1 <= n <= {MAX_PARTITION_ITEMS}, got {n}")
    return list(_partitions_cached(int(n)))


@lru_cache(maxsize=None)
def _partitions_cached(n: int) -> tuple[SetPartition, ...]:
    out = []

    def grow(rgs: list[int], top: int):
        if len(rgs) == n:
            blocks = [[] for _ in range(top + 1)]
            for i, b in enumerate(rgs):
                blocks[b].append(i)
            out.append(SetPartition(n, tuple(tuple(b) for b in blocks)))
            return
        for b in range(top + 2):
            grow(rgs + [b], max(top, b))

    grow([0], 0)
    return tuple(out)


def _weight(p: int) -> int:
    return (-1) ** (p - 1) * math.factorial(p - 1)


def cumulant_from_moments(moment_oracle: Callable[[tuple[int, ...]], float],
                          lags: Sequence[int]) -> float:
    """Joint cumulant of (X_0, X_{x_1}, ..., X_{x_{k-1}}) from a moment oracle.

    ``moment_oracle`` receives a sorted tuple of time indices (a multiset:
    coincident lags repeat) and returns E[prod X_i].
    """
    points = (0, *(int(x) for x in lags))
    cache: dict[tuple[int, ...], float] = {}

    def mu(block):
        key = tuple(sorted(points[i] for i in block))
        if key not in cache:
            cache[key] = float(moment_oracle(key))
        return cache[key]

    terms = []
    for part in set_partitions(len(points)):
        prod = float(_weight(len(part.blocks)))
        for b in part.blocks:
            prod *= mu(b)
        terms.append(prod)
    return math.fsum(terms)


def as_series(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.ndim != 1 or a.size < 1:
        raise ValidationError("a time series must be a nonempty 1-D array")
    if not np.all(np.isfinite(a)):
        bad = int(np.flatnonzero(~np.isfinite(a))[0])
        raise ValidationError(f"non-finite sample at index {bad}")
    return a


def sample_moment(series, offsets: Sequence[int]) -> float:
    """Mean over t of prod_o X_{t+o}, using every t that keeps all indices in range."""
    x = as_series(series)
    return _sample_moment(x, tuple(int(o) for o in offsets))


def _sample_moment(x: np.ndarray, offsets: tuple[int, ...]) -> float:
    if not offsets:
        return 1.0
    lo, hi = min(offsets), max(offsets)
    span = hi - lo
    N = x.size
    if span >= N:
        raise InsufficientDataError(f"offset span {span} needs more than {N} samples")
    count = N - span
    prod = np.ones(count)
    for o in offsets:
        start = o - lo
        prod = prod * x[start:start + count]
    return float(prod.sum() / count)


class MomentCache:
    """Sample-moment oracle memoised on offsets modulo translation."""

    def __init__(self, series):
        self.x = as_series(series)
        self._cache: dict[tuple[int, ...], float] = {}

    def __call__(self, offsets: Sequence[int]) -> float:
        offs = sorted(int(o) for o in offsets)
        key = tuple(o - offs[0] for o in offs) if offs else ()
        v = self._cache.get(key)
        if v is None:
            v = _sample_moment(self.x, key)
            self._cache[key] = v
        return v


def estimate_cumulant(series, lags: Sequence[int], k: int | None = None,
                      moments: MomentCache | None = None) -> float:
    """Sample auto-cumulant: the partition sum with sample means as moments."""
    lags = tuple(int(t) for t in lags)
    if k is not None and len(lags) != k - 1:
        raise ValidationError(f"order {k} needs {k - 1} lags, got {len(lags)}")
    oracle = moments if moments is not None else MomentCache(series)
    pts = (0, *lags)
    if max(pts) - min(pts) >= oracle.x.size:
        raise InsufficientDataError(f"lags {lags} span more than the {oracle.x.size} samples")
    return cumulant_from_moments(oracle, lags)


@dataclass(frozen=True)
class CumulantGrid:
    """Estimated cumulants on the lattice {-L, ..., L}^(k-1).

    ``values[i_1, ..., i_{k-1}]`` holds the lag ``(i_1 - L, ..., i_{k-1} - L)``.
    ``partial_orbit`` marks points whose symmetry orbit leaves the lattice;
    those were averaged over the in-lattice part of the orbit only.
    """

    order: int
    max_lag: int
    values: np.ndarray
    series_length: int
    symmetrized: bool
    partial_orbit: np.ndarray | None = None

    def lag_points(self) -> np.ndarray:
        """All lattice lags, shape (npts, k-1), last axis fastest."""
        return lattice_points(self.max_lag, self.order - 1)

    def at(self, lags: Sequence[int]) -> float:
        idx = tuple(int(t) + self.max_lag for t in lags)
        return float(self.values[idx])


def lattice_points(L: int, n: int) -> np.ndarray:
    axes = [np.arange(-L, L + 1)] * n
    return np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)


def cumulant_grid(series, k: int, max_lag: int, symmetrize: bool = False) -> CumulantGrid:
    """Fill the lag lattice with sample cumulants, optionally orbit-averaged."""
    x = as_series(series)
    if int(k) != k or k < 2:
        raise ValidationError(f"order must be an integer >= 2, got {k}")
    L = int(max_lag)
    if L < 0:
        raise ValidationError("max_lag must be >= 0")
    n = k - 1
    widest = L if n == 1 else 2 * L
    if widest >= x.size:
        raise InsufficientDataError(
            f"max_lag {L} at order {k} needs lag spans up to {widest}, but N = {x.size}")
    moments = MomentCache(x)
    pts = lattice_points(L, n)
    vals = np.array([cumulant_from_moments(moments, p) for p in pts])
    shape = (2 * L + 1,) * n
    partial = None
    if symmetrize:
        vals, partial = _orbit_average(vals, pts, L, k)
        partial = partial.reshape(shape)
    return CumulantGrid(k, L, vals.reshape(shape), x.size, symmetrize, partial)


def _orbit_average(vals: np.ndarray, pts: np.ndarray, L: int, k: int):
    """Replace each value by the mean over the in-lattice part of its lag orbit.

    Members are summed in sorted order so that every point of an orbit gets a
    bitwise-identical mean.
    """
    stack = symmetry_orbit(k, Domain.LAG).stack
    imgs = np.einsum("mab,pb->mpa", stack, pts)
    inside = np.all(np.abs(imgs) <= L, axis=2)
    n = pts.shape[1]
    flat = np.zeros(inside.shape, dtype=np.int64)
    for d in range(n):
        flat = flat * (2 * L + 1) + np.clip(imgs[..., d] + L, 0, 2 * L)
    member = np.where(inside, vals[flat], 0.0)
    total = np.sort(member, axis=0).sum(axis=0)
    count = inside.sum(axis=0)
    return total / count, ~np.all(inside, axis=0)


def orbit_discrepancy(grid: CumulantGrid) -> float:
    """Largest |C(t) - C(M t)| over generators M with both points in the lattice."""
    from .representation import generator_matrices
    pts = grid.lag_points()
    flat_vals = grid.values.ravel()
    L = grid.max_lag
    worst = 0.0
    for G in generator_matrices(grid.order, Domain.LAG):
        img = pts @ G.entries.T
        ok = np.all(np.abs(img) <= L, axis=1)
        idx = np.zeros(len(pts), dtype=np.int64)
        for d in range(pts.shape[1]):
            idx = idx * (2 * L + 1) + np.clip(img[:, d] + L, 0, 2 * L)
        diff = np.abs(flat_vals - flat_vals[idx])[ok]
        if diff.size:
            worst = max(worst, float(diff.max()))
    return worst


__all__ = [
    "SetPartition", "set_partitions", "cumulant_from_moments", "sample_moment",
    "estimate_cumulant", "MomentCache", "CumulantGrid", "cumulant_grid",
    "lattice_points", "orbit_discrepancy", "as_series",
]
