"""Build lag-windows and kernels that carry the full S_k symmetry.

A ``WindowFunction`` wraps a vectorised real function on R^(k-1). Every
constructor here returns a new immutable window; nothing is evaluated until
the window is called.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import SymmetryError, ValidationError
from .permgroup import ENUMERATION_CAP
from .representation import Domain, RepMatrix, generator_matrices, symmetry_orbit

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class WindowFunction:
    """A real function of k-1 variables tagged with its order and domain.

    ``fn`` receives an array of shape ``(npts, k-1)`` and returns ``(npts,)``.
    ``support`` is an optional half-width of a box outside which the function
    vanishes; kernels use it for quadrature.
    """

    order: int
    domain: Domain
    fn: ArrayFn = field(repr=False)
    label: str = ""
    support: float | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def dim(self) -> int:
        return self.order - 1

    def __call__(self, x) -> np.ndarray | float:
        a = np.asarray(x, dtype=float)
        n = self.dim
        if n == 1 and (a.ndim == 0 or a.shape[-1] != 1):
            a = a[..., None]
        if a.shape[-1] != n:
            raise ValidationError(f"expected points with {n} coordinates, got shape {a.shape}")
        lead = a.shape[:-1]
        out = np.asarray(self.fn(a.reshape(-1, n)), dtype=float).reshape(lead)
        return float(out) if out.ndim == 0 else out

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate on an ``(npts, k-1)`` array without any reshaping logic."""
        return np.asarray(self.fn(np.asarray(points, dtype=float)), dtype=float)

    def with_fn(self, fn: ArrayFn, label: str | None = None, **kw) -> "WindowFunction":
        return WindowFunction(self.order, kw.pop("domain", self.domain), fn,
                              self.label if label is None else label,
                              kw.pop("support", None), kw.pop("meta", {}))


class CombinerKind(enum.Enum):
    ARITHMETIC_MEAN = "mean"
    GEOMETRIC_MEAN_ABS = "geomean"
    PRODUCT = "product"
    MAX = "max"
    MIN = "min"
    POWER_MEAN = "powermean"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Combiner:
    """A symmetric function h applied across the orbit values.

    ``reduce`` takes an ``(m, npts)`` array (one row per argument) and
    returns ``(npts,)``. Sums and products are accumulated over values
    sorted along the argument axis, so reordering the arguments cannot change
    the floating-point result.
    """

    kind: CombinerKind
    p: float | None = None
    fn: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)
    name: str = ""

    @classmethod
    def parse(cls, spec: "Combiner | str") -> "Combiner":
        if isinstance(spec, Combiner):
            return spec
        s = spec.strip().lower()
        if s.startswith("powermean"):
            try:
                p = float(s.split(":", 1)[1])
            except (IndexError, ValueError):
                raise ValidationError("power mean needs an exponent, e.g. 'powermean:2'") from None
            return cls(CombinerKind.POWER_MEAN, p=p)
        aliases = {"mean": "mean", "arithmetic": "mean", "geomean": "geomean",
                   "geometric": "geomean", "product": "product", "prod": "product",
                   "max": "max", "min": "min"}
        if s not in aliases:
            raise ValidationError(f"unknown combiner {spec!r}")
        return cls(CombinerKind(aliases[s]))

    @classmethod
    def custom(cls, fn: Callable[[np.ndarray], np.ndarray], name: str = "custom") -> "Combiner":
        return cls(CombinerKind.CUSTOM, fn=fn, name=name)

    def reduce(self, values: np.ndarray) -> np.ndarray:
        v = np.asarray(values, dtype=float)
        k = self.kind
        if k is CombinerKind.MAX:
            return v.max(axis=0)
        if k is CombinerKind.MIN:
            return v.min(axis=0)
        if k is CombinerKind.CUSTOM:
            return np.asarray(self.fn(v), dtype=float)
        v = np.sort(v, axis=0)
        m = v.shape[0]
        if k is CombinerKind.ARITHMETIC_MEAN:
            return v.sum(axis=0) / m
        if k is CombinerKind.PRODUCT:
            return v.prod(axis=0)
        if k is CombinerKind.GEOMETRIC_MEAN_ABS:
            a = np.sort(np.abs(v), axis=0)
            with np.errstate(divide="ignore"):
                logs = np.log(a)
            out = np.exp(logs.sum(axis=0) / m)
            return np.where(np.any(a == 0, axis=0), 0.0, out)
        if k is CombinerKind.POWER_MEAN:
            p = self.p
            if p == 0:
                return Combiner(CombinerKind.GEOMETRIC_MEAN_ABS).reduce(v)
            # real root, so odd integer p is defined for signed values too
            with np.errstate(invalid="ignore", divide="ignore"):
                s = np.sort(v ** p, axis=0).sum(axis=0) / m
                return np.sign(s) * np.abs(s) ** (1.0 / p)
        raise ValidationError(f"unsupported combiner {k}")

    def check_symmetric(self, arity: int = 6, trials: int = 20, seed: int = 0,
                        rtol: float = 1e-12) -> bool:
        """Spot-check invariance under random argument permutations."""
        rng = np.random.default_rng(seed)
        vals = rng.uniform(0.05, 2.0, size=(arity, trials))
        base = self.reduce(vals)
        for _ in range(5):
            perm = rng.permutation(arity)
            other = self.reduce(vals[perm])
            if not np.allclose(base, other, rtol=rtol, atol=rtol, equal_nan=True):
                return False
        return True

    def __str__(self) -> str:
        if self.kind is CombinerKind.POWER_MEAN:
            return f"powermean:{self.p:g}"
        if self.kind is CombinerKind.CUSTOM:
            return self.name
        return self.kind.value


def _check_order(k: int) -> int:
    if int(k) != k or k < 2:
        raise ValidationError(f"order must be an integer >= 2, got {k!r}")
    if k > ENUMERATION_CAP:
        from .errors import CapacityError
        raise CapacityError(f"order {k} exceeds the orbit cap {ENUMERATION_CAP}")
    return int(k)


def apply_arg_transform(f: WindowFunction, M: RepMatrix | np.ndarray) -> WindowFunction:
    """The window x -> f(M x)."""
    A = np.asarray(M.entries if isinstance(M, RepMatrix) else M, dtype=float)
    if A.shape != (f.dim, f.dim):
        raise ValidationError(f"matrix shape {A.shape} does not match dimension {f.dim}")
    return f.with_fn(lambda X: f.fn(X @ A.T), label=f"{f.label}∘M")


def _orbit_values(f: WindowFunction, stack: np.ndarray, X: np.ndarray) -> np.ndarray:
    m = stack.shape[0]
    imgs = np.einsum("mab,pb->mpa", stack.astype(float), X)
    return f.fn(imgs.reshape(-1, X.shape[1])).reshape(m, X.shape[0])


def symmetrize(f: WindowFunction, h: Combiner | str = "mean",
               domain: Domain | str | None = None) -> WindowFunction:
    """x -> h(f(M_1 x), ..., f(M_{k!} x)) over the full orbit of ``domain``."""
    h = Combiner.parse(h)
    domain = f.domain if domain is None else Domain.parse(domain)
    k = _check_order(f.order)
    if not h.check_symmetric(arity=6):
        raise SymmetryError(f"combiner {h} is not symmetric in its arguments")
    stack = symmetry_orbit(k, domain).stack
    return WindowFunction(k, domain, lambda X: h.reduce(_orbit_values(f, stack, X)),
                          f"sym[{h}]({f.label})")


def _probe_points(seed: int = 12345, n: int = 64) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.concatenate([np.linspace(0.0, 3.0, 31), rng.uniform(0.0, 5.0, n)])


def is_even(g: Callable[[np.ndarray], np.ndarray], tol: float = 1e-12) -> bool:
    x = _probe_points()
    a, b = np.asarray(g(x), float), np.asarray(g(-x), float)
    return bool(np.all(np.abs(a - b) <= tol * np.maximum(1.0, np.abs(a))))


def product_window_univariate(g: Callable[[np.ndarray], np.ndarray], k: int,
                              domain: Domain | str = Domain.LAG,
                              label: str = "g") -> WindowFunction:
    """Product construction from a univariate function.

    Lag domain: prod_i g(x_i) * prod_{i<j} g(x_i - x_j); g must be even.
    Frequency domain: prod_i g(w_i) * g(-sum_i w_i).
    """
    k = _check_order(k)
    domain = Domain.parse(domain)
    if domain is Domain.LAG:
        if not is_even(g):
            raise SymmetryError("lag-domain product windows need an even univariate function")

        def fn(X):
            n = X.shape[1]
            out = np.prod(g(X), axis=1)
            for i in range(n):
                for j in range(i + 1, n):
                    out = out * g(X[:, i] - X[:, j])
            return out
        lab = f"prod-lag[{label}]"
    else:
        def fn(X):
            return np.prod(g(X), axis=1) * g(-X.sum(axis=1))
        lab = f"prod-freq[{label}]"
    return WindowFunction(k, domain, fn, lab)


def projection_rows(v, k: int, domain: Domain | str = Domain.LAG,
                    dedupe: bool = False, even: bool = False) -> np.ndarray:
    """Integer coefficient rows v @ M_i over the orbit.

    With ``dedupe`` repeated rows are dropped; if additionally ``even`` the
    rows r and -r are identified too.
    """
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (k - 1,):
        raise ValidationError(f"projection vector must have length {k - 1}")
    if not np.any(v):
        raise ValidationError("projection vector must be nonzero")
    rows = np.einsum("b,mbc->mc", v, symmetry_orbit(k, domain).stack)
    if not dedupe:
        return rows
    if even:
        lead = rows[np.arange(len(rows)), np.argmax(rows != 0, axis=1)]
        rows = rows * np.sign(lead)[:, None]
    _, idx = np.unique(rows, axis=0, return_index=True)
    return rows[np.sort(idx)]


def projected_symmetrize(g: Callable[[np.ndarray], np.ndarray], v, k: int,
                         h: Combiner | str = "product",
                         domain: Domain | str = Domain.LAG,
                         dedupe: bool = False, label: str = "g") -> WindowFunction:
    """x -> h(g(v M_1 x), ..., g(v M_{k!} x)) built from a univariate g.

    By default all k! scalar arguments are fed to h. ``dedupe`` collapses
    repeated arguments (and +-pairs when g is even), which reproduces the
    short displayed forms such as g(x)g(y)g(x-y) for products.
    """
    k = _check_order(k)
    domain = Domain.parse(domain)
    h = Combiner.parse(h)
    rows = projection_rows(v, k, domain, dedupe=dedupe, even=dedupe and is_even(g))
    R = rows.astype(float)

    def fn(X):
        return h.reduce(g(R @ X.T))
    return WindowFunction(k, domain, fn, f"proj[{h};{tuple(int(a) for a in v)}]({label})")


@dataclass
class SymmetryReport:
    passed: bool
    worst_violation: float
    witness_point: list[float] | None
    witness_matrix: list[list[int]] | None
    n_samples: int
    tol: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def check_symmetry(f: WindowFunction, n_samples: int = 1000, tol: float = 1e-10,
                   seed: int = 0, box: float = 3.0,
                   domain: Domain | str | None = None) -> SymmetryReport:
    """Compare f(x) with f(Mx) for every generator M at seeded random points.

    The violation at a point is ``|f(x) - f(Mx)| / max(1, |f(x)|)``; the check
    passes when the worst violation is at most ``tol``.
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be >= 1")
    domain = f.domain if domain is None else Domain.parse(domain)
    rng = np.random.default_rng(seed)
    X = rng.uniform(-box, box, size=(n_samples, f.dim))
    base = f.evaluate(X)
    worst, w_pt, w_mat = 0.0, None, None
    for G in generator_matrices(f.order, domain):
        moved = f.evaluate(X @ G.entries.T.astype(float))
        viol = np.abs(base - moved) / np.maximum(1.0, np.abs(base))
        viol = np.where(np.isnan(viol), np.inf, viol)
        i = int(np.argmax(viol))
        if w_pt is None or viol[i] > worst:
            worst, w_pt, w_mat = float(viol[i]), X[i].tolist(), G.tolist()
    passed = worst <= tol
    return SymmetryReport(passed, worst, None if passed else w_pt,
                          None if passed else w_mat, n_samples, tol)


def normalize_at_origin(f: WindowFunction) -> WindowFunction:
    """Rescale so that f(0) = 1, as required of a lag-window."""
    v0 = float(f.evaluate(np.zeros((1, f.dim)))[0])
    if not np.isfinite(v0) or v0 == 0.0:
        raise ValidationError(f"cannot normalise: value at the origin is {v0}")
    return f.with_fn(lambda X: f.fn(X) / v0, label=f"{f.label}/f(0)", support=f.support)
