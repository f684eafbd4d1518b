"""The (k-1)-dimensional integer representation of S_k and its transpose.

``rep_matrix(sigma)`` is the matrix of the argument substitution that a
permutation of the time indices ``(0, x_1, ..., x_{k-1})`` induces on an
auto-cumulant function once the first index is shifted back to zero.
Matrices act on column vectors: the substitution is ``f(M @ x)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .permgroup import (
    ENUMERATION_CAP,
    Permutation,
    adjacent_generators,
    enumerate_group,
    format_cycles,
    inverse,
    permutation_matrix,
)


class Domain(enum.Enum):
    LAG = "lag"
    FREQUENCY = "freq"

    @classmethod
    def parse(cls, value: "Domain | str") -> "Domain":
        if isinstance(value, cls):
            return value
        v = str(value).lower()
        if v in ("lag", "time"):
            return cls.LAG
        if v in ("freq", "frequency"):
            return cls.FREQUENCY
        raise ValidationError(f"unknown domain {value!r}; expected 'lag' or 'freq'")


@dataclass(frozen=True, eq=False)
class RepMatrix:
    """Integer (k-1) x (k-1) image of a permutation under rho or its transpose."""

    order: int
    entries: np.ndarray
    domain: Domain = Domain.LAG

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.int64)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.order - 1

    def __eq__(self, other):
        if isinstance(other, RepMatrix):
            other = other.entries
        return np.array_equal(self.entries, np.asarray(other))

    def __hash__(self):
        return hash((self.order, self.entries.tobytes()))

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        return RepMatrix(self.order, self.entries @ other.entries, self.domain)

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()


def _truncate(B: np.ndarray) -> np.ndarray:
    """Drop the top row and the leftmost column."""
    return B[1:, 1:]


def rep_matrix(sigma: Permutation) -> RepMatrix:
    """Lag-domain image rho(sigma) = <(I - A) P>, with A ones in column 0.

    P is the transpose of ``permutation_matrix(sigma)``, i.e. the matrix that
    carries basis vector e_i to e_sigma(i); this is the reading that matches
    rho((12)) = [[-1, 0], [-1, 1]] and rho((1234)) on (0, x, y, z).
    """
    k = sigma.degree
    P = permutation_matrix(sigma).T
    I_minus_A = np.eye(k, dtype=np.int64)
    I_minus_A[:, 0] -= 1
    return RepMatrix(k, _truncate(I_minus_A @ P), Domain.LAG)


def freq_rep_matrix(sigma: Permutation) -> RepMatrix:
    """Frequency-domain image: the transpose of ``rep_matrix(sigma)``."""
    r = rep_matrix(sigma)
    return RepMatrix(r.order, r.entries.T, Domain.FREQUENCY)


def domain_matrix(sigma: Permutation, domain: Domain | str) -> RepMatrix:
    domain = Domain.parse(domain)
    return rep_matrix(sigma) if domain is Domain.LAG else freq_rep_matrix(sigma)


@dataclass(frozen=True, eq=False)
class SymmetryOrbit:
    """All k! matrices of one domain, index-aligned with ``enumerate_group(k)``."""

    order: int
    domain: Domain
    permutations: tuple[Permutation, ...]
    matrices: tuple[RepMatrix, ...]
    stack: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)


def symmetry_orbit(k: int, domain: Domain | str = Domain.LAG) -> SymmetryOrbit:
    return _orbit_cached(int(k), Domain.parse(domain))


@lru_cache(maxsize=None)
def _orbit_cached(k: int, domain: Domain) -> SymmetryOrbit:
    perms = tuple(enumerate_group(k))
    mats = tuple(domain_matrix(p, domain) for p in perms)
    stack = np.stack([m.entries for m in mats])
    stack.setflags(write=False)
    return SymmetryOrbit(k, domain, perms, mats, stack)


def generator_matrices(k: int, domain: Domain | str = Domain.LAG) -> list[RepMatrix]:
    """Images of the adjacent transpositions; they generate the whole orbit."""
    return [domain_matrix(g, domain) for g in adjacent_generators(k)]


def matrix_closure(mats: list[RepMatrix]) -> set[RepMatrix]:
    """Breadth-first multiplicative closure of a finite set of integer matrices."""
    if not mats:
        return set()
    k = mats[0].order
    start = RepMatrix(k, np.eye(k - 1, dtype=np.int64), mats[0].domain)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for a in frontier:
            for g in mats:
                b = g @ a
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


@dataclass
class VerificationReport:
    """Outcome of checking that rho is a faithful representation of S_k."""

    order: int
    homomorphism: bool
    invertibility: bool
    injectivity: bool
    pairs_checked: int
    exhaustive: bool
    homomorphism_counterexample: tuple[str, str] | None = None
    invertibility_counterexample: str | None = None
    injectivity_counterexample: tuple[str, str] | None = None

    @property
    def passed(self) -> bool:
        return self.homomorphism and self.invertibility and self.injectivity

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "passed": self.passed,
            "homomorphism": self.homomorphism,
            "invertibility": self.invertibility,
            "injectivity": self.injectivity,
            "pairs_checked": self.pairs_checked,
            "exhaustive": self.exhaustive,
            "homomorphism_counterexample": self.homomorphism_counterexample,
            "invertibility_counterexample": self.invertibility_counterexample,
            "injectivity_counterexample": self.injectivity_counterexample,
        }


def verify_representation(k: int, *, n_samples: int = 100_000, seed: int = 0,
                          exhaustive_max: int = 5,
                          table: np.ndarray | None = None) -> VerificationReport:
    """Check homomorphism, invertibility and injectivity of rho on S_k.

    Products are checked for every pair when ``k <= exhaustive_max`` and on
    ``n_samples`` uniformly drawn pairs otherwise. ``table`` replaces the
    matrix stack (shape ``(k!, k-1, k-1)``, enumeration order); it exists so
    the checker itself can be tested against a corrupted table.
    """
    perms = enumerate_group(k, cap=ENUMERATION_CAP)
    stack = symmetry_orbit(k, Domain.LAG).stack if table is None else np.asarray(table)
    maps = np.array([p.map for p in perms], dtype=np.int64)
    n = len(perms)
    index = {m.tobytes(): i for i, m in enumerate(maps)}

    exhaustive = k <= exhaustive_max
    if exhaustive:
        ii, jj = np.divmod(np.arange(n * n), n)
    else:
        rng = np.random.default_rng(seed)
        ii = rng.integers(0, n, size=n_samples)
        jj = rng.integers(0, n, size=n_samples)
    # right-to-left product: (s t)(i) = s(t(i))
    prod_maps = np.take_along_axis(maps[ii], maps[jj], axis=1)
    kk = np.array([index[m.tobytes()] for m in prod_maps])

    report = VerificationReport(k, True, True, True, len(ii), exhaustive)
    lhs = stack[kk]
    rhs = np.einsum("pab,pbc->pac", stack[ii], stack[jj])
    bad = np.flatnonzero(np.any(lhs != rhs, axis=(1, 2)))
    if bad.size:
        b = bad[0]
        report.homomorphism = False
        report.homomorphism_counterexample = (format_cycles(perms[ii[b]]), format_cycles(perms[jj[b]]))

    inv_idx = np.array([index[np.array(inverse(p).map, dtype=np.int64).tobytes()] for p in perms])
    eye = np.eye(k - 1, dtype=stack.dtype)
    prods = np.einsum("pab,pbc->pac", stack, stack[inv_idx])
    bad = np.flatnonzero(np.any(prods != eye, axis=(1, 2)))
    if bad.size:
        report.invertibility = False
        report.invertibility_counterexample = format_cycles(perms[bad[0]])

    flat = stack.reshape(n, -1)
    _, first, counts = np.unique(flat, axis=0, return_index=True, return_counts=True)
    if np.any(counts > 1):
        dup_row = flat[first[np.flatnonzero(counts > 1)[0]]]
        hits = np.flatnonzero(np.all(flat == dup_row, axis=1))
        report.injectivity = False
        report.injectivity_counterexample = (format_cycles(perms[hits[0]]), format_cycles(perms[hits[1]]))
    return report

