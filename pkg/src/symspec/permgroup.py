"""Permutations of S_k: composition, inverses, enumeration and matrices.

Permutations are stored in one-line form as a tuple of 0-based images, so
``Permutation((1, 0, 2))`` is the transposition (12) of S_3. Cycle notation
is only a parsing/printing format.
"""
from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, ValidationError

ENUMERATION_CAP = 8


class Order(enum.Enum):
    """Which factor of a product acts first."""

    RIGHT_TO_LEFT = "right-to-left"
    LEFT_TO_RIGHT = "left-to-right"


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1, ..., k} in one-line form (images stored 0-based)."""

    map: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(i) for i in self.map)
        if len(m) < 2:
            raise ValidationError(f"permutation degree must be >= 2, got {len(m)}")
        if sorted(m) != list(range(len(m))):
            raise ValidationError(f"not a bijection on 0..{len(m) - 1}: {m}")
        object.__setattr__(self, "map", m)

    @property
    def degree(self) -> int:
        return len(self.map)

    def __call__(self, label: int) -> int:
        """Image of a 1-based label."""
        return self.map[label - 1] + 1

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other, Order.RIGHT_TO_LEFT)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.map))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles with 1-based labels, each starting at its least label."""
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self.map[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.map[j]
            if len(cyc) > 1:
                out.append(tuple(c + 1 for c in cyc))
        return out

    def __str__(self) -> str:
        return format_cycles(self)

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> Permutation:
        return parse_cycles(text, degree)


def _check_degree(k: int) -> int:
    if int(k) != k or k < 2:
        raise ValidationError(f"degree must be an integer >= 2, got {k!r}")
    return int(k)


def identity(k: int) -> Permutation:
    k = _check_degree(k)
    return Permutation(tuple(range(k)))


def compose(sigma: Permutation, tau: Permutation,
            order: Order = Order.RIGHT_TO_LEFT) -> Permutation:
    """Product of two permutations.

    ``RIGHT_TO_LEFT`` applies ``tau`` first and then ``sigma``;
    ``LEFT_TO_RIGHT`` applies ``sigma`` first and then ``tau``.
    """
    if sigma.degree != tau.degree:
        raise ValidationError(f"degree mismatch: {sigma.degree} vs {tau.degree}")
    if order is Order.RIGHT_TO_LEFT:
        return Permutation(tuple(sigma.map[t] for t in tau.map))
    if order is Order.LEFT_TO_RIGHT:
        return Permutation(tuple(tau.map[s] for s in sigma.map))
    raise ValidationError(f"unknown composition order {order!r}")


def inverse(sigma: Permutation) -> Permutation:
    inv = [0] * sigma.degree
    for i, j in enumerate(sigma.map):
        inv[j] = i
    return Permutation(tuple(inv))


def enumerate_group(k: int, cap: int = ENUMERATION_CAP) -> list[Permutation]:
    """All k! elements of S_k in lexicographic order of their one-line maps."""
    k = _check_degree(k)
    if k > cap:
        raise CapacityError(f"S_{k} has {math.factorial(k)} elements; enumeration cap is k <= {cap}")
    return list(_enumerate_cached(k))


@lru_cache(maxsize=None)
def _enumerate_cached(k: int) -> tuple[Permutation, ...]:
    return tuple(Permutation(p) for p in itertools.permutations(range(k)))


def adjacent_generators(k: int) -> list[Permutation]:
    """The transpositions (12), (23), ..., (k-1 k)."""
    k = _check_degree(k)
    gens = []
    for i in range(k - 1):
        m = list(range(k))
        m[i], m[i + 1] = m[i + 1], m[i]
        gens.append(Permutation(tuple(m)))
    return gens


def permutation_matrix(sigma: Permutation) -> np.ndarray:
    """k x k 0/1 integer matrix whose (i, j) entry is 1 iff sigma maps i to j.

    With this rule ``P(compose(s, t, RIGHT_TO_LEFT)) == P(t) @ P(s)``.
    """
    k = sigma.degree
    P = np.zeros((k, k), dtype=np.int64)
    P[np.arange(k), np.array(sigma.map)] = 1
    return P


def closure(generators: list[Permutation]) -> set[Permutation]:
    """Breadth-first closure of a generating set under composition."""
    if not generators:
        return set()
    start = identity(generators[0].degree)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for p in frontier:
            for g in generators:
                q = compose(g, p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse cycle notation such as ``"(12)(3)"``, ``"(1 2 10)"`` or ``"e"``.

    Inside a cycle, labels are separated by whitespace or commas; without
    separators each digit is its own label. Omitted labels are fixed points.
    """
    degree = _check_degree(degree)
    s = text.strip()
    m = list(range(degree))
    if s in ("e", "()", ""):
        return Permutation(tuple(m))
    if _CYCLE_RE.sub("", s).strip():
        raise ValidationError(f"malformed cycle notation: {text!r}")
    used: set[int] = set()
    for body in _CYCLE_RE.findall(s):
        body = body.strip()
        if re.search(r"[\s,]", body):
            tokens = [t for t in re.split(r"[\s,]+", body) if t]
        else:
            tokens = list(body)
        try:
            labels = [int(t) for t in tokens]
        except ValueError:
            raise ValidationError(f"non-integer label in {text!r}") from None
        for lab in labels:
            if not 1 <= lab <= degree:
                raise ValidationError(f"label {lab} outside 1..{degree}")
            if lab in used:
                raise ValidationError(f"label {lab} repeated in {text!r}")
            used.add(lab)
        for a, b in zip(labels, labels[1:] + labels[:1]):
            m[a - 1] = b - 1
    return Permutation(tuple(m))


def format_cycles(sigma: Permutation) -> str:
    cyc = sigma.cycles()
    if not cyc:
        return "e"
    sep = "" if sigma.degree <= 9 else " "
    return "".join("(" + sep.join(str(c) for c in c_) + ")" for c_ in cyc)
