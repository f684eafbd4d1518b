"""Seeded test signals: white noise, AR(1), and quadratically phase-coupled harmonics."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

GENERATOR_NAME = "numpy.random.PCG64"


class SynthKind(enum.Enum):
    GAUSSIAN_WHITE = "white"
    AR1 = "ar1"
    COUPLED_HARMONICS = "qpc"


@dataclass(frozen=True)
class SynthSpec:
    kind: SynthKind
    n: int
    seed: int = 0
    phi: float = 0.5
    lambda1: float = 0.6
    lambda2: float = 1.1
    noise_sd: float = 0.1

    def validate(self) -> None:
        if int(self.n) != self.n or self.n < 16:
            raise ValidationError(f"series length must be an integer >= 16, got {self.n}")
        if self.kind is SynthKind.AR1 and not abs(self.phi) < 1:
            raise ValidationError(f"AR(1) needs |phi| < 1, got {self.phi}")
        if self.kind is SynthKind.COUPLED_HARMONICS:
            for name in ("lambda1", "lambda2"):
                v = getattr(self, name)
                if not 0 < v < math.pi:
                    raise ValidationError(f"{name} must lie in (0, pi), got {v}")
            if self.noise_sd < 0:
                raise ValidationError("noise_sd must be >= 0")

    def metadata(self) -> dict:
        d = {"kind": self.kind.value, "n": self.n, "seed": self.seed, "generator": GENERATOR_NAME}
        if self.kind is SynthKind.AR1:
            d["phi"] = self.phi
        if self.kind is SynthKind.COUPLED_HARMONICS:
            d.update(lambda1=self.lambda1, lambda2=self.lambda2, noise_sd=self.noise_sd)
        return d


def generate_synthetic(spec: SynthSpec) -> np.ndarray:
    """Deterministic series for a given spec and seed (PCG64 bit generator).

    The coupled-harmonics signal is
    cos(l1 t + p1) + cos(l2 t + p2) + cos((l1 + l2) t + p1 + p2) + noise,
    with both phases drawn once from the seed before the noise.
    """
    spec.validate()
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n = int(spec.n)
    if spec.kind is SynthKind.GAUSSIAN_WHITE:
        return rng.standard_normal(n)
    if spec.kind is SynthKind.AR1:
        e = rng.standard_normal(n)
        x = np.empty(n)
        x[0] = e[0] / math.sqrt(1.0 - spec.phi ** 2)
        for t in range(1, n):
            x[t] = spec.phi * x[t - 1] + e[t]
        return x
    p1, p2 = rng.uniform(0.0, 2.0 * math.pi, size=2)
    t = np.arange(n)
    l1, l2 = spec.lambda1, spec.lambda2
    x = np.cos(l1 * t + p1) + np.cos(l2 * t + p2) + np.cos((l1 + l2) * t + p1 + p2)
    return x + spec.noise_sd * rng.standard_normal(n)
