"""Classical comparison sequences: van der Corput, Kronecker, seeded uniform."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numeric import ConfigError, DomainError

__all__ = [
    "GOLDEN_RATIO",
    "KroneckerConfig",
    "SeededUniformConfig",
    "kronecker",
    "uniform_stream",
    "van_der_corput",
]

#: Default Kronecker rotation number (1 + sqrt 5) / 2.
GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


def van_der_corput(k: int) -> Fraction:
    """k-th base-2 radical inverse (1-indexed), as an exact dyadic rational.

    Reflects the binary digits of k about the point: 1 -> 1/2, 2 -> 1/4,
    3 -> 3/4, 6 -> 3/8.
    """
    if k < 1:
        raise DomainError(f"index must be >= 1, got {k}")
    num, den = 0, 1
    while k:
        num = 2 * num + (k & 1)
        den *= 2
        k >>= 1
    return Fraction(num, den)


@dataclass(frozen=True)
class KroneckerConfig:
    alpha: float = GOLDEN_RATIO

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")


def kronecker(k: int, config: KroneckerConfig | None = None) -> float:
    """k-th point of the rotation sequence frac(k * alpha), 1-indexed."""
    if k < 1:
        raise DomainError(f"index must be >= 1, got {k}")
    alpha = (config or KroneckerConfig()).alpha
    return math.fmod(k * alpha, 1.0)


@dataclass(frozen=True)
class SeededUniformConfig:
    seed: int = 0
    generator: str = "pcg64"


def uniform_stream(count: int, config: SeededUniformConfig | None = None) -> list[float]:
    """``count`` pseudo-uniform draws from a named, stable generator.

    The same (generator, seed) pair reproduces the same stream forever;
    unknown generator identifiers are configuration errors.
    """
    if count < 0:
        raise DomainError(f"count must be >= 0, got {count}")
    cfg = config or SeededUniformConfig()
    if cfg.generator == "pcg64":
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
        return [float(x) for x in rng.random(count)]
    if cfg.generator == "mt19937":
        rng = random.Random(cfg.seed)
        return [rng.random() for _ in range(count)]
    raise ConfigError(
        f"unknown generator {cfg.generator!r}; expected 'pcg64' or 'mt19937'"
    )
