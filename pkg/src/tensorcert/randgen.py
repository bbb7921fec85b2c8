"""Seedable generation of random rank-one terms and rank-h tensors.

The generator is Python's Mersenne Twister (`random.Random`), seeded with a
64-bit integer; coefficients are integers drawn uniformly from
``[-bound, bound]``.  Identical (seed, space, h, bound) re-create the same
output bit for bit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .certify import Decomposition
from .fields import QQ
from .poly import TensorSpace


@dataclass(frozen=True)
class RandomConfig:
    seed: int = 0
    bound: int = 1 << 15
    field: object = QQ

    def __post_init__(self):
        if self.bound < 2:
            raise ValueError("coefficient bound must be >= 2")


def _draw_form(rng: random.Random, size: int, bound: int):
    while True:
        coeffs = tuple(rng.randint(-bound, bound) for _ in range(size))
        if any(coeffs):
            return coeffs


def _draw_term(rng: random.Random, space: TensorSpace, bound: int):
    return tuple(_draw_form(rng, size, bound) for size in space.sizes)


def random_rank_one(space: TensorSpace, cfg: RandomConfig = RandomConfig()):
    """One random rank-one term: a tuple of integer linear forms, one per group."""
    return _draw_term(random.Random(cfg.seed), space, cfg.bound)


def random_tensor(space: TensorSpace, h: int, cfg: RandomConfig = RandomConfig()):
    """A random tensor of rank at most h together with its witness decomposition."""
    if h < 1:
        raise ValueError("h must be >= 1")
    rng = random.Random(cfg.seed)
    terms = [_draw_term(rng, space, cfg.bound) for _ in range(h)]
    dec = Decomposition(space, terms, field=cfg.field)
    return dec.expand(), dec
