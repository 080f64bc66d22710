"""Seeded random instance families used by the property and acceptance suites."""

from __future__ import annotations

import random
from typing import Iterator

from fairdiv.model import Instance

DEFAULT_SEED = 20200604


def random_tertiary(rng: random.Random, n: int, m: int, alpha: int) -> Instance:
    return Instance([[rng.choice((-alpha, 0, alpha)) for _ in range(m)] for _ in range(n)], m=m)


def random_identical(rng: random.Random, n: int, m: int, bound: int = 20) -> Instance:
    row = [rng.randint(-bound, bound) for _ in range(m)]
    return Instance([row] * n, m=m)


def random_identical_pure_goods(rng: random.Random, n: int, m: int, bound: int = 20) -> Instance:
    row = [rng.randint(1, bound) for _ in range(m)]
    return Instance([row] * n, m=m)


def random_identical_pure_bads(rng: random.Random, n: int, m: int, bound: int = 20) -> Instance:
    row = [-rng.randint(1, bound) for _ in range(m)]
    return Instance([row] * n, m=m)


def tertiary_suite(count: int = 500, seed: int = DEFAULT_SEED) -> Iterator[Instance]:
    """n in {2,3,4}, m in 1..8, alpha in {1,2}, entries uniform over {-alpha, 0, alpha}."""
    rng = random.Random(seed)
    for _ in range(count):
        n, m, alpha = rng.choice((2, 3, 4)), rng.randint(1, 8), rng.choice((1, 2))
        yield random_tertiary(rng, n, m, alpha)


def identical_suite(count: int = 500, seed: int = DEFAULT_SEED) -> Iterator[Instance]:
    """n in {2,3,4}, m in 1..8, identical utilities with ``|u| <= 20``."""
    rng = random.Random(seed)
    for _ in range(count):
        yield random_identical(rng, rng.choice((2, 3, 4)), rng.randint(1, 8))


def pure_goods_suite(count: int = 300, seed: int = DEFAULT_SEED) -> Iterator[Instance]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_identical_pure_goods(rng, rng.choice((2, 3)), rng.randint(2, 7))


def pure_bads_suite(count: int = 300, seed: int = DEFAULT_SEED) -> Iterator[Instance]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_identical_pure_bads(rng, rng.choice((2, 3)), rng.randint(2, 7))
