"""Shared builders for the test suite."""

import random

from rosetrack.catalog import rank3_base
from rosetrack.words import Decomposition, NielsenGenerator, directions


def base_decomposition() -> Decomposition:
    return rank3_base()


BASE_NINE = base_decomposition()


def random_word(rng: random.Random, rank: int, max_len: int):
    out = []
    for _ in range(rng.randrange(1, max_len + 1)):
        choices = [d for d in directions(rank) if not out or d != -out[-1]]
        out.append(rng.choice(choices))
    return tuple(out)


def random_generator(rng: random.Random, rank: int) -> NielsenGenerator:
    x = rng.choice(directions(rank))
    y = rng.choice([d for d in directions(rank) if d not in (x, -x)])
    return NielsenGenerator(rank, x, y)


def random_admissible(rng: random.Random, rank: int, length: int) -> Decomposition:
    """A random admissible (linearly chained) generator sequence."""
    steps = [random_generator(rng, rank)]
    while len(steps) < length:
        prev = steps[-1]
        all_d = directions(rank)
        if rng.random() < 0.5:
            x, y = prev.x, rng.choice([d for d in all_d if d not in (prev.x, -prev.x, -prev.y)])
        else:
            y = prev.x
            x = rng.choice([d for d in all_d if d not in (prev.x, -prev.x, -prev.y)])
        steps.append(NielsenGenerator(rank, x, y))
    return Decomposition(rank, tuple(steps))
