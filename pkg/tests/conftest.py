import itertools
import random

import pytest

from translation_lab import (
    amalgam_z4_z6,
    baumslag_solitar,
    free_group,
    free_group_as_hnn,
    free_product_of_two_integers,
    integer_lattice,
    integers,
)


@pytest.fixture(scope="session")
def z():
    return integers()


@pytest.fixture(scope="session")
def z2():
    return integer_lattice(2)


@pytest.fixture(scope="session")
def f2():
    return free_group(2)


@pytest.fixture(scope="session")
def amalgam():
    return amalgam_z4_z6()


@pytest.fixture(scope="session")
def zz():
    return free_product_of_two_integers()


@pytest.fixture(scope="session")
def bs12():
    return baumslag_solitar(1, 2)


@pytest.fixture(scope="session")
def f2_hnn():
    return free_group_as_hnn()


def rng(seed: int) -> random.Random:
    return random.Random(seed)


def generator_sequences(ctx, max_len: int):
    """All sequences over the generating alphabet up to the given length."""
    gens = ctx.generator_elements()
    for n in range(max_len + 1):
        for combo in itertools.product(gens, repeat=n):
            yield list(combo)


def bfs_distances(ctx, radius: int):
    """Independent breadth-first word lengths, using only multiply and equality."""
    start = ctx.identity()
    dist = {start.word: 0}
    frontier = [start]
    for depth in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for g in ctx.generator_elements():
                y = ctx.multiply(x, g)
                if y.word not in dist:
                    dist[y.word] = depth
                    nxt.append(y)
        frontier = nxt
    return dist
