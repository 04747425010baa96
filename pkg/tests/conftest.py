from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from dualcox.signed_perm import Cycle, SignedPermutation, from_cycles, parse_element


def el(text: str, n: int) -> SignedPermutation:
    return parse_element(text, n)


def bal(n: int, *entries: int) -> SignedPermutation:
    return from_cycles(n, [Cycle("balanced", entries)])


def par(n: int, *entries: int) -> SignedPermutation:
    return from_cycles(n, [Cycle("paired", entries)])


@st.composite
def signed_perms(draw, min_n: int = 1, max_n: int = 8) -> SignedPermutation:
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(1, n + 1)))
    signs = draw(st.lists(st.sampled_from((1, -1)), min_size=n, max_size=n))
    return SignedPermutation(tuple(s * p for s, p in zip(signs, perm)))


def random_perm(rng: random.Random, n: int) -> SignedPermutation:
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    return SignedPermutation(tuple(p * rng.choice((1, -1)) for p in perm))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20261014)
