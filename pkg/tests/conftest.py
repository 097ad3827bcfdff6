"""Shared random generators for the exact-arithmetic test suite.

Bulk identity checks use a seeded `random.Random`, so failures reproduce;
algebraic laws additionally run under hypothesis in the per-module tests.
"""

import random
from fractions import Fraction

import pytest

from mathieulab.poly import Polynomial, VariableSet
from mathieulab.rings import GF, QI, QQ, GaussianRational


def random_coeff(rng, ring):
    if ring.kind == "Q":
        return Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    if ring.kind == "Qi":
        return GaussianRational(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                                Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
    return ring.from_int(rng.randrange(ring.characteristic))


def random_polynomial(rng, ring, variables, max_degree=3, max_terms=4,
                      min_exponent=0):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = []
        for name in variables.names:
            low = min_exponent if variables.is_laurent(name) else 0
            exps.append(rng.randint(low, max_degree))
        terms[tuple(exps)] = random_coeff(rng, ring)
    return Polynomial(ring, variables, terms)


@pytest.fixture
def rng():
    return random.Random(20260824)
