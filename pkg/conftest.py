"""
Estrategias y helpers compartidos por las pruebas
"""

import itertools
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ideal import MonomialIdeal, minimalize

settings.register_profile(
    "engine",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("engine")

SAMPLES = Path(__file__).parent / "sample_ideals"

# ============================================================================
# ESTRATEGIAS
# ============================================================================


@st.composite
def monomial_ideals(draw, dimension=None, max_dimension=3, max_generators=4, max_exponent=5):
    d = dimension or draw(st.integers(min_value=1, max_value=max_dimension))
    exponent = st.tuples(*[st.integers(min_value=0, max_value=max_exponent)] * d)
    generators = draw(st.lists(exponent, min_size=1, max_size=max_generators))
    return minimalize(generators)


@st.composite
def ideal_pairs(draw, max_dimension=3, max_generators=3, max_exponent=4):
    d = draw(st.integers(min_value=1, max_value=max_dimension))
    I = draw(monomial_ideals(dimension=d, max_generators=max_generators, max_exponent=max_exponent))
    J = draw(monomial_ideals(dimension=d, max_generators=max_generators, max_exponent=max_exponent))
    return I, J


def rational_points(d, max_value=10, max_denominator=6):
    coordinate = st.builds(
        Fraction,
        st.integers(min_value=0, max_value=max_value * max_denominator),
        st.integers(min_value=1, max_value=max_denominator),
    )
    return st.tuples(*[coordinate] * d)


# ============================================================================
# CORPUS ALEATORIO (PRUEBAS LENTAS)
# ============================================================================


def random_ideal(rng: random.Random, d: int, max_generators: int = 6, max_exponent: int = 8) -> MonomialIdeal:
    count = rng.randint(1, max_generators)
    return minimalize(
        tuple(rng.randint(0, max_exponent) for _ in range(d)) for _ in range(count)
    )


def random_rational_point(rng: random.Random, d: int, max_value: int = 12, max_denominator: int = 7):
    return tuple(
        Fraction(rng.randint(0, max_value * q), q)
        for q in (rng.randint(1, max_denominator) for _ in range(d))
    )


@pytest.fixture
def rng():
    return random.Random(20240611)


# ============================================================================
# ORÁCULOS
# ============================================================================


def lattice_closure_oracle(I: MonomialIdeal, n: int, weak_member) -> MonomialIdeal:
    """Minimaliza los puntos de la caja que cumplen weak_member"""
    bounds = [n * max(g[j] for g in I.generators) for j in range(I.dimension)]
    members = [e for e in itertools.product(*(range(b + 1) for b in bounds)) if weak_member(e)]
    return minimalize(members)
