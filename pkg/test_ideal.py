import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import monomial_ideals
from errors import DimensionMismatchError, ExponentOverflowError, PreconditionError
from ideal import (
    MAX_EXPONENT,
    MonomialIdeal,
    add_exponents,
    contains,
    divides,
    ideal_containment,
    minimalize,
    power,
    product,
    shift,
    unit_ideal,
)

m = minimalize([(1, 0), (0, 1)])
cusp = minimalize([(2, 0), (0, 3)])


# ============================================================================
# MINIMALIZACIÓN
# ============================================================================


def test_minimalize_drops_multiples():
    assert minimalize([(2, 0), (2, 1), (0, 3)]).generators == ((2, 0), (0, 3))


def test_minimalize_unit_absorbs():
    assert minimalize([(0, 0), (5, 5)]) == unit_ideal(2)


def test_minimalize_keeps_closure_generators():
    gens = ((5, 0), (4, 2), (3, 3), (2, 5), (1, 6), (0, 7))
    assert minimalize(gens).generators == gens


def test_minimalize_errors():
    with pytest.raises(PreconditionError):
        minimalize([])
    with pytest.raises(DimensionMismatchError):
        minimalize([(1, 0), (1,)])
    with pytest.raises(PreconditionError):
        minimalize([(1, -1)])


def test_model_rejects_non_canonical_generators():
    with pytest.raises(ValueError):
        MonomialIdeal(dimension=2, generators=((1, 0), (2, 0)))
    with pytest.raises(ValueError):
        MonomialIdeal(dimension=2, generators=())


@given(monomial_ideals())
def test_minimalize_is_idempotent_antichain(I):
    assert minimalize(I.generators) == I
    for a, b in itertools.permutations(I.generators, 2):
        assert not divides(a, b)


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=6))
def test_minimalize_preserves_up_closed_set(exps):
    I = minimalize(exps)
    for e in itertools.product(range(6), repeat=2):
        assert contains(I, e) == any(divides(a, e) for a in exps)


# ============================================================================
# PRODUCTOS Y POTENCIAS
# ============================================================================


def test_product_examples():
    assert product(m, m).generators == ((2, 0), (1, 1), (0, 2))
    assert product(cusp, unit_ideal(2)) == cusp
    assert product(cusp, cusp).generators == ((4, 0), (2, 3), (0, 6))


def test_product_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        product(m, unit_ideal(3))


def test_power_examples():
    assert power(cusp, 2) == product(cusp, cusp)
    assert power(unit_ideal(2), 5) == unit_ideal(2)
    assert power(m, 3).generators == ((3, 0), (2, 1), (1, 2), (0, 3))
    assert power(cusp, 1) == cusp
    assert power(cusp, 0) == unit_ideal(2)


@given(monomial_ideals(dimension=2), monomial_ideals(dimension=2), monomial_ideals(dimension=2))
def test_product_commutative_associative(I, J, K):
    assert product(I, J) == product(J, I)
    assert product(product(I, J), K) == product(I, product(J, K))


@given(monomial_ideals(max_generators=3, max_exponent=3), st.integers(1, 3), st.data())
def test_power_contains_sums_of_generators(I, n, data):
    chosen = [data.draw(st.sampled_from(I.generators)) for _ in range(n)]
    total = chosen[0]
    for g in chosen[1:]:
        total = add_exponents(total, g)
    assert contains(power(I, n), total)


def test_checked_addition_overflows():
    with pytest.raises(ExponentOverflowError):
        add_exponents((MAX_EXPONENT, 0), (1, 0))
    big = minimalize([(MAX_EXPONENT, 0)])
    with pytest.raises(ExponentOverflowError):
        product(big, big)


# ============================================================================
# MEMBRESÍA Y CONTENCIÓN
# ============================================================================


def test_contains_examples():
    assert contains(cusp, (2, 1))
    assert not contains(cusp, (1, 2))
    assert contains(unit_ideal(2), (0, 0))
    with pytest.raises(DimensionMismatchError):
        contains(cusp, (1, 1, 1))


def test_ideal_containment_examples():
    assert ideal_containment(cusp, cusp)
    assert ideal_containment(power(m, 2), m)
    assert not ideal_containment(m, power(m, 2))


def test_shift_multiplies_by_monomial():
    assert shift(cusp, (1, 2)).generators == ((3, 2), (1, 5))
    assert unit_ideal(2).is_unit and not cusp.is_unit
