import time
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import monomial_ideals, random_ideal, random_rational_point, rational_points
from errors import DimensionMismatchError, MalformedSystemError, PreconditionError
from exactgeom import (
    Constraint,
    Facet,
    LPStatus,
    Sense,
    hull_facets,
    lp_member,
    max_violation,
    simplex_feasible,
    solve_lp,
)
from polyhedron import newton_polyhedron, np_member

F = Fraction


def facet_pairs(facets):
    return [(f.normal, f.offset) for f in facets]


# ============================================================================
# ENUMERACIÓN DE FACETAS
# ============================================================================


def test_hull_two_pure_powers():
    assert facet_pairs(hull_facets([(5, 0), (0, 7)], 2)) == [((7, 5), 35)]


def test_hull_pure_powers_adjoint_has_two_facets():
    points = [(4, 0), (3, 1), (2, 2), (1, 4), (0, 5)]
    assert facet_pairs(hull_facets(points, 2)) == [((1, 1), 4), ((3, 2), 10)]


def test_hull_principal():
    assert facet_pairs(hull_facets([(3, 0)], 2)) == [((1, 0), 3)]


def test_hull_three_variables_simplex():
    points = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert facet_pairs(hull_facets(points, 3)) == [((1, 1, 1), 1)]


def test_hull_unit_ideal_is_empty():
    assert hull_facets([(0, 0), (2, 3)], 2) == []


def test_hull_ignores_interior_points():
    # (3,3) y (6,1) quedan dentro de NP((5,0),(0,7))
    assert facet_pairs(hull_facets([(5, 0), (0, 7), (3, 3), (6, 1)], 2)) == [((7, 5), 35)]


def test_hull_one_dimensional():
    assert facet_pairs(hull_facets([(4,), (2,), (9,)], 1)) == [((1,), 2)]


def test_hull_errors():
    with pytest.raises(PreconditionError):
        hull_facets([], 2)
    with pytest.raises(DimensionMismatchError):
        hull_facets([(1, 0), (1, 0, 0)], 2)


@given(monomial_ideals(max_dimension=4, max_generators=5))
def test_facets_are_normalized_tight_and_irredundant(I):
    facets = hull_facets(list(I.generators), I.dimension)
    assert [f.normal for f in facets] == sorted(f.normal for f in facets)
    for k, facet in enumerate(facets):
        values = [sum(h * x for h, x in zip(facet.normal, g)) for g in I.generators]
        assert min(values) == facet.offset
        violation, point = max_violation(facets, k, I.dimension)
        assert violation > 0
        assert facet.evaluate(point) < facet.offset
        assert all(other.evaluate(point) >= other.offset for j, other in enumerate(facets) if j != k)


def test_facet_rejects_non_normalized_normal():
    with pytest.raises(ValueError):
        Facet(normal=(2, 4), offset=4)
    with pytest.raises(ValueError):
        Facet(normal=(1, 1), offset=0)


# ============================================================================
# MEMBRESÍA POR LP
# ============================================================================


def test_lp_member_examples():
    points = [(5, 0), (0, 7)]
    assert lp_member((F(4), F(2)), points)
    assert not lp_member((F(4), F(1)), points)
    assert lp_member((F(5), F(0)), points)


def test_lp_member_rejects_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        lp_member((F(1), F(1), F(1)), [(1, 0)])


def test_lp_member_shortcuts_and_lp_path():
    points = [(5, 0), (0, 7)]
    # domina a (5, 0)
    assert lp_member((F(6), F(1, 2)), points)
    # suma por debajo de min(5, 7)
    assert not lp_member((F(2), F(2)), points)
    # coordenada por debajo de min a_k
    assert not lp_member((F(1, 2), F(9)), [(2, 0), (1, 7)])
    # en la arista, sin dominar a ningún generador: lo decide el LP
    assert lp_member((F(5, 2), F(7, 2)), points)
    assert not lp_member((F(5, 2), F(17, 5)), points)


@given(monomial_ideals(max_dimension=3).flatmap(lambda I: st.tuples(st.just(I), rational_points(I.dimension))))
def test_lp_member_agrees_with_np_member(case):
    I, point = case
    assert lp_member(point, list(I.generators)) == np_member(newton_polyhedron(I), point)


@pytest.mark.slow
def test_lp_member_oracle_corpus(rng):
    start = time.perf_counter()
    for _ in range(100):
        d = rng.choice([2, 3, 4])
        I = random_ideal(rng, d)
        P = newton_polyhedron(I)
        for _ in range(1000):
            point = random_rational_point(rng, d)
            assert lp_member(point, list(I.generators)) == np_member(P, point)
    assert time.perf_counter() - start < 30


# ============================================================================
# SIMPLEX
# ============================================================================


def test_simplex_detects_empty_system():
    rows = [Constraint((1,), Sense.GE, F(1)), Constraint((1,), Sense.LE, F(0))]
    assert simplex_feasible(rows) == (False, None)


def test_simplex_segment_is_feasible():
    rows = [Constraint((1, 1), Sense.EQ, F(1))]
    feasible, point = simplex_feasible(rows)
    assert feasible
    assert sum(point) == 1 and all(x >= 0 for x in point)


def test_simplex_strict_interior_split():
    # b ∈ NP°(x, y), c = (2, 1) - b ∈ NP°(x, y)
    rows = [
        Constraint((1, 1, 0, 0), Sense.GE, F(1)),
        Constraint((0, 0, 1, 1), Sense.GE, F(1)),
        Constraint((1, 0, 1, 0), Sense.EQ, F(2)),
        Constraint((0, 1, 0, 1), Sense.EQ, F(1)),
    ] + [Constraint(tuple(1 if k == i else 0 for k in range(4)), Sense.GE, F(0)) for i in range(4)]
    feasible, point = simplex_feasible(rows, maximize_slack=True)
    assert feasible
    b, c = point[:2], point[2:]
    assert sum(b) > 1 and sum(c) > 1
    assert all(x > 0 for x in point)
    assert (b[0] + c[0], b[1] + c[1]) == (2, 1)


def test_simplex_strict_fails_on_degenerate_system():
    # x >= 1 y x <= 1 es factible pero no estrictamente
    rows = [Constraint((1,), Sense.GE, F(1)), Constraint((1,), Sense.LE, F(1))]
    assert simplex_feasible(rows)[0]
    assert simplex_feasible(rows, maximize_slack=True) == (False, None)


def test_bland_rule_terminates_on_cycling_example():
    rows = [
        Constraint((F(1, 4), -60, F(-1, 25), 9), Sense.LE, F(0)),
        Constraint((F(1, 2), -90, F(-1, 50), 3), Sense.LE, F(0)),
        Constraint((0, 0, 1, 0), Sense.LE, F(1)),
    ]
    result = solve_lp(rows, [F(3, 4), -150, F(1, 50), -6], 4)
    assert result.status == LPStatus.OPTIMAL
    assert result.value == F(1, 20)
    assert result.point == (F(1, 25), 0, 1, 0)


def test_solve_lp_reports_unbounded():
    result = solve_lp([Constraint((1, -1), Sense.LE, F(1))], [1, 0], 2)
    assert result.status == LPStatus.UNBOUNDED


def test_malformed_systems():
    with pytest.raises(MalformedSystemError):
        solve_lp([Constraint((1, 2), Sense.LE, F(1))], [1], 1)
    with pytest.raises(MalformedSystemError):
        solve_lp([Constraint((1,), "<>", F(1))], [1], 1)
    with pytest.raises(MalformedSystemError):
        simplex_feasible([])


def test_rational_arithmetic_is_exact():
    p, q, r, s = 10**30 + 7, 3 * 10**20 + 1, 2**90 - 3, 5**40
    assert F(p, q) + F(r, s) == F(p * s + r * q, q * s)
