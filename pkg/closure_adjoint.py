"""
Clausuras enteras, adjuntos y verificación de los resultados estructurales
(subaditividad, contención tipo Briançon-Skoda, equivalencia proyectiva y
necesidad de las valuaciones de Rees) con testigos constructivos.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from errors import (
    DimensionMismatchError,
    ExponentOverflowError,
    InputError,
    InternalInconsistencyError,
    PreconditionError,
)
from exactgeom import Constraint, Sense, dot, simplex_feasible
from ideal import (
    MAX_EXPONENT,
    Exponent,
    MonomialIdeal,
    add_exponents,
    check_exponent,
    contains,
    ideal_containment,
    minimalize,
    power,
    product,
)
from polyhedron import newton_polyhedron, np_member, scale, shifted_point
from valuation import (
    NecessityWitness,
    ReesValuation,
    jacobian_value,
    rees_valuations,
    value_of_monomial,
)

logger = logging.getLogger(__name__)

# ============================================================================
# MODELOS
# ============================================================================


class AdjointMethod(str, Enum):
    FACETS = "facets"
    VALUATIONS = "valuations"
    BRUTEFORCE = "bruteforce"


class SubadditivityWitness(BaseModel):
    """Factorización x^a = x^f · x^g con x^f ∈ adj(I), x^g ∈ adj(J)"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    generator: Tuple[int, ...]
    factor_I: Tuple[int, ...]
    factor_J: Tuple[int, ...]
    interior_point_b: Tuple[Fraction, ...]
    interior_point_c: Tuple[Fraction, ...]


class EquivalenceResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    equivalent: bool
    i: Optional[int] = None
    j: Optional[int] = None

    @model_validator(mode="after")
    def _check_pair(self) -> "EquivalenceResult":
        if self.equivalent:
            if self.i is None or self.j is None or self.i < 1 or self.j < 1:
                raise ValueError("Un resultado equivalente necesita i, j positivos")
            if gcd(self.i, self.j) != 1:
                raise ValueError(f"i = {self.i} y j = {self.j} no son coprimos")
        return self


class AmplifiedNecessityWitness(BaseModel):
    """
    El testigo (n, e) elevado a la t: x^{te} cumple las condiciones de adj(I^N)
    de las valuaciones restantes, pero no está en ic(I^{N-l+1}) ⊇ adj(I^N).
    """

    model_config = ConfigDict(frozen=True)

    base: NecessityWitness
    t: int = Field(..., ge=1)
    power: int = Field(..., ge=1)
    exponent: Tuple[int, ...]
    closure_power: int = Field(..., ge=1)


class ReesComparison(NamedTuple):
    ideal: List[ReesValuation]
    adjoint: List[ReesValuation]
    shared: List[Tuple[int, ...]]


# ============================================================================
# ENUMERACIÓN DE ESCALERAS
# ============================================================================


def _box_bounds(I: MonomialIdeal, n: int) -> Exponent:
    """B_j = n · max_i a_{i,j}: cota de todo generador minimal de ic(I^n) y adj(I^n)"""
    bounds = tuple(n * max(g[j] for g in I.generators) for j in range(I.dimension))
    if any(b > MAX_EXPONENT for b in bounds):
        raise ExponentOverflowError(f"Cota de caja fuera de rango para n = {n}")
    return bounds


def _chunks_by_first_coordinate(bounds: Sequence[int]) -> List[Iterable[Exponent]]:
    if not bounds:
        return [[()]]
    rest = [range(b + 1) for b in bounds[1:]]
    return [itertools.product([first], *rest) for first in range(bounds[0] + 1)]


def _collect(chunks: List[Iterable], scan: Callable[[Iterable], List[Exponent]], threads: int) -> List[Exponent]:
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(scan, chunks))
    else:
        results = [scan(chunk) for chunk in chunks]
    return [e for found in results for e in found]


def _staircase(bounds: Exponent, last_coordinate: Callable[[Exponent], Optional[int]],
               threads: int) -> MonomialIdeal:
    """
    Recorre los prefijos (e_1, ..., e_{d-1}) de la caja; last_coordinate da el
    mínimo e_d que completa un miembro (o None). El resultado se minimaliza, así
    que no depende del número de hilos.
    """
    head, last_bound = bounds[:-1], bounds[-1]

    def scan(prefixes: Iterable[Exponent]) -> List[Exponent]:
        found = []
        for prefix in prefixes:
            value = last_coordinate(prefix)
            if value is not None and value <= last_bound:
                found.append(tuple(prefix) + (value,))
        return found

    candidates = _collect(_chunks_by_first_coordinate(head), scan, threads)
    if not candidates:
        raise InternalInconsistencyError(f"La caja {bounds} no contiene ningún miembro")
    return minimalize(candidates)


def _threshold_last_coordinate(thresholds: Sequence[Tuple[Tuple[int, ...], int]]):
    """Mínimo e_d con h·e >= T para cada (h, T), en aritmética entera"""

    def last(prefix: Exponent) -> Optional[int]:
        value = 0
        for normal, target in thresholds:
            partial = sum(h * x for h, x in zip(normal, prefix))
            hd = normal[-1]
            if hd == 0:
                if partial < target:
                    return None
            else:
                value = max(value, -((partial - target) // hd))
        return value

    return last


# ============================================================================
# CLAUSURA ENTERA
# ============================================================================


def integral_closure(I: MonomialIdeal, n: int = 1, threads: int = 1) -> MonomialIdeal:
    """ic(I^n) = (x^e | e ∈ n·NP(I) ∩ N^d)"""
    if n < 1:
        raise PreconditionError(f"La potencia debe ser positiva: {n}")
    P = scale(newton_polyhedron(I), n)
    thresholds = [(facet.normal, facet.offset) for facet in P.facets]
    closure = _staircase(_box_bounds(I, n), _threshold_last_coordinate(thresholds), threads)

    for g in closure.generators:
        if not np_member(P, g):
            raise InternalInconsistencyError(f"Generador {g} fuera de {n}·NP(I)")
    logger.info(f"ic(I^{n}): {I.num_generators} -> {closure.num_generators} generadores")
    return closure


# ============================================================================
# ADJUNTOS
# ============================================================================


def adjoint_contains(I: MonomialIdeal, n: int, e: Sequence[int]) -> bool:
    """x^e ∈ adj(I^n) sii e + (1, ..., 1) ∈ NP°(I^n)"""
    e = check_exponent(e, I.dimension)
    return np_member(scale(newton_polyhedron(I), n), shifted_point(e), strict=True)


def _adjoint_by_facets(I: MonomialIdeal, n: int, threads: int) -> MonomialIdeal:
    P = scale(newton_polyhedron(I), n)
    facets = [(facet.normal[:-1], facet.normal[-1], facet.offset) for facet in P.facets]

    def last(prefix: Exponent) -> Optional[int]:
        shifted = [x + 1 for x in prefix]
        value = 0
        for head, hd, offset in facets:
            partial = dot(head, shifted)
            if hd == 0:
                if partial <= offset:
                    return None
            else:
                # (e_d + 1)·h_d > offset - parcial  <=>  e_d >= floor((offset - parcial) / h_d)
                value = max(value, (offset - partial) // hd)
        return value

    result = _staircase(_box_bounds(I, n), last, threads)
    for g in result.generators:
        if not np_member(P, shifted_point(g), strict=True):
            raise InternalInconsistencyError(f"Generador {g} + (1, ..., 1) fuera de NP°")
    return result


def _adjoint_by_valuations(I: MonomialIdeal, n: int, threads: int) -> MonomialIdeal:
    # v(x^e) >= n·v(I) - v(J_{R_v/R}) para cada valuación de Rees
    thresholds = [
        (v.weights, n * value - jacobian_value(v))
        for v, value in rees_valuations(I)
    ]
    return _staircase(_box_bounds(I, n), _threshold_last_coordinate(thresholds), threads)


def _adjoint_by_bruteforce(I: MonomialIdeal, n: int, threads: int) -> MonomialIdeal:
    # Oráculo: NP(I^n) calculado de nuevo a partir de los generadores de I^n
    Q = newton_polyhedron(power(I, n))
    # h·(e + 1) > offset  <=>  h·e > offset - sum(h)
    facets = [(facet.normal, facet.offset - sum(facet.normal)) for facet in Q.facets]

    def scan(points: Iterable[Exponent]) -> List[Exponent]:
        found = []
        covered = None
        for e in points:
            # Los miembros son cerrados hacia arriba: dentro de un prefijo basta el primero
            if covered is not None and e[:-1] == covered:
                continue
            if all(dot(normal, e) > bound for normal, bound in facets):
                found.append(e)
                covered = e[:-1]
        return found

    bounds = _box_bounds(I, n)
    members = _collect(_chunks_by_first_coordinate(bounds), scan, threads)
    return minimalize(members)


def adjoint(I: MonomialIdeal, n: int = 1, method: str = AdjointMethod.FACETS, threads: int = 1) -> MonomialIdeal:
    """
    adj(I^n) = (x^e | e + (1, ..., 1) ∈ NP°(I^n)).
    Las tres rutas deben dar exactamente la misma lista canónica.
    """
    if n < 1:
        raise PreconditionError(f"La potencia debe ser positiva: {n}")
    try:
        method = AdjointMethod(method)
    except ValueError:
        raise InputError(f"Método de adjunto desconocido: {method}")

    if method == AdjointMethod.FACETS:
        result = _adjoint_by_facets(I, n, threads)
    elif method == AdjointMethod.VALUATIONS:
        result = _adjoint_by_valuations(I, n, threads)
    else:
        result = _adjoint_by_bruteforce(I, n, threads)

    logger.info(f"adj(I^{n}) por {method.value}: {result.num_generators} generadores")
    return result


# ============================================================================
# SUBADITIVIDAD
# ============================================================================


def split_adjoint_factor(a: Sequence[int], I: MonomialIdeal, J: MonomialIdeal) -> SubadditivityWitness:
    """
    Parte x^a ∈ adj(IJ) como x^f · x^g: busca b ∈ NP°(I), c ∈ NP°(J) con
    b + c = a + (1, ..., 1) maximizando la holgura, y toma f_i = ⌈b_i⌉ - 1, g_i = ⌊c_i⌋.
    """
    if I.dimension != J.dimension:
        raise DimensionMismatchError(f"Dimensiones distintas: {I.dimension} y {J.dimension}")
    d = I.dimension
    a = check_exponent(a, d)
    if not adjoint_contains(product(I, J), 1, a):
        raise PreconditionError(f"{a} + (1, ..., 1) no está en NP°(IJ)")

    PI, PJ = newton_polyhedron(I), newton_polyhedron(J)
    target = shifted_point(a)
    zeros = (0,) * d

    rows = []
    for i in range(d):
        unit = tuple(1 if k == i else 0 for k in range(d))
        rows.append(Constraint(unit + unit, Sense.EQ, target[i]))
        rows.append(Constraint(unit + zeros, Sense.GE, Fraction(0)))
        rows.append(Constraint(zeros + unit, Sense.GE, Fraction(0)))
    for facet in PI.facets:
        rows.append(Constraint(tuple(facet.normal) + zeros, Sense.GE, Fraction(facet.offset)))
    for facet in PJ.facets:
        rows.append(Constraint(zeros + tuple(facet.normal), Sense.GE, Fraction(facet.offset)))

    feasible, point = simplex_feasible(rows, maximize_slack=True, num_vars=2 * d)
    if not feasible:
        raise InternalInconsistencyError(
            f"No se encontró partición interior para {a}",
            {"generator": list(a)},
        )
    b, c = point[:d], point[d:]
    f = tuple(ceil(x) - 1 for x in b)
    g = tuple(floor(x) for x in c)

    checks = {
        "factores no negativos": all(x >= 0 for x in f + g),
        "f + g = a": add_exponents(f, g) == a,
        "b ∈ NP°(I)": np_member(PI, b, strict=True),
        "c ∈ NP°(J)": np_member(PJ, c, strict=True),
        "f ∈ adj(I)": adjoint_contains(I, 1, f),
        "g ∈ adj(J)": adjoint_contains(J, 1, g),
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        logger.error(f"Testigo de subaditividad inválido para {a}: {failed}")
        raise InternalInconsistencyError(
            f"Testigo de subaditividad inválido para {a}",
            {"generator": list(a), "failed": failed, "b": [str(x) for x in b], "c": [str(x) for x in c]},
        )

    return SubadditivityWitness(generator=a, factor_I=f, factor_J=g, interior_point_b=b, interior_point_c=c)


def check_subadditivity(I: MonomialIdeal, J: MonomialIdeal, strict: bool = True,
                        threads: int = 1) -> Tuple[bool, List[SubadditivityWitness]]:
    """adj(IJ) ⊆ adj(I)·adj(J), con un testigo por generador minimal de adj(IJ)"""
    if I.dimension != J.dimension:
        raise DimensionMismatchError(f"Dimensiones distintas: {I.dimension} y {J.dimension}")

    adj_product = adjoint(product(I, J), 1, threads=threads)
    adj_I = adjoint(I, 1, threads=threads)
    adj_J = adjoint(J, 1, threads=threads)

    holds = ideal_containment(adj_product, product(adj_I, adj_J))
    if not holds:
        logger.error("adj(IJ) no está contenido en adj(I)·adj(J)")
        if strict:
            raise InternalInconsistencyError(
                "Falla de subaditividad",
                {"adj_IJ": [list(g) for g in adj_product.generators]},
            )
        return False, []

    witnesses = [split_adjoint_factor(a, I, J) for a in adj_product.generators]
    for w in witnesses:
        if not (contains(adj_I, w.factor_I) and contains(adj_J, w.factor_J)):
            raise InternalInconsistencyError(f"Factores fuera de los adjuntos para {w.generator}")
    logger.info(f"Subaditividad verificada con {len(witnesses)} testigos")
    return True, witnesses


# ============================================================================
# BRIANÇON-SKODA, EQUIVALENCIA PROYECTIVA Y NECESIDAD
# ============================================================================


def briancon_skoda_check(I: MonomialIdeal, n: int, threads: int = 1) -> bool:
    """adj(I^n) ⊆ ic(I^{n-l+1}) con l = número de generadores minimales"""
    l = I.num_generators
    if n < l:
        raise PreconditionError(f"Se requiere n >= l: n = {n}, l = {l}")
    return ideal_containment(
        adjoint(I, n, AdjointMethod.VALUATIONS, threads=threads),
        integral_closure(I, n - l + 1, threads=threads),
    )


def projective_equivalence(I: MonomialIdeal, J: MonomialIdeal, verify: bool = True,
                           threads: int = 1) -> EquivalenceResult:
    """
    I, J son proyectivamente equivalentes sii sus poliedros de Newton tienen las
    mismas normales y un único cociente de offsets λ = j / i.
    """
    if I.dimension != J.dimension:
        raise DimensionMismatchError(f"Dimensiones distintas: {I.dimension} y {J.dimension}")

    facets_I = newton_polyhedron(I).facets
    facets_J = newton_polyhedron(J).facets
    if [f.normal for f in facets_I] != [f.normal for f in facets_J]:
        return EquivalenceResult(equivalent=False)

    if not facets_I:
        result = EquivalenceResult(equivalent=True, i=1, j=1)
    else:
        ratios = {Fraction(fi.offset, fj.offset) for fi, fj in zip(facets_I, facets_J)}
        if len(ratios) != 1:
            return EquivalenceResult(equivalent=False)
        ratio = ratios.pop()
        result = EquivalenceResult(equivalent=True, i=ratio.denominator, j=ratio.numerator)

    if verify and integral_closure(I, result.i, threads) != integral_closure(J, result.j, threads):
        raise InternalInconsistencyError(
            f"ic(I^{result.i}) != ic(J^{result.j}) pese a facetas proporcionales",
            {"i": result.i, "j": result.j},
        )
    return result


def amplify_necessity_witness(I: MonomialIdeal, witness: NecessityWitness) -> AmplifiedNecessityWitness:
    """
    Con t = l·w(I), x^{te} cumple v(x^{te}) >= N·v(I) - v(J_{R_v/R}) para las
    valuaciones restantes (N = n·t) pero no está en ic(I^{N-l+1}), luego tampoco en adj(I^N).
    """
    rees = rees_valuations(I)
    w = witness.dropped_valuation
    w_value = next((value for v, value in rees if v == w), None)
    if w_value is None:
        raise PreconditionError(f"{w.weights} no es valuación de Rees del ideal")

    l = I.num_generators
    t = l * w_value
    big_power = witness.n * t
    exponent = check_exponent(tuple(t * x for x in witness.e), I.dimension)
    closure_power = big_power - l + 1

    remaining_ok = all(
        value_of_monomial(v, exponent) >= big_power * value - jacobian_value(v)
        for v, value in rees if v != w
    )
    outside_closure = not np_member(scale(newton_polyhedron(I), closure_power), exponent)
    outside_adjoint = not adjoint_contains(I, big_power, exponent)
    if not (remaining_ok and outside_closure and outside_adjoint
            and value_of_monomial(w, exponent) < closure_power * w_value):
        raise InternalInconsistencyError(
            f"Amplificación inválida del testigo para {w.weights}",
            {"t": t, "power": big_power, "exponent": list(exponent)},
        )

    return AmplifiedNecessityWitness(
        base=witness, t=t, power=big_power, exponent=exponent, closure_power=closure_power)


def rees_comparison(I: MonomialIdeal, threads: int = 1) -> ReesComparison:
    """Valuaciones de Rees de I y de adj(I), y las normales que comparten"""
    of_ideal = rees_valuations(I)
    of_adjoint = rees_valuations(adjoint(I, 1, AdjointMethod.VALUATIONS, threads=threads))
    normals = {v.weights for v, _ in of_ideal}
    shared = sorted(v.weights for v, _ in of_adjoint if v.weights in normals)
    return ReesComparison(ideal=of_ideal, adjoint=of_adjoint, shared=shared)
