"""
Núcleo de geometría exacta
Aritmética racional, programación lineal exacta (simplex de dos fases con
regla de Bland) y enumeración de facetas de poliedros conv(puntos) + ortante.
"""

import logging
from enum import Enum
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import List, NamedTuple, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from errors import (
    DimensionMismatchError,
    InternalInconsistencyError,
    MalformedSystemError,
    PreconditionError,
)

logger = logging.getLogger(__name__)

# Los racionales son fractions.Fraction: precisión arbitraria y siempre reducidos
Rational = Fraction
RationalVector = Tuple[Fraction, ...]
IntVector = Tuple[int, ...]

# ============================================================================
# TIPOS
# ============================================================================


class Facet(BaseModel):
    """Semiespacio normal·x >= offset de un poliedro de Newton (normal con gcd 1)"""

    model_config = ConfigDict(frozen=True)

    normal: Tuple[int, ...]
    offset: int

    @model_validator(mode="after")
    def _check_normalized(self) -> "Facet":
        if any(h < 0 for h in self.normal):
            raise ValueError(f"Normal con entradas negativas: {self.normal}")
        if not any(self.normal):
            raise ValueError("La normal de una faceta no puede ser cero")
        if self.offset <= 0:
            raise ValueError(f"Offset no positivo: {self.offset}")
        if reduce(gcd, self.normal) != 1:
            raise ValueError(f"Normal no normalizada (gcd != 1): {self.normal}")
        return self

    def evaluate(self, point: Sequence) -> Fraction:
        return sum((h * x for h, x in zip(self.normal, point)), Fraction(0))

    def scaled(self, n: int) -> "Facet":
        return Facet(normal=self.normal, offset=self.offset * n)


class Sense(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class Constraint(NamedTuple):
    coefficients: Tuple
    sense: Sense
    rhs: Fraction


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LPResult(NamedTuple):
    status: LPStatus
    point: Optional[RationalVector]
    value: Optional[Fraction]


# ============================================================================
# HELPERS
# ============================================================================


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def _primitive(vector: Sequence[int]) -> IntVector:
    """Divide un vector entero entre el gcd de sus entradas"""
    g = reduce(gcd, (abs(v) for v in vector), 0)
    if g <= 1:
        return tuple(vector)
    return tuple(v // g for v in vector)


def _flip(sense: Sense) -> Sense:
    if sense == Sense.LE:
        return Sense.GE
    if sense == Sense.GE:
        return Sense.LE
    return sense


# ============================================================================
# SIMPLEX EXACTO (DOS FASES, REGLA DE BLAND)
# ============================================================================


def _pivot(tableau: List[List[Fraction]], reduced: Optional[List[Fraction]],
           basis: List[int], i: int, j: int) -> None:
    pivot_row = tableau[i]
    p = pivot_row[j]
    if p != 1:
        pivot_row = [v / p for v in pivot_row]
        tableau[i] = pivot_row
    for k, row in enumerate(tableau):
        if k != i and row[j] != 0:
            f = row[j]
            tableau[k] = [a - f * b for a, b in zip(row, pivot_row)]
    if reduced is not None and reduced[j] != 0:
        f = reduced[j]
        reduced[:] = [a - f * b for a, b in zip(reduced, pivot_row)]
    basis[i] = j


def _run_simplex(tableau: List[List[Fraction]], basis: List[int], cost: List[Fraction],
                 allowed: Sequence[int]) -> Tuple[LPStatus, Fraction]:
    """
    Maximiza cost·x sobre el tableau en forma canónica.
    Regla de Bland: entra la columna de menor índice con costo reducido positivo,
    sale la fila de razón mínima y, en empate, la de variable básica de menor índice.
    """
    width = len(cost)
    reduced = list(cost) + [Fraction(0)]
    for i, b in enumerate(basis):
        cb = cost[b]
        if cb != 0:
            row = tableau[i]
            for j in range(width + 1):
                reduced[j] -= cb * row[j]

    pivots = 0
    while True:
        entering = next((j for j in allowed if reduced[j] > 0), None)
        if entering is None:
            logger.debug(f"Simplex óptimo tras {pivots} pivoteos")
            return LPStatus.OPTIMAL, -reduced[-1]

        candidates = [i for i, row in enumerate(tableau) if row[entering] > 0]
        if not candidates:
            return LPStatus.UNBOUNDED, None

        leaving = min(candidates, key=lambda i: (tableau[i][-1] / tableau[i][entering], basis[i]))
        _pivot(tableau, reduced, basis, leaving, entering)
        pivots += 1


def solve_lp(rows: Sequence[Constraint], objective: Sequence, num_vars: int) -> LPResult:
    """
    Maximiza objective·x sujeto a rows, con x >= 0, en aritmética racional exacta.
    """
    if num_vars < 0 or len(objective) != num_vars:
        raise MalformedSystemError(f"Objetivo de longitud {len(objective)} para {num_vars} variables")

    normalized = []
    for row in rows:
        if len(row.coefficients) != num_vars:
            raise MalformedSystemError(
                f"Fila de longitud {len(row.coefficients)} en un sistema de {num_vars} variables")
        try:
            sense = Sense(row.sense)
        except ValueError:
            raise MalformedSystemError(f"Sentido de restricción desconocido: {row.sense}")
        coefficients = [Fraction(c) for c in row.coefficients]
        rhs = Fraction(row.rhs)
        if rhs < 0:
            coefficients = [-c for c in coefficients]
            rhs = -rhs
            sense = _flip(sense)
        normalized.append((coefficients, sense, rhs))

    n_slack = sum(1 for _, sense, _ in normalized if sense != Sense.EQ)
    n_artificial = sum(1 for _, sense, _ in normalized if sense != Sense.LE)
    width = num_vars + n_slack + n_artificial
    first_artificial = num_vars + n_slack

    tableau: List[List[Fraction]] = []
    basis: List[int] = []
    slack_col, artificial_col = num_vars, first_artificial
    for coefficients, sense, rhs in normalized:
        row = coefficients + [Fraction(0)] * (n_slack + n_artificial) + [rhs]
        if sense == Sense.LE:
            row[slack_col] = Fraction(1)
            basis.append(slack_col)
            slack_col += 1
        else:
            if sense == Sense.GE:
                row[slack_col] = Fraction(-1)
                slack_col += 1
            row[artificial_col] = Fraction(1)
            basis.append(artificial_col)
            artificial_col += 1
        tableau.append(row)

    # Fase I: minimizar la suma de artificiales
    if n_artificial:
        phase_one_cost = [Fraction(0)] * first_artificial + [Fraction(-1)] * n_artificial
        status, value = _run_simplex(tableau, basis, phase_one_cost, range(width))
        if status != LPStatus.OPTIMAL or value < 0:
            return LPResult(LPStatus.INFEASIBLE, None, None)

        # Sacar de la base las artificiales degeneradas
        redundant_rows = []
        for i, b in enumerate(basis):
            if b < first_artificial:
                continue
            j = next((j for j in range(first_artificial) if tableau[i][j] != 0), None)
            if j is None:
                redundant_rows.append(i)
            else:
                _pivot(tableau, None, basis, i, j)
        for i in reversed(redundant_rows):
            del tableau[i]
            del basis[i]

    # Fase II
    cost = [Fraction(c) for c in objective] + [Fraction(0)] * (width - num_vars)
    status, value = _run_simplex(tableau, basis, cost, range(first_artificial))
    if status == LPStatus.UNBOUNDED:
        return LPResult(LPStatus.UNBOUNDED, None, None)

    point = [Fraction(0)] * num_vars
    for i, b in enumerate(basis):
        if b < num_vars:
            point[b] = tableau[i][-1]
    return LPResult(LPStatus.OPTIMAL, tuple(point), value)


def simplex_feasible(rows: Sequence[Constraint], maximize_slack: bool = False,
                     num_vars: Optional[int] = None) -> Tuple[bool, Optional[RationalVector]]:
    """
    Decide la factibilidad de un sistema de restricciones sobre variables no negativas.

    Con maximize_slack cada fila <= o >= se vuelve estricta: se agrega una holgura
    uniforme delta (acotada por 1) que se maximiza, y el veredicto es delta* > 0.
    Las cotas implícitas x >= 0 siguen siendo débiles; para pedir x > 0 hay que
    agregar filas x_i >= 0 explícitas.
    """
    if num_vars is None:
        if not rows:
            raise MalformedSystemError("Sistema vacío sin número de variables")
        num_vars = len(rows[0].coefficients)

    if not maximize_slack:
        result = solve_lp(rows, [0] * num_vars, num_vars)
        if result.status == LPStatus.INFEASIBLE:
            return False, None
        return True, result.point

    slack_rows = []
    for row in rows:
        if len(row.coefficients) != num_vars:
            raise MalformedSystemError(
                f"Fila de longitud {len(row.coefficients)} en un sistema de {num_vars} variables")
        try:
            sense = Sense(row.sense)
        except ValueError:
            raise MalformedSystemError(f"Sentido de restricción desconocido: {row.sense}")
        delta = {Sense.LE: 1, Sense.GE: -1, Sense.EQ: 0}[sense]
        slack_rows.append(Constraint(tuple(row.coefficients) + (delta,), sense, row.rhs))
    slack_rows.append(Constraint((0,) * num_vars + (1,), Sense.LE, Fraction(1)))

    result = solve_lp(slack_rows, [0] * num_vars + [1], num_vars + 1)
    if result.status != LPStatus.OPTIMAL or result.value <= 0:
        return False, None
    logger.debug(f"Holgura máxima {result.value}")
    return True, result.point[:num_vars]


# ============================================================================
# MEMBRESÍA POR PROGRAMACIÓN LINEAL
# ============================================================================


def lp_member(point: Sequence, points: Sequence[IntVector]) -> bool:
    """
    point pertenece a conv(points) + ortante sii existe c >= 0 con sum(c) = 1
    y sum(c_i a_i) <= point componente a componente.
    """
    d = len(point)
    if not points:
        raise PreconditionError("lp_member requiere al menos un punto")
    if any(len(a) != d for a in points):
        raise DimensionMismatchError(f"Los puntos no tienen dimensión {d}")
    if any(x < 0 for x in point):
        raise PreconditionError(f"Punto con coordenadas negativas: {tuple(point)}")

    # Atajos sin LP: point domina a un generador, o viola una cota válida
    # del poliedro (x_k >= min a_k, suma >= min suma)
    if any(all(x >= y for x, y in zip(point, a)) for a in points):
        return True
    if any(point[k] < min(a[k] for a in points) for k in range(d)):
        return False
    if sum(point) < min(sum(a) for a in points):
        return False

    s = len(points)
    rows = [Constraint((1,) * s, Sense.EQ, Fraction(1))]
    for k in range(d):
        rows.append(Constraint(tuple(a[k] for a in points), Sense.LE, Fraction(point[k])))
    feasible, _ = simplex_feasible(rows, num_vars=s)
    return feasible


def max_violation(facets: Sequence[Facet], index: int, d: int) -> Tuple[Fraction, RationalVector]:
    """
    Maximiza offset - normal·x de la faceta `index` sobre los x >= 0 que cumplen
    débilmente todas las demás. El máximo es positivo sii la faceta es irredundante.
    """
    target = facets[index]
    rows = [
        Constraint(tuple(facet.normal) + (0,), Sense.GE, Fraction(facet.offset))
        for k, facet in enumerate(facets) if k != index
    ]
    rows.append(Constraint(tuple(target.normal) + (1,), Sense.LE, Fraction(target.offset)))

    result = solve_lp(rows, [0] * d + [1], d + 1)
    if result.status != LPStatus.OPTIMAL:
        raise InternalInconsistencyError(
            f"LP de violación sin óptimo ({result.status.value}) para la faceta {target.normal}",
            {"normal": list(target.normal), "offset": target.offset},
        )
    return result.value, result.point[:d]


# ============================================================================
# ENUMERACIÓN DE FACETAS (DOBLE DESCRIPCIÓN)
# ============================================================================


def _validate_points(points: Sequence[IntVector], d: int) -> List[IntVector]:
    if not points:
        raise PreconditionError("hull_facets requiere al menos un punto")
    if d < 1:
        raise PreconditionError(f"Dimensión inválida: {d}")
    cleaned = []
    for p in points:
        if len(p) != d:
            raise DimensionMismatchError(f"Punto {tuple(p)} no tiene dimensión {d}")
        if any(x < 0 for x in p):
            raise PreconditionError(f"Punto con coordenadas negativas: {tuple(p)}")
        cleaned.append(tuple(int(x) for x in p))
    return sorted(set(cleaned))


def _double_description(points: List[IntVector], d: int) -> List[IntVector]:
    """
    H-representación del cono homogeneizado generado por (1, p) y los rayos (0, e_i).
    Cada desigualdad c = (c_t, h) significa c_t·t + h·x >= 0.
    """
    rays = [tuple([0] + [1 if i == j else 0 for i in range(d)]) for j in range(d)]
    first = points[0]
    generators: List[IntVector] = rays + [(1,) + first]

    # Cono simplicial inicial: t >= 0 y x_j - p0_j·t >= 0
    inequalities: List[IntVector] = [tuple([1] + [0] * d)]
    for j in range(d):
        inequalities.append(tuple([-first[j]] + [1 if i == j else 0 for i in range(d)]))

    for p in points[1:]:
        g = (1,) + p
        values = [dot(c, g) for c in inequalities]
        negative = [k for k, v in enumerate(values) if v < 0]
        if not negative:
            continue
        positive = [k for k, v in enumerate(values) if v > 0]
        zero_sets = [
            frozenset(i for i, gen in enumerate(generators) if dot(c, gen) == 0)
            for c in inequalities
        ]

        updated = [c for c, v in zip(inequalities, values) if v >= 0]
        for a in positive:
            for b in negative:
                common = zero_sets[a] & zero_sets[b]
                # En el cono homogeneizado (dimensión d+1) dos rayos adyacentes
                # comparten al menos d-1 generadores tensos
                if len(common) < d - 1:
                    continue
                # Prueba combinatoria de adyacencia
                if any(common <= zero_sets[k] for k in range(len(inequalities)) if k != a and k != b):
                    continue
                combined = [values[a] * cb - values[b] * ca for ca, cb in zip(inequalities[a], inequalities[b])]
                updated.append(_primitive(combined))

        inequalities = list(dict.fromkeys(updated))
        generators.append(g)
        logger.debug(f"Doble descripción: {len(generators)} generadores, {len(inequalities)} desigualdades")

    return inequalities


def hull_facets(points: Sequence[IntVector], d: int) -> List[Facet]:
    """
    Facetas irredundantes no coordenadas de conv(points) + Q_{>=0}^d,
    normalizadas por gcd y ordenadas lexicográficamente por normal.
    Lista vacía sii el vector cero está entre los puntos (ideal unidad).
    """
    cleaned = _validate_points(points, d)
    if tuple([0] * d) in cleaned:
        return []

    facets: List[Facet] = []
    for c in _double_description(cleaned, d):
        offset, normal = -c[0], c[1:]
        if offset <= 0:
            continue
        g = reduce(gcd, normal)
        if offset % g != 0:
            raise InternalInconsistencyError(
                f"El gcd de la normal {normal} no divide al offset {offset}",
                {"normal": list(normal), "offset": offset},
            )
        facets.append(Facet(normal=tuple(h // g for h in normal), offset=offset // g))

    facets = sorted(set(facets), key=lambda f: (f.normal, f.offset))

    # Remoción de redundancia por LP
    k = 0
    while k < len(facets):
        violation, _ = max_violation(facets, k, d)
        if violation > 0:
            k += 1
        else:
            logger.debug(f"Faceta redundante eliminada: {facets[k].normal}")
            del facets[k]

    for facet in facets:
        values = [dot(facet.normal, p) for p in cleaned]
        if min(values) != facet.offset:
            raise InternalInconsistencyError(
                f"Faceta {facet.normal} no es soporte de los generadores",
                {"normal": list(facet.normal), "offset": facet.offset},
            )

    logger.debug(f"hull_facets: {len(cleaned)} puntos, {len(facets)} facetas")
    return facets
