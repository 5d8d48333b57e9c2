"""
Valuaciones monomiales, valores de ideales, valor jacobiano y valuaciones de Rees
"""

import logging
from functools import reduce
from math import gcd, lcm
from typing import List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from errors import DimensionMismatchError, InternalInconsistencyError
from exactgeom import max_violation
from ideal import Exponent, MonomialIdeal, check_exponent
from polyhedron import newton_polyhedron

logger = logging.getLogger(__name__)

# ============================================================================
# MODELOS
# ============================================================================


class MonomialValuation(BaseModel):
    """Valuación monomial de pesos h_i = v(x_i)"""

    model_config = ConfigDict(frozen=True)

    weights: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_weights(self) -> "MonomialValuation":
        if any(h < 0 for h in self.weights):
            raise ValueError(f"Pesos negativos: {self.weights}")
        if not any(self.weights):
            raise ValueError("Todos los pesos son cero")
        return self

    @property
    def is_normalized(self) -> bool:
        return reduce(gcd, self.weights) == 1


class NecessityWitness(BaseModel):
    """
    (n, e) con w(e) < n·w(I) para la valuación descartada w y v(e) >= n·v(I) para las demás:
    x^e está en la intersección sin w pero no en ic(I^n).
    """

    model_config = ConfigDict(frozen=True)

    dropped_valuation: MonomialValuation
    n: int = Field(..., ge=1)
    e: Tuple[int, ...]


ReesValuation = Tuple[MonomialValuation, int]

# ============================================================================
# VALORES
# ============================================================================


def value_of_monomial(v: MonomialValuation, e: Sequence[int]) -> int:
    e = check_exponent(e)
    if len(e) != len(v.weights):
        raise DimensionMismatchError(f"Pesos de dimensión {len(v.weights)} y exponente {e}")
    return sum(h * x for h, x in zip(v.weights, e))


def value_of_ideal(v: MonomialValuation, I: MonomialIdeal) -> int:
    """v(I) = mínimo sobre los generadores"""
    if len(v.weights) != I.dimension:
        raise DimensionMismatchError(f"Pesos de dimensión {len(v.weights)} e ideal de dimensión {I.dimension}")
    return min(value_of_monomial(v, g) for g in I.generators)


def jacobian_value(v: MonomialValuation) -> int:
    """v(J_{R_v/R}) = v(x_1 ... x_d) - gcd(v(x_i))"""
    return sum(v.weights) - reduce(gcd, v.weights)


# ============================================================================
# VALUACIONES DE REES
# ============================================================================


def rees_valuations(I: MonomialIdeal) -> List[ReesValuation]:
    """Una valuación por faceta no coordenada de NP(I), emparejada con v(I) = offset"""
    result = []
    for facet in newton_polyhedron(I).facets:
        v = MonomialValuation(weights=facet.normal)
        value = value_of_ideal(v, I)
        if value != facet.offset or not v.is_normalized:
            raise InternalInconsistencyError(
                f"La faceta {facet.normal} no coincide con su valuación (v(I) = {value}, offset = {facet.offset})",
                {"normal": list(facet.normal), "offset": facet.offset, "value": value},
            )
        result.append((v, facet.offset))
    return result


def verify_necessity_witness(witness: NecessityWitness, rees: Sequence[ReesValuation]) -> bool:
    """Evalúa directamente las dos condiciones del testigo"""
    n, e = witness.n, witness.e
    for v, value in rees:
        if v == witness.dropped_valuation:
            if value_of_monomial(v, e) >= n * value:
                return False
        elif value_of_monomial(v, e) < n * value:
            return False
    return True


def check_rees_necessity(I: MonomialIdeal) -> List[NecessityWitness]:
    """
    Para cada valuación de Rees w, un testigo de que sin w las demás no
    calculan ic(I^n): el punto racional que maximiza la violación de la faceta
    de w cumpliendo las demás, con denominadores limpiados en (n, e).
    """
    P = newton_polyhedron(I)
    facets = list(P.facets)
    rees = rees_valuations(I)
    witnesses = []

    for k, facet in enumerate(facets):
        violation, point = max_violation(facets, k, I.dimension)
        if violation <= 0:
            raise InternalInconsistencyError(
                f"No hay punto que viole solo la faceta {facet.normal}",
                {"normal": list(facet.normal), "offset": facet.offset},
            )
        n = lcm(*(x.denominator for x in point))
        e: Exponent = tuple(int(x * n) for x in point)
        witness = NecessityWitness(dropped_valuation=MonomialValuation(weights=facet.normal), n=n, e=e)
        if not verify_necessity_witness(witness, rees):
            raise InternalInconsistencyError(
                f"Testigo de necesidad inválido para {facet.normal}",
                {"n": n, "e": list(e), "weights": list(facet.normal)},
            )
        witnesses.append(witness)

    logger.info(f"check_rees_necessity: {len(witnesses)} testigos")
    return witnesses
