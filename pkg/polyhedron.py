"""
Poliedro de Newton de un ideal monomial y membresía (débil y en el interior)
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from errors import DimensionMismatchError, PreconditionError
from exactgeom import Facet, dot, hull_facets
from ideal import Exponent, MonomialIdeal

logger = logging.getLogger(__name__)


class NewtonPolyhedron(BaseModel):
    """conv(generadores) + ortante, guardado como lista de facetas no coordenadas"""

    model_config = ConfigDict(frozen=True)

    dimension: int
    facets: Tuple[Facet, ...]
    source_generators: Tuple[Tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check_support(self) -> "NewtonPolyhedron":
        for facet in self.facets:
            if len(facet.normal) != self.dimension:
                raise ValueError(f"Faceta {facet.normal} no tiene dimensión {self.dimension}")
            values = [dot(facet.normal, a) for a in self.source_generators]
            if min(values) != facet.offset:
                raise ValueError(f"Faceta {facet.normal} no es tangente a los generadores")
        if [f.normal for f in self.facets] != sorted(f.normal for f in self.facets):
            raise ValueError("Facetas fuera de orden")
        return self


@lru_cache(maxsize=1024)
def newton_polyhedron(I: MonomialIdeal) -> NewtonPolyhedron:
    facets = hull_facets(list(I.generators), I.dimension)
    logger.debug(f"NP de {I.num_generators} generadores: {len(facets)} facetas")
    return NewtonPolyhedron(
        dimension=I.dimension,
        facets=tuple(facets),
        source_generators=I.generators,
    )


def np_member(P: NewtonPolyhedron, point: Sequence, strict: bool = False) -> bool:
    """
    Modo débil: todas las facetas se cumplen y point >= 0.
    Modo estricto (NP°): todas las facetas se cumplen estrictamente y cada
    coordenada es estrictamente positiva.
    """
    if len(point) != P.dimension:
        raise DimensionMismatchError(f"Punto de dimensión {len(point)} en NP de dimensión {P.dimension}")
    if strict:
        if any(x <= 0 for x in point):
            return False
        return all(facet.evaluate(point) > facet.offset for facet in P.facets)
    if any(x < 0 for x in point):
        return False
    return all(facet.evaluate(point) >= facet.offset for facet in P.facets)


def scale(P: NewtonPolyhedron, n: int) -> NewtonPolyhedron:
    """n · NP: mismas normales, offsets multiplicados por n"""
    if n < 1:
        raise PreconditionError(f"El factor de escala debe ser positivo: {n}")
    return NewtonPolyhedron(
        dimension=P.dimension,
        facets=tuple(facet.scaled(n) for facet in P.facets),
        source_generators=tuple(tuple(n * x for x in a) for a in P.source_generators),
    )


def shifted_point(e: Exponent) -> Tuple[Fraction, ...]:
    """e + (1, ..., 1)"""
    return tuple(Fraction(x + 1) for x in e)


def facet_set(P: NewtonPolyhedron) -> List[Tuple[Tuple[int, ...], int]]:
    return [(f.normal, f.offset) for f in P.facets]
