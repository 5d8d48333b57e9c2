"""
Álgebra de ideales monomiales sobre vectores de exponentes
Generadores minimales canónicos, productos, potencias y membresía.
"""

import logging
from typing import Iterable, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from errors import DimensionMismatchError, ExponentOverflowError, PreconditionError

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]

# Exponentes de ancho fijo: la suma se verifica contra este tope
MAX_EXPONENT = 2**63 - 1

# ============================================================================
# EXPONENTES
# ============================================================================


def check_exponent(e: Sequence[int], dimension: int = None) -> Exponent:
    """Valida un vector de exponentes y lo regresa como tupla de enteros"""
    exponent = tuple(e)
    if dimension is not None and len(exponent) != dimension:
        raise DimensionMismatchError(f"Exponente {exponent} no tiene dimensión {dimension}")
    for x in exponent:
        if isinstance(x, bool) or not isinstance(x, int):
            raise PreconditionError(f"Entrada no entera en el exponente {exponent}")
        if x < 0:
            raise PreconditionError(f"Exponente negativo en {exponent}")
        if x > MAX_EXPONENT:
            raise ExponentOverflowError(f"Exponente fuera de rango en {exponent}")
    return exponent


def add_exponents(a: Exponent, b: Exponent) -> Exponent:
    """Suma componente a componente con verificación de desbordamiento"""
    if len(a) != len(b):
        raise DimensionMismatchError(f"No se pueden sumar {a} y {b}: dimensiones distintas")
    total = tuple(x + y for x, y in zip(a, b))
    if any(x > MAX_EXPONENT for x in total):
        raise ExponentOverflowError(f"Desbordamiento al sumar {a} + {b}")
    return total


def divides(a: Exponent, e: Exponent) -> bool:
    """x^a divide a x^e"""
    return all(x <= y for x, y in zip(a, e))


# ============================================================================
# MODELO DEL IDEAL
# ============================================================================


class MonomialIdeal(BaseModel):
    """
    Ideal monomial no cero: dimensión ambiente y anticadena de generadores minimales
    en orden lexicográfico descendente (x^4, x^3y, ...). El ideal unidad es {(0,...,0)}.
    """

    model_config = ConfigDict(frozen=True)

    dimension: int = Field(..., ge=1)
    generators: Tuple[Tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check_canonical(self) -> "MonomialIdeal":
        if not self.generators:
            raise ValueError("El ideal cero no es representable")
        for g in self.generators:
            if len(g) != self.dimension:
                raise ValueError(f"Generador {g} no tiene dimensión {self.dimension}")
            if any(x < 0 or x > MAX_EXPONENT for x in g):
                raise ValueError(f"Generador fuera de rango: {g}")
        if list(self.generators) != sorted(set(self.generators), reverse=True):
            raise ValueError("Los generadores no están en orden canónico")
        for i, a in enumerate(self.generators):
            for j, b in enumerate(self.generators):
                if i != j and divides(a, b):
                    raise ValueError(f"{a} divide a {b}: no es una anticadena")
        return self

    @property
    def is_unit(self) -> bool:
        return not any(self.generators[0]) and len(self.generators) == 1

    @property
    def num_generators(self) -> int:
        return len(self.generators)


# ============================================================================
# OPERACIONES
# ============================================================================


def minimalize(exps: Iterable[Sequence[int]]) -> MonomialIdeal:
    """Anticadena minimal que genera el mismo conjunto cerrado hacia arriba"""
    exponents = [check_exponent(e) for e in exps]
    if not exponents:
        raise PreconditionError("minimalize requiere al menos un exponente")
    d = len(exponents[0])
    if d == 0:
        raise PreconditionError("La dimensión ambiente debe ser positiva")
    if any(len(e) != d for e in exponents):
        raise DimensionMismatchError("Exponentes de dimensiones distintas")

    # Un divisor propio tiene grado total menor, así que se procesa antes
    minimal = []
    for e in sorted(set(exponents), key=lambda e: (sum(e), e)):
        if not any(divides(g, e) for g in minimal):
            minimal.append(e)
    return MonomialIdeal(dimension=d, generators=tuple(sorted(minimal, reverse=True)))


def unit_ideal(d: int) -> MonomialIdeal:
    return MonomialIdeal(dimension=d, generators=((0,) * d,))


def _same_dimension(I: MonomialIdeal, J: MonomialIdeal) -> None:
    if I.dimension != J.dimension:
        raise DimensionMismatchError(f"Dimensiones distintas: {I.dimension} y {J.dimension}")


def product(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _same_dimension(I, J)
    return minimalize(add_exponents(a, b) for a in I.generators for b in J.generators)


def power(I: MonomialIdeal, n: int) -> MonomialIdeal:
    """I^n como producto repetido; por convención I^0 es el ideal unidad"""
    if n < 0:
        raise PreconditionError(f"Potencia negativa: {n}")
    if n == 0:
        logger.warning("power con n = 0: se regresa el ideal unidad por convención")
        return unit_ideal(I.dimension)
    result = I
    for _ in range(n - 1):
        result = product(result, I)
    return result


def shift(I: MonomialIdeal, t: Sequence[int]) -> MonomialIdeal:
    """x^t · I"""
    t = check_exponent(t, I.dimension)
    return MonomialIdeal(
        dimension=I.dimension,
        generators=tuple(add_exponents(g, t) for g in I.generators),
    )


def contains(I: MonomialIdeal, e: Sequence[int]) -> bool:
    e = check_exponent(e, I.dimension)
    return any(divides(g, e) for g in I.generators)


def ideal_containment(I: MonomialIdeal, J: MonomialIdeal) -> bool:
    """I ⊆ J"""
    _same_dimension(I, J)
    return all(contains(J, g) for g in I.generators)
