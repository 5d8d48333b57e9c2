"""
Interfaz de línea de comandos del motor de ideales monomiales
Lee ideales en JSON (IdealDocument), despacha los cálculos y escribe una salida
determinista en JSON o texto alineado.

Códigos de salida: 0 éxito, 1 una verificación falló (con testigo), 2 error de entrada/uso.
"""

import argparse
import json
import logging
import re
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple, Union

from pydantic import BaseModel, StrictInt, ValidationError, field_validator

from closure_adjoint import (
    AdjointMethod,
    adjoint,
    adjoint_contains,
    amplify_necessity_witness,
    briancon_skoda_check,
    check_subadditivity,
    integral_closure,
    projective_equivalence,
    rees_comparison,
)
from engine_config import EngineSettings, load_settings
from errors import InputError, InternalInconsistencyError, MonomialEngineError, PreconditionError
from exactgeom import Facet
from ideal import Exponent, MonomialIdeal, contains, minimalize, product
from polyhedron import newton_polyhedron
from valuation import ReesValuation, check_rees_necessity, rees_valuations

logger = logging.getLogger(__name__)

# ============================================================================
# DOCUMENTOS DE ENTRADA
# ============================================================================

VARIABLE_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
FACTOR_PATTERN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


class IdealDocument(BaseModel):
    variables: List[str]
    generators: List[Union[List[StrictInt], str]]

    @field_validator("variables")
    @classmethod
    def _unique_variables(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("Se requiere al menos una variable")
        for name in value:
            if not VARIABLE_PATTERN.match(name):
                raise ValueError(f"Nombre de variable inválido: {name!r}")
        if len(set(value)) != len(value):
            raise ValueError("Nombres de variables repetidos")
        return value

    @field_validator("generators")
    @classmethod
    def _non_empty(cls, value: list) -> list:
        if not value:
            raise ValueError("La lista de generadores está vacía")
        return value


def parse_monomial(text: str, variables: Sequence[str]) -> Exponent:
    """'x^2*y' -> (2, 1); exponente implícito 1, variables omitidas en 0, '1' es el monomio unidad"""
    index = {name: k for k, name in enumerate(variables)}
    exponent = [0] * len(variables)
    cleaned = text.replace(" ", "")
    if cleaned == "1":
        return tuple(exponent)
    if not cleaned:
        raise InputError("Monomio vacío")

    for factor in cleaned.split("*"):
        match = FACTOR_PATTERN.match(factor)
        if not match:
            raise InputError(f"Factor mal formado {factor!r} en {text!r}")
        name, power_text = match.group(1), match.group(2)
        if name not in index:
            raise InputError(f"Variable desconocida {name!r} en {text!r}")
        k = int(power_text) if power_text is not None else 1
        if k < 0:
            raise InputError(f"Exponente negativo en {text!r}")
        exponent[index[name]] += k
    return tuple(exponent)


def load_document(text: str) -> Tuple[List[str], MonomialIdeal]:
    """Valida el documento y regresa (variables, ideal minimalizado)"""
    try:
        document = IdealDocument.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        raise InputError(f"JSON inválido: {e}")
    except ValidationError as e:
        raise InputError(f"Documento de ideal inválido: {e}")

    d = len(document.variables)
    exponents = []
    for generator in document.generators:
        if isinstance(generator, str):
            exponents.append(parse_monomial(generator, document.variables))
            continue
        if len(generator) != d:
            raise InputError(f"El generador {generator} no tiene longitud {d}")
        if any(x < 0 for x in generator):
            raise InputError(f"Exponente negativo en {generator}")
        exponents.append(tuple(generator))

    if len(set(exponents)) != len(exponents):
        logger.warning("El documento contiene generadores repetidos")
    try:
        return document.variables, minimalize(exponents)
    except PreconditionError as e:
        raise InputError(str(e))


def parse_ideal(text: str) -> MonomialIdeal:
    return load_document(text)[1]


def read_source(source: str) -> str:
    try:
        if source == "-":
            return sys.stdin.read()
        return Path(source).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise InputError(f"{source} no es UTF-8 válido: {e}")
    except OSError as e:
        raise InputError(f"No se pudo leer {source}: {e}")


# ============================================================================
# SALIDA
# ============================================================================


def format_monomial(e: Sequence[int], variables: Sequence[str]) -> str:
    factors = []
    for name, k in zip(variables, e):
        if k == 1:
            factors.append(name)
        elif k > 1:
            factors.append(f"{name}^{k}")
    return "*".join(factors) if factors else "1"


def emit_ideal_document(I: MonomialIdeal, variables: Sequence[str]) -> Dict[str, Any]:
    return {
        "variables": list(variables),
        "generators": [format_monomial(g, variables) for g in I.generators],
        "exponents": [list(g) for g in I.generators],
    }


def _facet_record(facet: Facet) -> Dict[str, Any]:
    return {"normal": list(facet.normal), "offset": facet.offset}


def _rees_records(rees: List[ReesValuation]) -> List[Dict[str, Any]]:
    return [{"weights": list(v.weights), "value": value} for v, value in rees]


def _vector(values: Sequence) -> List[str]:
    return [str(x) for x in values]


def _ideal_lines(title: str, I: MonomialIdeal, variables: Sequence[str]) -> List[str]:
    lines = [f"{title}: {I.num_generators} generadores"]
    lines.extend(f"  {format_monomial(g, variables)}" for g in I.generators)
    return lines


class Output:
    """Escribe un payload en JSON o sus líneas de texto"""

    def __init__(self, stream: TextIO, fmt: str):
        self.stream = stream
        self.fmt = fmt

    def emit(self, payload: Dict[str, Any], lines: List[str]) -> None:
        if self.fmt == "json":
            self.stream.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
        else:
            self.stream.write("\n".join(lines) + "\n")


# ============================================================================
# COMANDOS
# ============================================================================


def _same_variables(left: List[str], right: List[str]) -> None:
    if left != right:
        raise InputError(f"Los documentos declaran variables distintas: {left} vs {right}")


def cmd_facets(args, settings: EngineSettings, out: Output) -> int:
    variables, I = load_document(read_source(args.ideal))
    facets = newton_polyhedron(I).facets
    width = max((len(str(list(f.normal))) for f in facets), default=0)
    out.emit(
        {"variables": variables, "facets": [_facet_record(f) for f in facets]},
        [f"NP(I): {len(facets)} facetas"] + [f"  {str(list(f.normal)).ljust(width)} · e >= {f.offset}" for f in facets],
    )
    return 0


def cmd_rees(args, settings: EngineSettings, out: Output) -> int:
    variables, I = load_document(read_source(args.ideal))
    if args.compare_adjoint:
        comparison = rees_comparison(I, threads=settings.threads)
        out.emit(
            {
                "variables": variables,
                "ideal": _rees_records(comparison.ideal),
                "adjoint": _rees_records(comparison.adjoint),
                "shared": [list(w) for w in comparison.shared],
            },
            [f"Rees(I): {len(comparison.ideal)}  Rees(adj I): {len(comparison.adjoint)}  comunes: {len(comparison.shared)}"]
            + [f"  I      {list(v.weights)} -> {value}" for v, value in comparison.ideal]
            + [f"  adj I  {list(v.weights)} -> {value}" for v, value in comparison.adjoint],
        )
        return 0

    rees = rees_valuations(I)
    out.emit(
        {"variables": variables, "valuations": _rees_records(rees)},
        [f"Valuaciones de Rees: {len(rees)}"] + [f"  {list(v.weights)} -> {value}" for v, value in rees],
    )
    return 0


def cmd_closure(args, settings: EngineSettings, out: Output) -> int:
    variables, I = load_document(read_source(args.ideal))
    closure = integral_closure(I, args.power, threads=settings.threads)
    out.emit(
        {"power": args.power, "ideal": emit_ideal_document(closure, variables)},
        _ideal_lines(f"ic(I^{args.power})", closure, variables),
    )
    return 0


def cmd_adjoint(args, settings: EngineSettings, out: Output) -> int:
    variables, I = load_document(read_source(args.ideal))
    result = adjoint(I, args.power, args.method, threads=settings.threads)
    out.emit(
        {"power": args.power, "method": args.method, "ideal": emit_ideal_document(result, variables)},
        _ideal_lines(f"adj(I^{args.power}) [{args.method}]", result, variables),
    )
    return 0


def cmd_product(args, settings: EngineSettings, out: Output) -> int:
    variables, I = load_document(read_source(args.first))
    other_variables, J = load_document(read_source(args.second))
    _same_variables(variables, other_variables)
    result = product(I, J)
    out.emit({"ideal": emit_ideal_document(result, variables)}, _ideal_lines("I·J", result, variables))
    return 0


def _parse_exponent(text: str, d: int) -> Exponent:
    try:
        e = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"Exponente mal formado: {text!r}")
    if len(e) != d or any(x < 0 for x in e):
        raise InputError(f"Se esperaban {d} enteros no negativos: {text!r}")
    return e


def cmd_member(args, settings: EngineSettings, out: Output) -> int:
    variables, I = load_document(read_source(args.ideal))
    e = _parse_exponent(args.exponent, I.dimension)
    if args.closure is not None:
        target = f"ic(I^{args.closure})"
        member = contains(integral_closure(I, args.closure, threads=settings.threads), e)
    elif args.adjoint is not None:
        target = f"adj(I^{args.adjoint})"
        member = adjoint_contains(I, args.adjoint, e)
    else:
        target = "I"
        member = contains(I, e)
    out.emit(
        {"exponent": list(e), "monomial": format_monomial(e, variables), "ideal": target, "member": member},
        [f"{format_monomial(e, variables)} {'∈' if member else '∉'} {target}"],
    )
    return 0


def cmd_check_subadditivity(args, settings: EngineSettings, out: Output) -> int:
    variables, I = load_document(read_source(args.first))
    other_variables, J = load_document(read_source(args.second))
    _same_variables(variables, other_variables)
    holds, witnesses = check_subadditivity(I, J, strict=settings.strict_checks, threads=settings.threads)
    records = [
        {
            "generator": format_monomial(w.generator, variables),
            "factor_I": format_monomial(w.factor_I, variables),
            "factor_J": format_monomial(w.factor_J, variables),
            "interior_point_b": _vector(w.interior_point_b),
            "interior_point_c": _vector(w.interior_point_c),
        }
        for w in witnesses
    ]
    out.emit(
        {"check": "subadditivity", "holds": holds, "witnesses": records},
        [f"adj(IJ) ⊆ adj(I)·adj(J): {'sí' if holds else 'NO'}"]
        + [f"  {r['generator']} = ({r['factor_I']})·({r['factor_J']})  b={r['interior_point_b']} c={r['interior_point_c']}"
           for r in records],
    )
    return 0 if holds else 1


def cmd_check_necessity(args, settings: EngineSettings, out: Output) -> int:
    variables, I = load_document(read_source(args.ideal))
    records, lines = [], []
    for witness in check_rees_necessity(I):
        amplified = amplify_necessity_witness(I, witness)
        records.append({
            "dropped_valuation": list(witness.dropped_valuation.weights),
            "n": witness.n,
            "e": list(witness.e),
            "monomial": format_monomial(witness.e, variables),
            "amplified": {
                "t": amplified.t,
                "power": amplified.power,
                "exponent": list(amplified.exponent),
                "closure_power": amplified.closure_power,
            },
        })
        lines.append(
            f"  sin {list(witness.dropped_valuation.weights)}: n={witness.n} e={list(witness.e)}"
            f"  (t={amplified.t}, adj(I^{amplified.power}) vs ic(I^{amplified.closure_power}))"
        )
    out.emit(
        {"check": "necessity", "holds": True, "witnesses": records},
        [f"Testigos de necesidad: {len(records)}"] + lines,
    )
    return 0


def cmd_check_briancon_skoda(args, settings: EngineSettings, out: Output) -> int:
    variables, I = load_document(read_source(args.ideal))
    l = I.num_generators
    try:
        holds = briancon_skoda_check(I, args.power, threads=settings.threads)
    except PreconditionError as e:
        raise InputError(str(e))
    payload: Dict[str, Any] = {"check": "briancon-skoda", "power": args.power, "l": l, "holds": holds}
    if not holds:
        adj = adjoint(I, args.power, threads=settings.threads)
        closure = integral_closure(I, args.power - l + 1, threads=settings.threads)
        payload["outside"] = [format_monomial(g, variables) for g in adj.generators if not contains(closure, g)]
    out.emit(payload, [f"adj(I^{args.power}) ⊆ ic(I^{args.power - l + 1}): {'sí' if holds else 'NO'}"])
    return 0 if holds else 1


def cmd_equiv(args, settings: EngineSettings, out: Output) -> int:
    variables, I = load_document(read_source(args.first))
    other_variables, J = load_document(read_source(args.second))
    _same_variables(variables, other_variables)
    result = projective_equivalence(I, J, threads=settings.threads)
    text = f"equivalentes: ic(I^{result.i}) = ic(J^{result.j})" if result.equivalent else "no equivalentes"
    out.emit(result.model_dump(), [text])
    return 0


# ============================================================================
# PARSER
# ============================================================================


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=["json", "text"], default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--log-level", dest="log_level", default=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="monomial-engine",
        description="Poliedros de Newton, valuaciones de Rees, clausuras enteras y adjuntos de ideales monomiales",
        parents=[common],
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("facets", parents=[common], help="Facetas no coordenadas de NP(I)")
    p.add_argument("ideal")
    p.set_defaults(handler=cmd_facets)

    p = commands.add_parser("rees", parents=[common], help="Valuaciones de Rees")
    p.add_argument("ideal")
    p.add_argument("--compare-adjoint", action="store_true")
    p.set_defaults(handler=cmd_rees)

    p = commands.add_parser("closure", parents=[common], help="ic(I^N)")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("ideal")
    p.set_defaults(handler=cmd_closure)

    p = commands.add_parser("adjoint", parents=[common], help="adj(I^N)")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--method", choices=[m.value for m in AdjointMethod], default=AdjointMethod.FACETS.value)
    p.add_argument("ideal")
    p.set_defaults(handler=cmd_adjoint)

    p = commands.add_parser("product", parents=[common], help="I·J")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(handler=cmd_product)

    p = commands.add_parser("member", parents=[common], help="Membresía de un monomio")
    p.add_argument("--exponent", required=True, help="Entradas separadas por comas, p.ej. 2,1")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--closure", type=int)
    group.add_argument("--adjoint", type=int)
    p.add_argument("ideal")
    p.set_defaults(handler=cmd_member)

    check = commands.add_parser("check", parents=[common], help="Verificaciones estructurales")
    checks = check.add_subparsers(dest="check", required=True)

    p = checks.add_parser("subadditivity", parents=[common])
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(handler=cmd_check_subadditivity)

    p = checks.add_parser("necessity", parents=[common])
    p.add_argument("ideal")
    p.set_defaults(handler=cmd_check_necessity)

    p = checks.add_parser("briancon-skoda", parents=[common])
    p.add_argument("--power", type=int, required=True)
    p.add_argument("ideal")
    p.set_defaults(handler=cmd_check_briancon_skoda)

    p = commands.add_parser("equiv", parents=[common], help="Equivalencia proyectiva")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(handler=cmd_equiv)

    return parser


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        settings = load_settings(
            threads=getattr(args, "threads", None),
            log_level=getattr(args, "log_level", None),
            output_format=getattr(args, "output_format", None),
        )
    except ValidationError as e:
        print(f"Configuración inválida: {e}", file=sys.stderr)
        return 2

    logging.basicConfig(
        level=settings.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logger.info(f"Comando {args.command} con {settings.threads} hilo(s)")

    out = Output(stdout, settings.output_format)
    try:
        return args.handler(args, settings, out)
    except (InputError, PreconditionError) as e:
        print(f"Error de entrada: {e}", file=sys.stderr)
        return 2
    except InternalInconsistencyError as e:
        logger.error(f"Inconsistencia interna: {e}")
        out.emit({"holds": False, "error": str(e), "details": e.details}, [f"FALLA: {e}"])
        return 1
    except MonomialEngineError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
