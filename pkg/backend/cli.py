# backend/cli.py - Línea de comandos: build, barcode, distance, matrix, rank, equiv
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from colorama import Fore, Style, just_fix_windows_console

from comparison_service import ComparisonService, counts_line
from config import settings
from distance import export_matrix
from exceptions import InputError, ModelhomError
from model_io import dump_canonical, load_model, parse_declaration, parse_script, parse_universe, read_source

logger = logging.getLogger("modelhom.cli")


def _error(message: str) -> None:
    sys.stderr.write(f"{Fore.RED}error:{Style.RESET_ALL} {message}\n")


def _warning(message: str) -> None:
    sys.stderr.write(f"{Fore.YELLOW}aviso:{Style.RESET_ALL} {message}\n")


def _emit(text: str, output: Optional[str] = None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output:
        Path(output).write_bytes(text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def _load(path: str, auto_close: bool = False):
    parsed = load_model(path, auto_close)
    if parsed.auto_closed:
        _warning(f"{path}: la lista explícita se cerró por caras")
    return parsed


# --- Subcomandos ---

def cmd_build(service: ComparisonService, args) -> int:
    result = service.build(_load(args.model, args.auto_close))
    for violation in result["violations"]:
        _warning(violation)
    _emit(counts_line(result["counts"]))
    return 0 if result["valid"] else 1


def cmd_barcode(service: ComparisonService, args) -> int:
    result = service.barcode(_load(args.model), args.format, args.seed, args.max_dim)
    _emit(result["rendered"], args.output)
    return 0


def cmd_distance(service: ComparisonService, args) -> int:
    result = service.distance(_load(args.first), _load(args.second), args.mode, args.seed, args.max_dim)
    _emit(str(result["distance"]))
    return 0


def cmd_matrix(service: ComparisonService, args) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        raise InputError(f"No existe el directorio: {directory}")
    paths = sorted(directory.glob("*.json"))
    if not paths:
        raise InputError(f"No hay documentos de modelo en {directory}")
    models = [_load(str(path)) for path in paths]
    matrix = service.matrix(models, args.mode)
    _emit(export_matrix(matrix, args.out), args.output)
    return 0


def cmd_rank(service: ComparisonService, args) -> int:
    universe = parse_universe(read_source(args.universe), args.universe)
    if args.inverse:
        if len(args.simplex) != 1 or not args.simplex[0].isdigit():
            raise InputError("--inverse espera un único rango entero")
        _emit(json.dumps(service.unrank(int(args.simplex[0]), universe, args.max_dim), ensure_ascii=False))
    else:
        _emit(str(service.rank(args.simplex, universe, args.max_dim)))
    return 0


def cmd_equiv_verify(service: ComparisonService, args) -> int:
    script = parse_script(read_source(args.script), args.script)
    declaration = parse_declaration(read_source(args.decl), args.decl)
    result = service.verify(_load(args.first), _load(args.second), script, declaration, args.mode)
    lines = list(result["trace"])
    lines.append("accepted" if result["accepted"] else f"rejected: {result['reason']}")
    _emit("\n".join(lines))
    return 0 if result["accepted"] else 1


def cmd_equiv_search(service: ComparisonService, args) -> int:
    declaration = parse_declaration(read_source(args.decl), args.decl)
    result = service.search(_load(args.first), _load(args.second), declaration, args.max_ops, args.mode)
    if result["found"]:
        _emit(dump_canonical(result["script"]).decode("utf-8"), args.output)
    else:
        _emit(f"not found within {args.max_ops} operations")
    return 0


# --- Parser ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modelhom",
        description="Comparación de modelos como complejos simpliciales etiquetados",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="Valida un modelo e informa de los símplices por dimensión")
    p.add_argument("model")
    p.add_argument("--auto-close", action="store_true", help="Cierra por caras las listas explícitas")
    p.set_defaults(handler=cmd_build)

    p = sub.add_parser("barcode", help="Código de barras de persistencia")
    p.add_argument("model")
    p.add_argument("--format", choices=["json", "svg", "text"], default="json")
    p.add_argument("--seed", type=int, default=None, help="Filtración plana pseudoaleatoria")
    p.add_argument("--max-dim", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_barcode)

    p = sub.add_parser("distance", help="Distancia entre dos modelos")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--mode", choices=["simplicial", "persistence"], default="simplicial")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-dim", type=int, default=None)
    p.set_defaults(handler=cmd_distance)

    p = sub.add_parser("matrix", help="Matriz de distancias de un directorio de modelos")
    p.add_argument("directory")
    p.add_argument("--mode", choices=["simplicial", "persistence"], default="simplicial")
    p.add_argument("--out", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_matrix)

    p = sub.add_parser("rank", help="Rango shortlex de un símplice en R^(m)")
    p.add_argument("simplex", nargs="+", help="Etiquetas del símplice (o un rango con --inverse)")
    p.add_argument("--universe", required=True)
    p.add_argument("--max-dim", type=int, required=True)
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(handler=cmd_rank)

    equiv = sub.add_parser("equiv", help="Equivalencia de modelos").add_subparsers(
        dest="equiv_command", required=True
    )
    p = equiv.add_parser("verify", help="Verifica un guion de operaciones")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("script")
    p.add_argument("--decl", required=True)
    p.add_argument("--mode", choices=["strict", "quotient"], default="strict")
    p.set_defaults(handler=cmd_equiv_verify)

    p = equiv.add_parser("search", help="Busca un guion acotado")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--decl", required=True)
    p.add_argument("--max-ops", type=int, default=4)
    p.add_argument("--mode", choices=["strict", "quotient"], default="strict")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_equiv_search)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    just_fix_windows_console()
    logging.basicConfig(level=settings.MODELHOM_LOG_LEVEL, format=settings.LOG_FORMAT)
    args = build_parser().parse_args(argv)
    logger.debug(f"Subcomando: {args.command}")
    try:
        return args.handler(ComparisonService(), args)
    except ModelhomError as e:
        _error(str(e))
        return e.exit_code
    except OSError as e:
        _error(str(e))
        return 2


if __name__ == "__main__":
    sys.exit(main())
