# backend/barcodes.py - Exportación y lectura de códigos de barras de persistencia
import io
import json
from typing import Any, Dict, List, Optional, Tuple

import matplotlib
from matplotlib.figure import Figure

from exceptions import InputError, ParseError
from model_io import dump_canonical
from persistence import PersistenceDiagram, PersistenceInterval

FORMATS = ("json", "svg", "text")

SVG_WIDTH = 800
ROW_HEIGHT = 20
DPI = 100
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ordered_intervals(diagram: PersistenceDiagram) -> List[PersistenceInterval]:
    return sorted(diagram.intervals, key=lambda i: (i.dim, i.birth))


def barcode_document(diagram: PersistenceDiagram) -> Dict[str, Any]:
    intervals: Dict[str, list] = {"H0": []}
    for interval in _ordered_intervals(diagram):
        intervals.setdefault(f"H{interval.dim}", []).append([interval.birth, interval.death])
    return {
        "intervals": intervals,
        "model": diagram.model,
        "universe_hash": diagram.universe_hash,
    }


def to_json(diagram: PersistenceDiagram) -> str:
    return dump_canonical(barcode_document(diagram)).decode("utf-8")


def to_text(diagram: PersistenceDiagram) -> str:
    lines = []
    for interval in _ordered_intervals(diagram):
        death = "inf" if interval.death is None else str(interval.death)
        lines.append(f"H{interval.dim} [{interval.birth}, {death})")
    return "".join(line + "\n" for line in lines)


def to_svg(diagram: PersistenceDiagram) -> str:
    """
    Una barra horizontal por intervalo, agrupada y coloreada por dimensión. Cada
    grupo lleva el id `Hk`; las muertes infinitas terminan en una flecha con id
    `Hk-inf-<fila>`. La figura mide SVG_WIDTH x ROW_HEIGHT·n píxeles.
    """
    intervals = _ordered_intervals(diagram)
    rows = max(len(intervals), 1)
    endpoints = [i.birth for i in intervals] + [i.death for i in intervals if i.is_finite]
    right = max(endpoints, default=1) + 1

    fig = Figure(figsize=(SVG_WIDTH / DPI, ROW_HEIGHT * rows / DPI), dpi=DPI)
    ax = fig.add_axes((0.02, 0.0, 0.96, 1.0))
    ax.set_axis_off()
    ax.set_xlim(0.5, right + 0.5)
    ax.set_ylim(0.5, rows + 0.5)

    by_dim: Dict[int, List[Tuple[int, PersistenceInterval]]] = {}
    for row, interval in enumerate(intervals):
        by_dim.setdefault(interval.dim, []).append((row, interval))

    for dim, members in by_dim.items():
        color = COLORS[dim % len(COLORS)]
        ys = [rows - row for row, _ in members]
        starts = [interval.birth for _, interval in members]
        ends = [interval.death if interval.is_finite else right for _, interval in members]
        ax.hlines(ys, starts, ends, colors=color, linewidth=2, gid=f"H{dim}")
        for row, interval in members:
            if not interval.is_finite:
                ax.plot([right], [rows - row], marker=">", markersize=6, color=color, gid=f"H{dim}-inf-{row}")

    buffer = io.StringIO()
    # Salida byte-determinista: sin fecha y con identificadores internos estables
    with matplotlib.rc_context({"svg.hashsalt": "modelhom", "svg.fonttype": "none"}):
        fig.savefig(buffer, format="svg", metadata={"Date": None, "Title": diagram.model or "barcode"})
    return buffer.getvalue()


def export_barcode(diagram: PersistenceDiagram, fmt: str) -> str:
    if fmt == "json":
        return to_json(diagram)
    if fmt == "svg":
        return to_svg(diagram)
    if fmt == "text":
        return to_text(diagram)
    raise InputError(f"Formato de código de barras desconocido: {fmt!r} (use {', '.join(FORMATS)})")


def parse_barcode(data: str, fingerprint: Optional[str] = None) -> PersistenceDiagram:
    """Inverso de to_json. El documento no guarda la filtración: se puede indicar con `fingerprint`."""
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as e:
        raise ParseError(f"JSON inválido: {e.msg}", f"<barcode>:{e.lineno}:{e.colno}") from None
    if not isinstance(raw, dict) or set(raw) != {"intervals", "model", "universe_hash"}:
        raise ParseError("se esperaban las claves intervals, model y universe_hash", "<barcode>")

    intervals = []
    for key, rows in raw["intervals"].items():
        if not key.startswith("H") or not key[1:].isdigit():
            raise ParseError(f"dimensión inválida {key!r}", "<barcode>:intervals")
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != 2:
                raise ParseError("cada intervalo es [birth, death|null]", f"<barcode>:intervals.{key}.{i}")
            try:
                intervals.append(PersistenceInterval(int(key[1:]), row[0], row[1]))
            except (TypeError, ValueError) as e:
                raise ParseError(str(e), f"<barcode>:intervals.{key}.{i}") from None

    finite = sum(1 for i in intervals if i.is_finite)
    return PersistenceDiagram(
        tuple(intervals),
        2 * finite + (len(intervals) - finite),
        fingerprint,
        raw["universe_hash"],
        raw["model"],
    )
