"""Text, JSON, and CSV codecs for instances, z vectors, and records.

Parsing is strict: every pair exactly once, colors declared before use,
rationals carried as p/q strings end to end.  Floats round-trip through
repr.  parse(emit(x)) == x is a tested identity for every codec here.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np

from .cluster_lp import FractionalClusterSolution
from .errors import StructuralError
from .model import MINUS, ChromaticInstance, iter_pairs, pair_count, pair_index
from .pipeline import ExperimentRecord

# ----------------------------------------------------------- instances


def emit_instance_text(inst: ChromaticInstance) -> str:
    lines = [f"n {inst.n}", "colors " + " ".join(inst.colors)]
    for u, v in iter_pairs(inst.n):
        lab = inst.label(u, v)
        if lab == MINUS:
            lines.append(f"{u} {v} -")
        else:
            lines.append(f"{u} {v} + {inst.colors[lab]}")
    return "\n".join(lines) + "\n"


def parse_instance_text(text: str) -> ChromaticInstance:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if len(rows) < 2 or rows[0][:1] != ["n"] or rows[1][:1] != ["colors"]:
        raise StructuralError("expected 'n <count>' then 'colors <names>'")
    try:
        n = int(rows[0][1])
    except (IndexError, ValueError):
        raise StructuralError("unreadable vertex count") from None
    colors = tuple(rows[1][1:])
    if n < 1 or not colors:
        raise StructuralError("need n >= 1 and at least one color")
    if len(set(colors)) != len(colors):
        raise StructuralError("duplicate color name")
    labels = np.full(pair_count(n), -2, dtype=np.int16)
    for row in rows[2:]:
        if len(row) not in (3, 4):
            raise StructuralError(f"malformed pair line: {' '.join(row)!r}")
        try:
            u, v = int(row[0]), int(row[1])
        except ValueError:
            raise StructuralError(f"unreadable endpoints in {' '.join(row)!r}") from None
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise StructuralError(f"endpoints ({u}, {v}) out of range")
        idx = pair_index(n, min(u, v), max(u, v))
        if labels[idx] != -2:
            raise StructuralError(f"pair ({u}, {v}) listed twice")
        if row[2] == "-" and len(row) == 3:
            labels[idx] = MINUS
        elif row[2] == "+" and len(row) == 4:
            if row[3] not in colors:
                raise StructuralError(f"undeclared color {row[3]!r}")
            labels[idx] = colors.index(row[3])
        else:
            raise StructuralError(f"malformed pair line: {' '.join(row)!r}")
    missing = [p for i, p in enumerate(iter_pairs(n)) if labels[i] == -2]
    if missing:
        raise StructuralError(f"missing pairs: {missing[:5]}")
    return ChromaticInstance(n=n, colors=colors, labels=labels)


def instance_to_json(inst: ChromaticInstance) -> dict[str, Any]:
    pairs: list[list[Any]] = []
    for u, v in iter_pairs(inst.n):
        lab = inst.label(u, v)
        pairs.append([u, v, "-"] if lab == MINUS else [u, v, "+", inst.colors[lab]])
    return {"n": inst.n, "colors": list(inst.colors), "pairs": pairs}


def instance_from_json(data: Mapping[str, Any]) -> ChromaticInstance:
    try:
        n = int(data["n"])
        colors = [str(c) for c in data["colors"]]
        rows = data["pairs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed instance object: {exc}") from None
    lines = [f"n {n}", "colors " + " ".join(colors)]
    for row in rows:
        lines.append(" ".join(str(item) for item in row))
    return parse_instance_text("\n".join(lines))


# ----------------------------------------------------------- z vectors


def solution_to_json(z: FractionalClusterSolution) -> dict[str, Any]:
    entries = [
        {
            "color": color,
            "subset": [v for v in range(z.n) if mask >> v & 1],
            "value": str(weight),
        }
        for (color, mask), weight in sorted(z.entries.items())
    ]
    return {"n": z.n, "n_colors": z.n_colors, "entries": entries}


def solution_from_json(data: Mapping[str, Any]) -> FractionalClusterSolution:
    try:
        n = int(data["n"])
        n_colors = int(data["n_colors"])
        entries = {}
        for item in data["entries"]:
            mask = 0
            for v in item["subset"]:
                bit = 1 << int(v)
                if mask & bit:
                    raise StructuralError("repeated vertex in subset")
                mask |= bit
            key = (int(item["color"]), mask)
            if key in entries:
                raise StructuralError(f"duplicate column {key}")
            entries[key] = Fraction(item["value"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed z object: {exc}") from None
    return FractionalClusterSolution(n=n, n_colors=n_colors, entries=entries)


# ------------------------------------------------------------- records

_RECORD_FIELDS = [
    "instance_id",
    "seed",
    "n",
    "n_colors",
    "opt_cost",
    "lp_value",
    "rounding_mean",
    "rounding_stderr",
    "rounding_trials",
    "pivot_cost",
    "singletons_cost",
    "precluster_nontrivial",
    "admissible_count",
    "bound_slacks",
    "wall_times",
    "skipped",
]

_INT_FIELDS = {
    "seed",
    "n",
    "n_colors",
    "opt_cost",
    "rounding_trials",
    "pivot_cost",
    "singletons_cost",
    "precluster_nontrivial",
    "admissible_count",
}
_FRACTION_FIELDS = {"lp_value", "rounding_mean"}
_FLOAT_FIELDS = {"rounding_stderr"}


def record_to_json(record: ExperimentRecord) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for name in _RECORD_FIELDS:
        value = getattr(record, name)
        if name in _FRACTION_FIELDS:
            out[name] = None if value is None else str(value)
        elif name == "bound_slacks":
            out[name] = None if value is None else [str(s) for s in value]
        elif name == "wall_times":
            out[name] = {k: float(v) for k, v in value.items()}
        elif name == "skipped":
            out[name] = list(value)
        else:
            out[name] = value
    return out


def record_from_json(data: Mapping[str, Any]) -> ExperimentRecord:
    kwargs: dict[str, Any] = {}
    try:
        for name in _RECORD_FIELDS:
            value = data[name]
            if name in _FRACTION_FIELDS:
                kwargs[name] = None if value is None else Fraction(value)
            elif name == "bound_slacks":
                kwargs[name] = None if value is None else tuple(Fraction(s) for s in value)
            elif name == "wall_times":
                kwargs[name] = {str(k): float(v) for k, v in value.items()}
            elif name == "skipped":
                kwargs[name] = tuple(str(s) for s in value)
            elif name in _INT_FIELDS:
                kwargs[name] = None if value is None else int(value)
            elif name in _FLOAT_FIELDS:
                kwargs[name] = None if value is None else float(value)
            else:
                kwargs[name] = value
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed record object: {exc}") from None
    return ExperimentRecord(**kwargs)


def _cell(record: ExperimentRecord, name: str) -> str:
    value = getattr(record, name)
    if value is None:
        return ""
    if name in _FRACTION_FIELDS:
        return str(value)
    if name == "bound_slacks":
        return ";".join(str(s) for s in value)
    if name == "wall_times":
        return ";".join(f"{k}:{v!r}" for k, v in sorted(value.items()))
    if name == "skipped":
        return ";".join(value)
    if name in _FLOAT_FIELDS:
        return repr(float(value))
    return str(value)


def _uncell(name: str, cell: str) -> Any:
    if name == "wall_times":
        out = {}
        for item in cell.split(";") if cell else []:
            key, _, val = item.partition(":")
            out[key] = float(val)
        return out
    if name == "skipped":
        return tuple(cell.split(";")) if cell else ()
    if name == "bound_slacks":
        # empty means the stage did not run; a run always has >= 1 precluster
        return tuple(Fraction(s) for s in cell.split(";")) if cell else None
    if cell == "":
        return None
    if name in _FRACTION_FIELDS:
        return Fraction(cell)
    if name in _FLOAT_FIELDS:
        return float(cell)
    if name in _INT_FIELDS:
        return int(cell)
    return cell


def records_to_csv(records: Sequence[ExperimentRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_RECORD_FIELDS)
    for record in records:
        writer.writerow([_cell(record, name) for name in _RECORD_FIELDS])
    return buf.getvalue()


def records_from_csv(text: str) -> list[ExperimentRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise StructuralError("empty record table") from None
    if header != _RECORD_FIELDS:
        raise StructuralError(f"unexpected header {header!r}")
    out = []
    for row in reader:
        if len(row) != len(_RECORD_FIELDS):
            raise StructuralError(f"row of width {len(row)}")
        out.append(
            ExperimentRecord(
                **{name: _uncell(name, cell) for name, cell in zip(_RECORD_FIELDS, row)}
            )
        )
    return out


def dumps_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
