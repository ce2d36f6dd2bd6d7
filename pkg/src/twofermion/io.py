"""Deterministic JSON/CSV serialization and run manifests."""
from __future__ import annotations

import datetime as _dt
import enum
import json
import math
import os
from numbers import Integral, Real

from . import __version__

JSON_DIGITS = 17
CSV_DIGITS = 12


def fmt_float(x: float, digits: int) -> str:
    x = float(x) + 0.0  # fold -0.0
    return format(x, f".{digits}g")


def _emit(obj, indent, level, out):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, Integral):
        out.append(str(int(obj)))
    elif isinstance(obj, Real):
        x = float(obj)
        out.append(fmt_float(x, JSON_DIGITS) if math.isfinite(x) else "null")
    elif isinstance(obj, enum.Enum):
        _emit(obj.value, indent, level, out)
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(pad + json.dumps(str(k), ensure_ascii=False) + ": ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    elif hasattr(obj, "to_dict"):
        _emit(obj.to_dict(), indent, level, out)
    elif hasattr(obj, "tolist"):
        _emit(obj.tolist(), indent, level, out)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits; NaN/inf become null."""
    out: list = []
    _emit(obj, indent, 0, out)
    return "".join(out) + "\n"


def timestamp() -> str:
    """UTC time, pinned by ``SOURCE_DATE_EPOCH`` when set (reproducible output)."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        t = _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc)
    else:
        t = _dt.datetime.now(tz=_dt.timezone.utc).replace(microsecond=0)
    return t.isoformat().replace("+00:00", "Z")


def manifest(command: str, cfg, variants, inputs: dict) -> dict:
    return {
        "command": command,
        "config": cfg.to_dict(),
        "variants": [getattr(v, "value", v) for v in variants],
        "version": __version__,
        "timestamp": timestamp(),
        "inputs": inputs,
    }


def document(man: dict, results) -> str:
    return dumps({"manifest": man, "results": results})


SCAN_HEADER = "beta,E1,E2,E3,real_count,variant"


def scan_csv(table) -> str:
    lines = [SCAN_HEADER]
    for pt in table.points:
        roots = [fmt_float(r, CSV_DIGITS) for r in pt.roots] + [""] * (3 - len(pt.roots))
        lines.append(",".join([fmt_float(pt.beta, CSV_DIGITS), *roots, str(pt.real_count),
                               table.variant.value]))
    return "\n".join(lines) + "\n"
