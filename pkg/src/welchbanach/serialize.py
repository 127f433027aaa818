"""Canonical JSON and CSV forms for pairs, measures, reports and search results.

JSON output has sorted keys, floats printed with 17 significant digits and a
trailing newline, so loading and re-saving a canonical file reproduces it
byte for byte.  Complex scalars are ``[re, im]``; non-finite floats are the
strings ``"nan"``, ``"inf"`` and ``"-inf"``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .asf import DualPair, LpSpace
from .continuous import ContinuousASF, FiniteMeasure
from .errors import InvalidPair


def _float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x + 0.0, ".17g")  # folds -0.0 into 0.0, which JSON cannot keep apart


def dumps(obj: Any, indent: int = 0) -> str:
    """Canonical JSON text for nested dicts, lists and scalars."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {dumps(obj[k], indent + 1)}' for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if any(isinstance(v, dict) for v in obj):
            inner = [pad + "  " + dumps(v, indent + 1) for v in obj]
            return "[\n" + ",\n".join(inner) + "\n" + pad + "]"
        return "[" + ", ".join(dumps(v, indent) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps([obj.real, obj.imag], indent)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_text(obj: Any) -> str:
    return dumps(obj) + "\n"


def write_json(obj: Any, path) -> None:
    Path(path).write_text(dump_text(obj), encoding="utf-8")


def read_json(path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


# -- pairs ----------------------------------------------------------------------------


def _p_out(p: float):
    return "inf" if math.isinf(p) else p


def _p_in(p) -> float:
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity"):
            return math.inf
        raise InvalidPair(f"p must be a number or 'inf', got {p!r}")
    if isinstance(p, bool) or not isinstance(p, (int, float)):
        raise InvalidPair(f"p must be a number or 'inf', got {p!r}")
    return float(p)


def _rows_out(a: np.ndarray, complex_field: bool):
    if complex_field:
        return [[[float(z.real), float(z.imag)] for z in row] for row in a]
    return [[float(z.real) for z in row] for row in a]


def _scalar_in(s, complex_field: bool) -> complex:
    if isinstance(s, list):
        if len(s) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in s):
            raise InvalidPair(f"complex scalar must be [re, im], got {s!r}")
        return complex(s[0], s[1])
    if isinstance(s, bool) or not isinstance(s, (int, float)):
        raise InvalidPair(f"scalar must be a number or [re, im], got {s!r}")
    return complex(s)


def _rows_in(rows, complex_field: bool, what: str) -> np.ndarray:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InvalidPair(f"{what} must be a list of rows")
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise InvalidPair(f"{what} rows have different lengths")
    return np.array([[_scalar_in(s, complex_field) for s in r] for r in rows], dtype=complex)


def pair_to_dict(pair: DualPair) -> dict:
    cx = pair.space.is_complex
    return {
        "field": pair.space.field,
        "dim": pair.d,
        "p": _p_out(pair.space.p),
        "vectors": _rows_out(pair.vectors, cx),
        "functionals": _rows_out(pair.functionals, cx),
    }


def pair_from_dict(obj: dict) -> DualPair:
    if not isinstance(obj, dict):
        raise InvalidPair("pair JSON must be an object")
    missing = {"field", "dim", "p", "vectors", "functionals"} - set(obj)
    if missing:
        raise InvalidPair(f"pair JSON lacks {sorted(missing)}")
    dim = obj["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise InvalidPair(f"dim must be an integer, got {dim!r}")
    space = LpSpace(dim, _p_in(obj["p"]), obj["field"])
    cx = space.is_complex
    v = _rows_in(obj["vectors"], cx, "vectors")
    f = _rows_in(obj["functionals"], cx, "functionals")
    if len(v) != len(f):
        raise InvalidPair(f"{len(v)} vectors but {len(f)} functionals")
    return DualPair(space, v, f)


def load_pair(path) -> DualPair:
    return pair_from_dict(read_json(path))


def save_pair(pair: DualPair, path) -> None:
    write_json(pair_to_dict(pair), path)


# -- measures and continuous pairs -----------------------------------------------------


def measure_to_dict(mu: FiniteMeasure) -> dict:
    return {"atoms": list(mu.atoms), "weights": [float(w) for w in mu.weights]}


def measure_from_dict(obj: dict) -> FiniteMeasure:
    if not isinstance(obj, dict) or "weights" not in obj:
        raise InvalidPair("measure JSON needs a 'weights' list")
    w = obj["weights"]
    if not isinstance(w, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in w):
        raise InvalidPair("weights must be a list of numbers")
    atoms = obj.get("atoms", list(range(len(w))))
    return FiniteMeasure(tuple(_hashable(a) for a in atoms), np.array(w, dtype=float))


def _hashable(a):
    return tuple(_hashable(x) for x in a) if isinstance(a, list) else a


def casf_to_dict(casf: ContinuousASF) -> dict:
    return {"measure": measure_to_dict(casf.measure), "pair": pair_to_dict(casf.pair)}


def casf_from_dict(obj: dict) -> ContinuousASF:
    if not isinstance(obj, dict) or "pair" not in obj or "measure" not in obj:
        raise InvalidPair("continuous JSON needs 'measure' and 'pair'")
    return ContinuousASF(measure_from_dict(obj["measure"]), pair_from_dict(obj["pair"]))


def load_casf(path) -> ContinuousASF:
    return casf_from_dict(read_json(path))


def save_casf(casf: ContinuousASF, path) -> None:
    write_json(casf_to_dict(casf), path)


def search_result_to_dict(result) -> dict:
    out = pair_to_dict(result.pair)
    out["search"] = result.metadata()
    return out


# -- matrices and tables --------------------------------------------------------------


def complex_text(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def matrix_to_csv(a: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in np.atleast_2d(a):
        writer.writerow([complex_text(complex(z)) for z in row])
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    return np.array([[complex(s) for s in r] for r in rows], dtype=complex)


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "yes" if v else "no"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6g}"
    if isinstance(v, (complex, np.complexfloating)):
        z = complex(v)
        return f"{z.real:.6g}" if z.imag == 0 else f"{z.real:.6g}{z.imag:+.6g}j"
    return str(v)


def table(headers: list[str], rows: list[list]) -> str:
    """Plain aligned text table; floats rounded to 6 significant digits."""
    cells = [[_cell(v) for v in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in cells)
    return "\n".join(lines)
