"""Report trees and their text and JSON renderings."""
from __future__ import annotations

import json
from fractions import Fraction

from ..polyalg import MultiPoly
from .modelfile import SCHEMA_VERSION


def scalar(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def plain(x):
    """Convert engine values into JSON-ready data; rationals become ``"n/d"``."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return scalar(x)
    if isinstance(x, MultiPoly):
        return x.format()
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def make_report(command: str, result: dict, timing=None) -> dict:
    tree = {"schema_version": SCHEMA_VERSION, "command": command, "result": plain(result)}
    if timing is not None:
        tree["timing"] = timing
    return tree


def emit_report(tree: dict, fmt: str = "text") -> str:
    if fmt == "tree":
        return json.dumps(tree, indent=2, ensure_ascii=False) + "\n"
    lines = [f"{tree['command']}"]
    _render(tree["result"], lines, 1)
    if "timing" in tree:
        lines.append(f"  timing: {tree['timing']}")
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[" + ", ".join(_cell(x) for x in v) + "]"
    if v is None:
        return "-"
    return _short(str(v))


def _short(s: str) -> str:
    # "3/1" reads better as "3" in tables
    return s[:-2] if s.endswith("/1") and s[:-2].lstrip("-").isdigit() else s


def _is_table(v) -> bool:
    return (isinstance(v, list) and v and all(isinstance(r, dict) for r in v)
            and all(list(r) == list(v[0]) for r in v)
            and all(not isinstance(x, dict) for r in v for x in r.values()))


def _table(rows, lines, pad):
    keys = list(rows[0])
    cells = [[_cell(r[k]) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines.append(pad + "  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip())
    for c in cells:
        lines.append(pad + "  ".join(x.rjust(w) if x.lstrip("-").replace("/", "").isdigit() else x.ljust(w)
                                     for x, w in zip(c, widths)).rstrip())


def _render(value, lines, depth):
    pad = "  " * depth
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, dict):
                lines.append(f"{pad}{k}:")
                _render(v, lines, depth + 1)
            elif _is_table(v):
                lines.append(f"{pad}{k}:")
                _table(v, lines, pad + "  ")
            elif isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
                lines.append(f"{pad}{k}:")
                for x in v:
                    if isinstance(x, dict):
                        lines.append(f"{pad}  -")
                        _render(x, lines, depth + 2)
                    else:
                        lines.append(f"{pad}  {_cell(x)}")
            else:
                lines.append(f"{pad}{k}: {_cell(v)}")
    else:
        lines.append(pad + _cell(value))
