"""Deterministic text output: JSON with 17-significant-digit floats and
locale-free CSV, so golden files are byte-stable across runs."""

from __future__ import annotations

import math
from typing import Any, Iterable, Sequence

__all__ = ["format_float", "stable_json", "csv_lines"]


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    return format(float(x), ".17g")


def _encode(obj: Any, parts: list[str], indent: int, level: int) -> None:
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        parts.append(format_float(obj))
    elif isinstance(obj, str):
        import json

        parts.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            parts.append("{}")
            return
        parts.append("{\n")
        for k, (key, value) in enumerate(obj.items()):
            import json

            parts.append(pad_in + json.dumps(str(key)) + ": ")
            _encode(value, parts, indent, level + 1)
            parts.append(",\n" if k < len(obj) - 1 else "\n")
        parts.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            parts.append("[]")
            return
        parts.append("[\n")
        for k, value in enumerate(seq):
            parts.append(pad_in)
            _encode(value, parts, indent, level + 1)
            parts.append(",\n" if k < len(seq) - 1 else "\n")
        parts.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def stable_json(obj: Any, indent: int = 2) -> str:
    """Render JSON deterministically, floats at 17 significant digits."""
    parts: list[str] = []
    _encode(obj, parts, indent, 0)
    return "".join(parts) + "\n"


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def csv_lines(
    header: Sequence[str], rows: Iterable[Sequence[Any]], comments: Sequence[str] = ()
) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"
