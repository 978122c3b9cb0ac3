"""Byte-deterministic report rendering (JSON and fixed-width text)."""

from __future__ import annotations

import json
import math

FLOAT_FORMAT = "%.17g"


def _float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == 0.0:
        x = 0.0  # drop the sign of negative zero
    text = FLOAT_FORMAT % x
    if not any(c in text for c in ".eE"):
        text += ".0"
    return text


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(obj[k], indent, level + 1)}" for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return _encode(obj.item(), indent, level)
    if hasattr(obj, "tolist"):
        return _encode(obj.tolist(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(report: dict) -> str:
    """Sorted keys, floats at 17 significant digits, trailing newline."""
    return _encode(report, 2, 0) + "\n"


def _cell(value) -> str:
    if isinstance(value, float):
        return _float(value).strip('"')
    if isinstance(value, list):
        nums = [v for v in value if isinstance(v, (int, float)) and not isinstance(v, bool)]
        if nums and len(nums) == len(value):
            return f"[{len(value)} values, max {_float(float(max(nums, key=abs)))}]"
        return f"[{len(value)} items]"
    if isinstance(value, dict):
        return f"{{{len(value)} fields}}"
    return str(value)


def render_text(report: dict) -> str:
    lines = [
        f"scenario      {report['scenario']}",
        f"tool version  {report['tool_version']}",
    ]
    for key in sorted(report["conventions"]):
        lines.append(f"convention    {key:<10} {report['conventions'][key]}")
    sampling = report["sampling"]
    lines.append(
        f"points        {len(sampling['points'])} admissible, {len(sampling['rejected'])} rejected "
        f"({sampling['strategy']}, seed {sampling['seed']})"
    )
    lines.append("")
    for check in report["checks"]:
        lines.append(f"[{check['id']}]")
        rows = [
            ("verdict", check["verdict"]),
            ("points", check["points_evaluated"]),
            ("max_residual", check["max_residual"]),
            ("tolerance", check["tolerance"]),
        ]
        rows += [(f"payload.{k}", check["payload"][k]) for k in sorted(check["payload"])]
        for err in check["errors"]:
            rows.append((f"error@{err['point']}", err["error"]))
        width = max(len(name) for name, _ in rows)
        lines.extend(f"  {name:<{width}}  {_cell(value)}" for name, value in rows)
        lines.append("")
    lines.append(f"overall       {report['overall']}")
    return "\n".join(lines) + "\n"
