"""Canonical JSON emission.

Reports and weight files must be byte-identical across runs, so we emit JSON
ourselves instead of relying on ``json.dumps`` float formatting: reals are
written with 17 significant digits (lossless for IEEE-754 doubles), keys are
either kept in insertion order or sorted, and there is no trailing
whitespace.  ``json.loads`` reads the output back unchanged.
"""

import json
import math
import os
import tempfile


def format_real(value: float) -> str:
    """Render a finite float with 17 significant digits (round-trip exact)."""
    if math.isnan(value) or math.isinf(value):
        raise ValueError("non-finite real cannot be serialized")
    return format(float(value), ".17g")


def dumps_canonical(obj, sort_keys: bool = True) -> str:
    """Serialize ``obj`` to canonical JSON text (no trailing newline)."""
    out: list[str] = []
    _emit(obj, out, sort_keys)
    return "".join(out)


def _emit(obj, out: list, sort_keys: bool) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_real(obj))
    elif isinstance(obj, dict):
        keys = sorted(obj) if sort_keys else list(obj)
        out.append("{")
        for i, key in enumerate(keys):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            if i:
                out.append(",")
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(":")
            _emit(obj[key], out, sort_keys)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _emit(item, out, sort_keys)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} to canonical JSON")


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file + rename (never partial)."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
