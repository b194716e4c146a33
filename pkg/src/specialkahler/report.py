"""Deterministic reports: a human-readable table and a structured JSON block."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Report", "format_complex", "to_plain", "measured"]


def format_complex(c) -> str:
    """``a+bi`` with 17 significant digits in both parts."""
    c = complex(c)
    c = complex(c.real + 0.0, c.imag + 0.0)  # folds negative zeros so reports never show "-0"
    return f"{c.real:.17g}{c.imag:+.17g}i"


def to_plain(obj):
    """Convert numpy data and complex numbers into JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if np.isfinite(x) else str(x)
    if isinstance(obj, (complex, np.complexfloating)):
        return format_complex(obj)
    return obj


def measured(value, tol, what="") -> dict:
    """A numeric result bundled with the tolerance that certifies it."""
    out = {"value": value, "tol": tol}
    if what:
        out["certifies"] = what
    return out


def _short(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (complex, np.complexfloating)):
        c = complex(x)
        if c.imag == 0:
            return f"{c.real:.10g}"
        return f"{c.real:.10g}{c.imag:+.10g}i"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.10g}"
    return str(x)


def _table_lines(key, value, indent):
    pad = " " * indent
    if isinstance(value, dict) and set(value) >= {"value", "tol"}:
        extra = f"  (tol {value['tol']:.1e}" + (f", {value['certifies']})" if "certifies" in value else ")")
        inner = _table_lines(key, value["value"], indent)
        inner[0] += extra
        return inner
    if isinstance(value, dict):
        out = [f"{pad}{key}:"]
        for k, v in value.items():
            out += _table_lines(k, v, indent + 2)
        return out
    arr = np.asarray(value) if isinstance(value, (list, tuple, np.ndarray)) else None
    if arr is not None and arr.ndim == 2 and arr.dtype != object:
        out = [f"{pad}{key}:"]
        for row in arr:
            out.append(pad + "  [" + ", ".join(_short(x) for x in row) + "]")
        return out
    if arr is not None and arr.dtype != object:
        return [f"{pad}{key}: [" + ", ".join(_short(x) for x in arr.ravel()) + "]"]
    if isinstance(value, (list, tuple)):
        out = [f"{pad}{key}:"]
        for k, v in enumerate(value):
            out += _table_lines(f"- {k}", v, indent + 2)
        return out
    return [f"{pad}{key}: {_short(value)}"]


@dataclass
class Report:
    """Result of one command.

    ``results`` holds one dictionary per evaluated point (or per check);
    ``summary`` holds aggregate values.  Numeric entries that certify a
    property are wrapped by :func:`measured` so they carry their tolerance.
    """

    command: str
    model: str = ""
    digest: str = ""
    tolerances: dict = field(default_factory=dict)
    results: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return to_plain({
            "command": self.command, "model": self.model, "model_digest": self.digest,
            "tolerances": self.tolerances, "results": self.results, "summary": self.summary,
            "notes": self.notes,
        })

    def to_structured(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=False) + "\n"

    def to_table(self) -> str:
        lines = [f"command: {self.command}"]
        if self.model:
            lines.append(f"model: {self.model} (digest {self.digest})")
        if self.tolerances:
            lines.append("tolerances: " + ", ".join(f"{k}={v:.1e}" for k, v in self.tolerances.items()))
        for k, res in enumerate(self.results):
            lines.append("")
            lines += _table_lines(f"[{k}]", res, 0)
        if self.summary:
            lines.append("")
            lines += _table_lines("summary", self.summary, 0)
        if self.notes:
            lines.append("")
            lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"

    def render(self, fmt: str = "table") -> str:
        if fmt == "table":
            return self.to_table()
        if fmt == "structured":
            return self.to_structured()
        raise ValueError(f"format must be 'table' or 'structured', got {fmt!r}")
