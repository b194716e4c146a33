"""Line-oriented model files.

Example::

    # comments start with '#'
    [metadata]
    name = "paper-n1"
    flavor = "local"            # rigid | local

    [variables]
    names = "z"
    base_point = "1"

    [local]                     # section name repeats the flavor
    fields = "X0", "X1"
    prepotential = "-i*X0*X1"
    coords = "1", "z"
    # alternatively a section, optionally with a symplectic form:
    # section = "1", "i", "-i*z", "z"
    # omega = "0 0 1 0; 0 0 0 1; -1 0 0 0; 0 -1 0 0"

    [scan]
    box = "0.1:3, -2:2"         # one "re_lo:re_hi, im_lo:im_hi" per coordinate

Every value is a comma-separated list of double-quoted strings; expressions
use the :mod:`specialkahler.holo` grammar.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ExprSyntaxError, ModelFileError
from .holo import parse_expr
from .symplectic import SymplecticFrame

__all__ = ["ModelDescription", "parse_model_text", "load_model", "parse_complex", "parse_box"]

_SECTIONS = {
    "metadata": {"name", "flavor", "provenance", "description"},
    "variables": {"names", "base_point"},
    "rigid": {"fields", "prepotential", "coords", "section", "omega"},
    "local": {"fields", "prepotential", "coords", "section", "omega"},
    "scan": {"box"},
}
_QUOTED = re.compile(r'\s*"((?:[^"\\]|\\.)*)"\s*(,|$)')


def parse_complex(text: str) -> complex:
    """Complex literal in expression syntax, e.g. ``2+i`` or ``-0.5i``."""
    return complex(parse_expr(text, ())(()))


def parse_box(text: str):
    """``"re_lo:re_hi, im_lo:im_hi"`` -> (re_lo, re_hi, im_lo, im_hi)."""
    try:
        re_part, im_part = text.split(",")
        lo, hi = (float(x) for x in re_part.split(":"))
        ilo, ihi = (float(x) for x in im_part.split(":"))
    except ValueError:
        raise ValueError(f"box must look like 're_lo:re_hi, im_lo:im_hi', got {text!r}") from None
    if not (lo <= hi and ilo <= ihi) or (lo == hi and ilo == ihi):
        raise ValueError(f"empty box {text!r}")
    return lo, hi, ilo, ihi


def _fmt_num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def _fmt_complex(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return _fmt_num(c.real)
    im = "i" if abs(c.imag) == 1 else f"{_fmt_num(abs(c.imag))}i"
    if c.real == 0:
        return im if c.imag > 0 else "-" + im
    return f"{_fmt_num(c.real)}{'+' if c.imag > 0 else '-'}{im}"


@dataclass(frozen=True, eq=False)
class ModelDescription:
    """Parsed model file; ``build()`` returns the corresponding model object."""

    name: str
    flavor: str
    variables: tuple
    base_point: tuple = None
    fields: tuple = None
    prepotential: str = None
    coords: tuple = None
    section: tuple = None
    omega: np.ndarray = None
    boxes: tuple = ()
    provenance: str = ""
    description: str = ""
    lines: dict = field(default_factory=dict, repr=False)

    @property
    def kind(self) -> str:
        return "prepotential" if self.prepotential is not None else "section"

    @property
    def n(self) -> int:
        return len(self.variables)

    def _err(self, message, key):
        return ModelFileError(message, self.lines.get(key))

    def frame(self):
        if self.omega is None:
            return None
        return SymplecticFrame(self.omega)

    def build(self):
        """RigidPrepotentialModel, RigidSectionModel, LocalPrepotentialModel or LocalSectionModel."""
        from .local import LocalPrepotentialModel, LocalSectionModel
        from .rigid import RigidPrepotentialModel, RigidSectionModel
        try:
            if self.kind == "prepotential":
                cls = LocalPrepotentialModel if self.flavor == "local" else RigidPrepotentialModel
                return cls.from_strings(self.prepotential, self.fields, self.coords, self.variables,
                                        base_point=self.base_point, name=self.name)
            cls = LocalSectionModel if self.flavor == "local" else RigidSectionModel
            return cls.from_strings(self.section, self.variables, frame=self.frame(),
                                    base_point=self.base_point, name=self.name)
        except ExprSyntaxError as err:
            key = "prepotential" if self.kind == "prepotential" else "section"
            raise self._err(str(err), key) from err

    def build_section(self):
        """The symplectic section, built from the prepotential if necessary."""
        from .local import build_section
        from .rigid import rigid_section
        model = self.build()
        if self.kind == "section":
            return model
        return build_section(model) if self.flavor == "local" else rigid_section(model)

    def to_text(self) -> str:
        def q(values):
            return ", ".join(f'"{v}"' for v in values)

        out = ["[metadata]", f"name = {q([self.name])}", f"flavor = {q([self.flavor])}"]
        if self.description:
            out.append(f"description = {q([self.description])}")
        if self.provenance:
            out.append(f"provenance = {q([self.provenance])}")
        out += ["", "[variables]", f"names = {q(self.variables)}"]
        if self.base_point is not None:
            out.append(f"base_point = {q(_fmt_complex(c) for c in self.base_point)}")
        out += ["", f"[{self.flavor}]"]
        if self.kind == "prepotential":
            out += [f"fields = {q(self.fields)}", f"prepotential = {q([self.prepotential])}",
                    f"coords = {q(self.coords)}"]
        else:
            out.append(f"section = {q(self.section)}")
        if self.omega is not None:
            rows = "; ".join(" ".join(_fmt_num(x) for x in row) for row in np.asarray(self.omega))
            out.append(f"omega = {q([rows])}")
        if self.boxes:
            boxes = [f"{_fmt_num(a)}:{_fmt_num(b)}, {_fmt_num(c)}:{_fmt_num(d)}" for a, b, c, d in self.boxes]
            out += ["", "[scan]", f"box = {q(boxes)}"]
        return "\n".join(out) + "\n"

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def _split_values(raw, lineno):
    values = []
    pos = 0
    while pos < len(raw):
        m = _QUOTED.match(raw, pos)
        if not m:
            raise ModelFileError(f"expected a double-quoted value near {raw[pos:].strip()!r}", lineno)
        values.append(m.group(1).replace('\\"', '"'))
        pos = m.end()
        if m.group(2) == "" and raw[pos:].strip():
            raise ModelFileError(f"trailing text {raw[pos:].strip()!r}", lineno)
    if not values:
        raise ModelFileError("empty value", lineno)
    return values


def _strip_comment(line):
    inside = False
    for k, ch in enumerate(line):
        if ch == '"':
            inside = not inside
        elif ch == "#" and not inside:
            return line[:k]
    return line


def parse_model_text(text: str) -> ModelDescription:
    """Parse model-file text; errors carry 1-based line numbers."""
    data = {}
    lines = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = re.fullmatch(r"\[\s*([A-Za-z_]+)\s*\]", line)
        if m:
            section = m.group(1)
            if section not in _SECTIONS:
                raise ModelFileError(f"unknown section [{section}]", lineno)
            if section in data:
                raise ModelFileError(f"duplicate section [{section}]", lineno)
            data[section] = {}
            lines[section] = lineno
            continue
        if "=" not in line:
            raise ModelFileError(f"expected 'key = value', got {line!r}", lineno)
        if section is None:
            raise ModelFileError("key outside of any section", lineno)
        key, raw_value = (s.strip() for s in line.split("=", 1))
        if key not in _SECTIONS[section]:
            raise ModelFileError(f"unknown key {key!r} in [{section}]", lineno)
        if key in data[section]:
            raise ModelFileError(f"duplicate key {key!r}", lineno)
        data[section][key] = _split_values(raw_value, lineno)
        lines[key] = lineno
    return _assemble(data, lines)


def _one(values, key, lines):
    if len(values) != 1:
        raise ModelFileError(f"{key} takes a single value", lines.get(key))
    return values[0]


def _assemble(data, lines):
    meta = data.get("metadata")
    if meta is None or "name" not in meta or "flavor" not in meta:
        raise ModelFileError("[metadata] with name and flavor is required", lines.get("metadata"))
    flavor = _one(meta["flavor"], "flavor", lines)
    if flavor not in ("rigid", "local"):
        raise ModelFileError(f"flavor must be 'rigid' or 'local', got {flavor!r}", lines.get("flavor"))
    body = data.get(flavor)
    other = "local" if flavor == "rigid" else "rigid"
    if other in data:
        raise ModelFileError(f"[{other}] section in a {flavor} model", lines.get(other))
    if body is None:
        raise ModelFileError(f"missing [{flavor}] section")
    var = data.get("variables")
    if var is None or "names" not in var:
        raise ModelFileError("[variables] with names is required", lines.get("variables"))
    names = tuple(var["names"])
    base_point = None
    if "base_point" in var:
        try:
            base_point = tuple(parse_complex(s) for s in var["base_point"])
        except (ExprSyntaxError, ZeroDivisionError) as err:
            raise ModelFileError(f"bad base point: {err}", lines.get("base_point")) from None
        if len(base_point) != len(names):
            raise ModelFileError("base_point needs one value per variable", lines.get("base_point"))
    has_f = "prepotential" in body
    has_s = "section" in body
    if has_f == has_s:
        raise ModelFileError(f"[{flavor}] needs exactly one of prepotential or section", lines.get(flavor))
    kw = {}
    if has_f:
        for key in ("fields", "coords"):
            if key not in body:
                raise ModelFileError(f"prepotential models need {key}", lines.get(flavor))
        kw.update(fields=tuple(body["fields"]), prepotential=_one(body["prepotential"], "prepotential", lines),
                  coords=tuple(body["coords"]))
        if "omega" in body:
            raise ModelFileError("prepotential models use the canonical form; omega not allowed",
                                 lines.get("omega"))
    else:
        kw["section"] = tuple(body["section"])
    if "omega" in body:
        try:
            rows = _one(body["omega"], "omega", lines).split(";")
            omega = np.array([[float(x) for x in r.split()] for r in rows])
            SymplecticFrame(omega)
        except Exception as err:
            raise ModelFileError(f"bad omega: {err}", lines.get("omega")) from None
        kw["omega"] = omega
    boxes = ()
    if "scan" in data and "box" in data["scan"]:
        try:
            boxes = tuple(parse_box(b) for b in data["scan"]["box"])
        except ValueError as err:
            raise ModelFileError(str(err), lines.get("box")) from None
        if len(boxes) not in (1, len(names)):
            raise ModelFileError("give one box per coordinate (or one for all)", lines.get("box"))
    desc = ModelDescription(
        name=_one(meta["name"], "name", lines), flavor=flavor, variables=names, base_point=base_point,
        boxes=boxes, provenance=_one(meta.get("provenance", [""]), "provenance", lines),
        description=_one(meta.get("description", [""]), "description", lines), lines=lines, **kw)
    # surface expression errors with line numbers now rather than at first use
    try:
        if has_f:
            parse_expr(desc.prepotential, desc.fields)
            for c in desc.coords:
                parse_expr(c, names)
        else:
            for c in desc.section:
                parse_expr(c, names)
    except ExprSyntaxError as err:
        raise ModelFileError(str(err), lines.get("prepotential" if has_f else "section")) from None
    except ValueError as err:
        raise ModelFileError(str(err), lines.get("fields" if has_f else "names")) from None
    return desc


def load_model(path) -> ModelDescription:
    with open(path, encoding="utf-8") as fh:
        return parse_model_text(fh.read())
