"""Holomorphic rational expressions: parsing, printing, differentiation, evaluation.

Expressions are immutable trees built from complex constants, variables,
n-ary sums and products, quotients, integer powers and negation.  All
construction goes through the smart constructors ``add``, ``mul``, ``div``,
``power`` and ``neg``, which fold constants and drop zeros and ones but
never reorder or reassociate non-constant operands.  Printing then
reparsing reproduces the same tree, so evaluation is bitwise stable.

Grammar of the text form::

    expr     ::= term (("+" | "-") term)*
    term     ::= unary (("*" | "/") unary)*
    unary    ::= ("+" | "-") unary | power
    power    ::= atom (("^" | "**") exponent)?
    exponent ::= ["+" | "-"] INT | "(" ["+" | "-"] INT ")"
    atom     ::= NUMBER ["i"] | "i" | NAME | "(" expr ")"

``i`` is the imaginary unit and may not be used as a variable name.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .errors import ExprSyntaxError, SingularPointError, UnknownVariableError

__all__ = [
    "HoloExpr", "parse_expr", "eval_expr", "diff_expr", "substitute",
    "constant", "variable", "compile_exprs",
]


# ---------------------------------------------------------------------------
# nodes

class Node:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Const(Node):
    value: complex


@dataclass(frozen=True, slots=True)
class Var(Node):
    index: int


@dataclass(frozen=True, slots=True)
class Add(Node):
    args: tuple


@dataclass(frozen=True, slots=True)
class Mul(Node):
    args: tuple


@dataclass(frozen=True, slots=True)
class Div(Node):
    num: Node
    den: Node


@dataclass(frozen=True, slots=True)
class Pow(Node):
    base: Node
    exp: int


@dataclass(frozen=True, slots=True)
class Neg(Node):
    arg: Node


ZERO = Const(0j)
ONE = Const(1 + 0j)


def _const(c) -> Const:
    return Const(complex(c))


def _is_const(node, value=None):
    return isinstance(node, Const) and (value is None or node.value == value)


def add(*args: Node) -> Node:
    terms = []
    c = None
    for a in args:
        parts = a.args if isinstance(a, Add) else (a,)
        for p in parts:
            if isinstance(p, Const):
                c = p.value if c is None else c + p.value
            else:
                terms.append(p)
    if c is not None and c != 0:
        terms.append(Const(c))
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Add(tuple(terms))


def neg(a: Node) -> Node:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    if isinstance(a, Mul) and isinstance(a.args[0], Const):
        return mul(Const(-a.args[0].value), *a.args[1:])
    return Neg(a)


def mul(*args: Node) -> Node:
    factors = []
    c = None
    sign = False
    for a in args:
        parts = a.args if isinstance(a, Mul) else (a,)
        for p in parts:
            if isinstance(p, Neg):
                sign = not sign
                p = p.arg
                if isinstance(p, Mul):
                    # normalized products carry no Neg factors
                    if isinstance(p.args[0], Const):
                        c = p.args[0].value if c is None else c * p.args[0].value
                        factors.extend(p.args[1:])
                    else:
                        factors.extend(p.args)
                    continue
            if isinstance(p, Const):
                c = p.value if c is None else c * p.value
            else:
                factors.append(p)
    if c is not None and c == 0:
        return ZERO
    if sign:
        c = -1 + 0j if c is None else -c
    if not factors:
        return Const(c if c is not None else 1 + 0j)
    if c is not None and c == -1:
        inner = factors[0] if len(factors) == 1 else Mul(tuple(factors))
        return Neg(inner)
    if c is not None and c != 1:
        factors.insert(0, Const(c))
    if len(factors) == 1:
        return factors[0]
    return Mul(tuple(factors))


def div(num: Node, den: Node) -> Node:
    if _is_const(den, 1):
        return num
    if _is_const(num, 0) and not _is_const(den, 0):
        return ZERO
    if isinstance(num, Const) and isinstance(den, Const) and den.value != 0:
        return Const(num.value / den.value)
    return Div(num, den)


def power(base: Node, k: int) -> Node:
    k = int(k)
    if k == 0:
        return ONE
    if k == 1:
        return base
    if isinstance(base, Const) and (base.value != 0 or k > 0):
        return Const(base.value ** k)
    return Pow(base, k)


def sub(a: Node, b: Node) -> Node:
    return add(a, neg(b))


# ---------------------------------------------------------------------------
# evaluation


class _Singular(Exception):
    def __init__(self, node):
        self.node = node


def _eval(node, x):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return x[node.index]
    if isinstance(node, Add):
        acc = _eval(node.args[0], x)
        for a in node.args[1:]:
            acc = acc + _eval(a, x)
        return acc
    if isinstance(node, Mul):
        acc = _eval(node.args[0], x)
        for a in node.args[1:]:
            acc = acc * _eval(a, x)
        return acc
    if isinstance(node, Div):
        n = _eval(node.num, x)
        d = _eval(node.den, x)
        if np.any(d == 0):
            raise _Singular(node.den)
        return n / d
    if isinstance(node, Pow):
        b = _eval(node.base, x)
        if node.exp < 0 and np.any(b == 0):
            raise _Singular(node.base)
        return b ** node.exp
    if isinstance(node, Neg):
        return -_eval(node.arg, x)
    raise TypeError(f"unknown node {node!r}")


# ---------------------------------------------------------------------------
# differentiation and substitution


def _diff(node, var):
    if isinstance(node, Const):
        return ZERO
    if isinstance(node, Var):
        return ONE if node.index == var else ZERO
    if isinstance(node, Add):
        return add(*(_diff(a, var) for a in node.args))
    if isinstance(node, Mul):
        terms = []
        for i, a in enumerate(node.args):
            da = _diff(a, var)
            if _is_const(da, 0):
                continue
            terms.append(mul(*node.args[:i], da, *node.args[i + 1:]))
        return add(*terms)
    if isinstance(node, Div):
        du = _diff(node.num, var)
        dv = _diff(node.den, var)
        if _is_const(dv, 0):
            return div(du, node.den)
        return div(sub(mul(du, node.den), mul(node.num, dv)), power(node.den, 2))
    if isinstance(node, Pow):
        db = _diff(node.base, var)
        return mul(_const(node.exp), power(node.base, node.exp - 1), db)
    if isinstance(node, Neg):
        return neg(_diff(node.arg, var))
    raise TypeError(f"unknown node {node!r}")


def _subs(node, repl):
    if isinstance(node, Const):
        return node
    if isinstance(node, Var):
        return repl[node.index]
    if isinstance(node, Add):
        return add(*(_subs(a, repl) for a in node.args))
    if isinstance(node, Mul):
        return mul(*(_subs(a, repl) for a in node.args))
    if isinstance(node, Div):
        return div(_subs(node.num, repl), _subs(node.den, repl))
    if isinstance(node, Pow):
        return power(_subs(node.base, repl), node.exp)
    if isinstance(node, Neg):
        return neg(_subs(node.arg, repl))
    raise TypeError(f"unknown node {node!r}")


# ---------------------------------------------------------------------------
# printing


def _fmt_real(x: float) -> str:
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _fmt_const(c: complex) -> str:
    re_, im = c.real, c.imag
    if im == 0:
        return _fmt_real(re_)
    if im in (1, -1):
        imag = "i"
    else:
        imag = _fmt_real(abs(im)) + "i"
    if re_ == 0:
        return imag if im > 0 else "-" + imag
    return f"{_fmt_real(re_)}{'+' if im > 0 else '-'}{imag}"


def _signed(node):
    """Split a sum term into (negative, magnitude) for printing."""
    if isinstance(node, Neg):
        return True, node.arg
    if isinstance(node, Const) and _fmt_const(node.value).startswith("-"):
        return True, Const(-node.value)
    if isinstance(node, Mul) and isinstance(node.args[0], Const):
        c = node.args[0].value
        if _fmt_const(c).startswith("-"):
            rest = node.args[1:]
            if -c == 1:
                return True, rest[0] if len(rest) == 1 else Mul(rest)
            return True, Mul((Const(-c),) + rest)
    return False, node


def _print_sum(terms, names):
    out = []
    for k, t in enumerate(terms):
        negative, mag = _signed(t)
        if negative:
            body = _print(mag, names, 2 if isinstance(mag, (Add, Div, Neg)) else 1)
            out.append(("-" if k == 0 else " - ") + body)
        else:
            body = _print(t, names, 1 if isinstance(t, Const) else 0)
            out.append(body if k == 0 else " + " + body)
    return "".join(out)


def _print(node, names, ctx=0):
    """ctx: 0 top level or sum operand, 1 product operand, 2 power base or negated operand."""
    if ctx == 0 and isinstance(node, (Neg, Const, Mul)) and _signed(node)[0]:
        return _print_sum((node,), names)
    if isinstance(node, Const):
        s = _fmt_const(node.value)
        if ctx > 0 and (s.startswith("-") or "+" in s[1:] or "-" in s[1:]):
            return f"({s})"
        return s
    if isinstance(node, Var):
        return names[node.index]
    if isinstance(node, Add):
        s = _print_sum(node.args, names)
        return f"({s})" if ctx > 0 else s
    if isinstance(node, Mul):
        s = "*".join(_print(a, names, 1) for a in node.args)
        return f"({s})" if ctx > 1 else s
    if isinstance(node, Div):
        num = _print(node.num, names, 1)
        den = _print(node.den, names, 2)
        s = f"{num}/{den}"
        return f"({s})" if ctx > 0 else s
    if isinstance(node, Pow):
        base = _print(node.base, names, 2)
        if isinstance(node.base, Pow):
            base = f"({base})"
        e = str(node.exp) if node.exp >= 0 else f"({node.exp})"
        return f"{base}^{e}"
    if isinstance(node, Neg):
        s = "-" + _print(node.arg, names, 1 if isinstance(node.arg, (Var, Pow, Mul)) else 2)
        return f"({s})" if ctx > 0 else s
    raise TypeError(f"unknown node {node!r}")


def _py_source(node):
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return f"x[{node.index}]"
    if isinstance(node, Add):
        return "(" + " + ".join(_py_source(a) for a in node.args) + ")"
    if isinstance(node, Mul):
        return "(" + " * ".join(_py_source(a) for a in node.args) + ")"
    if isinstance(node, Div):
        return f"({_py_source(node.num)} / {_py_source(node.den)})"
    if isinstance(node, Pow):
        return f"({_py_source(node.base)} ** {node.exp})"
    if isinstance(node, Neg):
        return f"(-{_py_source(node.arg)})"
    raise TypeError(f"unknown node {node!r}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


class _Parser:
    def __init__(self, text, names):
        self.text = text
        self.names = tuple(names)
        self.index = {n: k for k, n in enumerate(self.names)}
        self.tokens = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ExprSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
            start = pos
            if m.group("num") is not None:
                kind = "imag" if m.group("imag") else "num"
                self.tokens.append((kind, m.group("num"), start))
            elif m.group("name") is not None:
                self.tokens.append(("name", m.group("name"), start))
            else:
                op = "^" if m.group("op") == "**" else m.group("op")
                self.tokens.append(("op", op, start))
            pos = m.end()
        self.k = 0

    def peek(self):
        return self.tokens[self.k] if self.k < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.k += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ExprSyntaxError(f"expected {op!r}, found {tok[1] or 'end of input'!r}", self.text, tok[2])

    def parse(self):
        if not self.tokens:
            raise ExprSyntaxError("empty expression", self.text, 0)
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected token {tok[1]!r}", self.text, tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            node = add(node, rhs) if op == "+" else add(node, neg(rhs))
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            rhs = self.unary()
            node = mul(node, rhs) if op == "*" else div(node, rhs)
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            arg = self.unary()
            return neg(arg) if tok[1] == "-" else arg
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return power(base, self.exponent())
        return base

    def exponent(self):
        paren = self.peek()[:2] == ("op", "(")
        if paren:
            self.take()
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        tok = self.take()
        if tok[0] != "num" or not tok[1].isdigit():
            raise ExprSyntaxError("exponent must be an integer", self.text, tok[2])
        if paren:
            self.expect(")")
        return sign * int(tok[1])

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return Const(complex(float(val), 0.0))
        if kind == "imag":
            return Const(complex(0.0, float(val)))
        if kind == "name":
            if val == "i":
                return Const(1j)
            if val not in self.index:
                raise UnknownVariableError(f"unknown variable {val!r}", self.text, pos)
            return Var(self.index[val])
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", self.text, pos)


# ---------------------------------------------------------------------------
# public wrapper


@dataclass(frozen=True)
class HoloExpr:
    """A holomorphic rational expression in an ordered list of variables."""

    node: Node
    variables: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if "i" in self.variables:
            raise ValueError("'i' is reserved for the imaginary unit")

    # construction helpers -------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, HoloExpr):
            if other.variables != self.variables:
                raise ValueError(f"variable lists differ: {self.variables} vs {other.variables}")
            return other.node
        return _const(other)

    def __add__(self, other):
        return HoloExpr(add(self.node, self._coerce(other)), self.variables)

    def __radd__(self, other):
        return HoloExpr(add(self._coerce(other), self.node), self.variables)

    def __sub__(self, other):
        return HoloExpr(sub(self.node, self._coerce(other)), self.variables)

    def __rsub__(self, other):
        return HoloExpr(sub(self._coerce(other), self.node), self.variables)

    def __mul__(self, other):
        return HoloExpr(mul(self.node, self._coerce(other)), self.variables)

    def __rmul__(self, other):
        return HoloExpr(mul(self._coerce(other), self.node), self.variables)

    def __truediv__(self, other):
        return HoloExpr(div(self.node, self._coerce(other)), self.variables)

    def __rtruediv__(self, other):
        return HoloExpr(div(self._coerce(other), self.node), self.variables)

    def __neg__(self):
        return HoloExpr(neg(self.node), self.variables)

    def __pow__(self, k):
        if int(k) != k:
            raise ValueError("only integer powers are supported")
        return HoloExpr(power(self.node, int(k)), self.variables)

    # queries ---------------------------------------------------------------
    def __str__(self):
        return _print(self.node, self.variables)

    def __repr__(self):
        return f"HoloExpr({str(self)!r}, vars={self.variables})"

    @property
    def is_constant(self):
        return isinstance(self.node, Const)

    @property
    def is_zero(self):
        return _is_const(self.node, 0)

    def diff(self, var):
        return diff_expr(self, var)

    @cached_property
    def _compiled(self):
        return eval(compile(f"lambda x: {_py_source(self.node)}", "<holo>", "eval"))

    def __call__(self, point):
        """Fast evaluation; falls back to the tree walker to name a vanishing denominator."""
        x = _check_point(point, len(self.variables))
        try:
            return self._compiled(x)
        except ZeroDivisionError:
            return eval_expr(self, point)


def _check_point(point, n):
    if np.ndim(point) == 0:
        if n == 1:
            return (point,)
        raise ValueError(f"scalar point given for an expression in {n} variables")
    if len(point) != n:
        raise ValueError(f"point has {len(point)} components, expression has {n} variables")
    return point


def parse_expr(text: str, variables: Sequence[str]) -> HoloExpr:
    """Parse ``text`` into a :class:`HoloExpr` over ``variables``.

    Raises ``ExprSyntaxError`` (with position) on malformed input and
    ``UnknownVariableError`` on names outside ``variables``.
    """
    variables = tuple(variables)
    for v in variables:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v) or v == "i":
            raise ValueError(f"invalid variable name {v!r}")
    return HoloExpr(_Parser(text, variables).parse(), variables)


def eval_expr(e: HoloExpr, point) -> complex:
    """Evaluate by walking the tree.

    ``point`` holds one value per variable; values may be numpy arrays, in which
    case evaluation is elementwise.  A vanishing denominator raises
    ``SingularPointError`` naming the offending subexpression.
    """
    x = _check_point(point, len(e.variables))
    try:
        return _eval(e.node, x)
    except _Singular as err:
        raise SingularPointError(_print(err.node, e.variables), tuple(x)) from None


def diff_expr(e: HoloExpr, var: Union[int, str]) -> HoloExpr:
    """Exact holomorphic partial derivative with respect to ``var`` (index or name)."""
    if isinstance(var, str):
        if var not in e.variables:
            raise UnknownVariableError(f"unknown variable {var!r}")
        var = e.variables.index(var)
    if not 0 <= var < len(e.variables):
        raise IndexError(f"variable index {var} out of range")
    return HoloExpr(_diff(e.node, var), e.variables)


def substitute(e: HoloExpr, replacements: Sequence[HoloExpr]) -> HoloExpr:
    """Compose: replace variable k of ``e`` by ``replacements[k]``.

    All replacements must share one variable list, which becomes the
    variable list of the result.
    """
    if len(replacements) != len(e.variables):
        raise ValueError("need one replacement per variable")
    variables = replacements[0].variables
    for r in replacements:
        if r.variables != variables:
            raise ValueError("replacements must share a variable list")
    return HoloExpr(_subs(e.node, [r.node for r in replacements]), variables)


def constant(c, variables: Sequence[str]) -> HoloExpr:
    return HoloExpr(_const(c), tuple(variables))


def variable(name_or_index, variables: Sequence[str]) -> HoloExpr:
    variables = tuple(variables)
    k = variables.index(name_or_index) if isinstance(name_or_index, str) else int(name_or_index)
    return HoloExpr(Var(k), variables)


def linear_combination(coeffs, exprs: Sequence[HoloExpr]) -> HoloExpr:
    """sum_k coeffs[k] * exprs[k], skipping zero coefficients."""
    variables = exprs[0].variables
    terms = [mul(_const(c), x.node) for c, x in zip(coeffs, exprs) if c != 0]
    return HoloExpr(add(*terms), variables)


def compile_exprs(exprs: Sequence[HoloExpr]):
    """Compile several expressions sharing a variable list into one callable.

    The callable maps a point to a complex numpy array; on a vanishing
    denominator it reruns the tree walker to raise ``SingularPointError``.
    """
    exprs = list(exprs)
    n = len(exprs[0].variables) if exprs else 0
    src = "lambda x: (" + ", ".join(_py_source(x.node) for x in exprs) + ",)"
    fn = eval(compile(src, "<holo>", "eval"))

    def evaluate(point):
        x = _check_point(point, n)
        try:
            return np.array(fn(x), dtype=complex)
        except ZeroDivisionError:
            for e in exprs:
                eval_expr(e, x)
            raise

    return evaluate
