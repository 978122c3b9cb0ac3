"""Scalar expression parser and evaluators.

Grammar::

    expr     := term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := '-' factor | base ('^' exponent)?
    base     := number | ident | ident '(' expr ')' | '(' expr ')'
    exponent := number | '(' ['-'] number ('/' number)? ')'

Identifiers resolve first against the declared coordinate names and then
against a constants map; anything else is an error.  Unary minus binds
looser than ``^`` so ``-t^2`` means ``-(t^2)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .errors import (
    ArityError,
    DomainError,
    ExprError,
    ExprSyntaxError,
    NonFiniteError,
    UnknownIdentifierError,
)
from .jets import Jet

FUNCTIONS = ("exp", "log", "sin", "cos", "sinh", "cosh", "sqrt")


@dataclass(frozen=True)
class Const:
    value: float
    name: str | None = None

    def __str__(self):
        return self.name if self.name else repr(self.value)


@dataclass(frozen=True)
class Var:
    index: int
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Unary:
    func: str  # "neg" or one of FUNCTIONS
    arg: "Node"

    def __str__(self):
        if self.func == "neg":
            return f"(-{self.arg})"
        return f"{self.func}({self.arg})"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: float

    def __str__(self):
        return f"({self.base})^{self.exponent!r}"


Node = Union[Const, Var, Unary, Binary, Pow]


@dataclass(frozen=True)
class ExprAst:
    """Parsed expression over ``n_vars`` coordinates."""

    root: Node
    n_vars: int
    var_names: tuple
    text: str = ""

    def __str__(self):
        return self.text or str(self.root)

    def variables(self) -> set:
        """Indices of the coordinates the expression actually references."""
        found = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Var):
                found.add(node.index)
            elif isinstance(node, Unary):
                stack.append(node.arg)
            elif isinstance(node, Binary):
                stack.extend((node.left, node.right))
            elif isinstance(node, Pow):
                stack.append(node.base)
        return found


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError("unexpected character", start, text[start])
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, var_names, constants):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.vars = {name: k for k, name in enumerate(var_names)}
        self.constants = constants

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.tok
        if text != value or kind != "op":
            raise ExprSyntaxError(f"expected {value!r}", pos, text or "<end>")
        return self.advance()

    def parse(self):
        node = self.expr()
        kind, text, pos = self.tok
        if kind != "end":
            raise ExprSyntaxError("unexpected trailing input", pos, text)
        return node

    def expr(self):
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.advance()[1]
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self.advance()[1]
            node = Binary(op, node, self.factor())
        return node

    def factor(self):
        if self.tok[:2] == ("op", "-"):
            self.advance()
            return Unary("neg", self.factor())
        node = self.base()
        if self.tok[:2] == ("op", "^"):
            self.advance()
            node = Pow(node, self.exponent())
        return node

    def exponent(self):
        kind, text, pos = self.tok
        if kind == "num":
            self.advance()
            return float(text)
        if (kind, text) != ("op", "("):
            raise ExprSyntaxError("exponent must be a number or (p/q)", pos, text or "<end>")
        self.advance()
        sign = 1.0
        if self.tok[:2] == ("op", "-"):
            self.advance()
            sign = -1.0
        num = self._number()
        if self.tok[:2] == ("op", "/"):
            self.advance()
            den_pos = self.tok[2]
            den = self._number()
            if den == 0.0:
                raise ExprSyntaxError("zero denominator in exponent", den_pos, "0")
            num = num / den
        self.expect(")")
        return sign * num

    def _number(self):
        kind, text, pos = self.tok
        if kind != "num":
            raise ExprSyntaxError("expected a number", pos, text or "<end>")
        self.advance()
        return float(text)

    def base(self):
        kind, text, pos = self.tok
        if kind == "num":
            self.advance()
            return Const(float(text))
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "id":
            self.advance()
            if self.tok[:2] == ("op", "("):
                return self.call(text, pos)
            if text in FUNCTIONS:
                raise ArityError(f"function {text!r} at position {pos} needs one argument")
            if text in self.vars:
                return Var(self.vars[text], text)
            if text in self.constants:
                return Const(float(self.constants[text]), text)
            raise UnknownIdentifierError(text, pos)
        raise ExprSyntaxError("unexpected token", pos, text or "<end>")

    def call(self, name, pos):
        if name not in FUNCTIONS:
            raise UnknownIdentifierError(name, pos)
        self.expect("(")
        args = [self.expr()]
        while self.tok[:2] == ("op", ","):
            self.advance()
            args.append(self.expr())
        self.expect(")")
        if len(args) != 1:
            raise ArityError(f"function {name!r} at position {pos} takes 1 argument, got {len(args)}")
        return Unary(name, args[0])


def parse_expr(
    text: str,
    n_vars: int,
    var_names: Sequence[str],
    constants: Mapping[str, float] | None = None,
) -> ExprAst:
    """Parse ``text`` into an :class:`ExprAst` over the named coordinates."""
    if not isinstance(text, str) or not text.strip():
        raise ExprSyntaxError("empty expression", 0, "<end>")
    var_names = tuple(var_names)
    if len(set(var_names)) != len(var_names):
        raise ValueError(f"variable names must be distinct: {var_names}")
    if len(var_names) != n_vars:
        raise ArityError(f"{n_vars} variables declared but {len(var_names)} names given")
    root = _Parser(text, var_names, dict(constants or {})).parse()
    return ExprAst(root, n_vars, var_names, text)


# -- evaluation ------------------------------------------------------------

_FLOAT_FUNCS = {
    "exp": math.exp,
    "log": math.log,
    "sin": math.sin,
    "cos": math.cos,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "sqrt": math.sqrt,
}


def _float_eval(node, point):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return float(point[node.index])
    if isinstance(node, Unary):
        x = _float_eval(node.arg, point)
        if node.func == "neg":
            return -x
        if node.func == "log" and x <= 0.0:
            raise DomainError(f"log of non-positive value {x!r}", node)
        if node.func == "sqrt" and x < 0.0:
            raise DomainError(f"sqrt of negative value {x!r}", node)
        try:
            return _FLOAT_FUNCS[node.func](x)
        except OverflowError:
            raise NonFiniteError(f"overflow in {node}") from None
    if isinstance(node, Binary):
        a = _float_eval(node.left, point)
        b = _float_eval(node.right, point)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0.0:
            raise DomainError("division by zero", node)
        return a / b
    if isinstance(node, Pow):
        a = _float_eval(node.base, point)
        e = node.exponent
        if e.is_integer():
            if a == 0.0 and e < 0:
                raise DomainError("division by zero", node)
            return a ** int(e)
        if a <= 0.0:
            raise DomainError(f"non-integer power of non-positive value {a!r}", node)
        return math.exp(e * math.log(a))
    raise ExprError(f"unknown node {node!r}")


def evaluate(expr: ExprAst, point: Sequence[float]) -> float:
    """Plain floating-point evaluation, independent of the jet machinery."""
    _check_point(expr, point)
    try:
        value = _float_eval(expr.root, point)
    except OverflowError:
        raise NonFiniteError(f"overflow evaluating {expr}") from None
    if not math.isfinite(value):
        raise NonFiniteError(f"non-finite value of {expr}")
    return value


def _jet_node(node, env):
    try:
        if isinstance(node, Const):
            return Jet.constant(node.value, env[0].n_vars, env[0].order)
        if isinstance(node, Var):
            return env[node.index]
        if isinstance(node, Unary):
            x = _jet_node(node.arg, env)
            if node.func == "neg":
                return -x
            return getattr(x, node.func)()
        if isinstance(node, Binary):
            a = _jet_node(node.left, env)
            b = _jet_node(node.right, env)
            return {"+": a.__add__, "-": a.__sub__, "*": a.__mul__, "/": a.__truediv__}[node.op](b)
        if isinstance(node, Pow):
            return _jet_node(node.base, env).power(node.exponent)
    except DomainError as exc:
        if exc.node is None:
            raise DomainError(str(exc), node) from None
        raise
    raise ExprError(f"unknown node {node!r}")


def compose(expr: ExprAst, args: Sequence[Jet]) -> Jet:
    """Evaluate ``expr`` with each coordinate replaced by a jet.

    This is how an expression written in a few coordinates (the warp in
    ``t`` alone, a fiber entry in the fiber coordinates) is lifted to a jet
    over all spacetime coordinates.
    """
    if len(args) != expr.n_vars:
        raise ArityError(f"expression takes {expr.n_vars} arguments, got {len(args)}")
    return _jet_node(expr.root, list(args))


def jet_eval(expr: ExprAst, point: Sequence[float], order: int) -> Jet:
    """Taylor jet of ``expr`` at ``point`` up to ``order``."""
    _check_point(expr, point)
    n = expr.n_vars
    seeds = [Jet.variable(i, float(point[i]), n, order) for i in range(n)]
    return compose(expr, seeds)


def _check_point(expr, point):
    if len(point) != expr.n_vars:
        raise ArityError(f"expression over {expr.n_vars} coordinates evaluated at {len(point)}-vector")
