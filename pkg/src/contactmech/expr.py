"""Expression language for system definitions.

Grammar (everything else is a positioned syntax error)::

    expression := term (("+" | "-") term)*
    term       := unary (("*" | "/") unary)*
    unary      := "-" unary | power
    power      := atom ("^" unary)?          # right-associative, binds
    atom       := NUMBER                     # tighter than unary minus
                | IDENT
                | FUNC "(" expression ")"
                | "(" expression ")"

``FUNC`` is one of ``sin cos exp log sqrt``.  Identifiers match
``[a-zA-Z][a-zA-Z0-9]*``; numbers are decimal with an optional fraction and
exponent.  There is no implicit multiplication.

The conventional chart variable names are ``q1..qn`` (positions),
``qd1..qdn`` (velocities), ``p1..pn`` (momenta) and ``z``.  Anything else
appearing free in an expression must be bound as a named parameter.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from . import ad
from .ad import DomainError, Jet2

__all__ = [
    "ParseError",
    "Node",
    "Num",
    "Var",
    "Unary",
    "Binary",
    "Call",
    "parse",
    "to_source",
    "free_variables",
    "ScalarField",
    "eval_jet2",
    "eval_value",
    "position_names",
    "velocity_names",
    "momentum_names",
    "lagrangian_chart",
    "hamiltonian_chart",
]

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")


class ParseError(ValueError):
    """Syntax error with the byte offset and the tokens that were expected."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = tuple(expected)
        hint = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at offset {offset}{hint}")


# -- abstract syntax ---------------------------------------------------------


@dataclass(frozen=True)
class Node:
    span: tuple[int, int] = field(compare=False, repr=False)


@dataclass(frozen=True)
class Num(Node):
    value: float = 0.0


@dataclass(frozen=True)
class Var(Node):
    name: str = ""


@dataclass(frozen=True)
class Unary(Node):
    op: str = "neg"
    operand: Node = None


@dataclass(frozen=True)
class Binary(Node):
    op: str = "add"
    left: Node = None
    right: Node = None


@dataclass(frozen=True)
class Call(Node):
    func: str = ""
    arg: Node = None


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[a-zA-Z][a-zA-Z0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            # only whitespace or an unknown character remains
            rest = source[pos:]
            stripped = rest.lstrip()
            if not stripped:
                break
            bad = pos + (len(rest) - len(stripped))
            raise ParseError(f"unexpected character {source[bad]!r}", bad)
        if m.lastgroup == "num":
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.lastgroup == "ident":
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def current(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: tuple[str, ...]):
        kind, text, offset = self.current
        what = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {what}", offset, expected)

    def expect_op(self, op: str):
        kind, text, offset = self.current
        if kind == "op" and text == op:
            return self.advance()
        self.fail((f"'{op}'",))

    def parse(self) -> Node:
        node = self.expression()
        if self.current[0] != "end":
            self.fail(("operator", "end of input"))
        return node

    def expression(self) -> Node:
        node = self.term()
        while self.current[0] == "op" and self.current[1] in "+-":
            op = "add" if self.advance()[1] == "+" else "sub"
            right = self.term()
            node = Binary((node.span[0], right.span[1]), op, node, right)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.current[0] == "op" and self.current[1] in "*/":
            op = "mul" if self.advance()[1] == "*" else "div"
            right = self.unary()
            node = Binary((node.span[0], right.span[1]), op, node, right)
        return node

    def unary(self) -> Node:
        kind, text, offset = self.current
        if kind == "op" and text == "-":
            self.advance()
            operand = self.unary()
            return Unary((offset, operand.span[1]), "neg", operand)
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.current[0] == "op" and self.current[1] == "^":
            self.advance()
            exponent = self.unary()
            return Binary((base.span[0], exponent.span[1]), "pow", base, exponent)
        return base

    def atom(self) -> Node:
        kind, text, offset = self.current
        if kind == "num":
            self.advance()
            return Num((offset, offset + len(text)), float(text))
        if kind == "ident":
            self.advance()
            if self.current[0] == "op" and self.current[1] == "(":
                if text not in FUNCTIONS:
                    raise ParseError(
                        f"unknown function {text!r}", offset, tuple(FUNCTIONS)
                    )
                self.advance()
                arg = self.expression()
                _, _, close = self.expect_op(")")
                return Call((offset, close + 1), text, arg)
            return Var((offset, offset + len(text)), text)
        if kind == "op" and text == "(":
            self.advance()
            node = self.expression()
            self.expect_op(")")
            return node
        self.fail(("number", "identifier", "'('", "'-'"))


def parse(source: str) -> Node:
    """Parse ``source`` into an expression tree, or raise :class:`ParseError`."""
    return _Parser(source).parse()


# -- printing and analysis ---------------------------------------------------

_PRECEDENCE = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}


def _print(node: Node) -> tuple[str, int]:
    if isinstance(node, Num):
        v = node.value
        text = str(int(v)) if v.is_integer() and abs(v) < 1e16 else repr(v)
        return text, 5
    if isinstance(node, Var):
        return node.name, 5
    if isinstance(node, Call):
        return f"{node.func}({_print(node.arg)[0]})", 5
    if isinstance(node, Unary):
        text, prec = _print(node.operand)
        if prec < _PRECEDENCE["neg"]:
            text = f"({text})"
        return f"-{text}", _PRECEDENCE["neg"]
    assert isinstance(node, Binary)
    prec = _PRECEDENCE[node.op]
    lt, lp = _print(node.left)
    rt, rp = _print(node.right)
    if node.op == "pow":
        # right-associative; the base must bind at least as tightly as ^
        if lp <= prec:
            lt = f"({lt})"
        if rp < _PRECEDENCE["neg"]:
            rt = f"({rt})"
        return f"{lt}^{rt}", prec
    symbol = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}[node.op]
    if lp < prec:
        lt = f"({lt})"
    # left-associative operators: a right child of equal precedence needs
    # parens to keep the tree shape (a + (b - c) is not (a + b) - c)
    if rp <= prec:
        rt = f"({rt})"
    return f"{lt}{symbol}{rt}", prec


def to_source(node: Node) -> str:
    """Render a tree back to source; reparsing yields a structurally equal tree."""
    return _print(node)[0]


def free_variables(node: Node) -> set[str]:
    """The set of variable names appearing in the tree."""
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, (Num,)):
        return set()
    if isinstance(node, Unary):
        return free_variables(node.operand)
    if isinstance(node, Call):
        return free_variables(node.arg)
    return free_variables(node.left) | free_variables(node.right)


# -- evaluation --------------------------------------------------------------

_FLOAT_UNARY = {
    "neg": lambda a: -a,
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "log": ad.log,
    "sqrt": lambda a: math.sqrt(a) if a >= 0.0 else _domain_fail("sqrt", a),
}


def _domain_fail(op, value):
    raise DomainError(f"{op} requires a nonnegative argument, got {value}")


def _float_pow(a: float, b: float) -> float:
    if float(b).is_integer():
        if a == 0.0 and b < 0:
            raise DomainError("division by zero")
        return a ** int(b)
    if a <= 0.0:
        raise DomainError(f"power with non-integer exponent requires a positive base, got {a}")
    return a**b


def _float_div(a: float, b: float) -> float:
    if b == 0.0:
        raise DomainError("division by zero")
    return a / b


_FLOAT_BINARY = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": _float_div,
    "pow": _float_pow,
}

_JET_BINARY = {"add": ad.add, "sub": ad.sub, "mul": ad.mul, "div": ad.div, "pow": ad.power}
_JET_UNARY = {"neg": ad.neg, "sin": ad.sin, "cos": ad.cos, "exp": ad.exp, "log": ad.log, "sqrt": ad.sqrt}


def _fold(node: Node, env: dict):
    kind = node.__class__
    if kind is Var:
        try:
            return env[node.name]
        except KeyError:
            raise ValueError(f"unbound identifier {node.name!r}") from None
    if kind is Num:
        return node.value
    if kind is Binary:
        a = _fold(node.left, env)
        b = _fold(node.right, env)
        if type(a) is float and type(b) is float:
            return _FLOAT_BINARY[node.op](a, b)
        return _JET_BINARY[node.op](a, b)
    if kind is Unary:
        a = _fold(node.operand, env)
        if type(a) is float:
            return _FLOAT_UNARY[node.op](a)
        return _JET_UNARY[node.op](a)
    # Call
    a = _fold(node.arg, env)
    if type(a) is float:
        return _FLOAT_UNARY[node.func](a)
    return _JET_UNARY[node.func](a)


@dataclass(frozen=True)
class ScalarField:
    """An evaluatable real function of a named-variable chart.

    ``chart`` lists the active variables in order; every other free variable
    of the expression must appear in ``parameters``.
    """

    ast: Node
    chart: tuple[str, ...]
    parameters: dict = field(default_factory=dict)
    source: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "chart", tuple(self.chart))
        names = free_variables(self.ast)
        unbound = names - set(self.chart) - set(self.parameters)
        if unbound:
            raise ValueError(
                f"unbound identifiers {sorted(unbound)}; chart is {list(self.chart)}"
            )
        shadowed = set(self.chart) & set(self.parameters)
        if shadowed:
            raise ValueError(f"parameters {sorted(shadowed)} shadow chart variables")
        object.__setattr__(
            self, "_param_env", {name: float(v) for name, v in self.parameters.items()}
        )

    @classmethod
    def from_source(cls, source: str, chart, parameters=None) -> "ScalarField":
        return cls(parse(source), tuple(chart), dict(parameters or {}), source)

    def describe(self) -> str:
        return self.source if self.source is not None else to_source(self.ast)

    def _check_point(self, point):
        if len(point) != len(self.chart):
            raise ValueError(
                f"point has {len(point)} coordinates, chart has {len(self.chart)}"
            )

    def jet_at(self, point) -> Jet2:
        """Value, gradient and Hessian with respect to the chart variables."""
        self._check_point(point)
        env = self._param_env.copy()
        jets = ad.seed_variables(point)
        for name, jet in zip(self.chart, jets):
            env[name] = jet
        result = _fold(self.ast, env)
        if type(result) is float:
            return ad.constant(result, len(self.chart))
        return result

    def value_at(self, point) -> float:
        self._check_point(point)
        env = self._param_env.copy()
        for name, v in zip(self.chart, point):
            env[name] = float(v)
        return _fold(self.ast, env)

    def value_and_gradient_at(self, point):
        jet = self.jet_at(point)
        return jet.value, jet.gradient


def eval_jet2(field: ScalarField, point) -> Jet2:
    """Evaluate ``field`` with the chart variables as active jet variables."""
    return field.jet_at(point)


def eval_value(field: ScalarField, point) -> float:
    return field.value_at(point)


# -- chart naming conventions ------------------------------------------------


def position_names(n: int) -> tuple[str, ...]:
    return tuple(f"q{i}" for i in range(1, n + 1))


def velocity_names(n: int) -> tuple[str, ...]:
    return tuple(f"qd{i}" for i in range(1, n + 1))


def momentum_names(n: int) -> tuple[str, ...]:
    return tuple(f"p{i}" for i in range(1, n + 1))


def lagrangian_chart(n: int) -> tuple[str, ...]:
    """(q1..qn, qd1..qdn, z)"""
    return position_names(n) + velocity_names(n) + ("z",)


def hamiltonian_chart(n: int) -> tuple[str, ...]:
    """(q1..qn, p1..pn, z)"""
    return position_names(n) + momentum_names(n) + ("z",)
