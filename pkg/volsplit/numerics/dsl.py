"""
Weight expression language.

A small arithmetic language over the variable ``x`` used for every weight, kernel
coefficient and multiplier given on the command line or in a config file.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | "x" | "pi" | "e" | FUNC "(" expr ")" | "(" expr ")"
    FUNC   := "exp" | "log" | "abs"

``^`` is right-associative and binds tighter than unary minus, so ``-x^2`` is
``-(x^2)`` and ``2^-x`` is ``2^(-x)``. Numbers accept decimal and exponent
notation (``0.5``, ``1e-3``).

Expressions are evaluated element-wise on numpy arrays, either directly or in
log-magnitude form (``log|f|`` together with the sign of ``f``). The log form keeps
products such as ``exp(-x) * exp(x)`` finite for arguments where each factor alone
overflows, which is what the quadrature layer integrates.
"""

import logging
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from ..errors import UnknownIdentifierError, WeightSyntaxError

logger = logging.getLogger(__name__)

FUNCTIONS = ("exp", "log", "abs")
CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


# =============================================================================
# AST
# =============================================================================


@dataclass(frozen=True)
class Const:
    value: float
    name: str | None = None


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Const, Var, Neg, BinOp, Call]


def to_source(node: Node) -> str:
    """Print a node fully parenthesised; ``parse_weight(to_source(n)).ast == n``."""
    if isinstance(node, Const):
        return node.name if node.name else repr(float(node.value))
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return f"(-{to_source(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    raise TypeError(f"Not an expression node: {node!r}")


def contains_var(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Const):
        return False
    if isinstance(node, BinOp):
        return contains_var(node.left) or contains_var(node.right)
    return contains_var(node.arg)


# =============================================================================
# Parser
# =============================================================================


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if not match:
            raise WeightSyntaxError(f"Unexpected character {source[pos]!r}", source, pos)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


class _Parser:
    """Recursive-descent parser producing AST nodes."""

    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def _advance(self) -> _Token:
        token = self.current
        self.index += 1
        return token

    def _error(self, message: str, token: _Token | None = None) -> WeightSyntaxError:
        token = token or self.current
        if token.kind == "end":
            message = "Unexpected end of input"
        return WeightSyntaxError(message, self.source, token.pos)

    def _expect(self, text: str) -> None:
        if self.current.text != text:
            raise self._error(f"Expected {text!r}, found {self.current.text!r}")
        self._advance()

    def parse(self) -> Node:
        node = self._expr()
        if self.current.kind != "end":
            raise self._error(f"Unexpected {self.current.text!r}")
        return node

    def _expr(self) -> Node:
        node = self._term()
        while self.current.text in ("+", "-"):
            op = self._advance().text
            node = BinOp(op, node, self._term())
        return node

    def _term(self) -> Node:
        node = self._unary()
        while self.current.text in ("*", "/"):
            op = self._advance().text
            node = BinOp(op, node, self._unary())
        return node

    def _unary(self) -> Node:
        if self.current.text == "-":
            self._advance()
            return Neg(self._unary())
        if self.current.text == "+":
            self._advance()
            return self._unary()
        return self._power()

    def _power(self) -> Node:
        base = self._atom()
        if self.current.text == "^":
            self._advance()
            return BinOp("^", base, self._unary())
        return base

    def _atom(self) -> Node:
        token = self.current
        if token.kind == "number":
            self._advance()
            return Const(float(token.text))
        if token.kind == "name":
            self._advance()
            if token.text == "x":
                return Var()
            if token.text in CONSTANTS:
                return Const(CONSTANTS[token.text], token.text)
            if token.text in FUNCTIONS:
                self._expect("(")
                arg = self._expr()
                self._expect(")")
                return Call(token.text, arg)
            raise UnknownIdentifierError(
                f"Unknown identifier {token.text!r}", self.source, token.pos
            )
        if token.text == "(":
            self._advance()
            node = self._expr()
            self._expect(")")
            return node
        raise self._error(f"Unexpected {token.text!r}")


# =============================================================================
# Simplifying constructors (used by differentiation and operator overloads)
# =============================================================================


def _number(node: Node) -> float | None:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Neg) and isinstance(node.arg, Const):
        return -node.arg.value
    return None


def const(value: float) -> Node:
    value = float(value)
    if value < 0:
        return Neg(Const(-value))
    return Const(value)


def neg(a: Node) -> Node:
    if isinstance(a, Neg):
        return a.arg
    na = _number(a)
    if na is not None:
        return const(-na)
    return Neg(a)


def add(a: Node, b: Node) -> Node:
    na, nb = _number(a), _number(b)
    if na is not None and nb is not None:
        return const(na + nb)
    if na == 0:
        return b
    if nb == 0:
        return a
    return BinOp("+", a, b)


def sub(a: Node, b: Node) -> Node:
    na, nb = _number(a), _number(b)
    if na is not None and nb is not None:
        return const(na - nb)
    if nb == 0:
        return a
    if na == 0:
        return neg(b)
    return BinOp("-", a, b)


def mul(a: Node, b: Node) -> Node:
    na, nb = _number(a), _number(b)
    if na is not None and nb is not None:
        return const(na * nb)
    if na == 0 or nb == 0:
        return Const(0.0)
    if na == 1:
        return b
    if nb == 1:
        return a
    if na == -1:
        return neg(b)
    if nb == -1:
        return neg(a)
    return BinOp("*", a, b)


def div(a: Node, b: Node) -> Node:
    na, nb = _number(a), _number(b)
    if na is not None and nb is not None and nb != 0:
        return const(na / nb)
    if na == 0:
        return Const(0.0)
    if nb == 1:
        return a
    return BinOp("/", a, b)


def power(a: Node, b: Node) -> Node:
    na, nb = _number(a), _number(b)
    if nb == 0:
        return Const(1.0)
    if nb == 1:
        return a
    if na is not None and nb is not None and na > 0:
        return const(na**nb)
    return BinOp("^", a, b)


def call(func: str, a: Node) -> Node:
    na = _number(a)
    if func == "exp" and na == 0:
        return Const(1.0)
    if func == "log" and na == 1:
        return Const(0.0)
    return Call(func, a)


# =============================================================================
# Differentiation
# =============================================================================


def differentiate(node: Node) -> Node:
    """Forward symbolic derivative with respect to ``x``."""
    if isinstance(node, Const):
        return Const(0.0)
    if isinstance(node, Var):
        return Const(1.0)
    if isinstance(node, Neg):
        return neg(differentiate(node.arg))
    if isinstance(node, Call):
        a = node.arg
        da = differentiate(a)
        if node.func == "exp":
            return mul(call("exp", a), da)
        if node.func == "log":
            return div(da, a)
        # d|a| = sign(a) a'
        return mul(div(a, call("abs", a)), da)

    a, b = node.left, node.right
    da, db = differentiate(a), differentiate(b)
    if node.op == "+":
        return add(da, db)
    if node.op == "-":
        return sub(da, db)
    if node.op == "*":
        return add(mul(da, b), mul(a, db))
    if node.op == "/":
        return sub(div(da, b), div(mul(a, db), power(b, Const(2.0))))
    # node.op == "^"
    if not contains_var(b):
        return mul(mul(b, power(a, sub(b, Const(1.0)))), da)
    return mul(
        power(a, b),
        add(mul(db, call("log", a)), div(mul(b, da), a)),
    )


# =============================================================================
# Evaluation
# =============================================================================


def evaluate(node: Node, x: np.ndarray) -> np.ndarray:
    if isinstance(node, Const):
        return np.full(x.shape, node.value)
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -evaluate(node.arg, x)
    if isinstance(node, Call):
        a = evaluate(node.arg, x)
        if node.func == "exp":
            return np.exp(a)
        if node.func == "log":
            return np.log(a)
        return np.abs(a)
    a, b = evaluate(node.left, x), evaluate(node.right, x)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return np.power(a, b)


def _signed_logaddexp(la, sa, lb, sb):
    """log|a + b| and its sign from the log-magnitudes and signs of a and b."""
    la = np.where(sa == 0, -np.inf, la)
    lb = np.where(sb == 0, -np.inf, lb)
    big = np.maximum(la, lb)
    small = np.minimum(la, lb)
    s_big = np.where(la >= lb, sa, sb)
    same = sa * sb >= 0
    finite = np.isfinite(big)
    d = np.where(finite, small - big, -np.inf)
    d = np.where(np.isnan(d), -np.inf, d)
    same_part = np.log1p(np.exp(d))
    with np.errstate(divide="ignore"):
        diff_part = np.log(-np.expm1(d))
    out = big + np.where(same, same_part, diff_part)
    out = np.where(np.isneginf(big), -np.inf, out)
    sign = np.where(np.isneginf(out), 0.0, s_big)
    return out, sign


def _is_integer(values: np.ndarray) -> np.ndarray:
    return np.isfinite(values) & (np.floor(values) == values)


def evaluate_log(node: Node, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(log|f(x)|, sign f(x))``; a zero value gives ``(-inf, 0)``."""
    if isinstance(node, Const):
        if node.value == 0:
            return np.full(x.shape, -np.inf), np.zeros(x.shape)
        return np.full(x.shape, math.log(abs(node.value))), np.full(x.shape, np.sign(node.value))
    if isinstance(node, Var):
        return np.log(np.abs(x)), np.sign(x)
    if isinstance(node, Neg):
        la, sa = evaluate_log(node.arg, x)
        return la, -sa
    if isinstance(node, Call):
        la, sa = evaluate_log(node.arg, x)
        if node.func == "exp":
            value = sa * np.exp(la)
            return value, np.ones(x.shape)
        if node.func == "log":
            # log(a) has value la where a > 0
            out = np.log(np.abs(la))
            sign = np.sign(la)
            bad = sa < 0
            return np.where(bad, np.nan, out), np.where(bad, np.nan, sign)
        return la, np.abs(sa)

    la, sa = evaluate_log(node.left, x)
    if node.op == "^":
        b = evaluate(node.right, x)
        out = b * la
        out = np.where(b == 0, 0.0, out)
        sign = np.where(sa > 0, 1.0, np.where(b == 0, 1.0, 0.0))
        negative = sa < 0
        parity = np.where(_is_integer(b), np.where(np.mod(b, 2) == 0, 1.0, -1.0), np.nan)
        sign = np.where(negative, parity, sign)
        zero_base = (sa == 0) & (b != 0)
        sign = np.where(zero_base & (b < 0), 1.0, sign)
        return out, sign
    lb, sb = evaluate_log(node.right, x)
    if node.op == "+":
        return _signed_logaddexp(la, sa, lb, sb)
    if node.op == "-":
        return _signed_logaddexp(la, sa, lb, -sb)
    if node.op == "*":
        out = la + lb
        return np.where((sa == 0) | (sb == 0), -np.inf, out), sa * sb
    out = la - lb
    return out, sa * np.where(sb == 0, 1.0, sb)


# =============================================================================
# Public expression type
# =============================================================================


Operand = Union["WeightExpr", float, int]


@dataclass(frozen=True)
class WeightExpr:
    """A parsed weight expression.

    Instances are immutable and hashable; arithmetic operators build new
    expressions, so ``u ** -2`` and ``x * a`` can be composed without going
    back through text.
    """

    ast: Node
    source: str | None = None

    def __post_init__(self):
        if self.source is None:
            object.__setattr__(self, "source", to_source(self.ast))

    def __str__(self) -> str:
        return self.source

    def __call__(self, x) -> np.ndarray | float:
        arr = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            out = evaluate(self.ast, arr)
        if arr.ndim == 0:
            return float(out)
        return out

    def log_abs(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Element-wise ``(log|f(x)|, sign f(x))``."""
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        with np.errstate(all="ignore"):
            la, sa = evaluate_log(self.ast, arr)
        return (
            np.array(np.broadcast_to(la, arr.shape), dtype=float),
            np.array(np.broadcast_to(sa, arr.shape), dtype=float),
        )

    def derivative(self, order: int = 1) -> "WeightExpr":
        node = self.ast
        for _ in range(order):
            node = differentiate(node)
        return WeightExpr(node)

    @property
    def is_zero(self) -> bool:
        return _number(self.ast) == 0

    @property
    def is_constant(self) -> bool:
        return not contains_var(self.ast)

    @property
    def canonical(self) -> str:
        return to_source(self.ast)

    # -- arithmetic ----------------------------------------------------------

    def _binary(self, other: Operand, builder, swap: bool = False) -> "WeightExpr":
        other_node = as_weight(other).ast
        if swap:
            return WeightExpr(builder(other_node, self.ast))
        return WeightExpr(builder(self.ast, other_node))

    def __add__(self, other: Operand) -> "WeightExpr":
        return self._binary(other, add)

    def __radd__(self, other: Operand) -> "WeightExpr":
        return self._binary(other, add, swap=True)

    def __sub__(self, other: Operand) -> "WeightExpr":
        return self._binary(other, sub)

    def __rsub__(self, other: Operand) -> "WeightExpr":
        return self._binary(other, sub, swap=True)

    def __mul__(self, other: Operand) -> "WeightExpr":
        return self._binary(other, mul)

    def __rmul__(self, other: Operand) -> "WeightExpr":
        return self._binary(other, mul, swap=True)

    def __truediv__(self, other: Operand) -> "WeightExpr":
        return self._binary(other, div)

    def __rtruediv__(self, other: Operand) -> "WeightExpr":
        return self._binary(other, div, swap=True)

    def __pow__(self, other: Operand) -> "WeightExpr":
        return self._binary(other, power)

    def __neg__(self) -> "WeightExpr":
        return WeightExpr(neg(self.ast))

    def __abs__(self) -> "WeightExpr":
        return WeightExpr(call("abs", self.ast))


X = WeightExpr(Var(), "x")


@lru_cache(maxsize=512)
def parse_weight(source: str) -> WeightExpr:
    """Parse a weight expression.

    Raises:
        WeightSyntaxError: with the offset of the first offending character.
        UnknownIdentifierError: for names other than x, pi, e, exp, log, abs.
    """
    if not source or not source.strip():
        raise WeightSyntaxError("Empty expression", source or "", 0)
    ast = _Parser(source).parse()
    logger.debug(f"Parsed weight {source!r} as {to_source(ast)}")
    return WeightExpr(ast, source)


def as_weight(value: "WeightExpr | str | float | int") -> WeightExpr:
    """Coerce text, numbers and expressions to a :class:`WeightExpr`."""
    if isinstance(value, WeightExpr):
        return value
    if isinstance(value, str):
        return parse_weight(value)
    if isinstance(value, (int, float, np.floating, np.integer)) and not isinstance(value, bool):
        return WeightExpr(const(float(value)))
    raise TypeError(f"Cannot interpret {value!r} as a weight expression")


def constant(value: float) -> WeightExpr:
    return WeightExpr(const(value))


def exp(expr: Operand) -> WeightExpr:
    return WeightExpr(call("exp", as_weight(expr).ast))


def log(expr: Operand) -> WeightExpr:
    return WeightExpr(call("log", as_weight(expr).ast))
