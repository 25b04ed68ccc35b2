"""Small expression language for problem data functions.

Weights are scalar functions of the radius ``t``; nonlinearities are scalar
functions of the pair ``(u, v)``.  Both are written in a tiny arithmetic
language::

    expr   = term { ("+" | "-") term }
    term   = factor { ("*" | "/") factor }
    factor = "-" factor | power
    power  = atom [ "^" factor ]
    atom   = NUMBER | NAME | NAME "(" expr { "," expr } ")" | "(" expr ")"

``^`` binds tightest and associates to the right; unary minus binds below
``^``, so ``-t^2`` means ``-(t^2)``.  Built-in functions: ``exp``, ``log``,
``sqrt`` and two-argument ``pow``.

Besides free-form expressions there are named preset families with closed
forms; a preset-backed spec evaluates through the closed form but keeps an
equivalent AST so both paths can be compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Union

import numpy as np

from .errors import (
    EvaluationDomainError,
    ExpressionSyntaxError,
    UnknownIdentifierError,
)

__all__ = [
    "FuncSpec1D",
    "FuncSpec2D",
    "MonotoneReport",
    "MonotoneViolation",
    "check_c1_monotone",
    "parse_func_1d",
    "parse_func_2d",
    "to_source",
]

MONOTONE_TOL = 1e-12


# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]


Node = Union[Num, Var, Neg, BinOp, Call]


def _safe_log(x):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(x)


def _safe_sqrt(x):
    with np.errstate(invalid="ignore"):
        return np.sqrt(x)


def _safe_pow(x, y):
    with np.errstate(all="ignore"):
        return np.power(x, y)


def _safe_exp(x):
    with np.errstate(over="ignore"):
        return np.exp(x)


# name -> (arity, vectorized implementation)
INTRINSICS: dict[str, tuple[int, Callable]] = {
    "exp": (1, _safe_exp),
    "log": (1, _safe_log),
    "sqrt": (1, _safe_sqrt),
    "pow": (2, _safe_pow),
}


# --------------------------------------------------------------------------
# Lexer / parser

_TOKEN_CHARS = set("+-*/^(),")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    offset: int


def _tokenize(source: str) -> Iterator[_Token]:
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_CHARS:
            yield _Token("op", ch, i)
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            start = i
            while i < n and (source[i].isdigit() or source[i] == "."):
                i += 1
            if i < n and source[i] in "eE":
                j = i + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    i = j
                    while i < n and source[i].isdigit():
                        i += 1
            text = source[start:i]
            try:
                float(text)
            except ValueError:
                raise ExpressionSyntaxError(f"bad number {text!r}", start) from None
            yield _Token("num", text, start)
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            yield _Token("name", source[start:i], start)
            continue
        raise ExpressionSyntaxError(f"unexpected character {ch!r}", i)
    yield _Token("end", "", n)


class _Parser:
    def __init__(self, source: str, variables: frozenset[str]):
        self.source = source
        self.variables = variables
        self.tokens = list(_tokenize(source))
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != text:
            raise ExpressionSyntaxError(
                f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.offset
            )
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExpressionSyntaxError(f"unexpected trailing {tok.text!r}", tok.offset)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            return BinOp("^", base, self.factor())
        return base

    def atom(self) -> Node:
        tok = self.advance()
        if tok.kind == "num":
            return Num(float(tok.text))
        if tok.kind == "name":
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text == "(":
                self.advance()
                args = [self.expr()]
                while self.peek().kind == "op" and self.peek().text == ",":
                    self.advance()
                    args.append(self.expr())
                self.expect(")")
                if tok.text not in INTRINSICS:
                    raise UnknownIdentifierError(
                        f"unknown function {tok.text!r}", tok.offset
                    )
                arity = INTRINSICS[tok.text][0]
                if len(args) != arity:
                    raise ExpressionSyntaxError(
                        f"{tok.text} takes {arity} argument(s), got {len(args)}",
                        tok.offset,
                    )
                return Call(tok.text, tuple(args))
            if tok.text not in self.variables:
                raise UnknownIdentifierError(
                    f"unknown identifier {tok.text!r}", tok.offset
                )
            return Var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExpressionSyntaxError(
            f"expected a value, found {tok.text or 'end of input'!r}", tok.offset
        )


def _parse(source: str, variables: frozenset[str]) -> Node:
    if not isinstance(source, str):
        raise ExpressionSyntaxError("expression source must be a string", 0)
    return _Parser(source, variables).parse()


# --------------------------------------------------------------------------
# Printing (minimal parentheses; parse(to_source(ast)) reproduces ast)

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_NEG, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 9


def _level(node: Node) -> int:
    if isinstance(node, BinOp):
        if node.op in "+-":
            return _LEVEL_ADD
        if node.op in "*/":
            return _LEVEL_MUL
        return _LEVEL_POW
    if isinstance(node, Neg):
        return _LEVEL_NEG
    return _LEVEL_ATOM


def _emit(node: Node, minimum: int) -> str:
    text = _emit_bare(node)
    if _level(node) < minimum:
        return f"({text})"
    return text


def _emit_bare(node: Node) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + _emit(node.operand, _LEVEL_NEG)
    if isinstance(node, Call):
        return node.name + "(" + ", ".join(_emit(a, 0) for a in node.args) + ")"
    if isinstance(node, BinOp):
        if node.op in "+-":
            return _emit(node.left, _LEVEL_ADD) + node.op + _emit(node.right, _LEVEL_MUL)
        if node.op in "*/":
            return _emit(node.left, _LEVEL_MUL) + node.op + _emit(node.right, _LEVEL_NEG)
        # ^ : left must be an atom, right may be unary (right-associative)
        return _emit(node.left, _LEVEL_ATOM) + "^" + _emit(node.right, _LEVEL_NEG)
    raise TypeError(f"not an AST node: {node!r}")


def to_source(node: Node) -> str:
    """Render an AST back to source text with minimal parentheses."""
    return _emit_bare(node)


# --------------------------------------------------------------------------
# Evaluation


def _eval_node(node: Node, env: dict[str, np.ndarray]) -> np.ndarray:
    if isinstance(node, Num):
        return np.float64(node.value)
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -_eval_node(node.operand, env)
    if isinstance(node, Call):
        fn = INTRINSICS[node.name][1]
        return fn(*(_eval_node(a, env) for a in node.args))
    if isinstance(node, BinOp):
        left = _eval_node(node.left, env)
        right = _eval_node(node.right, env)
        with np.errstate(all="ignore"):
            if node.op == "+":
                return left + right
            if node.op == "-":
                return left - right
            if node.op == "*":
                return left * right
            if node.op == "/":
                return left / right
            return np.power(left, right)
    raise TypeError(f"not an AST node: {node!r}")


def _first_bad(values: np.ndarray, mask: np.ndarray, *coords) -> tuple:
    idx = np.unravel_index(np.argmax(mask), np.shape(mask)) if np.ndim(mask) else ()
    return tuple(float(np.asarray(c)[idx]) for c in coords)


# --------------------------------------------------------------------------
# Preset closed forms

_PRESETS_1D = {
    # tag -> (params, closed form, ast builder)
    "constant": 1,
    "power": 2,
    "decay": 2,
    "exponential": 2,
}

_PRESETS_2D = {
    "constant": 1,
    "sum_power": 2,
    "product_power": 3,
}


def _preset_value_1d(tag: str, params: tuple[float, ...], t: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        if tag == "constant":
            (c,) = params
            return np.full_like(np.asarray(t, dtype=float), c)
        if tag == "power":
            c, alpha = params
            return c * np.power(t, alpha)
        if tag == "decay":
            c, alpha = params
            return c / np.power(1.0 + t, alpha)
        c, beta = params  # exponential
        return c * np.exp(beta * np.asarray(t, dtype=float))


def _preset_ast_1d(tag: str, params: tuple[float, ...]) -> Node:
    t = Var("t")
    if tag == "constant":
        return Num(params[0])
    if tag == "power":
        c, alpha = params
        return BinOp("*", Num(c), BinOp("^", t, Num(alpha)))
    if tag == "decay":
        c, alpha = params
        return BinOp("/", Num(c), BinOp("^", BinOp("+", Num(1.0), t), Num(alpha)))
    c, beta = params
    return BinOp("*", Num(c), Call("exp", (BinOp("*", Num(beta), t),)))


def _preset_value_2d(
    tag: str, params: tuple[float, ...], u: np.ndarray, v: np.ndarray
) -> np.ndarray:
    with np.errstate(all="ignore"):
        if tag == "constant":
            (c,) = params
            return np.full_like(np.asarray(u, dtype=float) + np.asarray(v, dtype=float), c)
        if tag == "sum_power":
            c, gamma = params
            return c * np.power(np.asarray(u, dtype=float) + v, gamma)
        c, alpha, beta = params  # product_power
        return c * np.power(u, alpha) * np.power(v, beta)


def _preset_ast_2d(tag: str, params: tuple[float, ...]) -> Node:
    u, v = Var("u"), Var("v")
    if tag == "constant":
        return Num(params[0])
    if tag == "sum_power":
        c, gamma = params
        return BinOp("*", Num(c), BinOp("^", BinOp("+", u, v), Num(gamma)))
    c, alpha, beta = params
    return BinOp(
        "*",
        BinOp("*", Num(c), BinOp("^", u, Num(alpha))),
        BinOp("^", v, Num(beta)),
    )


def _check_params(tag: str, params: tuple[float, ...], table: dict[str, int]) -> tuple:
    if tag not in table:
        raise ValueError(f"unknown preset {tag!r}; choose from {sorted(table)}")
    params = tuple(float(p) for p in params)
    if len(params) != table[tag]:
        raise ValueError(f"preset {tag!r} takes {table[tag]} parameter(s)")
    if not all(math.isfinite(p) for p in params):
        raise ValueError(f"preset {tag!r} parameters must be finite, got {params}")
    return params


# --------------------------------------------------------------------------
# Public function specs


@dataclass(frozen=True)
class FuncSpec1D:
    """Scalar function of the radius ``t >= 0``.

    Either parsed from source text (``preset is None``) or built from a
    preset family, in which case calls go through the closed form and the
    stored AST mirrors it.
    """

    source: str
    ast: Node
    preset: tuple | None = None  # (tag, *params)

    @classmethod
    def parse(cls, source: str) -> "FuncSpec1D":
        return cls(source=source, ast=_parse(source, frozenset({"t"})))

    @classmethod
    def from_preset(cls, tag: str, *params: float) -> "FuncSpec1D":
        params = _check_params(tag, params, _PRESETS_1D)
        ast = _preset_ast_1d(tag, params)
        return cls(source=to_source(ast), ast=ast, preset=(tag, *params))

    @classmethod
    def constant(cls, c: float) -> "FuncSpec1D":
        return cls.from_preset("constant", c)

    @classmethod
    def power(cls, c: float, alpha: float) -> "FuncSpec1D":
        return cls.from_preset("power", c, alpha)

    @classmethod
    def decay(cls, c: float, alpha: float) -> "FuncSpec1D":
        return cls.from_preset("decay", c, alpha)

    @classmethod
    def exponential(cls, c: float, beta: float) -> "FuncSpec1D":
        return cls.from_preset("exponential", c, beta)

    def ast_value(self, t):
        """Evaluate through the AST regardless of preset backing."""
        t = np.asarray(t, dtype=float)
        return np.asarray(_eval_node(self.ast, {"t": t}), dtype=float)

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.preset is not None:
            values = _preset_value_1d(self.preset[0], self.preset[1:], t)
        else:
            values = np.asarray(_eval_node(self.ast, {"t": t}), dtype=float)
        values = np.broadcast_to(values, t.shape).astype(float, copy=True)
        bad = ~np.isfinite(values)
        if bad.any():
            (where,) = _first_bad(values, bad, t)
            raise EvaluationDomainError(
                f"{self.source!r} is not finite at t={where!r}", (where,)
            )
        return values[0] if scalar else values


@dataclass(frozen=True)
class FuncSpec2D:
    """Scalar function of ``(u, v)`` on the closed first quadrant.

    Evaluation rejects non-finite and negative results; intermediate
    negatives inside the expression are fine.
    """

    source: str
    ast: Node
    preset: tuple | None = None

    @classmethod
    def parse(cls, source: str) -> "FuncSpec2D":
        return cls(source=source, ast=_parse(source, frozenset({"u", "v"})))

    @classmethod
    def from_preset(cls, tag: str, *params: float) -> "FuncSpec2D":
        params = _check_params(tag, params, _PRESETS_2D)
        ast = _preset_ast_2d(tag, params)
        return cls(source=to_source(ast), ast=ast, preset=(tag, *params))

    @classmethod
    def constant(cls, c: float) -> "FuncSpec2D":
        return cls.from_preset("constant", c)

    @classmethod
    def sum_power(cls, c: float, gamma: float) -> "FuncSpec2D":
        return cls.from_preset("sum_power", c, gamma)

    @classmethod
    def product_power(cls, c: float, alpha: float, beta: float) -> "FuncSpec2D":
        return cls.from_preset("product_power", c, alpha, beta)

    def ast_value(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return np.asarray(_eval_node(self.ast, {"u": u, "v": v}), dtype=float)

    def __call__(self, u, v):
        scalar = np.ndim(u) == 0 and np.ndim(v) == 0
        u, v = np.atleast_1d(np.asarray(u, dtype=float)), np.atleast_1d(
            np.asarray(v, dtype=float)
        )
        u, v = np.broadcast_arrays(u, v)
        if self.preset is not None:
            values = _preset_value_2d(self.preset[0], self.preset[1:], u, v)
        else:
            values = np.asarray(_eval_node(self.ast, {"u": u, "v": v}), dtype=float)
        values = np.broadcast_to(values, u.shape).astype(float, copy=True)
        bad = ~np.isfinite(values)
        if bad.any():
            where = _first_bad(values, bad, u, v)
            raise EvaluationDomainError(
                f"{self.source!r} is not finite at (u, v)={where!r}", where
            )
        neg = values < 0.0
        if neg.any():
            where = _first_bad(values, neg, u, v)
            raise EvaluationDomainError(
                f"{self.source!r} is negative at (u, v)={where!r}", where
            )
        return values[0] if scalar else values


def parse_func_1d(source: str) -> FuncSpec1D:
    return FuncSpec1D.parse(source)


def parse_func_2d(source: str) -> FuncSpec2D:
    return FuncSpec2D.parse(source)


# --------------------------------------------------------------------------
# Monotonicity check for nonlinearities


@dataclass(frozen=True)
class MonotoneViolation:
    axis: str  # "u" or "v"
    location: tuple[float, float]  # lattice point where the decrease starts
    decrease: float  # negative difference observed


@dataclass(frozen=True)
class MonotoneReport:
    is_nondecreasing_u: bool
    is_nondecreasing_v: bool
    worst_violation: MonotoneViolation | None
    samples_used: int


def check_c1_monotone(
    func: FuncSpec2D,
    box: tuple[float, float] = (10.0, 10.0),
    n: int = 50,
) -> MonotoneReport:
    """Sample ``func`` on an ``n x n`` lattice over ``[0, box[0]] x [0, box[1]]``
    and test coordinatewise monotonicity up to a ``1e-12`` tolerance.

    Evaluation domain errors propagate with the offending lattice point
    attached by the evaluation itself.
    """
    if n < 2:
        raise ValueError("lattice needs at least 2 points per axis")
    us = np.linspace(0.0, float(box[0]), n)
    vs = np.linspace(0.0, float(box[1]), n)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    values = func(uu, vv)

    du = np.diff(values, axis=0)  # increments as u grows
    dv = np.diff(values, axis=1)
    ok_u = bool((du >= -MONOTONE_TOL).all())
    ok_v = bool((dv >= -MONOTONE_TOL).all())

    worst = None
    candidates = []
    if not ok_u:
        i, j = np.unravel_index(np.argmin(du), du.shape)
        candidates.append(
            MonotoneViolation("u", (float(us[i]), float(vs[j])), float(du[i, j]))
        )
    if not ok_v:
        i, j = np.unravel_index(np.argmin(dv), dv.shape)
        candidates.append(
            MonotoneViolation("v", (float(us[i]), float(vs[j])), float(dv[i, j]))
        )
    if candidates:
        worst = min(candidates, key=lambda c: c.decrease)
    return MonotoneReport(
        is_nondecreasing_u=ok_u,
        is_nondecreasing_v=ok_v,
        worst_violation=worst,
        samples_used=n * n,
    )
