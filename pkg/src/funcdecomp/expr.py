"""User-defined functions of d real arguments: a small expression language,
black-box and lookup-table handles, and the compositions (relabeling,
projection, per-coordinate rescaling, linear combination) the decomposition
machinery works with.

Evaluation conventions, chosen so the max-monomial family behaves:

* ``0^0 = 1`` (an exponent of zero makes a factor neutral);
* ``sign(0) = 0``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .core import (
    DimensionMismatchError,
    Permutation,
    Point,
    as_point,
    permute,
    project,
    validate_dimension,
    validate_mask,
)


class ParseError(ValueError):
    """Syntax or semantic error in an expression, with its position."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvaluationError(ValueError):
    """Evaluation left the function's domain (log of a non-positive number,
    lookup-table miss, non-finite result, ...)."""


# ---------------------------------------------------------------------------
# Abstract syntax tree


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 0-based


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]


Node = Num | Var | Neg | Bin | Call

_FUNCTION_ARITY = {"max": 2, "min": 2, "abs": 1, "sign": 1, "exp": 1, "ln": 1, "relu": 1}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<var>x[1-9]\d*)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over: sums of products of signed powers.

    Power binds tighter than the unary minus and associates to the right,
    so ``-x1^2`` is ``-(x1^2)`` and ``2^3^2`` is ``2^(3^2)``.
    """

    def __init__(self, text: str, d: int) -> None:
        self.tokens = _tokenize(text)
        self.d = d
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, symbol: str) -> None:
        kind, text, pos = self.peek()
        if kind != "op" or text != symbol:
            raise ParseError(f"expected {symbol!r}", pos)
        self.advance()

    def parse(self) -> Node:
        node = self.sum()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return node

    def sum(self) -> Node:
        node = self.product()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = Bin(text, node, self.product())
            else:
                return node

    def product(self) -> Node:
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = Bin(text, node, self.unary())
            else:
                return node

    def unary(self) -> Node:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return Bin("^", node, self.unary())
        return node

    def atom(self) -> Node:
        kind, text, pos = self.advance()
        if kind == "number":
            return Num(float(text))
        if kind == "var":
            index = int(text[1:])
            if index > self.d:
                raise ParseError(f"variable {text} exceeds dimension {self.d}", pos)
            return Var(index - 1)
        if kind == "name":
            arity = _FUNCTION_ARITY.get(text)
            if arity is None:
                raise ParseError(f"unknown function {text!r}", pos)
            self.expect_op("(")
            args = [self.sum()]
            while True:
                k, t, _ = self.peek()
                if k == "op" and t == ",":
                    self.advance()
                    args.append(self.sum())
                else:
                    break
            self.expect_op(")")
            if len(args) != arity:
                raise ParseError(
                    f"{text} takes {arity} argument(s), got {len(args)}", pos
                )
            return Call(text, tuple(args))
        if kind == "op" and text == "(":
            node = self.sum()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected {text!r}" if text else "unexpected end of input", pos)


def parse(text: str, d: int) -> Node:
    """Parse an expression over variables x1..xd into a syntax tree."""
    validate_dimension(d)
    return _Parser(text, d).parse()


def _sign(t: float) -> float:
    return float((t > 0.0) - (t < 0.0))


def _power(base: float, exponent: float) -> float:
    try:
        return math.pow(base, exponent)  # math.pow(0, 0) is already 1
    except (ValueError, OverflowError) as exc:
        raise EvaluationError(f"{base!r} ^ {exponent!r}: {exc}") from None


def evaluate_node(node: Node, x: Sequence[float]) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x[node.index]
    if isinstance(node, Neg):
        return -evaluate_node(node.operand, x)
    if isinstance(node, Bin):
        left = evaluate_node(node.left, x)
        right = evaluate_node(node.right, x)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            if right == 0.0:
                raise EvaluationError("division by zero")
            return left / right
        return _power(left, right)
    args = [evaluate_node(a, x) for a in node.args]
    name = node.name
    if name == "max":
        return max(args)
    if name == "min":
        return min(args)
    if name == "abs":
        return abs(args[0])
    if name == "sign":
        return _sign(args[0])
    if name == "exp":
        try:
            return math.exp(args[0])
        except OverflowError:
            raise EvaluationError(f"exp({args[0]!r}) overflows") from None
    if name == "ln":
        if args[0] <= 0.0:
            raise EvaluationError(f"ln of non-positive value {args[0]!r}")
        return math.log(args[0])
    return max(args[0], 0.0)  # relu


def format_expression(node: Node) -> str:
    """Render a tree back to source text (fully parenthesized)."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return f"x{node.index + 1}"
    if isinstance(node, Neg):
        return f"(-{format_expression(node.operand)})"
    if isinstance(node, Bin):
        return f"({format_expression(node.left)} {node.op} {format_expression(node.right)})"
    return f"{node.name}({', '.join(format_expression(a) for a in node.args)})"


# ---------------------------------------------------------------------------
# Function handles


class FunctionHandle:
    """Evaluatable representation of a function of ``d`` real arguments.

    Handles are immutable after construction and evaluation is pure, so
    they may be shared and called concurrently.
    """

    d: int
    label: str

    def __call__(self, x: Sequence[float]) -> float:
        point = as_point(x, self.d)
        value = self._evaluate(point)
        if not math.isfinite(value):
            raise EvaluationError(f"{self.label} is not finite at {point}: {value!r}")
        return value

    def _evaluate(self, x: Point) -> float:
        raise NotImplementedError


class ExpressionFunction(FunctionHandle):
    """Function defined by parsed expression text."""

    def __init__(self, text: str, d: int) -> None:
        self.d = validate_dimension(d)
        self.tree = parse(text, d)
        self.text = text
        self.label = text

    def _evaluate(self, x: Point) -> float:
        return float(evaluate_node(self.tree, x))


class NativeFunction(FunctionHandle):
    """Function backed by an arbitrary Python callable."""

    def __init__(self, fn: Callable[[Point], float], d: int, label: str = "native") -> None:
        self.d = validate_dimension(d)
        self.fn = fn
        self.label = label

    def _evaluate(self, x: Point) -> float:
        return float(self.fn(x))


class TableFunction(FunctionHandle):
    """Function known only through a finite table of point evaluations.

    The table declares exactly which points are covered; evaluation
    anywhere else is an error.  Conflicting values for one point are
    rejected up front.
    """

    def __init__(self, d: int, entries: Iterable[tuple[Sequence[float], float]],
                 label: str = "table") -> None:
        self.d = validate_dimension(d)
        self.label = label
        table: dict[Point, float] = {}
        for coords, value in entries:
            point = as_point(coords, d)
            value = float(value)
            known = table.get(point)
            if known is not None and known != value:
                raise EvaluationError(
                    f"conflicting table values {known!r} and {value!r} at {point}"
                )
            table[point] = value
        if not table:
            raise EvaluationError("empty lookup table")
        self.table = table

    def _evaluate(self, x: Point) -> float:
        try:
            return self.table[x]
        except KeyError:
            raise EvaluationError(f"point {x} is not covered by the lookup table") from None


def evaluate(fn: FunctionHandle, x: Sequence[float]) -> float:
    """Evaluate a handle at a point."""
    return fn(x)


# ---------------------------------------------------------------------------
# Compositions (lazy wrappers; no symbolic simplification)


def compose_permutation(fn: FunctionHandle, perm: Permutation) -> FunctionHandle:
    """The relabeled function x -> fn(permute(x, perm))."""
    if len(perm) != fn.d:
        raise DimensionMismatchError(f"permutation length {len(perm)} != d {fn.d}")
    out = NativeFunction(lambda x: fn(permute(x, perm)), fn.d,
                         label=f"{fn.label} o perm{perm}")
    return out


def compose_projection(fn: FunctionHandle, mask: int) -> FunctionHandle:
    """The function x -> fn(project(x, mask))."""
    validate_mask(mask, fn.d)
    return NativeFunction(lambda x: fn(project(x, mask)), fn.d,
                          label=f"{fn.label} o proj({mask:#x})")


def compose_coordinate_maps(fn: FunctionHandle, maps: Sequence["CoordinateMap"]) -> FunctionHandle:
    """The function x -> fn(h1(x1), ..., hd(xd)) for per-coordinate maps h."""
    if len(maps) != fn.d:
        raise DimensionMismatchError(f"need {fn.d} coordinate maps, got {len(maps)}")
    for h in maps:
        if not isinstance(h, CoordinateMap):
            raise TypeError(f"not a coordinate map: {h!r}")

    def apply(x: Point) -> float:
        return fn(tuple(h(c) for h, c in zip(maps, x)))

    return NativeFunction(apply, fn.d, label=f"{fn.label} o maps")


def linear_combine(terms: Sequence[tuple[float, FunctionHandle]]) -> FunctionHandle:
    """Pointwise linear combination sum(a_k * F_k)."""
    if not terms:
        raise DimensionMismatchError("need at least one term")
    d = terms[0][1].d
    for _, fn in terms:
        if fn.d != d:
            raise DimensionMismatchError(f"dimension mismatch: {fn.d} vs {d}")
    frozen = tuple((float(a), fn) for a, fn in terms)

    def apply(x: Point) -> float:
        return math.fsum(a * fn(x) for a, fn in frozen)

    return NativeFunction(apply, d, label=" + ".join(f"{a}*{fn.label}" for a, fn in frozen))


# ---------------------------------------------------------------------------
# Per-coordinate reparameterizations: bijections of the real line, continuous
# both ways, fixing zero (so rescaling never moves the reference point).


class CoordinateMap:
    label = "map"

    def __call__(self, t: float) -> float:
        raise NotImplementedError


class ScaleMap(CoordinateMap):
    def __init__(self, beta: float) -> None:
        beta = float(beta)
        if beta == 0.0 or not math.isfinite(beta):
            raise ValueError(f"scale factor must be finite and non-zero, got {beta!r}")
        self.beta = beta
        self.label = f"scale({beta})"

    def __call__(self, t: float) -> float:
        return self.beta * t


class OddPowerMap(CoordinateMap):
    """t -> sign(t) * |t|^p with p > 0; fixes zero, inverse is p -> 1/p."""

    def __init__(self, p: float) -> None:
        p = float(p)
        if not (p > 0.0 and math.isfinite(p)):
            raise ValueError(f"exponent must be finite and positive, got {p!r}")
        self.p = p
        self.label = f"odd_power({p})"

    def __call__(self, t: float) -> float:
        if t == 0.0:
            return 0.0
        return math.copysign(abs(t) ** self.p, t)


class PiecewiseLinearMap(CoordinateMap):
    """Strictly increasing piecewise-linear bijection through (0, 0).

    Defined by knots; continues with the end slopes outside the knot range.
    """

    def __init__(self, knots: Sequence[tuple[float, float]]) -> None:
        pts = sorted((float(a), float(b)) for a, b in knots)
        if len(pts) < 2:
            raise ValueError("need at least two knots")
        xs = [a for a, _ in pts]
        ys = [b for _, b in pts]
        if (0.0, 0.0) not in pts:
            raise ValueError("knots must include (0, 0)")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x1 <= x0 or y1 <= y0:
                raise ValueError("knots must be strictly increasing in both coordinates")
        self.xs = xs
        self.ys = ys
        self.label = f"piecewise_linear({pts})"

    def __call__(self, t: float) -> float:
        xs, ys = self.xs, self.ys
        if t in xs:  # exact at knots, in particular h(0) == 0.0
            return ys[xs.index(t)]
        if t < xs[0]:
            lo, hi = 0, 1
        elif t > xs[-1]:
            lo, hi = len(xs) - 2, len(xs) - 1
        else:
            hi = next(k for k, x in enumerate(xs) if x > t)
            lo = hi - 1
        slope = (ys[hi] - ys[lo]) / (xs[hi] - xs[lo])
        return ys[lo] + slope * (t - xs[lo])


def identity_map() -> CoordinateMap:
    return ScaleMap(1.0)
