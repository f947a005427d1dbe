"""Parser, AST and jet evaluation for the scalar-expression language.

All catalog metrics, generator functions and user expressions are written in
this little language:

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' rational)?
    base   := number | ident | func '(' expr ')' | '(' expr ')' | '-' base
            | 'D' '(' ident ',' coord {',' coord} ')'
            | 'antideriv' '(' coord ',' ident ')'
    func   := exp | ln | sqrt | atan | sin | cos

Numbers are exact decimals or rationals ``p/q``; ``^`` takes a rational
constant exponent only, so jet evaluation stays closed.  ``D(name, c, ...)``
is the derivative marker: the partial of a named sub-expression, resolved at
evaluation time by jet shifting (never symbolically).  ``antideriv(c, name)``
denotes an unevaluated antiderivative of the named integrand along coordinate
``c``; only its derivatives are meaningful and the unknown Taylor slots are
poisoned with NaN so accidental use cannot pass silently.

Identifiers resolve against the enclosing document: coordinates first, then
parameters, then named sub-expressions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .errors import DomainError, ExprSyntaxError, OrderMismatchError, UndeclaredIdentifierError
from .jets import INDEX_POS, INDICES, JET_SIZE, MAX_ORDER, N_VARS, Jet, jet_compose_unary

FUNCTIONS = ("exp", "ln", "sqrt", "atan", "sin", "cos")
RESERVED = set(FUNCTIONS) | {"D", "antideriv"}


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Expr:
    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True)
class Name(Expr):
    ident: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # '+', '-', '*', '/'
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Fraction


@dataclass(frozen=True)
class Func(Expr):
    fname: str
    arg: Expr


@dataclass(frozen=True)
class Deriv(Expr):
    """Derivative marker: partial of named sub-expression w.r.t. coordinates."""

    target: str
    coords: tuple[str, ...]


@dataclass(frozen=True)
class Antideriv(Expr):
    """Unevaluated antiderivative of a named integrand along one coordinate."""

    coord: str
    target: str


def const(v) -> Const:
    return Const(v if isinstance(v, Fraction) else Fraction(v))


def name(n: str) -> Name:
    return Name(n)


def add(a: Expr, b: Expr) -> Expr:
    return BinOp("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    return BinOp("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    return BinOp("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    return BinOp("/", a, b)


# --------------------------------------------------------------------------
# Tokenizer / parser
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num' | 'ident' | 'op' | 'end'
    text: str
    line: int
    col: int


def _tokenize(source: str) -> Iterator[_Token]:
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        start_col = col
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            j = i
            seen_exp = False
            while j < n:
                c = source[j]
                if c.isdigit() or c == ".":
                    j += 1
                elif c in "eE" and j + 1 < n and (source[j + 1].isdigit() or source[j + 1] in "+-") \
                        and not seen_exp and any(d.isdigit() for d in source[i:j]):
                    seen_exp = True
                    j += 2 if source[j + 1] in "+-" else 1
                else:
                    break
            text = source[i:j]
            col += j - i
            i = j
            yield _Token("num", text, line, start_col)
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            col += j - i
            i = j
            yield _Token("ident", text, line, start_col)
            continue
        if ch in "+-*/^(),":
            i += 1
            col += 1
            yield _Token("op", ch, line, start_col)
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", line, start_col)
    yield _Token("end", "", line, col)


def _fraction_from_decimal(text: str, tok: _Token) -> Fraction:
    try:
        return Fraction(Decimal(text))
    except InvalidOperation:
        raise ExprSyntaxError(f"bad numeric literal {text!r}", tok.line, tok.col) from None


class _Parser:
    def __init__(self, source: str):
        self._tokens = list(_tokenize(source))
        self._pos = 0

    def _peek(self) -> _Token:
        return self._tokens[self._pos]

    def _next(self) -> _Token:
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def _expect(self, text: str) -> _Token:
        tok = self._next()
        if tok.text != text:
            raise ExprSyntaxError(f"expected {text!r}, found {tok.text or 'end of input'!r}",
                                  tok.line, tok.col)
        return tok

    def parse(self) -> Expr:
        e = self._expr()
        tok = self._peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"trailing input {tok.text!r}", tok.line, tok.col)
        return e

    def _expr(self) -> Expr:
        e = self._term()
        while self._peek().text in ("+", "-"):
            op = self._next().text
            e = BinOp(op, e, self._term())
        return e

    def _term(self) -> Expr:
        e = self._factor()
        while self._peek().text in ("*", "/"):
            op = self._next().text
            e = BinOp(op, e, self._factor())
        return e

    def _factor(self) -> Expr:
        base = self._base()
        if self._peek().text == "^":
            self._next()
            return Pow(base, self._rational_exponent())
        return base

    def _rational_exponent(self) -> Fraction:
        # 'x^2/4' must mean (x^2)/4, so a '/'-rational exponent requires
        # parentheses: x^(1/2); bare exponents are single signed numbers.
        parenthesized = False
        if self._peek().text == "(":
            self._next()
            parenthesized = True
        sign = 1
        if self._peek().text == "-":
            self._next()
            sign = -1
        tok = self._next()
        if tok.kind != "num":
            raise ExprSyntaxError("exponent must be a rational constant", tok.line, tok.col)
        value = _fraction_from_decimal(tok.text, tok)
        if parenthesized and self._peek().text == "/":
            self._next()
            den = self._next()
            if den.kind != "num":
                raise ExprSyntaxError("exponent denominator must be numeric", den.line, den.col)
            value /= _fraction_from_decimal(den.text, den)
        if parenthesized:
            self._expect(")")
        return sign * value

    def _base(self) -> Expr:
        tok = self._next()
        if tok.text == "-":
            # unary minus binds looser than '^': -x^2 means -(x^2); write
            # (-x)^2 to exponentiate a negation
            return Neg(self._factor())
        if tok.text == "(":
            e = self._expr()
            self._expect(")")
            return e
        if tok.kind == "num":
            return Const(_fraction_from_decimal(tok.text, tok))
        if tok.kind == "ident":
            if tok.text in FUNCTIONS:
                self._expect("(")
                arg = self._expr()
                self._expect(")")
                return Func(tok.text, arg)
            if tok.text == "D":
                self._expect("(")
                target = self._ident()
                coords = []
                while self._peek().text == ",":
                    self._next()
                    coords.append(self._ident())
                self._expect(")")
                if not coords:
                    raise ExprSyntaxError("D(...) needs at least one coordinate",
                                          tok.line, tok.col)
                return Deriv(target, tuple(coords))
            if tok.text == "antideriv":
                self._expect("(")
                coord = self._ident()
                self._expect(",")
                target = self._ident()
                self._expect(")")
                return Antideriv(coord, target)
            return Name(tok.text)
        raise ExprSyntaxError(f"unexpected token {tok.text or 'end of input'!r}",
                              tok.line, tok.col)

    def _ident(self) -> str:
        tok = self._next()
        if tok.kind != "ident" or tok.text in RESERVED:
            raise ExprSyntaxError("expected identifier", tok.line, tok.col)
        return tok.text


def parse(source: str) -> Expr:
    """Parse expression source into an AST; raises ExprSyntaxError with line/column."""
    return _Parser(source).parse()


# --------------------------------------------------------------------------
# Pretty printer (round-trips through parse up to redundant parentheses)
# --------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "pow": 4, "atom": 5}


def _frac_str(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def pretty(e: Expr) -> str:
    text, _ = _pretty(e)
    return text


def _pretty(e: Expr) -> tuple[str, int]:
    if isinstance(e, Const):
        if e.value < 0:
            return f"(-{_frac_str(-e.value)})", _PREC["atom"]
        if e.value.denominator != 1:
            return f"({_frac_str(e.value)})", _PREC["atom"]
        return _frac_str(e.value), _PREC["atom"]
    if isinstance(e, Name):
        return e.ident, _PREC["atom"]
    if isinstance(e, Neg):
        inner, prec = _pretty(e.arg)
        if prec < _PREC["neg"]:
            inner = f"({inner})"
        return f"-{inner}", _PREC["neg"]
    if isinstance(e, BinOp):
        lhs, lp = _pretty(e.lhs)
        rhs, rp = _pretty(e.rhs)
        prec = _PREC[e.op]
        if lp < prec:
            lhs = f"({lhs})"
        # right operand needs parens at equal precedence: a-(b-c), a/(b*c)
        if rp <= prec:
            rhs = f"({rhs})"
        return f"{lhs} {e.op} {rhs}", prec
    if isinstance(e, Pow):
        base, bp = _pretty(e.base)
        if bp < _PREC["atom"]:
            base = f"({base})"
        exp = _frac_str(e.exponent)
        if e.exponent < 0 or e.exponent.denominator != 1:
            exp = f"({exp})"
        return f"{base}^{exp}", _PREC["pow"]
    if isinstance(e, Func):
        return f"{e.fname}({pretty(e.arg)})", _PREC["atom"]
    if isinstance(e, Deriv):
        return f"D({e.target}, {', '.join(e.coords)})", _PREC["atom"]
    if isinstance(e, Antideriv):
        return f"antideriv({e.coord}, {e.target})", _PREC["atom"]
    raise TypeError(f"not an Expr: {e!r}")


# --------------------------------------------------------------------------
# Scope: coordinates + parameters + named sub-expressions
# --------------------------------------------------------------------------


class ParamEnv:
    """Exact parameter values (Fractions), immutable after construction."""

    def __init__(self, values: Mapping[str, Fraction | int | str]):
        self._values = {k: v if isinstance(v, Fraction) else Fraction(v)
                        for k, v in values.items()}

    def __contains__(self, key: str) -> bool:
        return key in self._values

    def __getitem__(self, key: str) -> Fraction:
        return self._values[key]

    def items(self):
        return self._values.items()

    def as_floats(self) -> dict[str, float]:
        return {k: float(v) for k, v in self._values.items()}


@dataclass
class Scope:
    """Resolution context for a document: chart coordinates, parameters, named defs."""

    coords: tuple[str, ...]
    params: ParamEnv
    defs: dict[str, Expr] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.coords) != N_VARS:
            raise ValueError(f"chart must have exactly {N_VARS} coordinates")
        self.coord_index = {c: i for i, c in enumerate(self.coords)}

    def resolve_kind(self, ident: str) -> str:
        if ident in self.coord_index:
            return "coord"
        if ident in self.params:
            return "param"
        if ident in self.defs:
            return "def"
        raise UndeclaredIdentifierError(f"undeclared identifier {ident!r}")

    def validate(self, e: Expr) -> None:
        """Check every identifier in e resolves; raises UndeclaredIdentifierError."""
        if isinstance(e, Name):
            self.resolve_kind(e.ident)
        elif isinstance(e, Neg):
            self.validate(e.arg)
        elif isinstance(e, BinOp):
            self.validate(e.lhs)
            self.validate(e.rhs)
        elif isinstance(e, Pow):
            self.validate(e.base)
        elif isinstance(e, Func):
            self.validate(e.arg)
        elif isinstance(e, (Deriv, Antideriv)):
            if e.target not in self.defs:
                raise UndeclaredIdentifierError(f"no named expression {e.target!r}")
            coords = e.coords if isinstance(e, Deriv) else (e.coord,)
            for c in coords:
                if c not in self.coord_index:
                    raise UndeclaredIdentifierError(f"{c!r} is not a chart coordinate")
            self.validate(self.defs[e.target])

    def free_coords(self, e: Expr) -> frozenset[str]:
        """Over-approximate set of chart coordinates the expression depends on."""
        if isinstance(e, Name):
            if e.ident in self.coord_index:
                return frozenset((e.ident,))
            if e.ident in self.defs:
                return self.free_coords(self.defs[e.ident])
            return frozenset()
        if isinstance(e, Neg):
            return self.free_coords(e.arg)
        if isinstance(e, BinOp):
            return self.free_coords(e.lhs) | self.free_coords(e.rhs)
        if isinstance(e, Pow):
            return self.free_coords(e.base)
        if isinstance(e, Func):
            return self.free_coords(e.arg)
        if isinstance(e, Deriv):
            return self.free_coords(self.defs[e.target])
        if isinstance(e, Antideriv):
            return self.free_coords(self.defs[e.target]) | frozenset((e.coord,))
        return frozenset()


def subst(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Rewrite Name nodes per mapping (used for gauge/coordinate transformations)."""
    if isinstance(e, Name):
        return mapping.get(e.ident, e)
    if isinstance(e, Neg):
        return Neg(subst(e.arg, mapping))
    if isinstance(e, BinOp):
        return BinOp(e.op, subst(e.lhs, mapping), subst(e.rhs, mapping))
    if isinstance(e, Pow):
        return Pow(subst(e.base, mapping), e.exponent)
    if isinstance(e, Func):
        return Func(e.fname, subst(e.arg, mapping))
    return e


# --------------------------------------------------------------------------
# Jet evaluation
# --------------------------------------------------------------------------


class _EvalContext:
    def __init__(self, scope: Scope, point: Mapping[str, float]):
        self.scope = scope
        self.point = {c: float(point[c]) for c in scope.coords}
        self.cache: dict[tuple[str, int], Jet] = {}


def eval_jet(e: Expr, scope: Scope, point: Mapping[str, float], order: int) -> Jet:
    """Truncated Taylor expansion of e at the point, to the given order (0-4)."""
    if not 0 <= order <= MAX_ORDER:
        raise OrderMismatchError(f"order {order} outside 0..{MAX_ORDER}")
    scope.validate(e)
    return _eval(e, _EvalContext(scope, point), order)


def eval_value(e: Expr, scope: Scope, point: Mapping[str, float]) -> float:
    return eval_jet(e, scope, point, 0).value


def _eval(e: Expr, ctx: _EvalContext, order: int) -> Jet:
    scope = ctx.scope
    if isinstance(e, Const):
        return Jet.constant(float(e.value), order)
    if isinstance(e, Name):
        kind = scope.resolve_kind(e.ident)
        if kind == "coord":
            i = scope.coord_index[e.ident]
            return Jet.variable(i, ctx.point[e.ident], order)
        if kind == "param":
            return Jet.constant(float(scope.params[e.ident]), order)
        key = (e.ident, order)
        if key not in ctx.cache:
            ctx.cache[key] = _eval(scope.defs[e.ident], ctx, order)
        return ctx.cache[key]
    if isinstance(e, Neg):
        return -_eval(e.arg, ctx, order)
    if isinstance(e, BinOp):
        a = _eval(e.lhs, ctx, order)
        b = _eval(e.rhs, ctx, order)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        return a / b
    if isinstance(e, Pow):
        return _eval(e.base, ctx, order) ** e.exponent
    if isinstance(e, Func):
        return jet_compose_unary(e.fname, _eval(e.arg, ctx, order))
    if isinstance(e, Deriv):
        depth = len(e.coords)
        if order + depth > MAX_ORDER:
            raise OrderMismatchError(
                f"D-marker of depth {depth} at order {order} exceeds max jet order {MAX_ORDER}")
        j = _eval(Name(e.target), ctx, order + depth)
        for c in e.coords:
            j = j.derivative(scope.coord_index[c])
        return j
    if isinstance(e, Antideriv):
        return _eval_antideriv(e, ctx, order)
    raise TypeError(f"not an Expr: {e!r}")


def _eval_antideriv(e: Antideriv, ctx: _EvalContext, order: int) -> Jet:
    """Jet of an unevaluated antiderivative: slots reachable by at least one
    differentiation along e.coord come from the integrand; slots provably zero
    (a differentiated coordinate absent from the integrand) are zero; the rest,
    including the value itself, are NaN poison."""
    scope = ctx.scope
    var = scope.coord_index[e.coord]
    free = scope.free_coords(scope.defs[e.target])
    out = np.full(JET_SIZE[order], np.nan)
    if order >= 1:
        inner = _eval(Name(e.target), ctx, order - 1)
        for i, alpha in enumerate(INDICES[order]):
            if alpha[var] >= 1:
                beta = list(alpha)
                beta[var] -= 1
                out[i] = inner.coeffs[INDEX_POS[order - 1][tuple(beta)]] / alpha[var]
                continue
    for i, alpha in enumerate(INDICES[order]):
        if alpha[var] == 0 and any(
            a >= 1 and scope.coords[v] not in free for v, a in enumerate(alpha)
        ):
            out[i] = 0.0
    return Jet(order, out)


def check_finite(j: Jet, what: str = "expression") -> Jet:
    if not np.all(np.isfinite(j.coeffs)):
        raise DomainError(
            f"{what}: non-finite Taylor slot (likely the value of an unevaluated "
            "antiderivative leaked into a computation)")
    return j
