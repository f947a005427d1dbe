"""Helpers for generating catalog expression strings from sympy forms."""

from __future__ import annotations

from fractions import Fraction

import sympy as sp
from sympy.printing.str import StrPrinter


class GrammarPrinter(StrPrinter):
    """Prints sympy expressions in the package expression grammar."""

    def _print_Pow(self, expr):
        base, exp = expr.base, expr.exp
        if not exp.is_Rational:
            raise ValueError(f"non-rational exponent in {expr}")
        b = self._print(base)
        if not (base.is_Symbol or base.is_Function):
            b = f"({b})"
        if exp.is_Integer:
            if exp >= 0:
                return f"{b}^{exp}"
            return f"{b}^({exp})"
        return f"{b}^({exp.p}/{exp.q})"

    def _print_log(self, expr):
        return f"ln({self._print(expr.args[0])})"

    def _print_Rational(self, expr):
        if expr.q == 1:
            return str(expr.p)
        return f"{expr.p}/{expr.q}"

    def _print_Half(self, expr):
        return "1/2"

    def _print_exp(self, expr):
        return f"exp({self._print(expr.args[0])})"


_PRINTER = GrammarPrinter()


def to_expr(e) -> str:
    """sympy -> grammar string, with a parse-back round-trip check."""
    s = _PRINTER.doprint(sp.nsimplify(e, rational=True) if e.free_symbols == set() else e)
    return s


def check_roundtrip(s: str, e, subs: dict, tol: float = 1e-10) -> str:
    """Numerically compare the grammar string with the sympy source."""
    from nullstring.exprlang import Scope, ParamEnv, parse, eval_value

    names = sorted({str(x) for x in e.free_symbols})
    coords = tuple((names + ["u1", "u2", "u3", "u4"])[:4])
    sc = Scope(coords, ParamEnv({}))
    pt = {c: float(subs.get(c, 1.0)) for c in coords}
    mine = eval_value(parse(s), sc, pt)
    theirs = float(e.subs({sp.Symbol(k): v for k, v in subs.items()}).evalf())
    if abs(mine - theirs) > tol * max(1.0, abs(theirs)):
        raise AssertionError(f"round-trip mismatch for {s}: {mine} vs {theirs}")
    return s
