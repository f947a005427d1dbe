"""Null-string congruence analysis: integrability, expansion, type symbols.

A 2-distribution is declared by a pair of tetrad directions.  The four
totally null planes of the null tetrad split by duality:

    span(d1,d3), span(d2,d4)   self-dual      (the para-Hermite pair)
    span(d1,d4), span(d3,d2)   anti-self-dual

Integrability is checked two ways that must agree: Frobenius (Lie brackets of
the spanning vector fields stay in the span) and the connection-coefficient
witnesses; the expansion class comes from the complementary witness pair of
the same connection form.  Supported spans and their witness sets:

    span    form      integrability        expansion
    (1,3)   Gamma_42  Gamma_422, Gamma_424  Gamma_421, Gamma_423
    (2,4)   Gamma_31  Gamma_311, Gamma_313  Gamma_312, Gamma_314
    (1,4)   Gamma_41  Gamma_411, Gamma_414  Gamma_412, Gamma_413
    (2,3)   Gamma_32  Gamma_322, Gamma_323  Gamma_321, Gamma_324
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ConsensusError, MixedExpansionError
from .frame import FrameField, _Geometry
from .weyl import WeylSide, classify_complex

#: factor by which an expansion witness must clear the tolerance to count as
#: genuinely nonzero at every sample point
EXPANSION_MARGIN = 100.0

_SPAN_SIDE = {(1, 3): "SD", (2, 4): "SD", (1, 4): "ASD", (2, 3): "ASD"}
# span -> (form (a,b), integrability slots, expansion slots); paper labels
_WITNESSES = {
    (1, 3): ((4, 2), (2, 4), (1, 3)),
    (2, 4): ((3, 1), (1, 3), (2, 4)),
    (1, 4): ((4, 1), (1, 4), (2, 3)),
    (2, 3): ((3, 2), (2, 3), (1, 4)),
}


@dataclass(frozen=True)
class Distribution2:
    """Totally null 2-distribution spanned by two tetrad directions."""

    span: tuple[int, int]

    def __post_init__(self):
        key = tuple(sorted(self.span))
        if key not in _SPAN_SIDE:
            raise ValueError(f"span {self.span} is not a totally null tetrad plane")
        object.__setattr__(self, "span", key)

    @property
    def side(self) -> str:
        return _SPAN_SIDE[self.span]


@dataclass
class CongruenceReport:
    distribution: Distribution2
    integrable: bool
    frobenius_residual: float
    witness_residual: float      # max |integrability Gamma| over points
    expansion: str | None        # 'expanding' | 'nonexpanding' | None if not integrable
    expansion_witnesses: list[tuple[float, float]]  # per point (|w|, tolerance)


def _bracket_out_of_span(geo: _Geometry, span: tuple[int, int]) -> float:
    """Max out-of-span tetrad component of the Lie bracket of the spanning
    dual vectors, normalized by the in-bracket magnitude."""
    i, j = span[0] - 1, span[1] - 1
    V, W = geo.Einv[i], geo.Einv[j]
    bracket = []
    for mu in range(4):
        acc = 0.0
        for nu in range(4):
            acc += (V[nu].value * W[mu].derivative(nu).value
                    - W[nu].value * V[mu].derivative(nu).value)
        bracket.append(acc)
    beta = [sum(geo.E[a][mu].value * bracket[mu] for mu in range(4)) for a in range(4)]
    scale = max(1.0, max(abs(b) for b in beta))
    out = [abs(beta[a]) for a in range(4) if a + 1 not in span]
    return max(out) / scale


def frobenius_check(frame: FrameField, dist: Distribution2,
                    points: Iterable[Mapping[str, float]], order: int = 3) -> float:
    """Max over points of the out-of-span Lie-bracket component (relative)."""
    return max(_bracket_out_of_span(_Geometry(frame, pt, order), dist.span)
               for pt in points)


def congruence_report(frame: FrameField, dist: Distribution2,
                      points: Sequence[Mapping[str, float]],
                      atol: float = 1e-10, rtol: float = 1e-8,
                      order: int = 3) -> CongruenceReport:
    """Integrability plus expansion class of a declared distribution."""
    form, integ_slots, exp_slots = _WITNESSES[dist.span]
    a, b = form
    frob = 0.0
    wit = 0.0
    expansion_data: list[tuple[float, float]] = []
    n_exp = n_non = 0
    for pt in points:
        geo = _Geometry(frame, pt, order)
        frob = max(frob, _bracket_out_of_span(geo, dist.span))
        con = geo.connection()
        gscale = float(np.max(np.abs(con.gamma)))
        tol = atol + rtol * max(1.0, gscale)
        wit = max(wit, max(abs(con.paper(a, b, c)) for c in integ_slots))
        wmag = max(abs(con.paper(a, b, c)) for c in exp_slots)
        expansion_data.append((wmag, tol))
        if wmag < tol:
            n_non += 1
        elif wmag > EXPANSION_MARGIN * tol:
            n_exp += 1
    integrable = frob < atol + rtol and wit < atol + rtol * max(1.0, wit + 1.0)
    expansion: str | None = None
    if integrable:
        if n_non == len(points):
            expansion = "nonexpanding"
        elif n_exp == len(points):
            expansion = "expanding"
        else:
            raise MixedExpansionError(
                f"span {dist.span}: witnesses neither vanish nor stay bounded away "
                f"from zero across the sample ({n_non} vanish, {n_exp} clear the margin "
                f"of {len(points)})")
    return CongruenceReport(dist, integrable, frob, wit, expansion, expansion_data)


def expansion_class(frame: FrameField, dist: Distribution2,
                    points: Sequence[Mapping[str, float]],
                    atol: float = 1e-10, rtol: float = 1e-8) -> str:
    rep = congruence_report(frame, dist, points, atol, rtol)
    if not rep.integrable:
        raise MixedExpansionError(f"span {dist.span} is not integrable "
                                  f"(frobenius residual {rep.frobenius_residual:.3e})")
    assert rep.expansion is not None
    return rep.expansion


def _consensus(values: Sequence[str], what: str) -> str:
    first = values[0]
    if any(v != first for v in values):
        raise ConsensusError(f"{what} disagrees across sample points: {sorted(set(values))}")
    return first


def format_type_symbol(sd_type: str, sd_sups: str, asd_type: str, asd_sups: str) -> str:
    def side(t: str, sups: str) -> str:
        t = "−" if t == "-" else t
        return f"[{t}]^{{{sups}}}" if sups else f"[{t}]"
    return f"{side(sd_type, sd_sups)} ⊗ {side(asd_type, asd_sups)}"


def parse_type_symbol(symbol: str) -> tuple[tuple[str, str], tuple[str, str]]:
    """Split a symbol like '[D]^{ee} ⊗ [II]^{n}' into ((type, sups), (type, sups))."""
    parts = [p.strip() for p in symbol.replace("⊗", "x").split(" x ")]
    if len(parts) != 2:
        raise ValueError(f"malformed type symbol {symbol!r}")

    def one(p: str) -> tuple[str, str]:
        if not p.startswith("["):
            raise ValueError(f"malformed side {p!r} in {symbol!r}")
        t, _, rest = p[1:].partition("]")
        t = "-" if t in ("−", "-") else t
        sups = ""
        if rest.startswith("^{") and rest.endswith("}"):
            sups = rest[2:-1]
        elif rest:
            raise ValueError(f"malformed superscript {rest!r} in {symbol!r}")
        return t, sups

    return one(parts[0]), one(parts[1])


def type_symbol(frame: FrameField, distributions: Sequence[Distribution2],
                points: Sequence[Mapping[str, float]],
                atol: float = 1e-10, rtol: float = 1e-8, order: int = 3) -> str:
    """Compose the two-sided algebraic type with expansion superscripts of the
    declared congruences, e.g. '[D]^{ee} ⊗ [II]^{n}'.  Classification must be
    unanimous across the sample points."""
    sd_types, asd_types = [], []
    for pt in points:
        cur = _Geometry(frame, pt, order).curvature()
        tol = (atol, rtol * cur.scale)
        sd_types.append(classify_complex(WeylSide.from_ordered(cur.sd), tol))
        asd_types.append(classify_complex(WeylSide.from_ordered(cur.asd), tol))
    sd_type = _consensus(sd_types, "SD type")
    asd_type = _consensus(asd_types, "ASD type")
    sups = {"SD": "", "ASD": ""}
    for dist in distributions:
        cls = expansion_class(frame, dist, points, atol, rtol)
        sups[dist.side] += cls[0]
    return format_type_symbol(sd_type, sups["SD"], asd_type, sups["ASD"])
