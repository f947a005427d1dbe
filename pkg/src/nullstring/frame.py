"""Null-tetrad geometry: metric, connection and curvature from a coframe.

Everything is computed pointwise through jets of the tetrad component
expressions: exterior derivatives and curvature 2-forms are jet shifts and
products, never symbolic derivatives.  Tetrad indices are 0-based in code;
paper-style labels (1..4, as in ``Gamma_{423}``) are 1-based and used at the
reporting surface.

Sign and orientation conventions for the structure equations are not fully
fixed by the narrative sources, so they are pinned here by calibration
constants (CONN_SIGN, the bivector normalizations, RICCI/SCALAR signs) that
reproduce the printed connection forms and curvature components of the three
coordinate families; the test suite re-verifies every one of those printed
targets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateTetradError, DomainError
from .exprlang import Expr, ParamEnv, Scope, check_finite, eval_jet
from .jets import Jet

N = 4

# Tetrad metric for ds^2 = 2 e^1 e^2 + 2 e^3 e^4 (0-based: pairs (0,1), (2,3)).
ETA = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, 1.0, 0.0],
])
_SWAP = (1, 0, 3, 2)  # index raising/lowering permutation for ETA

# --- calibrated convention constants (frozen against printed formulas) -----
# First structure equations are solved as de^a + C * Gamma^a_b ^ e^b = 0 with
# the sign below; it reproduces Gamma_42 = (1/x) e^3 for the expanding
# para-Hermite tetrad and Gamma_42 = Gamma_31 = 0 for the double-null tetrad.
CONN_SIGN = 1.0
# Reported curvature scalar / traceless Ricci signs (R = -4*Lambda on Einstein
# records) and Weyl-block normalizations; the double-null-coordinates family
# with a generic (non-Einstein) generator pins all of them, see tests/test_frame.py.
SCALAR_SIGN = -1.0
CAB_SIGN = -1.0
WEYL_NORM_SD = (2.0, 2.0, -2.0, -2.0, 2.0)   # divisors for C^(5..1)
WEYL_NORM_ASD = (2.0, 2.0, -2.0, -2.0, 2.0)  # divisors for Cdot^(5..1)


def _antisym(i: int, j: int) -> np.ndarray:
    b = np.zeros((N, N))
    b[i, j] = 1.0
    b[j, i] = -1.0
    return b


# Bivectors (upper tetrad indices) attached to the four totally null planes.
# span(d1,d3) and span(d2,d4) are the self-dual planes, span(d1,d4) and
# span(d3,d2) the anti-self-dual ones (paper labels).
_B1 = _antisym(2, 0)                          # raised e4^e2  <-> span(d1,d3)
_B2 = _antisym(1, 3)                          # raised e1^e3  <-> span(d2,d4)
_B3 = 0.5 * (_antisym(1, 0) + _antisym(3, 2))  # raised (e1^e2 + e3^e4)/2
_D1 = _antisym(0, 3)                          # raised e2^e3  <-> span(d1,d4)
_D2 = _antisym(2, 1)                          # raised e4^e1  <-> span(d3,d2)
_D3 = 0.5 * (_antisym(3, 2) - _antisym(1, 0))  # raised (e3^e4 - e1^e2)/2

_SD_SLOTS = ((_B1, _B1), (_B1, _B3), (_B1, _B2), (_B2, _B3), (_B2, _B2))
_ASD_SLOTS = ((_D1, _D1), (_D1, _D3), (_D1, _D2), (_D2, _D3), (_D2, _D2))


@dataclass
class FrameField:
    """Coordinate chart plus a null coframe of four 1-forms (component Exprs)."""

    scope: Scope
    tetrad: Sequence[Sequence[Expr]]  # tetrad[a][mu], a = 0..3, mu over chart
    name: str = ""

    def __post_init__(self):
        if len(self.tetrad) != N or any(len(row) != N for row in self.tetrad):
            raise ValueError("tetrad must be a 4x4 array of expressions")

    @property
    def chart(self) -> tuple[str, ...]:
        return self.scope.coords

    @property
    def params(self) -> ParamEnv:
        return self.scope.params


@dataclass
class ConnectionAtPoint:
    """Ricci rotation coefficients Gamma_{abc} (paper sign) at one point."""

    point: dict[str, float]
    gamma: np.ndarray          # [a, b, c] tetrad components, 0-based
    structure_residual: float  # max |de^a + Gamma^a_b ^ e^b| component
    tetrad_scale: float

    def paper(self, a: int, b: int, c: int) -> float:
        """Gamma_{abc} with 1-based paper labels."""
        return float(self.gamma[a - 1, b - 1, c - 1])

    def form_paper(self, a: int, b: int) -> np.ndarray:
        """The four tetrad components of the 1-form Gamma_{ab} (paper labels)."""
        return self.gamma[a - 1, b - 1].copy()


@dataclass
class CurvatureSummary:
    """Weyl coefficients, traceless Ricci and curvature scalar at one point."""

    point: dict[str, float]
    sd: tuple[float, float, float, float, float]    # C^(5), C^(4), C^(3), C^(2), C^(1)
    asd: tuple[float, float, float, float, float]   # Cdot^(5..1)
    cab: np.ndarray                                  # traceless Ricci, tetrad indices
    scalar: float
    weyl_mixed_residual: float                       # |SD/ASD cross block| (identity check)
    scale: float                                     # magnitude reference for tolerances

    # ordered as the paper writes them: C^(1)..C^(5) accessors
    def c(self, i: int) -> float:
        return self.sd[5 - i]

    def cdot(self, i: int) -> float:
        return self.asd[5 - i]

    def cab_paper(self, a: int, b: int) -> float:
        return float(self.cab[a - 1, b - 1])


class _Geometry:
    """Shared per-point computation: tetrad jets, inverse, connection, curvature."""

    def __init__(self, frame: FrameField, point: Mapping[str, float], order: int):
        if order < 2:
            raise ValueError("curvature needs jets of order >= 2")
        self.frame = frame
        self.order = order
        self.point = {c: float(point[c]) for c in frame.chart}
        scope = frame.scope
        self.E = [[check_finite(eval_jet(frame.tetrad[a][m], scope, point, order),
                                f"tetrad e^{a+1}[{scope.coords[m]}]")
                   for m in range(N)] for a in range(N)]
        self.tetrad_scale = max(max(abs(v.value) for v in row) for row in self.E)
        self.Einv = _invert_jet_matrix(self.E)

    # -- connection ---------------------------------------------------------

    def connection_jets(self) -> list[list[list[Jet]]]:
        """Gamma_{abc} as jets of order (order-1), internal sign convention
        (de^a + Gamma^a_b ^ e^b = 0); reported coefficients carry CONN_SIGN."""
        if hasattr(self, "_gamma_jets"):
            return self._gamma_jets
        w = self.order - 1
        E = self.E
        Ei = [[self.Einv[a][m].lower(w) for m in range(N)] for a in range(N)]
        # dE[a][mu][nu] = d_mu e^a_nu
        dE = [[[E[a][nu].derivative(mu) for nu in range(N)] for mu in range(N)]
              for a in range(N)]
        # U[a][b][c] = dE[a][mu][nu] Einv[b][mu] Einv[c][nu]
        T = [[[None] * N for _ in range(N)] for _ in range(N)]
        for a in range(N):
            for b in range(N):
                for nu in range(N):
                    acc = dE[a][0][nu] * Ei[b][0]
                    for mu in range(1, N):
                        acc = acc + dE[a][mu][nu] * Ei[b][mu]
                    T[a][b][nu] = acc
        U = [[[None] * N for _ in range(N)] for _ in range(N)]
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    acc = T[a][b][0] * Ei[c][0]
                    for nu in range(1, N):
                        acc = acc + T[a][b][nu] * Ei[c][nu]
                    U[a][b][c] = acc
        # structure functions c^a_{bc} = U[a][b][c] - U[a][c][b]; lower first index
        cl = [[[U[_SWAP[a]][b][c] - U[_SWAP[a]][c][b] for c in range(N)]
               for b in range(N)] for a in range(N)]
        # unique metric torsion-free solution of the first structure equations
        gamma = [[[None] * N for _ in range(N)] for _ in range(N)]
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    g = (cl[a][b][c] + cl[b][c][a] - cl[c][a][b]) * 0.5
                    gamma[a][b][c] = g
        self._gamma_jets = gamma
        return gamma

    def connection(self) -> ConnectionAtPoint:
        gamma = self.connection_jets()
        arr = CONN_SIGN * np.array([[[gamma[a][b][c].value for c in range(N)]
                                     for b in range(N)] for a in range(N)])
        return ConnectionAtPoint(self.point, arr, self.structure_residual(),
                                 self.tetrad_scale)

    def structure_residual(self) -> float:
        """max component of de^a + Gamma^a_b ^ e^b over all a and coordinate pairs."""
        w = self.order - 1
        gamma = self.connection_jets()
        E = [[self.E[a][m].lower(w) for m in range(N)] for a in range(N)]
        res = 0.0
        for a in range(N):
            ar = _SWAP[a]  # Gamma^a_b = eta^{a d} Gamma_{d b}
            gcoord = [[None] * N for _ in range(N)]
            for b in range(N):
                for mu in range(N):
                    acc = gamma[ar][b][0] * E[0][mu]
                    for c in range(1, N):
                        acc = acc + gamma[ar][b][c] * E[c][mu]
                    gcoord[b][mu] = acc
            for mu in range(N):
                for nu in range(mu + 1, N):
                    total = self.E[a][nu].derivative(mu) - self.E[a][mu].derivative(nu)
                    for b in range(N):
                        total = total + (gcoord[b][mu] * E[b][nu]
                                         - gcoord[b][nu] * E[b][mu])
                    res = max(res, abs(total.value))
        return res

    # -- curvature ----------------------------------------------------------

    def riemann(self) -> np.ndarray:
        """R_{abcd} in tetrad components (values at the point)."""
        if hasattr(self, "_riemann"):
            return self._riemann
        w = self.order - 1
        gamma = self.connection_jets()
        E = [[self.E[a][m].lower(w) for m in range(N)] for a in range(N)]
        Ei_val = np.array([[self.Einv[a][m].value for m in range(N)] for a in range(N)])
        # coordinate components Gamma_{ab,mu}
        gc = [[[None] * N for _ in range(N)] for _ in range(N)]
        for a in range(N):
            for b in range(N):
                for mu in range(N):
                    acc = gamma[a][b][0] * E[0][mu]
                    for c in range(1, N):
                        acc = acc + gamma[a][b][c] * E[c][mu]
                    gc[a][b][mu] = acc
        # R_{ab,mu nu} = d_mu Gamma_{ab,nu} - d_nu Gamma_{ab,mu}
        #              + Gamma_{ad,mu} Gamma^d_{b,nu} - Gamma_{ad,nu} Gamma^d_{b,mu}
        Rcoord = np.zeros((N, N, N, N))
        for a in range(N):
            for b in range(a + 1, N):
                for mu in range(N):
                    for nu in range(mu + 1, N):
                        term = gc[a][b][nu].derivative(mu) - gc[a][b][mu].derivative(nu)
                        val = term.value
                        for d in range(N):
                            val += (gc[a][_SWAP[d]][mu].value * gc[d][b][nu].value
                                    - gc[a][_SWAP[d]][nu].value * gc[d][b][mu].value)
                        Rcoord[a, b, mu, nu] = val
                        Rcoord[a, b, nu, mu] = -val
                        Rcoord[b, a, mu, nu] = -val
                        Rcoord[b, a, nu, mu] = val
        # convert the 2-form indices to tetrad components
        R = np.einsum("abmn,cm,dn->abcd", Rcoord, Ei_val, Ei_val)
        self._riemann = R
        return R

    def curvature(self) -> CurvatureSummary:
        R = self.riemann()
        ric = np.einsum("ac,abcd->bd", ETA, R)
        ric = 0.5 * (ric + ric.T)
        rs = float(np.einsum("bd,bd->", ETA, ric))
        # Weyl part of the tetrad Riemann tensor
        g = ETA
        gric = (np.einsum("ac,bd->abcd", g, ric) - np.einsum("ad,bc->abcd", g, ric)
                - np.einsum("bc,ad->abcd", g, ric) + np.einsum("bd,ac->abcd", g, ric))
        gg = np.einsum("ac,bd->abcd", g, g) - np.einsum("ad,bc->abcd", g, g)
        W = R - 0.5 * gric + (rs / 6.0) * gg
        sd = tuple(float(np.einsum("abcd,ab,cd->", W, p, q)) / n
                   for (p, q), n in zip(_SD_SLOTS, WEYL_NORM_SD))
        asd = tuple(float(np.einsum("abcd,ab,cd->", W, p, q)) / n
                    for (p, q), n in zip(_ASD_SLOTS, WEYL_NORM_ASD))
        mixed = max(abs(float(np.einsum("abcd,ab,cd->", W, p, q)))
                    for p in (_B1, _B2, _B3) for q in (_D1, _D2, _D3))
        cab = CAB_SIGN * (ric - 0.25 * rs * g)
        scalar = SCALAR_SIGN * rs
        scale = 1.0 + max(float(np.max(np.abs(R))), abs(rs))
        return CurvatureSummary(self.point, sd, asd, cab, scalar, mixed, scale)


def _invert_jet_matrix(E: list[list[Jet]]) -> list[list[Jet]]:
    """Gauss-Jordan inverse of a 4x4 jet matrix, pivoting on largest value."""
    n = N
    a = [row[:] for row in E]
    order = a[0][0].order
    inv = [[Jet.constant(1.0 if i == j else 0.0, order) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col].value))
        if abs(a[piv][col].value) < 1e-13:
            raise DegenerateTetradError("tetrad component matrix is singular at the point")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col]
        a[col] = [x / d for x in a[col]]
        inv[col] = [x / d for x in inv[col]]
        for r in range(n):
            if r != col:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    # columns of the matrix inverse are the dual vectors: return Einv[b][mu]
    # with e^a(E_b) = sum_mu E[a][mu] Einv[b][mu] = delta^a_b
    return [[inv[c][b] for c in range(n)] for b in range(n)]


def tetrad_jets(frame: FrameField, point: Mapping[str, float], order: int):
    geo = _Geometry(frame, point, max(order, 2))
    return geo.E, geo.Einv


def metric_from_tetrad(frame: FrameField, point: Mapping[str, float], order: int = 3
                       ) -> list[list[Jet]]:
    """Coordinate metric g_{mu nu} = 2 e^1 e^2 + 2 e^3 e^4 as jets; symmetric."""
    geo = _Geometry(frame, point, order)
    E = geo.E
    g = [[None] * N for _ in range(N)]
    for mu in range(N):
        for nu in range(mu, N):
            val = (E[0][mu] * E[1][nu] + E[1][mu] * E[0][nu]
                   + E[2][mu] * E[3][nu] + E[3][mu] * E[2][nu])
            g[mu][nu] = val
            g[nu][mu] = val
    return g


def metric_signature_ok(frame: FrameField, point: Mapping[str, float]) -> bool:
    """True when the metric has neutral signature (+ + - -) at the point."""
    g = metric_from_tetrad(frame, point, order=2)
    vals = np.linalg.eigvalsh(np.array([[g[i][j].value for j in range(N)] for i in range(N)]))
    return int(np.sum(vals > 0)) == 2 and int(np.sum(vals < 0)) == 2


def connection(frame: FrameField, point: Mapping[str, float], order: int = 3
               ) -> ConnectionAtPoint:
    """Tetrad-component Ricci rotation coefficients at the point."""
    return _Geometry(frame, point, order).connection()


def curvature(frame: FrameField, point: Mapping[str, float], order: int = 3
              ) -> CurvatureSummary:
    """Full decomposition: five SD and five ASD Weyl coefficients, traceless
    Ricci tetrad components and the curvature scalar."""
    return _Geometry(frame, point, order).curvature()


def pullback_metric(frame: FrameField, change: Mapping[str, Expr], target_scope: Scope,
                    point: Mapping[str, float], order: int = 2) -> np.ndarray:
    """Pull the frame's metric back through old = change(new); returns g'_{mu nu}
    at the given point of the *target* chart."""
    maps = [change[c] for c in frame.chart]
    jets = [check_finite(eval_jet(m, target_scope, point, max(order, 1)), "coordinate map")
            for m in maps]
    old_point = {c: j.value for c, j in zip(frame.chart, jets)}
    jac = np.array([[j.partial(tuple(1 if k == m else 0 for k in range(N)))
                     for m in range(N)] for j in jets])  # d old_i / d new_m
    g_old = metric_from_tetrad(frame, old_point, order=2)
    g_old_val = np.array([[g_old[i][j].value for j in range(N)] for i in range(N)])
    return jac.T @ g_old_val @ jac


def spin_transformed_tetrad(frame: FrameField, k, l, kd, ld) -> FrameField:
    """New frame from constant normalized spinor pairs (k,l), (kd,ld) via the
    standard retetrading; k1*l2 - k2*l1 = 1 and likewise for the dotted pair."""
    from .exprlang import BinOp, Const, Neg
    from fractions import Fraction

    def lin(coeffs):
        # coeffs over old tetrad rows -> list of component exprs
        out = []
        for mu in range(N):
            term = None
            for a in range(N):
                c = coeffs[a]
                if c == 0:
                    continue
                piece = BinOp("*", Const(Fraction(c).limit_denominator(10**12)),
                              frame.tetrad[a][mu])
                term = piece if term is None else BinOp("+", term, piece)
            out.append(term if term is not None else Const(Fraction(0)))
        return out

    k1, k2 = k
    l1, l2 = l
    kd1, kd2 = kd
    ld1, ld2 = ld
    # g^{AB'} entries: g^{11'} = sqrt2 e4, g^{12'} = sqrt2 e2, g^{21'} = sqrt2 e1,
    # g^{22'} = -sqrt2 e3; e~1 = k_A l_B' g^{AB'}/sqrt2 etc.
    new1 = lin([k2 * ld1, k1 * ld2, -k2 * ld2, k1 * ld1])
    new2 = lin([l2 * kd1, l1 * kd2, -l2 * kd2, l1 * kd1])
    new3 = lin([-k2 * kd1, -k1 * kd2, k2 * kd2, -k1 * kd1])
    new4 = lin([l2 * ld1, l1 * ld2, -l2 * ld2, l1 * ld1])
    return FrameField(frame.scope, [new1, new2, new3, new4], name=frame.name + "~spin")
