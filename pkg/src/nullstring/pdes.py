"""Residual checkers for the reduced field equations, evaluated via jets.

Each checker takes the generator expressions (closed forms from the catalog,
possibly containing antiderivative markers whose value slots are never used),
evaluates the required partial derivatives as jets at a point, and returns the
equation residual together with a cancellation-aware scale for tolerance
tests.  No equation is ever solved numerically here and no integral is
quadratured: checks are restructured so only derivatives of unevaluated
antiderivatives appear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import DomainError
from .exprlang import Expr, Scope, check_finite, eval_jet, parse

#: minimum |kappa_x| (relative) before the expanding-family split is declared singular
KAPPA_X_MIN = 1e-8


@dataclass(frozen=True)
class Residual:
    """Residual value plus the magnitude of its largest additive term."""

    value: float
    scale: float

    def __float__(self) -> float:
        return self.value

    def within(self, rtol: float, atol: float = 1e-12) -> bool:
        return abs(self.value) <= atol + rtol * max(1.0, self.scale)


@dataclass
class GeneratorSpec:
    """A generating-function ansatz: its own chart, parameters and named exprs."""

    kind: str  # 'przanowski-q' | 'para-kahler-m' | 'hyperheavenly-theta' | 'hh-split' | ...
    scope: Scope
    exprs: dict[str, Expr] = field(default_factory=dict)
    sample_domain: dict | None = None

    def expr(self, name: str) -> Expr:
        if name in self.exprs:
            return self.exprs[name]
        return self.scope.defs[name]


def _mi(scope: Scope, **orders: int) -> tuple[int, ...]:
    alpha = [0, 0, 0, 0]
    for coord, k in orders.items():
        alpha[scope.coord_index[coord]] = k
    return tuple(alpha)


def residual_przanowski(q_expr: Expr, scope: Scope, point: Mapping[str, float]) -> Residual:
    """Residual of the key equation of the expanding para-Hermite family:

        Q_yz + x^2 kappa_x (e^{Q_x/kappa_x})_x + 2 kappa e^{Q_x/kappa_x}

    with kappa(x) = (gamma0/x^2 + Lambda*x/3)^(-1) built from the scope's
    parameters.  Q may contain an unevaluated x-antiderivative: only Q_x, Q_xx
    and Q_yz are consumed."""
    if "gamma0" not in scope.params or "Lambda" not in scope.params:
        raise DomainError("przanowski residual needs parameters gamma0 and Lambda")
    kappa = parse("(gamma0/x^2 + Lambda*x/3)^(-1)")
    jq = eval_jet(q_expr, scope, point, 3)
    jk = check_finite(eval_jet(kappa, scope, point, 3), "kappa")
    x = scope.coord_index["x"]
    kx = jk.derivative(x)
    if abs(kx.value) < KAPPA_X_MIN * max(1.0, jk.scale()):
        raise DomainError(f"kappa_x ~ {kx.value:.3e} too close to its critical set")
    qx = jq.derivative(x)
    u = qx.lower(2) / kx.lower(2)
    from .jets import jet_compose_unary
    eu = jet_compose_unary("exp", check_finite(u, "Q_x/kappa_x"))
    xj = eval_jet(parse("x^2"), scope, point, 1)
    t1 = jq.partial(_mi(scope, y=1, z=1))
    t2 = (xj * kx.lower(1) * eu.derivative(x)).value
    t3 = 2.0 * jk.value * eu.value
    r = t1 + t2 + t3
    if r != r:
        raise DomainError("przanowski residual picked up a poisoned Taylor slot")
    return Residual(r, max(abs(t1), abs(t2), abs(t3)))


def residual_para_kahler(m_expr: Expr, scope: Scope, point: Mapping[str, float]) -> Residual:
    """Residual of M_px M_qy - M_qx M_py - e^{-Lambda M} (double-null family)."""
    lam = float(scope.params["Lambda"])
    jm = check_finite(eval_jet(m_expr, scope, point, 2), "M")
    mpx = jm.partial(_mi(scope, p=1, x=1))
    mqy = jm.partial(_mi(scope, q=1, y=1))
    mqx = jm.partial(_mi(scope, q=1, x=1))
    mpy = jm.partial(_mi(scope, p=1, y=1))
    import math
    t1 = mpx * mqy
    t2 = -mqx * mpy
    t3 = -math.exp(-lam * jm.value)
    return Residual(t1 + t2 + t3, max(abs(t1), abs(t2), abs(t3)))


def residual_liouville(l_expr: Expr, n_expr: Expr, scope: Scope,
                       point: Mapping[str, float],
                       coords: tuple[str, str] = ("y", "z")) -> Residual:
    """Residual of l_{ab} - N e^l for the declared coordinate pair (a, b)."""
    import math
    jl = check_finite(eval_jet(l_expr, scope, point, 2), "l")
    nval = check_finite(eval_jet(n_expr, scope, point, 0), "N").value
    t1 = jl.partial(_mi(scope, **{coords[0]: 1, coords[1]: 1}))
    t2 = -nval * math.exp(jl.value)
    return Residual(t1 + t2, max(abs(t1), abs(t2)))


def residual_liouville_split(g_expr: Expr, l_expr: Expr, h_expr: Expr, scope: Scope,
                             point: Mapping[str, float]) -> tuple[Residual, Residual]:
    """The two factors of the nonexpanding double-null splitting:

        g_{xp} e^{Lambda g} - 1/h     and     l_{yq} e^{Lambda l} - h
    """
    import math
    lam = float(scope.params["Lambda"])
    jg = check_finite(eval_jet(g_expr, scope, point, 2), "g")
    jl = check_finite(eval_jet(l_expr, scope, point, 2), "l")
    h = check_finite(eval_jet(h_expr, scope, point, 0), "h").value
    if abs(h) < 1e-13:
        raise DomainError("splitting function h vanishes at the point")
    a1 = jg.partial(_mi(scope, x=1, p=1)) * math.exp(lam * jg.value)
    r1 = Residual(a1 - 1.0 / h, max(abs(a1), abs(1.0 / h)))
    a2 = jl.partial(_mi(scope, y=1, q=1)) * math.exp(lam * jl.value)
    r2 = Residual(a2 - h, max(abs(a2), abs(h)))
    return r1, r2


def residual_hyperheavenly(theta_expr: Expr, scope: Scope,
                           point: Mapping[str, float]) -> Residual:
    """Residual of the nonexpanding reduced equation with cosmological constant:

        T_xx T_yy - T_xy^2 + T_yq - T_xp
        + (Lambda/3)(3x T_x + 3y T_y - 3T - x^2 T_xx - y^2 T_yy - 2xy T_xy)
    """
    lam = float(scope.params["Lambda"])
    jt = check_finite(eval_jet(theta_expr, scope, point, 2), "Theta")
    x = float(point["x"])
    y = float(point["y"])
    txx = jt.partial(_mi(scope, x=2))
    tyy = jt.partial(_mi(scope, y=2))
    txy = jt.partial(_mi(scope, x=1, y=1))
    tyq = jt.partial(_mi(scope, y=1, q=1))
    txp = jt.partial(_mi(scope, x=1, p=1))
    tx = jt.partial(_mi(scope, x=1))
    ty = jt.partial(_mi(scope, y=1))
    t = jt.value
    quad = txx * tyy - txy * txy
    lin = tyq - txp
    lam_term = (lam / 3.0) * (3 * x * tx + 3 * y * ty - 3 * t
                              - x * x * txx - y * y * tyy - 2 * x * y * txy)
    return Residual(quad + lin + lam_term, max(abs(quad), abs(lin), abs(lam_term)))


def residual_hh_split(a_expr: Expr, b_expr: Expr, c_expr: Expr, scope: Scope,
                      point: Mapping[str, float]) -> tuple[Residual, Residual, Residual]:
    """The three equations of the x^2-quadratic key-function ansatz."""
    lam = float(scope.params["Lambda"])
    y = float(point["y"])
    ja = check_finite(eval_jet(a_expr, scope, point, 2), "A")
    jb = check_finite(eval_jet(b_expr, scope, point, 2), "B")
    jc = check_finite(eval_jet(c_expr, scope, point, 2), "C")
    A = ja.value
    Ay = ja.partial(_mi(scope, y=1))
    Ayy = ja.partial(_mi(scope, y=2))
    Ayq = ja.partial(_mi(scope, y=1, q=1))
    Ap = ja.partial(_mi(scope, p=1))
    By = jb.partial(_mi(scope, y=1))
    Byy = jb.partial(_mi(scope, y=2))
    Byq = jb.partial(_mi(scope, y=1, q=1))
    Bp = jb.partial(_mi(scope, p=1))
    C = jc.value
    Cy = jc.partial(_mi(scope, y=1))
    Cyy = jc.partial(_mi(scope, y=2))
    Cyq = jc.partial(_mi(scope, y=1, q=1))
    r1_terms = (3 * A * Ayy, -6 * Ay * Ay, 3 * Ayq, lam * (A - y * Ay - y * y * Ayy))
    r2_terms = (3 * A * Byy, -6 * Ay * By, 3 * Byq, -3 * Ap,
                lam * (y * By - y * y * Byy))
    r3_terms = (A * Cyy, -By * By, Cyq, -Bp,
                (lam / 3.0) * (3 * y * Cy - 3 * C - y * y * Cyy))
    return tuple(Residual(sum(ts), max(abs(t) for t in ts))
                 for ts in (r1_terms, r2_terms, r3_terms))


def residual_expanding_pk(f_expr: Expr, f_scope: Scope, z_expr: Expr, scope: Scope,
                          point: Mapping[str, float]) -> tuple[Residual, Residual]:
    """Residuals of the expanding double-null reduction (no catalog solution
    exists; exploration only).  The generator G and the inhomogeneity beta are
    always derived from z, never supplied independently:

        G = -(1/Lambda) ln(z_p z_qy - z_q z_py)
        beta = (z_p G_qy - z_q G_py) / (z_p z_qy - z_q z_py)
        R1 = (1/F_zx) e^{-Lambda F} - F_z - beta
        R2 = r r_py - r_qy - 2 r_y r_p - Lambda r_y s,   r = z_q/z_p, s = G_q - r G_p

    F lives on its own chart (x, y, z, .); it is evaluated at (x, y, z(point)).
    """
    import math
    lam = float(scope.params["Lambda"])
    jz = check_finite(eval_jet(z_expr, scope, point, 3), "z")
    p_i, q_i, y_i = (scope.coord_index[c] for c in ("p", "q", "y"))
    zp = jz.derivative(p_i).lower(1)
    zq = jz.derivative(q_i).lower(1)
    zpy = jz.derivative(p_i).derivative(y_i)
    zqy = jz.derivative(q_i).derivative(y_i)
    w = zp * zqy.lower(1) - zq * zpy.lower(1)  # z_p z_qy - z_q z_py, order 1
    if abs(w.value) < 1e-12:
        raise DomainError("singular denominator z_p z_qy - z_q z_py")
    # G-jets to order 1 suffice for G_qy, G_py via one more shift: build G at order 2
    zp2 = jz.derivative(p_i).lower(2)
    zq2 = jz.derivative(q_i).lower(2)
    # need order-2 jet of w to differentiate G twice
    jz4 = check_finite(eval_jet(z_expr, scope, point, 4), "z")
    w2 = (jz4.derivative(p_i).lower(2) * jz4.derivative(q_i).derivative(y_i).lower(2)
          - jz4.derivative(q_i).lower(2) * jz4.derivative(p_i).derivative(y_i).lower(2))
    from .jets import jet_compose_unary
    G = jet_compose_unary("ln", w2) * (-1.0 / lam)
    gqy = G.derivative(q_i).derivative(y_i).value
    gpy = G.derivative(p_i).derivative(y_i).value
    beta = (zp.value * gqy - zq.value * gpy) / w.value
    # F side, at (x, y, z-value)
    f_point = {c: float(point.get(c, 0.0)) for c in f_scope.coords}
    f_point["z"] = jz.value
    jf = check_finite(eval_jet(f_expr, f_scope, f_point, 2), "F")
    fz = jf.partial(_mi(f_scope, z=1))
    fzx = jf.partial(_mi(f_scope, z=1, x=1))
    if abs(fzx) < 1e-12:
        raise DomainError("F_zx vanishes at the point")
    t1 = math.exp(-lam * jf.value) / fzx
    r1 = Residual(t1 - fz - beta, max(abs(t1), abs(fz), abs(beta)))
    # constraint residual on r = z_q/z_p and s = G_q - r G_p
    r_j = jz4.derivative(q_i).lower(3) / jz4.derivative(p_i).lower(3)
    rp = r_j.derivative(p_i).value
    ry = r_j.derivative(y_i).value
    rpy = r_j.derivative(p_i).derivative(y_i).value
    rqy = r_j.derivative(q_i).derivative(y_i).value
    s = G.derivative(q_i).value - r_j.value * G.derivative(p_i).value
    terms = (r_j.value * rpy, -rqy, -2.0 * ry * rp, -lam * ry * s)
    r2 = Residual(sum(terms), max(abs(t) for t in terms))
    return r1, r2
