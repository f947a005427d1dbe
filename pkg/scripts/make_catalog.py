#!/usr/bin/env python3
"""Build and verify the shipped metric catalog (src/nullstring/data/catalog.json).

Each record is assembled from closed-form expressions; sympy does the
mechanical differentiation at build time, but catalog entries are kept small
by referencing named definitions instead of expanding everything.  Every
record is verified against the numerical engine before the file is written.

Run from the repository root:  python scripts/make_catalog.py
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import numpy as np
import sympy as sp

sys.path.insert(0, str(Path(__file__).resolve().parent))
from exprgen import to_expr

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "src" / "nullstring" / "data" / "catalog.json"

X, Y, Z, T = sp.symbols("x y z t")
P, Q = sp.symbols("p q")

SD13 = {"side": "SD", "span": [1, 3]}
SD24 = {"side": "SD", "span": [2, 4]}
ASD14 = {"side": "ASD", "span": [1, 4]}
ASD23 = {"side": "ASD", "span": [2, 3]}

# metric components of (vx/2) dx^2 - theta^2/(2 vx) + 2 Fbig dy dz with
# theta = dt + thx dx + thy dy + thz dz, written against named defs
_PH_METRIC = {
    "x,x": "vx/2 - thx^2/(2*vx)",
    "x,y": "-thx*thy/(2*vx)",
    "x,z": "-thx*thz/(2*vx)",
    "x,t": "-thx/(2*vx)",
    "y,y": "-thy^2/(2*vx)",
    "y,z": "-thy*thz/(2*vx) + Fbig",
    "y,t": "-thy/(2*vx)",
    "z,z": "-thz^2/(2*vx)",
    "z,t": "-thz/(2*vx)",
    "t,t": "-1/(2*vx)",
}

# plane-adapted coframe: e1, e3 span the Pfaff system of one null-plane
# family, e2, e4 the other; no square roots appear
_PLANES_TETRAD = [
    ["(thx + vx)/2", "thy/2", "thz/2", "1/2"],
    ["-(thx - vx)/(2*vx)", "-thy/(2*vx)", "-thz/(2*vx)", "-1/(2*vx)"],
    ["0", "-1", "0", "0"],
    ["0", "0", "-Fbig", "0"],
]

# the printed source coframe of the expanding family (theta has no dx slot)
_PAPER_TETRAD = [
    ["vx/2", "vy/2", "vz/2", "1/2"],
    ["1/2", "vy/(2*vx)", "-vz/(2*vx)", "-1/(2*vx)"],
    ["0", "-1", "0", "0"],
    ["vy/2", "vy^2/(2*vx)", "-vy*vz/(2*vx) - Fbig", "-vy/(2*vx)"],
]

# printed curvature of the general ansatz (S, G, N in the r(y)=y gauge),
# written against named defs; vy = h_y - F is the catalog's vy definition
_ANSATZ_CURV = {
    "C3": "2*gamma0/x^3",
    "Cdot3": "2*(Lambda*Gf^3 + 18*Gf*Nf*Sf + 648*gamma0*Sf^3)/(3*(6*x*Sf - Gf)^3)",
    "Cdot2": ("-3*vy*Cdot3d + (3/(x*rr*(6*x*Sf - Gf)^2))*("
              "(12*Sf*(Sf*D(Nf,y) - D(Sf,y)*Nf)"
              " + 2*Lambda*Gf*(Sf*D(Gf,y) - D(Sf,y)*Gf))*x^2"
              " + 4*Nf*(Sf*D(Gf,y) - D(Sf,y)*Gf)*x"
              " + 36*gamma0*Sf*(Sf*D(Gf,y) - D(Sf,y)*Gf)"
              " + (1/3)*Gf*(Nf*D(Gf,y) - Gf*D(Nf,y)))"),
    "Cdot1": ("-4*vy*Cdot2d - 6*vy^2*Cdot3d"
              " + (2*elx*(6*x*Sf - Gf)^3/(x*rr^2))*D(inner2, y)"),
}

# printed connection forms of the expanding family in the source coframe
_PH_CONNECTION = {
    "42": ["0", "0", "1/x", "0"],
    "31": ["0", "-vy/(x*vx)", "0", "1/(x*vx)"],
    "41": ["0", "0", "omega", "0"],
    "32": ["vy*omega - D(vyvx, x)", "0", "bq", "1/x"],
    "12+34": ["1/kappa - 1/(x*vx)", "-1/x",
              "D(Fbig,y)/Fbig - vy/(x*vx) - D(vy,x)/vx + vy/kappa", "0"],
    "34-12": ["1/(x*vx) - 1/kappa - 2*omega", "-1/x", "-aq", "0"],
}


def ph_core_defs(S, G, N, lam, gam):
    kappa = 1 / (gam / X**2 + lam * X / 3)
    rr = sp.together(S * (lam * X**2 - 6 * gam / X)
                     - G * (lam * X / 3 - gam / (2 * X**2)) - sp.Rational(N, 2))
    vx = sp.cancel(-(6 * X * S - G) / (X * rr))
    return kappa, rr, vx


def ph_record(rid, anchor, quote, *, S, G, N, lam, gam, form, box, excluded,
              expected_type, dists, notes="", extra_curv=None, src_checks=False,
              I_expr=None, h_closed=None, radius=0.05, gauge_y0=1, gen_box=None):
    """One expanding-SD-pair record.

    form='planes': plane-adapted coframe; a time gauge absorbs the
    x-antiderivative, so arbitrary S, G work.
    form='paper': the printed coframe; needs the antiderivative I_expr(x,y)
    of (6xS-G)/(x rr) in closed form (or constant S, G, where it drops out
    of every component).
    """
    lam_s, gam_s = sp.Rational(lam), sp.Rational(gam)
    kappa, rr, vx = ph_core_defs(S, G, N, lam_s, gam_s)
    if N == 1:
        hy = sp.together(-2 * G / (Y + Z))
        if h_closed is None:
            h_closed = sp.integrate(-2 * G / (Y + Z), Y)
        hz = sp.together(sp.diff(h_closed, Z))
        e_qx = 2 * rr / (Y + Z) ** 2
        qbase = h_closed + kappa * sp.log(2 / (Y + Z) ** 2)
    else:
        hy = sp.together(G * Z)
        hz = sp.integrate(G, Y)
        e_qx = rr
        qbase = sp.integrate(G, Y) * Z
    fbig = sp.cancel(X**2 * vx * e_qx)
    if I_expr is not None:
        Ff = sp.together(sp.diff(I_expr, Y))
    else:
        Ff = sp.Integer(0)
    defs = [
        ("kappa", to_expr(kappa)),
        ("rr", to_expr(rr)),
        ("Sf", to_expr(S)),
        ("Gf", to_expr(G)),
        ("vx", to_expr(vx)),
        ("hy", to_expr(hy)),
        ("hz", to_expr(hz)),
        ("Ff", to_expr(Ff)),
        ("vy", "hy - Ff"),
        ("vz", "hz"),
        ("Fbig", to_expr(fbig)),
    ]
    if form == "planes":
        # time gauge: theta gains the dx slot -(phi(x,y) - phi(x,y0)), phi = -vx
        phi = -vx
        thx = sp.cancel(-(phi - phi.subs(Y, sp.Rational(gauge_y0))))
        defs += [("thx", to_expr(thx)), ("thy", "-hy"), ("thz", "hz")]
        tetrad = _PLANES_TETRAD
    else:
        defs += [("thx", "0"), ("thy", "-vy"), ("thz", "vz")]
        tetrad = _PAPER_TETRAD
    curv = {"C3": "2*gamma0/x^3", **(extra_curv or {})}
    raw = {
        "id": rid,
        "family": "para-hermite-expanding",
        "paper_anchor": anchor,
        "quote": quote,
        "chart": ["x", "y", "z", "t"],
        "params": {"Lambda": str(lam_s), "gamma0": str(gam_s)},
        "param_constraints": [{"expr": "gamma0", "kind": "nonzero"}],
        "defs": defs,
        "tetrad": tetrad,
        "metric_check": dict(_PH_METRIC),
        "declared_distributions": dists,
        "expected_type": expected_type,
        "expected_curvature": curv,
        "sample_domain": {"box": box, "excluded": list(excluded),
                          "exclusion_radius": radius},
        "generators": {
            "kind": "przanowski-q",
            "chart": ["x", "y", "z", "t"],
            "defs": [
                ("kappa", to_expr(kappa)),
                ("rr", to_expr(rr)),
                ("lnrr", "ln(rr)"),
                ("integrand", "D(kappa, x) * lnrr"),
                ("Qbase", to_expr(qbase)),
                ("Q", "Qbase + antideriv(x, integrand)"),
            ],
            "names": {"Q": "Q"},
            "domain": {"box": gen_box or box, "excluded": list(excluded),
                       "exclusion_radius": radius},
        },
    }
    if src_checks:
        # printed connection forms and full printed curvature (source frame)
        ly = "-2/(y+z)" if N == 1 else "0"
        elx = "2/((y+z)^2)" if N == 1 else "1"
        raw["defs"] += [
            ("Nf", str(N)),
            ("elx", elx),
            ("omega", "-6*x*Sf*rr/(6*x*Sf - Gf)^2"),
            ("vyvx", "vy/vx"),
            ("qy", f"hy + kappa*({ly}) + kappa*D(rr,y)/rr - Ff"),
            ("aq", "2*vy*omega - 2*D(vyvx,x) + vy/(x*vx) - qy/kappa"),
            ("bq", "vy*aq - vy^2*omega + vx*D(vyvx,y)"),
            ("Cdot3d", _ANSATZ_CURV["Cdot3"]),
            ("Tdef", "(1/x)*(Sf*D(Gf,y) - Gf*D(Sf,y))*(Lambda*x^3 + 3*gamma0)"
                     " + 3*x*(Sf*D(Nf,y) - Nf*D(Sf,y))"
                     " + (1/2)*(Nf*D(Gf,y) - Gf*D(Nf,y))"),
            ("inner2", "Tdef/(elx*(6*x*Sf - Gf)^3)"),
            ("Cdot2d", _ANSATZ_CURV["Cdot2"]),
        ]
        raw["connection_check"] = dict(_PH_CONNECTION)
        raw["expected_curvature"] = {
            "C3": "2*gamma0/x^3",
            "Cdot3": "Cdot3d",
            "Cdot2": "Cdot2d",
            "Cdot1": _ANSATZ_CURV["Cdot1"],
        }
    if notes:
        raw["notes"] = notes
    return raw


def build_ph_records():
    out = []
    lam, gam = 3, 1
    out.append(ph_record(
        "ph-ii-class1-e",
        "sec 3.3.1 eq (3.31)", "metrykka_typu_DxII_1 with f nonzero",
        S=Y, G=sp.Integer(1), N=1, lam=lam, gam=gam, form="planes",
        box={"x": [1.8, 2.4], "y": [0.8, 1.6], "z": [0.3, 1.2], "t": [0.0, 1.0]},
        excluded=["rr", "6*x*y-1"],
        expected_type="[D]^{ee} ⊗ [II]^{e}",
        dists=[SD13, SD24, ASD14],
        extra_curv={"Cdot3": to_expr(sp.cancel(
            2 * (3 + 18 * Y + 648 * Y**3) / (3 * (6 * X * Y - 1) ** 3)))},
        notes="f(y)=y, g(y)=1: f_y nonzero keeps type II, f nonzero makes the "
              "anti-self-dual congruence expanding; time gauge absorbs the "
              "x-antiderivative of the theta 1-form.",
    ))
    out.append(ph_record(
        "ph-ii-class1-n",
        "sec 3.3.1 eq (3.31)", "f = 0 <=> the type [D]^{ee} x [II]^{n}",
        S=sp.Integer(0), G=Y, N=1, lam=lam, gam=gam, form="planes",
        box={"x": [0.4, 0.6], "y": [0.9, 1.6], "z": [0.3, 1.2], "t": [0.0, 1.0]},
        excluded=["rr", "y"],
        expected_type="[D]^{ee} ⊗ [II]^{n}",
        dists=[SD13, SD24, ASD14],
        extra_curv={"Cdot3": "-2"},
        notes="f=0, g(y)=y: |f_y|+|g_y| nonzero and Lambda g^3 nonzero keep type II.",
    ))
    out.append(ph_record(
        "ph-ii-class2",
        "sec 3.3.2 eq (3.36)", "metrykka_typu_DxII_2",
        S=Y, G=sp.Integer(1), N=0, lam=lam, gam=gam, form="planes",
        box={"x": [1.4, 2.0], "y": [1.2, 2.0], "z": [0.3, 1.2], "t": [0.0, 1.0]},
        excluded=["rr", "6*x*y-1"],
        expected_type="[D]^{ee} ⊗ [II]^{e}",
        dists=[SD13, SD24, ASD14],
        extra_curv={"Cdot3": to_expr(sp.cancel(
            2 * (3 + 648 * Y**3) / (3 * (6 * X * Y - 1) ** 3)))},
        notes="f(y)=y with f_y nonzero; the N=0 branch of the key-function split.",
    ))
    out.append(ph_record(
        "ph-d-class1-ee",
        "sec 3.4.2 eq (3.44)", "Metryka_DxD_clasa1 with S0 nonzero",
        S=sp.Integer(1), G=sp.Integer(1), N=1, lam=lam, gam=gam, form="planes",
        box={"x": [1.6, 2.4], "y": [0.3, 1.2], "z": [0.3, 1.2], "t": [0.0, 1.0]},
        excluded=["rr", "6*x-1"],
        expected_type="[D]^{ee} ⊗ [D]^{ee}",
        dists=[SD13, SD24, ASD14, ASD23],
        extra_curv={"Cdot3": to_expr(sp.cancel(sp.Integer(2) * 669 / (3 * (6 * X - 1) ** 3)))},
        notes="S0=G0=1: Lambda G0^3 + 18 S0 G0 + 648 gamma0 S0^3 = 669 nonzero; the "
              "plane-adapted coframe aligns with both anti-self-dual strings.",
    ))
    out.append(ph_record(
        "ph-d-class1-nn",
        "sec 3.4.2 eq (3.44)", "S0 = 0 <=> the type [D]^{ee} x [D]^{nn}",
        S=sp.Integer(0), G=sp.Integer(1), N=1, lam=lam, gam=gam, form="planes",
        box={"x": [0.35, 0.58], "y": [0.3, 1.2], "z": [0.3, 1.2], "t": [0.0, 1.0]},
        excluded=["rr"],
        expected_type="[D]^{ee} ⊗ [D]^{nn}",
        dists=[SD13, SD24, ASD14, ASD23],
        extra_curv={"Cdot3": "-2"},
    ))
    out.append(ph_record(
        "ph-d-class2a-ee",
        "sec 3.4.3 eq (3.47)", "metryka_typu_DD_class2_a with S0 nonzero",
        S=sp.Integer(1), G=sp.Integer(1), N=0, lam=lam, gam=gam, form="planes",
        box={"x": [1.9, 2.8], "y": [0.3, 1.5], "z": [0.3, 1.5], "t": [0.0, 1.0]},
        excluded=["rr", "6*x-1"],
        expected_type="[D]^{ee} ⊗ [D]^{ee}",
        dists=[SD13, SD24, ASD14, ASD23],
        extra_curv={"Cdot3": to_expr(sp.cancel(sp.Integer(2) * 651 / (3 * (6 * X - 1) ** 3)))},
        notes="Lambda G0^3 + 648 gamma0 S0^3 = 651 nonzero.",
    ))
    out.append(ph_record(
        "ph-d-class2a-nn",
        "sec 3.4.3 eq (3.47)", "S0 = 0 <=> the type [D]^{ee} x [D]^{nn}",
        S=sp.Integer(0), G=sp.Integer(1), N=0, lam=lam, gam=gam, form="planes",
        box={"x": [0.35, 0.6], "y": [0.3, 1.5], "z": [0.3, 1.5], "t": [0.0, 1.0]},
        excluded=["rr"],
        expected_type="[D]^{ee} ⊗ [D]^{nn}",
        dists=[SD13, SD24, ASD14, ASD23],
        extra_curv={"Cdot3": "-2"},
    ))
    # two records carrying the printed source coframe verbatim, with rigged
    # instantiations that close the antiderivative in elementary terms
    lam_s, gam_s = sp.Integer(3), sp.Integer(1)
    f = Y / (2 * lam_s * Y**3 - 12 * gam_s)
    c = 6 * gam_s / (lam_s * Y)
    d = sp.sqrt(Y**2 - 4 * c)
    rho_p, rho_m = (-Y + d) / 2, (-Y - d) / 2
    A = 6 * Y / (lam_s * (2 * Y**2 + c))
    Bp = 6 * rho_p / (lam_s * (rho_p - Y) * (rho_p - rho_m))
    Bm = 6 * rho_m / (lam_s * (rho_m - Y) * (rho_m - rho_p))
    I1 = A * sp.log(X - Y) + Bp * sp.log(X - rho_p) + Bm * sp.log(X - rho_m)
    out.append(ph_record(
        "ph-ii-class1-e.src",
        "sec 3.1 eq (3.6)-(3.10); sec 3.3.1 eq (3.31)",
        "wybor_tetrady; the connection forms can be extracted as",
        S=f, G=sp.Integer(0), N=1, lam=3, gam=1, form="paper", I_expr=I1,
        box={"x": [3.0, 4.0], "y": [2.2, 2.6], "z": [0.3, 1.2], "t": [0.0, 1.0]},
        excluded=["rr"],
        expected_type="[D]^{ee} ⊗ [II]^{e}",
        dists=[SD13, SD24, ASD14],
        src_checks=True,
        notes="source coframe verbatim; f rigged so the antiderivative's quartic "
              "denominator has the root x = y and splits into elementary logs.",
    ))
    g = Y**2 / (1 - 2 * Y**3)
    b = 3 * gam_s / (2 * lam_s * Y**2)
    cq = 3 * gam_s / (2 * lam_s * Y)
    Aq = Y / (Y**2 + b * Y + cq)
    Dq = Aq * cq / Y
    wq = sp.sqrt(4 * cq - b**2)
    I2 = (Aq * sp.log(X - Y) - (Aq / 2) * sp.log(X**2 + b * X + cq)
          + (Dq + Aq * b / 2) * (2 / wq) * sp.atan((2 * X + b) / wq))
    # h = -2 int g/(y+z) dy via the constant real root sigma of 1 - 2y^3:
    # g/(y+z) = az/(y+z) + rsig/(y-sig) + (B y + C)/(y^2 + sig y + sig^2)
    sig = sp.Rational(1, 2) ** sp.Rational(1, 3)
    az = Z**2 / (1 + 2 * Z**3)
    rsig = -sp.Rational(1, 6) / (sig + Z)
    rem = g / (Y + Z) - az / (Y + Z) - rsig / (Y - sig)
    quot = rem * (Y**2 + sig * Y + sig**2)
    q0 = sp.radsimp(sp.cancel(sp.together(quot.subs(Y, 0))))
    q1 = sp.radsimp(sp.cancel(sp.together(quot.subs(Y, 1))))
    Bsol, Csol = sp.together(q1 - q0), q0
    wsig = sig * sp.sqrt(3)
    h2 = -2 * (az * sp.log(Y + Z) + rsig * sp.log(Y - sig)
               + (Bsol / 2) * sp.log(Y**2 + sig * Y + sig**2)
               + (Csol - Bsol * sig / 2) * (2 / wsig) * sp.atan((2 * Y + sig) / wsig))
    # guard: d h2/dy must reproduce -2 g/(y+z) (numeric check; sympy's simplify
    # cannot close the algebraic-number cancellation symbolically)
    check_fn = sp.lambdify((Y, Z), sp.diff(h2, Y) + 2 * g / (Y + Z), "math")
    for yv, zv in [(0.95, 0.4), (1.1, 0.8), (1.25, 1.1)]:
        assert abs(check_fn(yv, zv)) < 1e-12, f"h closed form wrong at {(yv, zv)}"
    out.append(ph_record(
        "ph-ii-class1-n.src",
        "sec 3.1 eq (3.6)-(3.10); sec 3.3.1 eq (3.31)",
        "f = 0 <=> the type [D]^{ee} x [II]^{n}",
        S=sp.Integer(0), G=g, N=1, lam=3, gam=1, form="paper", I_expr=I2, h_closed=h2,
        box={"x": [1.8, 2.8], "y": [0.9, 1.3], "z": [0.3, 1.2], "t": [0.0, 1.0]},
        excluded=["rr"],
        expected_type="[D]^{ee} ⊗ [II]^{n}",
        dists=[SD13, SD24, ASD14],
        src_checks=True,
        notes="g rigged so the cubic factor of the antiderivative denominator has "
              "the root x = y; the remaining quadratic integrates to an atan term.",
    ))
    # type III with nonexpanding ASD string (Lambda = 0): the antiderivative is
    # elementary for f(y) = y, so the source coframe ships verbatim
    out.append(ph_record(
        "ph-iii-n",
        "sec 3.5.3 eq (3.56)", "metryka_DxIII_class2",
        S=sp.Integer(0), G=Y, N=1, lam=0, gam=1, form="paper",
        I_expr=Y * sp.log(Y - X**2),
        box={"x": [0.5, 1.05], "y": [1.4, 2.4], "z": [0.3, 1.3], "t": [0.0, 1.0]},
        excluded=["rr", "y - x^2"],
        expected_type="[D]^{ee} \u2297 [III]^{n}",
        dists=[SD13, SD24, ASD14],
        src_checks=True,
        radius=0.12,
        notes="Lambda = 0 member; nonexpanding ASD string forces the degenerate "
              "side below type II, consistent with the nonexpanding theorem.",
    ))
    # class 2b (Lambda = 0, both ASD strings expanding): S = -1, G = -(a0+b0 y)
    out.append(ph_record(
        "ph-d-class2b",
        "sec 3.4.4 (class 2b)", "S_y G - S G_y = b0 S^3 with Lambda = 0",
        S=sp.Integer(-1), G=-(1 + Y), N=0, lam=0, gam=1, form="planes",
        gauge_y0=sp.Rational(3, 2),
        box={"x": [0.05, 0.15], "y": [1.0, 2.0], "z": [0.3, 1.2], "t": [0.0, 1.0]},
        excluded=["rr", "1 + y - 12*x", "6*x - 1 - y"],
        gen_box={"x": [0.35, 0.6], "y": [1.0, 2.0], "z": [0.3, 1.2], "t": [0.0, 1.0]},
        expected_type="[D]^{ee} \u2297 [D]^{ee}",
        dists=[SD13, SD24, ASD14, ASD23],
        extra_curv={"Cdot3": "432*gamma0/(6*x - 1 - y)^3"},
        radius=0.04,
        notes="a0 = b0 = 1; the generating function check runs on the branch "
              "12x > a0 + b0 y where the antiderivative's logarithm is real.",
    ))
    out.append(build_iii_e_record())
    return out


def build_iii_e_record():
    """Type [D]^{ee} x [III]^{e}: the printed metric with f(y) = y; the printed
    closed-form antiderivative (log + atan) is carried after verifying that its
    x-derivative reproduces the integrand exactly."""
    lam, gam = sp.Integer(3), sp.Integer(1)
    f = Y
    W = 36 * gam * f**2 + lam / (18 * f)
    r53 = (6 * X * f - 1) ** 2 * (lam / (36 * f**2) + gam / (2 * X**2 * f))
    rad = sp.sqrt(lam / (18 * f * gam))
    inner = (1 / W) * (sp.log((6 * X * f - 1) ** 2 / (1 + lam * X**2 / (18 * f * gam)))
                       + (12 * f / rad) * sp.atan(rad * X))
    assert sp.simplify(sp.diff(inner, X) - (6 * X * f - 1) / (X * f * r53)) == 0
    Ff = sp.together(sp.diff(inner, Y))
    vx = sp.cancel(-(6 * X * f - 1) / (X * f * r53))
    fbig = sp.cancel(2 * X * (6 * X * f - 1) / ((Y + Z) ** 2 * W))
    # h = 2 int dy/((y+z) W): partial fractions over (6y+1)(36y^2-6y+1)
    az = -12 * Z / ((1 - 6 * Z) * (36 * Z**2 + 6 * Z + 1))
    b6 = -sp.Rational(1, 9) / (Z - sp.Rational(1, 6))
    quot = (12 * Y / ((Y + Z) * (6 * Y + 1) * (36 * Y**2 - 6 * Y + 1))
            - az / (Y + Z) - b6 / (Y + sp.Rational(1, 6))) * (36 * Y**2 - 6 * Y + 1)
    q0 = sp.cancel(sp.together(quot.subs(Y, 0)))
    q1 = sp.cancel(sp.together(quot.subs(Y, 1)))
    Bq, Cq = sp.together(q1 - q0), q0
    h53 = (az * sp.log(Y + Z) + b6 * sp.log(Y + sp.Rational(1, 6))
           + (Bq / 72) * sp.log(36 * Y**2 - 6 * Y + 1)
           + ((Cq + Bq / 12) / (3 * sp.sqrt(3))) * sp.atan((12 * Y - 1) / sp.sqrt(3)))
    chk = sp.lambdify((Y, Z), sp.diff(h53, Y) - 2 / ((Y + Z) * W), "math")
    for yv, zv in [(0.7, 0.5), (1.1, 0.9), (0.5, 1.2)]:
        assert abs(chk(yv, zv)) < 1e-12, "closed form of h53 wrong"
    hy = sp.cancel(2 / ((Y + Z) * W))
    hz = sp.together(sp.diff(h53, Z))
    defs = [
        ("Wd", to_expr(W)),
        ("rr", to_expr(r53)),
        ("vx", to_expr(vx)),
        ("hy", to_expr(hy)),
        ("hz", to_expr(hz)),
        ("Ff", to_expr(Ff)),
        ("thx", "0"),
        ("thy", "-(hy - Ff)"),
        ("thz", "hz"),
        ("Fbig", to_expr(fbig)),
    ]
    return {
        "id": "ph-iii-e",
        "family": "para-hermite-expanding",
        "paper_anchor": "sec 3.5.2 eq (3.53)",
        "quote": "metryka_DxIII_class1",
        "chart": ["x", "y", "z", "t"],
        "params": {"Lambda": "3", "gamma0": "1"},
        "param_constraints": [{"expr": "gamma0", "kind": "nonzero"},
                              {"expr": "Lambda", "kind": "positive",
                               "note": "positive radicand branch of the atan term"}],
        "defs": defs,
        "tetrad": _PLANES_TETRAD,
        "metric_check": dict(_PH_METRIC),
        "declared_distributions": [SD13, SD24, ASD14],
        "expected_type": "[D]^{ee} \u2297 [III]^{e}",
        "expected_curvature": {"C3": "2*gamma0/x^3", "Cdot3": "0",
                               "Cdot5": "0", "Cdot4": "0"},
        "sample_domain": {"box": {"x": [0.5, 1.5], "y": [0.4, 1.4],
                                  "z": [0.3, 1.3], "t": [0.0, 1.0]},
                          "excluded": ["6*x*y - 1"], "exclusion_radius": 0.15},
        "notes": "f(y) = y on the positive-radicand branch; the negative branch "
                 "(atanh form) is not shipped and stays unverified.",
    }




# ---------------------------------------------------------------------------
# para-Kahler family in double-null coordinates (chart p, q, x, y)
# ---------------------------------------------------------------------------

_PK_TETRAD = [
    ["0", "0", "1", "0"],                # e1 = dx
    ["Mpx", "Mqx", "0", "0"],            # e2
    ["0", "0", "0", "1"],                # e3 = dy
    ["Mpy", "Mqy", "0", "0"],            # e4
]

_PK_METRIC = {"p,x": "Mpx", "q,x": "Mqx", "p,y": "Mpy", "q,y": "Mqy"}

_PK_CONNECTION = {
    "42": ["0", "0", "0", "0"],
    "31": ["0", "0", "0", "0"],
    "41": ["Apk", "0", "Bpk", "0"],
    "32": ["Cpk", "0", "Dpk", "0"],
    "12+34": ["-D(lnf,x)", "0", "-D(lnf,y)", "0"],
    "34-12": ["D(lnf,x) - 2*Bpk", "0", "-(D(lnf,y) + 2*Cpk)", "0"],
}


def pk_record(rid, anchor, quote, *, M, lam, box, excluded, expected_type,
              dists, extra_curv=None, notes="", split=None, radius=0.05):
    """Double-null-coordinates record built from a generating function M."""
    lam_s = sp.Rational(lam)
    M = M.subs(sp.Symbol("Lambda"), lam_s)
    mpx = sp.together(sp.diff(M, P, X))
    mqx = sp.together(sp.diff(M, Q, X))
    mpy = sp.together(sp.diff(M, P, Y))
    mqy = sp.together(sp.diff(M, Q, Y))
    defs = [
        ("Mpx", to_expr(mpx)), ("Mqx", to_expr(mqx)),
        ("Mpy", to_expr(mpy)), ("Mqy", to_expr(mqy)),
        ("ff", "Mpx*Mqy - Mqx*Mpy"),
        ("lnf", "ln(ff)"),
        ("Apk", "(Mpx*D(Mqx,x) - Mqx*D(Mpx,x))/ff"),
        ("Bpk", "(Mpx*D(Mqx,y) - Mqx*D(Mpx,y))/ff"),
        ("Cpk", "(Mpy*D(Mqx,y) - Mqy*D(Mpx,y))/ff"),
        ("Dpk", "(Mpy*D(Mqy,y) - Mqy*D(Mpy,y))/ff"),
    ]
    gen_defs = [("M", to_expr(M))]
    names = {"M": "M"}
    if split is not None:
        gsplit, lsplit, hsplit = split
        gen_defs += [("gsplit", to_expr(gsplit)), ("lsplit", to_expr(lsplit)),
                     ("hsplit", to_expr(hsplit))]
        names.update({"g_split": "gsplit", "l_split": "lsplit", "h_split": "hsplit"})
    raw = {
        "id": rid,
        "family": "para-kahler-double-null",
        "paper_anchor": anchor,
        "quote": quote,
        "chart": ["p", "q", "x", "y"],
        "params": {"Lambda": str(lam_s)},
        "param_constraints": [{"expr": "Lambda", "kind": "nonzero"}],
        "defs": defs,
        "tetrad": _PK_TETRAD,
        "metric_check": dict(_PK_METRIC),
        "connection_check": dict(_PK_CONNECTION),
        "declared_distributions": dists,
        "expected_type": expected_type,
        "expected_curvature": {"C3": to_expr(-2 * lam_s / 3), **(extra_curv or {})},
        "sample_domain": {"box": box, "excluded": list(excluded),
                          "exclusion_radius": radius},
        "generators": {
            "kind": "para-kahler-m",
            "chart": ["p", "q", "x", "y"],
            "defs": gen_defs,
            "names": names,
            "domain": {"box": box, "excluded": list(excluded),
                       "exclusion_radius": radius},
        },
    }
    if notes:
        raw["notes"] = notes
    return raw


def _pk_printed_cdots(beta, delta, lam):
    """The printed anti-self-dual curvature of the nonexpanding generating
    function, evaluated for concrete beta(y,p), delta(y,p) -> closed forms."""
    f = sp.together(4 * sp.diff(beta, Y) * sp.diff(delta, P)
                    / (lam**2 * (Q - beta) ** 2 * (X - delta) ** 2))
    by, dp_ = sp.diff(beta, Y), sp.diff(delta, P)
    dy_, dpy = sp.diff(delta, Y), sp.diff(delta, P, Y)
    dpp = sp.diff(delta, P, 2)
    cdot2 = sp.together((-4 * by / (lam * (Q - beta) ** 2)) * (
        sp.diff(dpp / dp_, Y) + 2 * dpy / (X - delta)
        + 2 * dp_ * dy_ / (X - delta) ** 2) / f)
    t1 = ((X - delta) ** 2 / (Q - beta) ** 3) * (2 * by**2 / (lam * dp_)) \
        * sp.diff(sp.diff(dpp / dp_, P) - dpp**2 / (2 * dp_**2), Y)
    t2 = -(1 / (X - delta)) * 16 * dpy * dy_ * by / (lam * (Q - beta) ** 2)
    t3 = -(1 / (X - delta) ** 2) * 8 * dp_ * dy_**2 * by / (lam * (Q - beta) ** 2)
    lnbd = sp.log(by * dp_)
    t4 = -((X - delta) ** 2 / (Q - beta) ** 2) * (by / lam) * (
        (1 / dp_) * sp.diff(lnbd, Y, P) * sp.diff(sp.log(dp_), Y, P)
        + sp.diff((by / dp_) * sp.diff((1 / by) * sp.diff(lnbd, Y, P), Y), P))
    byy = sp.diff(beta, Y, 2)
    t5 = ((X - delta) / (Q - beta) ** 2) * (2 * by / lam) * sp.diff(
        sp.diff(byy / by, Y) - 2 * dpy**2 / dp_**2 - byy**2 / (2 * by**2), P)
    t6 = -(1 / (Q - beta) ** 2) * (8 * by / lam) * sp.diff(dy_ * dpy / dp_, P)
    cdot1 = sp.together(2 * (t1 + t2 + t3 + t4 + t5 + t6) / f)
    return cdot2, cdot1


def build_pk_records():
    lam = 3
    lam_s = sp.Integer(lam)
    out = []
    # nonexpanding ASD string, generic beta/delta violating the D-degeneration
    beta = -1 / Y
    delta = sp.exp(Y * P)
    M11 = (1 / lam_s) * sp.log(lam_s**2 * (Q - beta) ** 2 * (X - delta) ** 2
                               / (4 * sp.diff(beta, Y) * sp.diff(delta, P)))
    c2_11, c1_11 = _pk_printed_cdots(beta, delta, lam_s)
    g11 = (1 / lam_s) * (2 * sp.log(X - delta) - sp.log(sp.diff(delta, P))
                         + sp.log(lam_s / 2))
    l11 = (1 / lam_s) * (2 * sp.log(Q - beta) - sp.log(sp.diff(beta, Y))
                         + sp.log(lam_s / 2))
    out.append(pk_record(
        "pk-ii-n",
        "sec 4.2.2 eq (4.18), (4.20)",
        "para_Kahler_nonexpandingASD_nullstrings",
        M=M11, lam=lam,
        box={"p": [0.2, 0.8], "q": [0.2, 0.9], "x": [2.5, 4.0], "y": [0.2, 0.8]},
        excluded=["x - exp(y*p)", "q + 1/y"],
        expected_type="[D]^{nn} ⊗ [II]^{n}",
        dists=[SD13, SD24, ASD14],
        extra_curv={"Cdot3": to_expr(-2 * lam_s / 3),
                    "Cdot2": to_expr(c2_11), "Cdot1": to_expr(c1_11)},
        split=(g11, l11, sp.Integer(1)),
        notes="beta=-1/y, delta=exp(y p): delta breaks the type-D degeneration "
              "conditions, so the anti-self-dual side stays type II.",
    ))
    # type D: beta = -1/y, delta = -1/p
    beta = -1 / Y
    delta = -1 / P
    M12 = (1 / lam_s) * sp.log(lam_s**2 * (Q * Y + 1) ** 2 * (P * X + 1) ** 2 / 4)
    g12 = (1 / lam_s) * (2 * sp.log(X + 1 / P) + 2 * sp.log(P) + sp.log(lam_s / 2))
    l12 = (1 / lam_s) * (2 * sp.log(Q + 1 / Y) + 2 * sp.log(Y) + sp.log(lam_s / 2))
    out.append(pk_record(
        "pk-d-nn",
        "sec 4.2.2 eq (4.18), (4.22)",
        "funkcje_betaidelta_dlatypu_DxD; beta=-y^{-1} and delta=-p^{-1}",
        M=M12, lam=lam,
        box={"p": [0.3, 1.3], "q": [0.3, 1.3], "x": [0.3, 1.3], "y": [0.3, 1.3]},
        excluded=[],
        expected_type="[D]^{nn} ⊗ [D]^{nn}",
        dists=[SD13, SD24, ASD14, ASD23],
        extra_curv={"Cdot3": to_expr(-2 * lam_s / 3), "Cdot2": "0", "Cdot1": "0"},
        split=(g12, l12, sp.Integer(1)),
    ))
    # dancing metric generator
    M14 = (3 / lam_s) * sp.log(P + Q * X + lam_s**2 * Y / 9)
    out.append(pk_record(
        "dancing",
        "sec 4.2.3 remark, eq (4.24)",
        "The only nonzero curvature coefficient is C^{(3)} = -2 Lambda/3",
        M=M14, lam=lam,
        box={"p": [0.3, 1.5], "q": [0.3, 1.5], "x": [0.3, 1.5], "y": [0.3, 1.5]},
        excluded=["p + q*x + Lambda^2*y/9"],
        expected_type="[D]^{nn} ⊗ [−]^{e}",
        dists=[SD13, SD24, ASD14],
        extra_curv={"Cdot5": "0", "Cdot4": "0", "Cdot3": "0", "Cdot2": "0",
                    "Cdot1": "0"},
        notes="the expanding anti-self-dual string with a flat ASD side.",
    ))
    # Klein-Beltrami model (explicit, no generator)
    kb = {
        "id": "klein-beltrami",
        "family": "para-kahler-double-null",
        "paper_anchor": "sec 4.2.2 remark, eq (4.22)",
        "quote": "it is equivalent to locally symmetric model",
        "chart": ["p", "q", "x", "y"],
        "params": {"Lambda": "3"},
        "param_constraints": [{"expr": "Lambda", "kind": "nonzero"}],
        "defs": [("wp", "(1 + Lambda*p*x/2)"), ("wq", "(1 + Lambda*q*y/2)")],
        "tetrad": [
            ["wp^(-2)", "0", "0", "0"],
            ["0", "0", "1", "0"],
            ["0", "wq^(-2)", "0", "0"],
            ["0", "0", "0", "1"],
        ],
        "metric_check": {"p,x": "wp^(-2)", "q,y": "wq^(-2)"},
        "declared_distributions": [SD13, SD24, ASD14, ASD23],
        "expected_type": "[D]^{nn} ⊗ [D]^{nn}",
        "expected_curvature": {"C3": "-2", "Cdot3": "-2", "Cdot2": "0", "Cdot1": "0"},
        "sample_domain": {"box": {"p": [0.2, 1.0], "q": [0.2, 1.0],
                                  "x": [0.2, 1.0], "y": [0.2, 1.0]},
                          "excluded": ["wp", "wq"], "exclusion_radius": 0.05},
    }
    out.append(kb)
    return out


# ---------------------------------------------------------------------------
# nonexpanding hyperheavenly family (chart x, y, p, q)
# ---------------------------------------------------------------------------

_PRF_TETRAD = [
    ["0", "0", "0", "-1"],                                        # e1 = -dq
    ["0", "-1", "Lambda*x*y/3 + Txy", "-(Lambda*y^2/3 - Txx)"],   # e2
    ["0", "0", "1", "0"],                                         # e3 = dp
    ["-1", "0", "Lambda*x^2/3 - Tyy", "-(Lambda*x*y/3 + Txy)"],   # e4
]

_PRF_METRIC = {
    "y,q": "1", "x,p": "-1",
    "p,p": "2*(Lambda*x^2/3 - Tyy)",
    "q,q": "2*(Lambda*y^2/3 - Txx)",
    "p,q": "-2*(Lambda*x*y/3 + Txy)",
}

_PRF_CONNECTION = {
    "42": ["0", "0", "0", "0"],
    "31": ["0", "0", "0", "0"],
    "41": ["-Txxx", "0", "Txxy + Lambda*y/3", "0"],
    "32": ["-(Txyy + Lambda*x/3)", "0", "Tyyy", "0"],
    "12+34": ["-Lambda*y", "0", "-Lambda*x", "0"],
    "34-12": ["-(2*Txxy - Lambda*y/3)", "0", "2*Txyy - Lambda*x/3", "0"],
}


def prf_record(rid, anchor, quote, *, A, B, C, lam, box, excluded, expected_type,
               dists, extra_curv=None, notes="", coordinate_change=None, radius=0.05):
    """Nonexpanding-family record from the x^2-quadratic key function."""
    lam_s = sp.Rational(lam)
    theta = A * X**2 / 2 + B * X + C
    d = {}
    for name, orders in (("Txx", (X, X)), ("Txy", (X, Y)), ("Tyy", (Y, Y)),
                         ("Txxx", (X, X, X)), ("Txxy", (X, X, Y)),
                         ("Txyy", (X, Y, Y)), ("Tyyy", (Y, Y, Y))):
        d[name] = sp.together(sp.diff(theta, *orders))
    defs = [(k, to_expr(v)) for k, v in d.items()]
    raw = {
        "id": rid,
        "family": "hyperheavenly-nonexpanding",
        "paper_anchor": anchor,
        "quote": quote,
        "chart": ["x", "y", "p", "q"],
        "params": {"Lambda": str(lam_s)},
        "param_constraints": [{"expr": "Lambda", "kind": "nonzero"}],
        "defs": defs,
        "tetrad": _PRF_TETRAD,
        "metric_check": dict(_PRF_METRIC),
        "connection_check": dict(_PRF_CONNECTION),
        "declared_distributions": dists,
        "expected_type": expected_type,
        "expected_curvature": {"C3": to_expr(-2 * lam_s / 3), **(extra_curv or {})},
        "sample_domain": {"box": box, "excluded": list(excluded),
                          "exclusion_radius": radius},
        "generators": {
            "kind": "hh-split",
            "chart": ["x", "y", "p", "q"],
            "defs": [("A", to_expr(A)), ("B", to_expr(B)), ("C", to_expr(C)),
                     ("Theta", "A*x^2/2 + B*x + C")],
            "names": {"A": "A", "B": "B", "C": "C", "Theta": "Theta"},
            "domain": {"box": box, "excluded": list(excluded),
                       "exclusion_radius": radius},
        },
    }
    if notes:
        raw["notes"] = notes
    if coordinate_change:
        raw["coordinate_change"] = coordinate_change
    return raw


def build_prf_records():
    lam = 3
    lam_s = sp.Integer(lam)
    out = []
    zq2 = Q - 2 / (lam_s * Y)   # the shifted null coordinate, m = 2
    f1 = sp.Rational(1, 2)
    # type II: f = f1 z^2, h = 0
    fA = -lam_s * Y**2 / 6
    fB = f1 * (Y**3 * Q**2 / 3 - 2 * Y**2 * Q / lam_s + 4 * Y / lam_s**2)
    fC = (-(f1**2 / (3 * lam_s)) * Q**4 * Y**4
          + (8 * f1**2 / (3 * lam_s**2)) * Q**3 * Y**3
          - (64 * f1**2 / lam_s**4) * Q * (Y * sp.log(Y) - Y)
          - (64 * f1**2 / lam_s**5) * sp.log(Y)
          - sp.Rational(28, 243))  # integration constant closing the third split equation
    f_expr = f1 * zq2**2
    cdot2_15 = sp.together(4 * f_expr + 8 * sp.diff(f_expr, Q) / (lam_s * Y)
                           + 8 * sp.diff(f_expr, Q, 2) / (lam_s**2 * Y**2))
    cdot1_15 = sp.together(
        -(16 * f1**2 / lam_s) * (Q**4 + (16 / (lam_s**3 * Y**3)) * (Q - 3 / (lam_s * Y))))
    out.append(prf_record(
        "hh-ii-n",
        "sec 5.2 eq (5.8)-(5.12)",
        "Metryka_DxII_nieeks",
        A=fA, B=fB, C=fC, lam=lam,
        box={"x": [0.3, 1.5], "y": [0.4, 1.4], "p": [0.3, 1.3], "q": [0.3, 1.3]},
        excluded=[],
        expected_type="[D]^{nn} ⊗ [II]^{n}",
        dists=[SD13, SD24, ASD14],
        extra_curv={"Cdot3": to_expr(-2 * lam_s / 3),
                    "Cdot2": to_expr(cdot2_15), "Cdot1": to_expr(cdot1_15)},
        notes="B_y = y^2 f(p,z), C_yy from the once-differentiated third split "
              "equation, with f = z^2/2 and h = 0 integrated in closed form.",
    ))
    # type D: f = h = 0
    change = {
        "target": "klein-beltrami",
        "map": {
            "x": "-(2/Lambda)*x/(1 + Lambda*p*x/2)",
            "y": "-(2/Lambda)*y/(1 + Lambda*q*y/2)",
            "p": "Lambda*p/2",
            "q": "-1/y",
        },
    }
    out.append(prf_record(
        "hh-d-nn",
        "sec 5.2 eq (5.14)",
        "Metryka_DxD_nieeks",
        A=fA, B=sp.Integer(0), C=sp.Integer(0), lam=lam,
        box={"x": [0.3, 1.5], "y": [0.3, 1.5], "p": [0.3, 1.3], "q": [0.3, 1.3]},
        excluded=[],
        expected_type="[D]^{nn} ⊗ [D]^{nn}",
        dists=[SD13, SD24, ASD14, ASD23],
        extra_curv={"Cdot3": to_expr(-2 * lam_s / 3), "Cdot2": "0", "Cdot1": "0"},
        coordinate_change=change,
        notes="the printed coordinate change maps this record onto the "
              "locally symmetric model pointwise.",
    ))
    # type III: A = 0, B_y = y f(p,z), z = q - 3/(Lambda y), f = f1 z^2
    zq3 = Q - 3 / (lam_s * Y)
    fB3 = f1 * (Y**2 * Q**2 / 2 - 6 * Q * Y / lam_s + (9 / lam_s**2) * sp.log(Y))
    # C_yy = y h + 9 f f_z/(Lambda^2 y) + 6 f^2/Lambda + 3 f_p/Lambda, h = 0
    fC3 = ((3 * f1**2 / lam_s) * Q**4 * Y**2
           - (54 * f1**2 / lam_s**2) * Q**3 * (Y * sp.log(Y) - Y)
           - (162 * f1**2 / lam_s**3) * Q**2 * sp.log(Y)
           - (81 * f1**2 / lam_s**4) * Q / Y
           - sp.Rational(5, 2) * Q**2)  # q-dependent integration constant
    f3 = f1 * zq3**2
    cdot2_17 = sp.together(18 * sp.diff(f3, Q, 2) / (lam_s**2 * Y**3))
    cdot1_17 = sp.together(
        (54 / (lam_s**3 * Y**5)) * (sp.diff(f3, Q, 3) - lam_s * Y * sp.diff(f3, Q, 2)) * X
        + (18 / lam_s**2) * (-6 * f3 * sp.diff(f3, Q) / Y**3
                             + (27 * sp.diff(f3, Q) * sp.diff(f3, Q, 2)
                                + 9 * f3 * sp.diff(f3, Q, 3)) / (lam_s**2 * Y**5)))
    out.append(prf_record(
        "hh-iii-e",
        "sec 5.3 eq (5.16)",
        "metryka_typow_DxIIIN",
        A=sp.Integer(0), B=fB3, C=fC3, lam=lam,
        box={"x": [0.3, 1.4], "y": [0.5, 1.5], "p": [0.3, 1.4], "q": [0.3, 1.4]},
        excluded=[],
        expected_type="[D]^{nn} ⊗ [III]^{e}",
        dists=[SD13, SD24, ASD14],
        extra_curv={"Cdot3": "0", "Cdot2": to_expr(cdot2_17),
                    "Cdot1": to_expr(cdot1_17)},
    ))
    # type N: f = f0 z, h = 0
    f0 = sp.Integer(1)
    fB4 = f0 * (Y**2 * Q / 2 - Y)
    fC4 = f0**2 * (Q**2 * Y**2 - 3 * Q * (Y * sp.log(Y) - Y) - sp.log(Y)) \
        - sp.Rational(5, 3)  # integration constant closing the third split equation
    f4 = f0 * zq3
    cdot1_18 = sp.together((18 / lam_s**2) * (-6 * f4 * sp.diff(f4, Q) / Y**3))
    out.append(prf_record(
        "hh-n-e",
        "sec 5.3, type N subcase",
        "the gauge freedom still available allows one to bring f into f = f0 z",
        A=sp.Integer(0), B=fB4, C=fC4, lam=lam,
        box={"x": [0.3, 1.4], "y": [0.75, 1.3], "p": [0.3, 1.4], "q": [1.6, 2.4]},
        excluded=["q*y - 1"],
        expected_type="[D]^{nn} ⊗ [N]^{e}",
        dists=[SD13, SD24, ASD14],
        extra_curv={"Cdot3": "0", "Cdot2": "0", "Cdot1": to_expr(cdot1_18)},
        radius=0.15,
    ))
    return out


def main():
    t0 = time.time()
    records = build_ph_records() + build_pk_records() + build_prf_records()
    sys.path.insert(0, str(ROOT / "scripts"))
    from verify_records import verify_record, report
    results = [verify_record(raw) for raw in records]
    ok = report(results)
    if not ok:
        raise SystemExit("record verification failed; catalog not written")
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(records, indent=1, ensure_ascii=False) + "\n",
                   encoding="utf-8")
    print(f"wrote {OUT} with {len(records)} records in {time.time()-t0:.1f}s")


if __name__ == "__main__":
    main()
