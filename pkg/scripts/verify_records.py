"""Engine verification of assembled catalog records (used by make_catalog)."""

from __future__ import annotations

import numpy as np

from nullstring.catalog import MetricRecord, sample_points
from nullstring.exprlang import eval_value
from nullstring.frame import connection, curvature, metric_from_tetrad
from nullstring.pdes import (residual_hh_split, residual_hyperheavenly,
                             residual_liouville_split, residual_para_kahler,
                             residual_przanowski)
from nullstring.strings import type_symbol

_SLOTS = {"C3": lambda c: c.c(3), "Cdot3": lambda c: c.cdot(3),
          "Cdot2": lambda c: c.cdot(2), "Cdot1": lambda c: c.cdot(1),
          "Cdot4": lambda c: c.cdot(4), "Cdot5": lambda c: c.cdot(5)}


def verify_record(raw: dict, n_points: int = 3, seed: int = 11) -> dict:
    r = MetricRecord(raw)
    pts = sample_points(r, n_points, seed=seed)
    lam = r.lambda_value
    worst = {k: 0.0 for k in ("cab", "R", "struct", "metric", "curv", "conn", "gen")}
    for pt in pts:
        cur = curvature(r.frame, pt)
        worst["cab"] = max(worst["cab"], float(np.max(np.abs(cur.cab))) / cur.scale)
        worst["R"] = max(worst["R"], abs(cur.scalar + 4 * lam) / (1 + abs(lam)))
        con = connection(r.frame, pt)
        worst["struct"] = max(worst["struct"],
                              con.structure_residual / (1 + con.tetrad_scale))
        gm = metric_from_tetrad(r.frame, pt, 2)
        for i, ci in enumerate(r.scope.coords):
            for j in range(i, 4):
                cj = r.scope.coords[j]
                src = raw.get("metric_check", {}).get(f"{ci},{cj}")
                want = eval_value(r.expr(src), r.scope, pt) if src else 0.0
                worst["metric"] = max(worst["metric"],
                                      abs(gm[i][j].value - want) / (1 + abs(want)))
        for k, fn in _SLOTS.items():
            src = raw.get("expected_curvature", {}).get(k)
            if src:
                want = eval_value(r.expr(src), r.scope, pt)
                worst["curv"] = max(worst["curv"], abs(fn(cur) - want) / (1 + abs(want)))
        forms = {"42": (4, 2), "31": (3, 1), "41": (4, 1), "32": (3, 2)}
        for k, row in raw.get("connection_check", {}).items():
            vals = np.array([eval_value(r.expr(s), r.scope, pt) for s in row])
            if k in forms:
                got = con.form_paper(*forms[k])
            elif k == "12+34":
                got = con.form_paper(1, 2) + con.form_paper(3, 4)
            else:
                got = con.form_paper(3, 4) - con.form_paper(1, 2)
            worst["conn"] = max(worst["conn"], float(np.max(np.abs(got - vals)))
                                / (1 + float(np.max(np.abs(vals)))))
        worst["gen"] = max(worst["gen"], _generator_residual(r, pt))
    ts = type_symbol(r.frame, r.distributions, pts)
    return {"id": r.id, "type": ts, "type_ok": ts == r.expected_type, **worst}


def _generator_residual(r: MetricRecord, pt: dict) -> float:
    gen = r.generator
    if gen is None:
        return 0.0
    dom = gen.sample_domain or {}
    gpts = sample_points(dom, 1, seed=int(1000 * pt[r.scope.coords[0]]) % 9973,
                         scope=gen.scope) if dom else [pt]
    out = 0.0
    for gpt in gpts:
        if gen.kind == "przanowski-q":
            res = residual_przanowski(gen.expr("Q"), gen.scope, gpt)
            out = max(out, abs(res.value) / max(1.0, res.scale))
        elif gen.kind == "para-kahler-m":
            res = residual_para_kahler(gen.expr("M"), gen.scope, gpt)
            out = max(out, abs(res.value) / max(1.0, res.scale))
        elif gen.kind == "hyperheavenly-theta":
            res = residual_hyperheavenly(gen.expr("Theta"), gen.scope, gpt)
            out = max(out, abs(res.value) / max(1.0, res.scale))
        elif gen.kind == "hh-split":
            rs = residual_hh_split(gen.expr("A"), gen.expr("B"), gen.expr("C"),
                                   gen.scope, gpt)
            out = max(out, max(abs(x.value) / max(1.0, x.scale) for x in rs))
            rt = residual_hyperheavenly(gen.expr("Theta"), gen.scope, gpt)
            out = max(out, abs(rt.value) / max(1.0, rt.scale))
    return out


def report(results: list[dict]) -> bool:
    ok = True
    for res in results:
        bad = (not res["type_ok"]) or any(
            res[k] > 5e-8 for k in ("cab", "R", "struct", "metric", "curv", "conn", "gen"))
        ok = ok and not bad
        flag = "OK " if not bad else "***"
        print(f"{flag}{res['id']:24s} cab={res['cab']:.1e} R={res['R']:.1e} "
              f"st={res['struct']:.1e} met={res['metric']:.1e} curv={res['curv']:.1e} "
              f"conn={res['conn']:.1e} gen={res['gen']:.1e}")
        if not res["type_ok"]:
            print(f"    type mismatch: {res['type']!r}")
    return ok
