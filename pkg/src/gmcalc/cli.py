"""Command line interface: describe the lattice, run verification suites, evaluate formulas.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage or
configuration error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .config import ALL_SUITES, load_config
from .errors import ConfigError, GmcalcError
from .levilattice import (
    d_constant,
    enumerate_levis,
    gfull,
    levi_by_label,
    levi_lattice,
    mzero,
    parabolics,
    theta,
    weyl_cosets,
)
from .rootdatum import RatVec, build_root_system, element_from_word, weyl_group
from .suites import run_suites


def _ratvec(items) -> RatVec:
    return RatVec.of([Fraction(str(x)) for x in items])


def _quad_str(val) -> str:
    """Exact rendering of a rational-square value; rational when it is one."""
    if val.is_zero():
        return "0"
    from math import isqrt

    num, den = val.square.numerator, val.square.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        root = Fraction(rn, rd)
        return str(root if val.sign > 0 else -root)
    return ("-" if val.sign < 0 else "") + f"sqrt({val.square})"


def cmd_describe(args) -> int:
    try:
        cfg = load_config(path=args.config, overrides={"group": args.group})
        d = build_root_system(cfg.group, cfg.gram)
    except (ConfigError, GmcalcError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"group {d.label}: rank {d.rank}, {len(d.roots)} roots, Weyl order {len(weyl_group(d))}")
    print("gram matrix rows:")
    for row in d.gram:
        print("  [" + ", ".join(str(x) for x in row) + "]")
    print("roots (index: coordinates in the simple basis):")
    for line in d.describe_roots():
        print("  " + line)
    print("Levi subgroups (label, dim of split center, chambers, coset count):")
    for L in levi_lattice(d):
        n_par = len(parabolics(L))
        n_cosets = len(weyl_cosets(L))
        roots = ",".join(str(i) for i in sorted(L.root_subset))
        print(f"  {L.label:10s} dim {L.dim}  chambers {n_par:3d}  cosets {n_cosets:3d}  roots [{roots}]")
    return 0


def cmd_verify(args) -> int:
    overrides = {"group": args.group}
    if args.suite:
        overrides["suites"] = args.suite
    try:
        cfg = load_config(path=args.config, overrides=overrides)
        report = run_suites(cfg)
    except (ConfigError, GmcalcError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out_dir = Path(args.out or os.environ.get("GMCALC_REPORT_DIR") or cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / f"report-{cfg.group}.json"
    report_path.write_text(report.render(), encoding="utf-8")
    timing_path = out_dir / f"report-{cfg.group}.timing.json"
    timing_path.write_text(json.dumps(report.timing_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for rec in sorted(report.records, key=lambda r: r.id):
        residual = "" if rec.residual is None else f"  residual={rec.residual:.3g}"
        extra = f"  ({rec.detail})" if rec.detail else ""
        print(f"[{rec.status:4s}] {rec.id}{residual}{extra}")
    summary = report.summary()
    print(
        f"summary: {summary['pass']} pass, {summary['fail']} fail, {summary['skip']} skip"
        f" -> {report_path}"
    )
    return 0 if report.passed() else 1


def _spectral_from_args(d, payload):
    from .spectral import build_spectral_triple, tau_class

    triple = build_spectral_triple(
        d, payload.get("sigma_roots", []), payload.get("r_word", [])
    )
    return tau_class(triple)


def _model_from_args(d, cfg, payload):
    from .asymptotic import SigmaModel
    from .spectral import density_for

    t = _spectral_from_args(d, payload)
    template = payload.get("model", cfg.m_model)
    fns = density_for(t, template)
    from .levilattice import base_chamber

    mu = _ratvec(payload.get("mu", [0] * d.rank))
    if "eval" in payload:
        ev = _ratvec(payload["eval"])
    else:
        pt = base_chamber(d).chamber_point
        ev = RatVec.of([Fraction(x) * Fraction(1, 7) for x in pt.coords])
    return SigmaModel(t, fns, mu, ev)


def cmd_eval(args) -> int:
    try:
        cfg = load_config(path=args.config, overrides={"group": args.group})
        d = build_root_system(cfg.group, cfg.gram)
        payload = json.loads(args.args) if args.args else {}
    except (ConfigError, GmcalcError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        value, extra = _evaluate(d, cfg, args.expr, payload)
    except KeyError as exc:
        print(f"error: unknown expression or missing argument: {exc}", file=sys.stderr)
        return 2
    except (GmcalcError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"group: {d.label}")
    print("gram: " + json.dumps([[str(x) for x in row] for row in d.gram]))
    print(f"expression: {args.expr}")
    print("arguments: " + json.dumps(payload, sort_keys=True))
    for k, v in extra.items():
        print(f"{k}: {v}")
    print(f"value: {value}")
    return 0


def _evaluate(d, cfg, expr, payload):
    if expr == "theta":
        M = levi_by_label(d, payload.get("M", "M0"))
        P = parabolics(M)[int(payload.get("chamber", 0))]
        lam = _ratvec(payload["lambda"])
        val = theta(P, lam)
        return float(val), {"product": str(val.product), "covol_sq": str(val.covol.square)}
    if expr == "d":
        L1 = levi_by_label(d, payload["L1"])
        L = levi_by_label(d, payload["L"])
        S = levi_by_label(d, payload["S"])
        val = d_constant(L1, L, S)
        return _quad_str(val), {"float": float(val), "square": str(val.square)}
    if expr == "n_beta":
        from .spectral import n_beta

        t = _spectral_from_args(d, payload)
        val = n_beta(t, _ratvec(payload["beta"]))
        return str(val), {"home": t.levi_L.label}
    if expr in ("nL", "kL"):
        from .spectral import discrete_constants

        t = _spectral_from_args(d, payload)
        L = levi_by_label(d, payload.get("L", "G"))
        res = discrete_constants(t, L)
        return (str(res["nL"]) if expr == "nL" else str(res["kL"])), {"home": t.levi_L.label}
    if expr == "alpha_X":
        from .asymptotic import multiplier_alpha

        M1 = levi_by_label(d, payload.get("M1", "M0"))
        val = multiplier_alpha(M1, _ratvec(payload.get("nu", [0] * d.rank)), _ratvec(payload.get("X", [0] * d.rank)))
        return f"{val.real}+{val.imag}j", {"modulus": abs(val)}
    if expr == "eps_M":
        from .asymptotic import eps_M_sign

        w = element_from_word(d, payload.get("word", []))
        sigma = payload.get("sigma", list(d.pos_indices))
        return eps_M_sign(d, w, sigma), {"word": payload.get("word", [])}
    if expr == "delta_Sigma":
        from .asymptotic import weyl_denominator

        Y = [complex(a, b) for a, b in payload["Y"]]
        sigma = payload.get("sigma", list(d.pos_indices))
        val = weyl_denominator(d, sigma, Y)
        return f"{val.real}+{val.imag}j", {}
    if expr == "c_coeff":
        from .asymptotic import c_coefficient_example

        model = _model_from_args(d, cfg, payload)
        w = element_from_word(d, payload.get("w_word", []))
        M = levi_by_label(d, payload.get("M", "M0"))
        L = levi_by_label(d, payload.get("L", "M0"))
        P = parabolics(levi_by_label(d, payload.get("P_levi", "M0")))[int(payload.get("P", 0))]
        u = complex(*payload.get("u", (1.0, 0.0)))
        val = c_coefficient_example(model, w, model.mu_im, P, u, L, M)
        return f"{val.real}+{val.imag}j", {}
    if expr == "phi_TT":
        from .asymptotic import phi_TT_expansion

        model = _model_from_args(d, cfg, payload)
        P = parabolics(mzero(d))[int(payload.get("P", 0))]
        exp = phi_TT_expansion(model, P, payload.get("domain", "U0"))
        return json.dumps(exp.serialize(), sort_keys=True), {"terms": len(exp.terms)}
    raise KeyError(expr)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gmcalc", description="Root-system identity workbench")
    ap.add_argument("--config", help="JSON configuration file")
    sub = ap.add_subparsers(dest="command", required=True)

    p_desc = sub.add_parser("describe", help="list Levi subgroups, chambers and cosets")
    p_desc.add_argument("--group", help="group label, e.g. A2 or A1xB2")

    p_ver = sub.add_parser("verify", help="run verification suites and write a JSON report")
    p_ver.add_argument("--group", help="group label")
    p_ver.add_argument("--suite", action="append", choices=list(ALL_SUITES) + ["all"],
                       help="suite name (repeatable); defaults to the config")
    p_ver.add_argument("--out", help="report directory (env GMCALC_REPORT_DIR also works)")

    p_eval = sub.add_parser("eval", help="evaluate one named expression")
    p_eval.add_argument("--group", help="group label")
    p_eval.add_argument("--expr", required=True,
                        choices=["theta", "d", "n_beta", "nL", "kL", "alpha_X", "eps_M",
                                 "delta_Sigma", "c_coeff", "phi_TT"])
    p_eval.add_argument("--args", help="JSON arguments for the expression")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "describe":
        return cmd_describe(args)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "eval":
        return cmd_eval(args)
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
