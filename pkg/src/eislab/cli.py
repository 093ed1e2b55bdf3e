"""Command-line front end.

Subcommands
    eval       Eisenstein series values as CSV rows (x, y, Re E, Im E)
    rn         renormalized integrals (products and triple products), JSON
    sum        coefficient-sum table: M, S(M), prediction, residual
    scan       cumulative second-moment scans for the growth theorems
    constants  asymptotic constants as JSON
    probe      norm-growth / Sobolev / phase-integral bound probes
    verify     run the identity suites; exit 1 on any failure

Complex parameters are written "a+bi" (e.g. ``0.5+2i``); CSV uses ','
separators with '.' decimals and always carries a header row; JSON floats
round-trip losslessly.  Exit codes: 0 success / all checks pass, 1 check
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from . import __version__
from .eisenstein import EisensteinSeries, eval_E_weighted
from .errors import DomainError
from .lattice import ModelConfig, default_config, load_model_config, psl2z_model
from .lfunc import LSpec, asymptotic_constants, coeff_sum, theorem_scans
from .quadrature import QuadratureConfig
from .renorm import eisenstein_product, rn_integral, rn_triple_product
from .reptheory import norm_growth_probe, sobolev_growth_probe
from .specfun import probe_whittaker_bounds
from .verify import SUITES, verify_all

_COMPLEX_RE = re.compile(
    r"^\s*(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*"
    r"(?P<im>[+-]\s*(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)?\s*(?P<i>i)?\s*$")


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' (also plain reals, 'bi', 'i', '-i'); round-trips format_complex."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty complex literal")
    if t.endswith("i"):
        body = t[:-1]
        # split into real and imaginary pieces at the last +/- not in an exponent
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                re_part, im_part = body[:k], body[k:]
                break
        else:
            re_part, im_part = "", body
        if im_part in ("", "+"):
            im = 1.0
        elif im_part == "-":
            im = -1.0
        else:
            im = float(im_part)
        return complex(float(re_part) if re_part else 0.0, im)
    return complex(float(t), 0.0)


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}i"


def _fmt(x: float) -> str:
    return f"{x:.15g}"


def _emit(args, lines):
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _model(args):
    cfg = load_model_config(args.config) if args.config else default_config()
    overrides = {}
    if getattr(args, "sieve_limit", None):
        overrides["sieve_limit"] = int(float(args.sieve_limit))
    if overrides:
        cfg = ModelConfig(**{**vars(cfg), **overrides})
    return psl2z_model(cfg)


def _quad_cfg(args) -> QuadratureConfig:
    return QuadratureConfig(abs_tol=args.abs_tol, rel_tol=args.rel_tol)


# ----------------------------------------------------------------------------
# subcommands

def cmd_eval(args) -> int:
    model = _model(args)
    s = parse_complex(args.s)
    xs = [float(v) for v in args.x.split(",")]
    ys = [float(v) for v in args.y.split(",")]
    lines = ["x,y,re_e,im_e"]
    if args.weight == 0:
        series = EisensteinSeries(model, s)
        for y in ys:
            vals = series.eval_many(np.array([complex(x, y) for x in xs]))
            for x, v in zip(xs, vals):
                lines.append(f"{_fmt(x)},{_fmt(y)},{_fmt(v.real)},{_fmt(v.imag)}")
    else:
        for y in ys:
            for x in xs:
                v = eval_E_weighted(model, complex(x, y), s, args.weight)
                lines.append(f"{_fmt(x)},{_fmt(y)},{_fmt(v.real)},{_fmt(v.imag)}")
    _emit(args, lines)
    return 0


def cmd_rn(args) -> int:
    model = _model(args)
    r = parse_complex(args.r)
    s = parse_complex(args.s)
    cfg = _quad_cfg(args)
    if args.t is None:
        res = rn_integral(eisenstein_product(model, r, s), B=args.B, cfg=cfg)
        payload = {"value_re": res.value.real, "value_im": res.value.imag,
                   "B_used": res.B_used,
                   "quad_error_estimate": res.quad_error_estimate,
                   "B_independence_spread": res.B_independence_spread,
                   "mode": "product"}
        _emit(args, [json.dumps(payload)])
        return 0
    else:
        t = float(args.t)
        out = rn_triple_product(model, r, s, t, mode=args.mode, cfg=cfg, B=args.B,
                                probe_spread=True)
        if args.mode == "unfolded":
            payload = {"value_re": out.real, "value_im": out.imag,
                       "B_used": None, "quad_error_estimate": 0.0,
                       "B_independence_spread": 0.0, "mode": args.mode}
            _emit(args, [json.dumps(payload)])
            return 0
        res = out
    payload = {"value_re": res.value.real, "value_im": res.value.imag,
               "B_used": res.B_used, "quad_error_estimate": res.quad_error_estimate,
               "B_independence_spread": res.B_independence_spread,
               "mode": args.mode}
    _emit(args, [json.dumps(payload)])
    return 0


def cmd_sum(args) -> int:
    model = _model(args)
    spec = LSpec(t0=args.t0, model=model)
    consts = asymptotic_constants(spec)
    m_top = int(float(args.M))
    points = ([int(float(v)) for v in args.points.split(",")] if args.points
              else [m for m in (10 ** k for k in range(3, 9)) if m <= m_top])
    lines = ["M,S,prediction,residual"]
    for m in points:
        s_val = coeff_sum(spec, m)
        pred = consts.prediction(m, spec.t0)
        lines.append(f"{m},{_fmt(s_val)},{_fmt(pred)},{_fmt(s_val - pred)}")
    _emit(args, lines)
    return 0


def cmd_scan(args) -> int:
    model = _model(args)
    spec = LSpec(t0=args.t0, model=model)
    rep = theorem_scans(spec, args.T, args.which, step=args.step)
    lines = ["t,integrand,cumulative"]
    for t, v, c in zip(rep.ts, rep.integrand, rep.cumulative):
        lines.append(f"{_fmt(t)},{_fmt(v)},{_fmt(c)}")
    _emit(args, lines)
    print(f"fitted_exponent={rep.fitted_exponent:.6f}", file=sys.stderr)
    return 0


def cmd_constants(args) -> int:
    model = _model(args)
    spec = LSpec(t0=args.t0, model=model)
    c = asymptotic_constants(spec)
    payload = {
        "t0": args.t0,
        "main_loglinear": c.main_loglinear,
        "main_linear": c.main_linear,
        "c_one": [c.c_one.real, c.c_one.imag],
        "c_osc": [c.c_osc.real, c.c_osc.imag],
        "c_poles": list(c.c_poles),
    }
    _emit(args, [json.dumps(payload, indent=2)])
    return 0


def cmd_probe(args) -> int:
    if args.kind == "norm-growth":
        ts = np.linspace(1.0, args.tmax, max(5, int(args.tmax // 2)))
        rep = norm_growth_probe(args.eps, ts)
        lines = ["t,norm_sq"]
        for t, n in zip(rep.ts, rep.norms_sq):
            lines.append(f"{_fmt(t)},{_fmt(n)}")
        lines.append(json.dumps({"eps": rep.eps, "slope": rep.slope,
                                 "intercept": rep.intercept}))
    elif args.kind == "sobolev":
        rep = sobolev_growth_probe(args.beta, args.t)
        lines = ["eps,sobolev"]
        for e, v in zip(rep.eps_grid, rep.sobolev):
            lines.append(f"{_fmt(e)},{_fmt(v)}")
        lines.append(json.dumps({"beta": rep.beta, "fitted_slope": rep.fitted_slope,
                                 "scaled_max": rep.scaled_max,
                                 "scaled_min": rep.scaled_min}))
    elif args.kind == "whittaker":
        s = parse_complex(args.s)
        k = args.k
        rs = np.geomspace(args.rmin, args.rmax, args.npoints)
        grid = [(k, float(r), s) for r in rs]
        rep = probe_whittaker_bounds(args.regime, grid)
        lines = ["k,r,ratio_regime"]
        for (kk, r, _) in rep.parameter_grid:
            lines.append(f"{kk},{_fmt(r)},{rep.regime_label}")
        lines.append(json.dumps({"observed_ratio_max": rep.observed_ratio_max,
                                 "fitted_exponent": rep.fitted_exponent,
                                 "predicted_bound_form": rep.predicted_bound_form}))
    else:
        raise DomainError(f"unknown probe {args.kind!r}")
    _emit(args, lines)
    return 0


def cmd_verify(args) -> int:
    model = _model(args)
    names = [args.suite] if args.suite else None
    if args.suite and args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; available: {', '.join(SUITES)}",
              file=sys.stderr)
        return 2
    reports = verify_all(model, suites=names, tol_scale=args.tol_scale)
    payload = [r.to_json_dict() for r in reports]
    _emit(args, [json.dumps(payload, indent=2)])
    ok = all(r.passed for r in reports)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.suite} ({len(r.checks)} checks, {r.wall_time_s:.1f}s)",
              file=sys.stderr)
    return 0 if ok else 1


# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eislab", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(q):
        q.add_argument("--config", help="key = value model config file")
        q.add_argument("--output", help="write output here instead of stdout")
        q.add_argument("--sieve-limit", dest="sieve_limit",
                       help="divisor sieve limit override")
        q.add_argument("--jobs", type=int, default=1,
                       help="parallelism degree (evaluation is deterministic "
                            "for any value; grids are reduced in fixed order)")

    q = sub.add_parser("eval", help="Eisenstein series values")
    common(q)
    q.add_argument("--s", required=True)
    q.add_argument("--x", required=True, help="comma-separated x values")
    q.add_argument("--y", required=True, help="comma-separated y values")
    q.add_argument("--weight", type=int, default=0)
    q.set_defaults(fn=cmd_eval)

    q = sub.add_parser("rn", help="renormalized integrals")
    common(q)
    q.add_argument("--r", required=True)
    q.add_argument("--s", required=True)
    q.add_argument("--t", type=float, default=None,
                   help="triple product against conj E(., 1/2 + it)")
    q.add_argument("--B", type=float, default=1.5)
    q.add_argument("--abs-tol", dest="abs_tol", type=float, default=1e-8)
    q.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-8)
    q.add_argument("--mode", choices=("quadrature", "unfolded"), default="unfolded")
    q.set_defaults(fn=cmd_rn)

    q = sub.add_parser("sum", help="coefficient-sum table")
    common(q)
    q.add_argument("--t0", type=float, required=True)
    q.add_argument("--M", required=True)
    q.add_argument("--points", help="explicit comma-separated M values")
    q.set_defaults(fn=cmd_sum)

    q = sub.add_parser("scan", help="second-moment growth scans")
    common(q)
    q.add_argument("--which", choices=("thm1", "thm2"), required=True)
    q.add_argument("--T", type=float, default=50.0)
    q.add_argument("--t0", type=float, default=1.0)
    q.add_argument("--step", type=float, default=0.25)
    q.set_defaults(fn=cmd_scan)

    q = sub.add_parser("constants", help="asymptotic constants as JSON")
    common(q)
    q.add_argument("--t0", type=float, required=True)
    q.set_defaults(fn=cmd_constants)

    q = sub.add_parser("probe", help="growth and bound probes")
    common(q)
    q.add_argument("kind", choices=("norm-growth", "sobolev", "whittaker"))
    q.add_argument("--eps", type=float, default=0.05)
    q.add_argument("--tmax", type=float, default=25.0)
    q.add_argument("--beta", type=float, default=1.5)
    q.add_argument("--t", type=float, default=1.0)
    q.add_argument("--regime", default="statphase1")
    q.add_argument("--k", type=int, default=2)
    q.add_argument("--s", default="0.5")
    q.add_argument("--rmin", type=float, default=16.0)
    q.add_argument("--rmax", type=float, default=200.0)
    q.add_argument("--npoints", type=int, default=40)
    q.set_defaults(fn=cmd_probe)

    q = sub.add_parser("verify", help="run identity suites")
    common(q)
    q.add_argument("--suite", help="single suite name (default: all)")
    q.add_argument("--tol-scale", dest="tol_scale", type=float, default=1.0,
                   help="scale all tolerances (0.01 tightens 100x)")
    q.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
