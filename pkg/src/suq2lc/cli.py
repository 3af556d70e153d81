"""Command-line front end: verify / certify / lc / export."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import calculus, certify, connection, field, linalg
from .field import elem_str


EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PROPERTY = 2
EXIT_DATA = 3
EXIT_SINGULAR_METRIC = 4
EXIT_PHI_SINGULAR = 5


def _parse_rational(text):
    try:
        return field.parse_rational(text)
    except field.ParseError as exc:
        raise SystemExit_(EXIT_CONFIG, str(exc))


class SystemExit_(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code
        self.message = message


def _emit(payload, out_path):
    text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    if out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _load_geometry(variant):
    try:
        return connection.Geometry.load(variant)
    except calculus.DataValidationError as exc:
        raise SystemExit_(EXIT_DATA, f"eigen-table validation failed: {exc}")


def _report(variant, sign, properties, determinants=(), roots=()):
    return {"variant": variant,
            "sign": sign,
            "determinants": list(determinants),
            "exceptional_roots": list(roots),
            "properties": [{"name": n, "pass": bool(p)}
                           for n, p in properties]}


def cmd_verify(cfg):
    geo = _load_geometry(cfg.variant)
    props = []
    br = geo.braiding
    props.append(("sigma-minimal-polynomial",
                  calculus.minimal_polynomial_check(br)))
    props.append(("sigma-eigenspace-dimensions",
                  (len(geo.data.eigen1), len(geo.data.eigen_mq2),
                   len(geo.data.eigen_mqi2)) == (10, 3, 3)))
    ok, witness = calculus.braid_check(br)
    props.append(("braid-equation", ok))
    psym = calculus.build_psym(br)
    props.append(("psym-formula-equals-projector",
                  (psym + br.P1.scale(field.from_int(-1))).is_zero()))
    idents = calculus.decomposition_identities(geo.data, br)
    props.append(("decomposition-identities",
                  all(i["pass"] for i in idents)))
    for sign in ("plus", "minus"):
        nabla0 = connection.build_nabla0(sign, geo)
        disp = connection.nabla0_displays(sign, geo.data.t_value)
        disp_ok = all(
            (nabla0.image(i + 1) - disp[i]).is_zero() for i in range(4))
        props.append((f"nabla0-displays-{sign}", disp_ok))
        props.append((f"torsion-zero-{sign}",
                      connection.torsion(nabla0, sign, geo).is_zero()))
    basis = connection.metric_basis(geo)
    props.append(("metric-basis-dimension", len(basis) == 10))
    sig_t = geo.braiding.sigma.transpose()
    props.append(("metric-basis-sigma-invariant",
                  all(sig_t * met.vec() == met.vec() for met in basis)))
    metric, _coeffs = connection.example_metric(geo)
    props.append(("example-metric-nondegenerate",
                  not linalg.det(metric.G).is_zero()))
    lc = connection.levi_civita(metric, cfg.sign, geo)
    props.append(("levi-civita-torsion-zero",
                  connection.torsion(lc, cfg.sign, geo).is_zero()))
    props.append(("levi-civita-compatible",
                  connection.pi0(lc, metric, geo).is_zero()))
    rank = connection.phi_g_rank_at(metric, geo,
                                    Fraction(3, 4), cfg.t, cfg.k)
    props.append(("phi-g-kernel-trivial", rank == 40))
    report = _report(geo.data.variant, cfg.sign, props)
    _emit(report, cfg.out)
    return EXIT_OK if all(p["pass"] for p in report["properties"]) \
        else EXIT_PROPERTY


def cmd_certify(cfg):
    geo = _load_geometry(cfg.variant)
    props = []
    p23 = certify.psym23_matrix(geo)
    cs = certify.build_constraint_system(geo)
    props.append(("constraint-equals-c2-psym23",
                  certify.constraint_identity_check(cs, p23)))
    props.append(("constraint-kernel-trivial",
                  cs.kernel_rank_at(Fraction(3, 4), cfg.t, cfg.k) == 40))
    dets = []
    all_units = True
    for rec in certify.subsystem_determinants(cs):
        unit = rec["unit_factor"]
        ok = unit is not None
        all_units = all_units and ok
        dets.append({"label": rec["label"],
                     "value": elem_str(rec["value"]),
                     "paper_value": rec["paper_str"],
                     "unit_factor": elem_str(unit) if ok else None})
    props.append(("subsystem-determinants-match", all_units))
    try:
        roots = certify.exceptional_q(cfg.t, cfg.k, geo=geo, p23=p23, cs=cs)
        t2 = cfg.t * 2 + 1
        k2 = cfg.k * 2 + 1
        roots2 = certify.exceptional_q(t2, k2, geo=geo, p23=p23, cs=cs)
    except certify.InterpolationInconsistent as exc:
        raise SystemExit_(EXIT_PROPERTY, str(exc))
    props.append(("exceptional-roots-tk-independent",
                  [r["poly_factor"] for r in roots]
                  == [r["poly_factor"] for r in roots2]))
    report = _report(geo.data.variant, cfg.sign, props, dets, roots)
    _emit(report, cfg.out)
    return EXIT_OK if all(p["pass"] for p in report["properties"]) \
        else EXIT_PROPERTY


def cmd_lc(cfg):
    geo = _load_geometry(cfg.variant)
    try:
        with open(cfg.metric) as fh:
            grid = json.load(fh)
        metric = connection.parse_metric(grid)
    except (OSError, ValueError, field.ParseError) as exc:
        raise SystemExit_(EXIT_CONFIG, f"cannot read metric: {exc}")
    try:
        metric.check(geo.braiding)
    except connection.SingularMetric as exc:
        raise SystemExit_(EXIT_SINGULAR_METRIC, str(exc))
    try:
        lc = connection.levi_civita(metric, cfg.sign, geo)
    except connection.PhiSingular as exc:
        raise SystemExit_(EXIT_PHI_SINGULAR, str(exc))
    torsion_zero = connection.torsion(lc, cfg.sign, geo).is_zero()
    compatible = connection.pi0(lc, metric, geo).is_zero()
    payload = {"sign": cfg.sign,
               "variant": geo.data.variant,
               "connection": lc.to_json(),
               "verification": {"torsion_zero": torsion_zero,
                                "compatible": compatible}}
    _emit(payload, cfg.out)
    return EXIT_OK if (torsion_zero and compatible) else EXIT_PROPERTY


def cmd_export(cfg):
    geo = _load_geometry(cfg.variant)
    if cfg.target == "sigma":
        payload = geo.braiding.sigma.to_json()
    elif cfg.target == "psym":
        payload = geo.psym.to_json()
    elif cfg.target == "nabla0":
        payload = connection.build_nabla0(cfg.sign, geo).to_json()
    else:   # metric-basis
        payload = [m.to_json() for m in connection.metric_basis(geo)]
    _emit(payload, cfg.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="suq2lc",
        description="Exact certification of the unique Levi-Civita "
                    "connection for the 4D bicovariant calculi on SUq(2)")
    parser.add_argument("--sign", choices=("plus", "minus"), default="plus")
    parser.add_argument("--t", default="2", help="rational p/q, nonzero")
    parser.add_argument("--k", default="3", help="rational p/q, nonzero")
    parser.add_argument("--variant", choices=("auto", "paper", "corrected"),
                        default="auto")
    parser.add_argument("--out", default="./report.json",
                        help="output path, or - for stdout")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify")
    sub.add_parser("certify")
    p_lc = sub.add_parser("lc")
    p_lc.add_argument("metric", help="metric JSON file (4x4 grid)")
    p_exp = sub.add_parser("export")
    p_exp.add_argument("target",
                       choices=("sigma", "psym", "nabla0", "metric-basis"))
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.t = _parse_rational(args.t)
        args.k = _parse_rational(args.k)
        if args.t == 0 or args.k == 0:
            raise SystemExit_(EXIT_CONFIG, "t and k must be nonzero")
        handler = {"verify": cmd_verify, "certify": cmd_certify,
                   "lc": cmd_lc, "export": cmd_export}[args.command]
        return handler(args)
    except SystemExit_ as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
