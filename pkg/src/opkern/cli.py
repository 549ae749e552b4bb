"""Command-line surface: ingest kernel configs, run pipelines, emit reports.

Subcommands: analyze, det, mercer, transform, gallery. Reports are JSON for
structured results and CSV for sequences; every report embeds the resolved
config hash and the tool version, so identical configs give byte-identical
outputs. Exit codes: 0 success, 1 operational error, 2 diagnostic failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__
from .determinant import det1, det2, det_zeros, fredholm_series, order_of_growth
from .discretize import refine_until
from .domains import RealLine
from .errors import EstimationError, OpKernError, PreconditionError
from .kernels import gallery_listing, holder_modulus, kernel_from_config
from .quadrature import gauss_legendre
from .realline import choose_delta, estimate_decay, spectrum_via_transform, transform_kernel
from .spectral import (
    NOT_TRACE_CLASS_LIKELY,
    decompose,
    diagonal_trace_condition,
    mercer_sup_error,
    modulus_identity_residual,
    save_spectrum_csv,
    trace_class_diagnostic,
    trace_diagonal,
    trace_eigs,
)

_BOUNDARY_EPS = (1e-2, 1e-3, 1e-4)


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except OpKernError as exc:
        print(f"opkern: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"opkern: error: {exc}", file=sys.stderr)
        return 1


def _build_parser():
    parser = argparse.ArgumentParser(prog="opkern", description=__doc__)
    parser.add_argument("--version", action="version", version=f"opkern {__version__}")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--config", help="YAML/JSON config file")
        p.add_argument("--gallery", help="gallery kernel id (alternative to --config)")
        p.add_argument("--param", action="append", default=[], metavar="K=V",
                       help="gallery parameter, repeatable")
        p.add_argument("--out", default="opkern-out", help="output directory")
        p.add_argument("--seed", type=int, default=42, help="seed for randomized spot checks")
        p.add_argument("--tol", type=float, default=1e-4, help="refinement tolerance")
        p.add_argument("--n0", type=int, default=16, help="initial quadrature order")
        p.add_argument("--n-max", type=int, default=1024, help="quadrature order cap")
        p.add_argument("--k-track", type=int, default=5, help="singular values tracked during refinement")

    p = sub.add_parser("analyze", help="spectrum, trace formula, regularity and summability reports")
    common(p)
    p.add_argument("--require-trace-class", action="store_true",
                   help="exit 2 when the verdict is not_trace_class_likely")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("det", help="determinant scans, series coefficients, growth, zeros")
    common(p)
    p.add_argument("--z-grid", default="-2:2:5,-2:2:5", metavar="RE0:RE1:NRE,IM0:IM1:NIM",
                   help="rectangular z grid for the determinant scan")
    p.add_argument("--bn-max", type=int, default=6, help="highest series coefficient order")
    p.add_argument("--bn-quad", type=int, default=64, help="quadrature order for the series")
    p.add_argument("--zero-radius", type=float, default=30.0, help="search radius for det1 zeros")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("mercer", help="eigen-expansion sup errors and diagonal trace condition")
    common(p)
    p.add_argument("--ranks", default="1,5,20,80", help="comma-separated expansion ranks")
    p.set_defaults(func=cmd_mercer)

    p = sub.add_parser("transform", help="real-line compactification report")
    common(p)
    p.add_argument("--probe-radius", type=float, default=8.0, help="decay-fit probe radius")
    p.add_argument("--truncation-box", type=float, default=None,
                   help="half-width of a truncation-oracle comparison box")
    p.add_argument("--truncation-n", type=int, default=800,
                   help="quadrature order for the truncation oracle")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("gallery", help="list gallery kernels")
    p.set_defaults(func=cmd_gallery)
    return parser


# ---------------------------------------------------------------------------
# Shared plumbing
# ---------------------------------------------------------------------------

def _parse_value(text):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    return text


def _resolve_kernel(args):
    if args.config:
        import yaml

        with open(args.config) as fh:
            cfg = yaml.safe_load(fh)
        kcfg = cfg.get("kernel", cfg)
        spec = kernel_from_config(kcfg, base_dir=os.path.dirname(os.path.abspath(args.config)))
        return spec, {"kernel": kcfg}
    if args.gallery:
        params = {}
        for item in args.param:
            if "=" not in item:
                raise ValueError(f"--param expects K=V, got {item!r}")
            key, _, val = item.partition("=")
            params[key] = _parse_value(val)
        kcfg = {"type": args.gallery, "params": params}
        spec = kernel_from_config(kcfg)
        return spec, {"kernel": kcfg}
    raise ValueError("provide --config or --gallery")


def _run_meta(args, kernel_cfg):
    resolved = dict(kernel_cfg)
    resolved.update(
        seed=args.seed, tol=args.tol, n0=args.n0, n_max=args.n_max,
        k_track=args.k_track, command=args.command,
    )
    blob = json.dumps(resolved, sort_keys=True, default=str).encode()
    return {
        "tool": "opkern",
        "version": __version__,
        "config_hash": hashlib.sha256(blob).hexdigest()[:16],
        "config": resolved,
    }


def _pipeline(args, spec):
    """Refine + decompose; real-line kernels go through the compactification."""
    if isinstance(spec.domain, RealLine):
        sd = spectrum_via_transform(
            spec, tol=args.tol, k_track=args.k_track, n0=args.n0, n_max=args.n_max,
        )
        return sd, sd.op.source
    op = refine_until(spec, args.tol, k_track=args.k_track, n0=args.n0, n_max=args.n_max)
    return decompose(op), spec


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2, default=_jsonable)
        fh.write("\n")


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def _outdir(args):
    os.makedirs(args.out, exist_ok=True)
    return args.out


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_analyze(args):
    spec, kcfg = _resolve_kernel(args)
    out = _outdir(args)
    meta = _run_meta(args, kcfg)
    sd, surface = _pipeline(args, spec)
    save_spectrum_csv(sd, os.path.join(out, "spectrum.csv"))

    verdict = trace_class_diagnostic(sd)
    t_eigs = trace_eigs(sd)
    t_diag = trace_diagonal(surface, sd.rule)
    holder = holder_modulus(surface, grid=12, lags=[0.4, 0.2, 0.1, 0.05, 0.025])
    diag_b1 = diagonal_trace_condition(sd)

    rng = np.random.default_rng(args.seed)
    n_nodes = len(sd.rule)
    pairs = [tuple(sorted(rng.choice(n_nodes, size=2, replace=False))) for _ in range(10)]
    mod_residual = modulus_identity_residual(surface, sd.rule, pairs)

    report = {
        **meta,
        "verdict": {
            "verdict": verdict.verdict,
            "fitted_decay": verdict.fitted_decay,
            "residual": verdict.residual,
            "rationale": verdict.rationale,
            "partial_sums": [[int(l), s] for l, s in verdict.partial_sums],
        },
        "trace_formula": {
            "trace_eigs": t_eigs,
            "trace_diagonal": t_diag,
            "abs_diff": abs(t_eigs - t_diag),
        },
        "holder": {
            "gamma_hat": holder.gamma_hat,
            "c_hat": holder.c_hat,
            "residual": holder.residual,
            "pass_half": holder.pass_half,
        },
        "diagonal_b1": {
            "sup_B1": diag_b1["sup_B1"],
            "per_node_max": max(diag_b1["per_node"]),
            "per_node_min": min(diag_b1["per_node"]),
        },
        "modulus_identity_residual": mod_residual,
    }
    _write_json(os.path.join(out, "analyze.json"), report)
    print(f"analyze: verdict={verdict.verdict} trace_pair=({t_eigs.real:.6g}, {t_diag.real:.6g})")
    if args.require_trace_class and verdict.verdict == NOT_TRACE_CLASS_LIKELY:
        print("opkern: diagnostic failure: spectrum is not summable", file=sys.stderr)
        return 2
    return 0


def _parse_z_grid(text):
    try:
        re_part, im_part = text.split(",")
        r0, r1, nr = re_part.split(":")
        i0, i1, ni = im_part.split(":")
        res = np.linspace(float(r0), float(r1), int(nr))
        ims = np.linspace(float(i0), float(i1), int(ni))
    except ValueError as exc:
        raise ValueError(f"bad --z-grid {text!r}: expected re0:re1:nre,im0:im1:nim") from exc
    return res, ims


def cmd_det(args):
    spec, kcfg = _resolve_kernel(args)
    out = _outdir(args)
    meta = _run_meta(args, kcfg)
    sd, surface = _pipeline(args, spec)

    res, ims = _parse_z_grid(args.z_grid)
    with open(os.path.join(out, "det_scan.csv"), "w", newline="") as fh:
        fh.write("re_z,im_z,re_det1,im_det1,re_det2,im_det2\n")
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for re_z in res:
                for im_z in ims:
                    z = complex(re_z, im_z)
                    d1, d2 = det1(sd, z), det2(sd, z)
                    fh.write(f"{re_z:.17g},{im_z:.17g},{d1.real:.17g},{d1.imag:.17g},"
                             f"{d2.real:.17g},{d2.imag:.17g}\n")

    rule = gauss_legendre(args.bn_quad, surface.domain.lower[0], surface.domain.upper[0])
    series = fredholm_series(surface, rule, args.bn_max, modified=False)
    series_mod = fredholm_series(surface, rule, args.bn_max, modified=True)
    with open(os.path.join(out, "bn.csv"), "w", newline="") as fh:
        fh.write("n,re_b,im_b,re_b_modified,im_b_modified\n")
        for n in range(args.bn_max + 1):
            b, bm = series.coeffs[n], series_mod.coeffs[n]
            fh.write(f"{n},{b.real:.17g},{b.imag:.17g},{bm.real:.17g},{bm.imag:.17g}\n")

    try:
        growth = order_of_growth(series)
        growth_payload = {"rho_hat": growth.rho_hat, "window": list(growth.window),
                          "residual": growth.residual}
    except EstimationError as exc:
        growth_payload = {"error": str(exc)}

    zeros = det_zeros(sd, args.zero_radius)
    report = {
        **meta,
        "series_order": args.bn_max,
        "series_quadrature": args.bn_quad,
        "order_of_growth": growth_payload,
        "zeros": [{"re": z.real, "im": z.imag} for z in zeros],
    }
    _write_json(os.path.join(out, "det.json"), report)
    print(f"det: {len(zeros)} zeros within |z|<={args.zero_radius}, "
          f"rho_hat={growth_payload.get('rho_hat', 'n/a')}")
    return 0


def cmd_mercer(args):
    spec, kcfg = _resolve_kernel(args)
    out = _outdir(args)
    meta = _run_meta(args, kcfg)
    sd, _surface = _pipeline(args, spec)
    ranks = [int(r) for r in args.ranks.split(",") if r.strip()]

    psd_payload = {"psd": True}
    rows = []
    try:
        errors = mercer_sup_error(sd, ranks)
        rows = list(zip(ranks, errors))
    except PreconditionError as exc:
        psd_payload = {"psd": False, "reason": str(exc)}

    with open(os.path.join(out, "mercer.csv"), "w", newline="") as fh:
        fh.write("rank,sup_error\n")
        for r, e in rows:
            fh.write(f"{r},{e:.17g}\n")

    diag = diagonal_trace_condition(sd)
    with open(os.path.join(out, "diag_b1.csv"), "w", newline="") as fh:
        fh.write("node,nuclear_norm\n")
        for i, v in enumerate(diag["per_node"]):
            fh.write(f"{i},{v:.17g}\n")

    report = {**meta, "psd_check": psd_payload, "sup_errors": [[int(r), e] for r, e in rows],
              "diagonal_b1_sup": diag["sup_B1"]}
    _write_json(os.path.join(out, "mercer.json"), report)
    print(f"mercer: psd={psd_payload['psd']} ranks={ranks}")
    return 0


def cmd_transform(args):
    spec, kcfg = _resolve_kernel(args)
    if not isinstance(spec.domain, RealLine):
        print("opkern: error: transform expects a real-line kernel", file=sys.stderr)
        return 1
    out = _outdir(args)
    meta = _run_meta(args, kcfg)

    params = estimate_decay(spec, probe_radius=args.probe_radius)
    delta = choose_delta(params.alpha)
    from dataclasses import replace

    params = replace(params, delta=delta)
    compact = transform_kernel(spec, params)

    ygrid = np.linspace(-0.9, 0.9, 19)
    with open(os.path.join(out, "boundary.csv"), "w", newline="") as fh:
        fh.write("eps,sup_norm_plus,sup_norm_minus\n")
        for eps in _BOUNDARY_EPS:
            sup_p = max(
                float(np.linalg.norm(compact.evaluator(1.0 - eps, yp), "fro")) for yp in ygrid
            )
            sup_m = max(
                float(np.linalg.norm(compact.evaluator(-1.0 + eps, yp), "fro")) for yp in ygrid
            )
            fh.write(f"{eps:.17g},{sup_p:.17g},{sup_m:.17g}\n")

    sd = spectrum_via_transform(spec, tol=args.tol, k_track=args.k_track,
                                n0=args.n0, n_max=args.n_max, params=params)
    save_spectrum_csv(sd, os.path.join(out, "compact_spectrum.csv"))

    comparison = None
    if args.truncation_box:
        from .discretize import assemble
        from .kernels import KernelSpec
        from .domains import interval
        from .quadrature import gauss_legendre as gl

        half = float(args.truncation_box)
        boxed = KernelSpec(spec.name + ":boxed", interval(-half, half), spec.matrix_dim,
                           spec.evaluator, spec.batch_evaluator, dict(spec.metadata))
        oracle = decompose(assemble(boxed, gl(args.truncation_n, -half, half)))
        k = min(5, len(sd.singular_values), len(oracle.singular_values))
        ours = sd.singular_values[:k]
        ref = oracle.singular_values[:k]
        comparison = {
            "top": int(k),
            "transform": list(map(float, ours)),
            "truncation": list(map(float, ref)),
            "max_rel_diff": float(np.max(np.abs(ours - ref) / np.abs(ref))),
        }

    report = {
        **meta,
        "params": {
            "alpha": params.alpha, "c_decay": params.c_decay, "delta": params.delta,
            "R": params.R, "fit_residual": params.residual,
            "per_window_alpha": list(params.per_window),
            "super_exponential": params.super_exponential,
            "local_lipschitz": params.local_lipschitz,
            "deriv_envelope_ratio": params.deriv_envelope_ratio,
        },
        "truncation_comparison": comparison,
    }
    _write_json(os.path.join(out, "transform.json"), report)
    print(f"transform: alpha={params.alpha:.4g} delta={params.delta:.4g}")
    return 0


def cmd_gallery(args):
    for gid, doc, spec in gallery_listing():
        domain = "real line" if isinstance(spec.domain, RealLine) else f"box {spec.domain.lower}..{spec.domain.upper}"
        meta = ", ".join(f"{k}={v}" for k, v in sorted(spec.metadata.items()))
        print(f"{gid:20s} d={spec.matrix_dim:<4d} {domain:18s} {doc}")
        if meta:
            print(f"{'':20s} {meta}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
