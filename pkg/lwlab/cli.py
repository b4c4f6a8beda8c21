#!/usr/bin/env python3
import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bodies import BodySpec, save_body
from .centroid import paouris_product, projected_zp_body, zp_support
from .constants import DEFAULT_LOG_DIR, DEFAULT_RESTARTS, PLANAR_SCAN_RESOLUTION
from .errors import ConfigError, LwlabError
from .harness import SUITES, SuiteConfig, parse_dims, verify
from .lambda_search import UniformCover, lambda_cover_search, lambda_tilde, lambda_tilde_planar
from .moments import isotropic_constant, isotropic_transform, principal_axes, z2_ellipsoid
from .polytope import Subspace, normalize, volume
from .projection_bodies import inscribed_cross_polytope, radial_section_body
from .report import has_failures, jsonable

# Config, body spec, cover and degenerate-input errors all subclass ValueError.
USAGE_ERRORS = (ValueError, OSError)


def _print_json(payload):
    print(json.dumps(jsonable(payload), indent=2, sort_keys=True))


def _load(text):
    spec = BodySpec.parse(text)
    return spec.body_id, spec.resolve()


def _normalized(text):
    body_id, body = _load(text)
    normalized, _ = normalize(body)
    return body_id, normalized


def _parse_vector(text, n):
    try:
        vector = np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise ConfigError(f"cannot parse vector {text!r}") from exc
    if vector.shape != (n,):
        raise ConfigError(f"vector {text!r} must have {n} entries")
    return vector


def _parse_subspace(text, n):
    """``e1,e3`` picks coordinate axes (1-based); ``x;y`` lists spanning vectors."""
    tokens = [t.strip() for t in text.split(",")]
    if all(t.startswith("e") for t in tokens):
        try:
            indices = [int(t[1:]) - 1 for t in tokens]
        except ValueError as exc:
            raise ConfigError(f"cannot parse subspace {text!r}") from exc
        if any(not 0 <= i < n for i in indices):
            raise ConfigError(f"subspace {text!r} has axes outside e1..e{n}")
        return Subspace.coordinate(indices, n)
    return Subspace.span([_parse_vector(v, n) for v in text.split(";")], n)


def _run_isotropy(args):
    body_id, body = _load(args.body)
    normalized, _ = normalize(body)
    data = isotropic_transform(body)
    _print_json(
        {
            "body_id": body_id,
            "dim": body.dim,
            "volume": volume(body),
            "L": isotropic_constant(body),
            "covariance": data.covariance,
            "principal_axes": principal_axes(z2_ellipsoid(normalized)),
            "transform": {"linear": data.transform.linear, "translation": data.transform.translation},
            "residual": data.residual,
        }
    )
    return 0


def _run_zp(args):
    body_id, body = _normalized(args.body)
    direction = _parse_vector(args.dir, body.dim)
    _print_json(
        {
            "body_id": body_id,
            "p": args.p,
            "direction": direction,
            "support": zp_support(body, args.p, direction),
        }
    )
    return 0


def _run_paouris(args):
    body_id, body = _normalized(args.body)
    subspace = _parse_subspace(args.subspace, body.dim)
    zp_body = projected_zp_body(body, subspace.dim, subspace, threads=args.threads)
    _print_json(
        {
            "body_id": body_id,
            "d": subspace.dim,
            "product": paouris_product(body, subspace, zp_body=zp_body),
            "zp_volume": zp_body.volume,
            "stability": zp_body.stability,
            "samples": zp_body.samples,
        }
    )
    return 0


def _run_pistar(args):
    body_id, body = _load(args.body)
    subspace = _parse_subspace(args.section, body.dim) if args.section else Subspace.full(body.dim)
    radial = radial_section_body(body, subspace)
    payload = {
        "body_id": body_id,
        "d": subspace.dim,
        "volume": radial.volume,
        "uncertainty": radial.uncertainty,
        "samples": radial.samples,
    }
    if args.volume and args.section:
        payload["full_volume"] = radial_section_body(body, Subspace.full(body.dim)).volume
    if args.witness:
        witness = inscribed_cross_polytope(body, subspace, radial=radial, seed=args.seed)
        payload["witness"] = {
            "frame": witness.frame,
            "radii": witness.radii,
            "cross_polytope_volume": witness.volume,
            "certificate_ratio": witness.certificate_ratio,
        }
    _print_json(payload)
    return 0


def _run_lambda(args):
    body_id, body = _normalized(args.body)
    if args.cover:
        result = lambda_cover_search(
            body, UniformCover.load(args.cover, body.dim), restarts=args.restarts, seed=args.seed
        )
    elif args.method == "scan":
        if body.dim != 2:
            raise ConfigError(f"--method scan needs a planar body, got dimension {body.dim}")
        result = lambda_tilde_planar(body, resolution=args.resolution)
    else:
        result = lambda_tilde(body, restarts=args.restarts, seed=args.seed)
    _print_json(
        {
            "body_id": body_id,
            "method": result.method,
            "value": result.value,
            "certificate": result.certificate,
            "witness": result.witness,
            "diagnostics": result.diagnostics,
        }
    )
    return 0


def _parse_tolerances(items):
    tolerances = {}
    for item in items:
        check_id, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"tolerance must look like check_id=value, got {item!r}")
        try:
            tolerances[check_id] = float(value)
        except ValueError as exc:
            raise ConfigError(f"tolerance for {check_id} is not a number: {value!r}") from exc
    return tolerances


def _run_verify(args):
    cfg = SuiteConfig.from_env(
        dims=parse_dims(args.dim) if args.dim else None,
        trials=args.trials,
        seed=args.seed,
        threads=args.threads,
        restarts=args.restarts,
        tolerances=_parse_tolerances(args.tolerance),
        out=Path(args.out) if args.out else None,
        json_out=Path(args.json) if args.json else None,
        log_dir=Path(args.log_dir),
        snapshot=Path(args.snapshot) if args.snapshot else None,
        write_snapshot=Path(args.write_snapshot) if args.write_snapshot else None,
        show_success=args.verbose,
    )
    rows, summary = verify(args.suite, cfg)
    _print_json(
        {
            "suite": args.suite,
            "seed": cfg.seed,
            "dims": list(cfg.dims),
            "trials": cfg.trials,
            **{key: value for key, value in summary.items() if key != "failing"},
            "out": str(cfg.out) if cfg.out else None,
            "json": str(cfg.json_out) if cfg.json_out else None,
        }
    )
    return 1 if has_failures(rows) else 0


def _run_gen(args):
    spec = BodySpec.parse(args.shape)
    body = spec.resolve()
    if args.normalize:
        body, _ = normalize(body)
    if args.out:
        path = save_body(body, args.out)
        print(f"Wrote {spec.body_id} ({body.n_vertices} vertices) to {path}", file=sys.stderr)
    else:
        _print_json(body.to_json())
    return 0


COMMANDS = {
    "isotropy": _run_isotropy,
    "zp": _run_zp,
    "paouris": _run_paouris,
    "pistar": _run_pistar,
    "lambda": _run_lambda,
    "verify": _run_verify,
    "gen": _run_gen,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lwlab",
        description="Sections, projections and Loomis-Whitney type constants of polytopes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""Examples:
  lwlab isotropy body.json
  lwlab zp body.json --p 3 --dir 1,0,0
  lwlab paouris body.json --subspace e1,e2
  lwlab pistar cube:3 --section e1,e2 --witness
  lwlab lambda box2d:1.4142135623730951 --method scan
  lwlab lambda cube:4 --cover pairs.json --restarts 8
  lwlab verify --suite planar --out artifacts/planar.csv
  lwlab verify --suite all --seed 42 --out report.csv --json report.json
  lwlab gen --shape random:3,20,seed=7 --out body.json

Bodies are JSON files ({"dim": n, "vertices": [...]}) or named specs such as cube:3,
simplex:2, cross-polytope:3, box2d:2, parallelogram-fhl, ngon:64, random:n,m[,sym],seed=S.
""",
    )

    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    # Isotropy command
    iso_parser = subparsers.add_parser("isotropy", help="Isotropic constant, covariance and principal axes")
    iso_parser.add_argument("body", help="Body JSON file or named body spec")

    # Z_p command
    zp_parser = subparsers.add_parser("zp", help="Support function of the L_p centroid body")
    zp_parser.add_argument("body", help="Body JSON file or named body spec (normalized first)")
    zp_parser.add_argument("--p", type=float, default=2.0, help="Exponent p >= 1 (default: 2)")
    zp_parser.add_argument("--dir", required=True, help="Direction as comma-separated coordinates")

    # Paouris command
    paouris_parser = subparsers.add_parser("paouris", help="|K ∩ H⊥|^{1/d} |P_H Z_d(K)|^{1/d}")
    paouris_parser.add_argument("body", help="Body JSON file or named body spec (normalized first)")
    paouris_parser.add_argument("--subspace", required=True, help="Coordinate axes (e1,e2) or vectors (x;y)")
    paouris_parser.add_argument("--threads", type=int, default=1, help="Worker threads (default: 1)")

    # Polar projection body command
    pistar_parser = subparsers.add_parser("pistar", help="Volume and sections of the polar projection body")
    pistar_parser.add_argument("body", help="Body JSON file or named body spec")
    pistar_parser.add_argument("--volume", action="store_true",
                               help="Volume of Π*K; with --section, also reported as full_volume")
    pistar_parser.add_argument("--section", help="Section subspace: coordinate axes (e1,e2) or vectors (x;y)")
    pistar_parser.add_argument("--witness", action="store_true", help="Also search the inscribed cross-polytope")
    pistar_parser.add_argument("--seed", type=int, default=0, help="Seed for the frame search (default: 0)")

    # Lambda command
    lambda_parser = subparsers.add_parser("lambda", help="Reverse dual Loomis-Whitney constant of a body")
    lambda_parser.add_argument("body", help="Body JSON file or named body spec (normalized first)")
    lambda_parser.add_argument("--method", choices=["scan", "search"], default="search",
                               help="Planar angle scan or frame search (default: search)")
    lambda_parser.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS,
                               help=f"Search restarts (default: {DEFAULT_RESTARTS})")
    lambda_parser.add_argument("--resolution", type=float, default=PLANAR_SCAN_RESOLUTION,
                               help="Planar scan step in radians")
    lambda_parser.add_argument("--cover", help="Uniform cover JSON ({\"sets\": [[1,2],...], \"weights\": [...]})")
    lambda_parser.add_argument("--seed", type=int, default=0, help="Seed for Haar restarts (default: 0)")

    # Verify command
    verify_parser = subparsers.add_parser("verify", help="Run inequality suites and write reports")
    verify_parser.add_argument("--suite", default="all", choices=sorted(SUITES) + ["all"],
                               help="Suite to run (default: all)")
    verify_parser.add_argument("--dim", action="append", help="Dimension(s), repeatable or comma-separated")
    verify_parser.add_argument("--trials", type=int, help="Random bodies per dimension")
    verify_parser.add_argument("--seed", type=int, help="Master seed (default: LWLAB_SEED or 42)")
    verify_parser.add_argument("--threads", type=int, help="Worker threads (default: LWLAB_THREADS or 1)")
    verify_parser.add_argument("--restarts", type=int, help="Frame search restarts")
    verify_parser.add_argument("--tolerance", action="append", default=[], help="Override as check_id=value")
    verify_parser.add_argument("--out", help="CSV report path")
    verify_parser.add_argument("--json", help="JSON report path")
    verify_parser.add_argument("--snapshot", help="Regression snapshot to compare against")
    verify_parser.add_argument("--write-snapshot", help="Write this run's rows as a snapshot")
    verify_parser.add_argument("--log-dir", default=DEFAULT_LOG_DIR,
                               help=f"Log directory (default: {DEFAULT_LOG_DIR})")
    verify_parser.add_argument("--verbose", action="store_true", help="Log passing rows too")

    # Gen command
    gen_parser = subparsers.add_parser("gen", help="Generate a named or random body")
    gen_parser.add_argument("--shape", required=True, help="Named body spec or random:n,m[,sym],seed=S")
    gen_parser.add_argument("--normalize", action="store_true", help="Center and scale to volume 1")
    gen_parser.add_argument("--out", help="Output JSON path (stdout when omitted)")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 2

    try:
        return COMMANDS[args.command](args)
    except USAGE_ERRORS as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except LwlabError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
