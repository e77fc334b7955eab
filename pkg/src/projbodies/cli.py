"""Batch front end: parse body/measure specs, dispatch, emit reports.

Exit codes: 0 success (and inequality pass), 1 configuration or parse
error, 2 inequality-check failure, 3 hypothesis violation.  Identical
command lines with identical seeds produce byte-identical output: all
numbers are serialized with Python's shortest round-trip float repr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import bodies, inequalities, isotropic, measures
from .bodies import Ball, LinearMap
from .covariogram import CovariogramQuery, mu_covariogram
from .inequalities import (INEQUALITY_IDS, Report, RunConfig,
                           ehrhard_bound_value, gaussian_sharpness_sweep,
                           pe_sweep, verify)
from .meanbodies import (inclusion_chain_report, radial_mean_body,
                         spectral_mean_body)
from .measures import ConcavityFamily
from .numerics import (ConfigurationError, DomainError, sphere_directions)
from .projection import (brightness_residual, offset_vector,
                         projection_zonoid, zonoid_polar_volume)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAIL = 2
EXIT_HYPOTHESIS = 3


# -- spec parsing --------------------------------------------------------------

def parse_body(spec: str):
    """Body spec: inline shorthand (``simplex:2``, ``cube:3:0.5``,
    ``ball:2:1.5``, ``cross:2``, ``regular_polygon:256``) or ``@file.json``
    with {"type", "vertices", "map", "translate"} fields."""
    if spec.startswith("@"):
        with open(spec[1:], "r", encoding="utf-8") as fh:
            record = json.load(fh)
        return body_from_record(record)
    parts = spec.split(":")
    kind, args = parts[0], parts[1:]
    try:
        if kind == "simplex":
            return bodies.standard_simplex(int(args[0]))
        if kind == "cube":
            hw = float(args[1]) if len(args) > 1 else 1.0
            return bodies.cube(int(args[0]), hw)
        if kind == "cross":
            r = float(args[1]) if len(args) > 1 else 1.0
            return bodies.cross_polytope(int(args[0]), r)
        if kind == "ball":
            r = float(args[1]) if len(args) > 1 else 1.0
            return Ball(int(args[0]), r)
        if kind == "regular_polygon":
            r = float(args[1]) if len(args) > 1 else 1.0
            return bodies.regular_polygon(int(args[0]), r)
    except (IndexError, ValueError) as exc:
        raise ConfigurationError(f"bad body spec {spec!r}: {exc}") from exc
    raise ConfigurationError(f"unknown body type {kind!r} in {spec!r}")


def body_from_record(record: dict):
    if record.get("type") == "ball":
        return Ball(int(record["dimension"]), float(record["radius"]),
                    record.get("center"))
    if "vertices" not in record:
        raise ConfigurationError("body record needs a 'vertices' field")
    body = bodies.build_polytope(np.asarray(record["vertices"], dtype=float))
    if "map" in record:
        body = bodies.apply_linear(body, LinearMap(np.asarray(record["map"],
                                                             dtype=float)))
    if "translate" in record:
        body = body.translate(np.asarray(record["translate"], dtype=float))
    return body


def parse_measure(spec: str, n: int):
    """Measure spec: ``lebesgue``, ``gaussian``, ``radial_power:0.5``,
    ``exp_norm:<body spec>``, or ``@file.json``."""
    if spec.startswith("@"):
        with open(spec[1:], "r", encoding="utf-8") as fh:
            record = json.load(fh)
        kind = record["type"]
        if kind == "exp_norm":
            return measures.exp_norm(body_from_record(record["body"]))
        if kind == "radial_power":
            return measures.radial_power(n, float(record["alpha"]))
        spec = kind
    parts = spec.split(":", 1)
    kind = parts[0]
    if kind == "lebesgue":
        return measures.lebesgue(n)
    if kind == "gaussian":
        return measures.gaussian(n)
    if kind == "radial_power":
        if len(parts) < 2:
            raise ConfigurationError("radial_power needs an alpha: radial_power:a")
        return measures.radial_power(n, float(parts[1]))
    if kind == "exp_norm":
        if len(parts) < 2:
            raise ConfigurationError("exp_norm needs a body: exp_norm:cube:2")
        return measures.exp_norm(parse_body(parts[1]))
    raise ConfigurationError(f"unknown measure type {kind!r}")


def parse_family(spec: str) -> ConcavityFamily:
    if spec == "log":
        return measures.log_family()
    if spec == "gaussian_phi_inverse":
        return measures.gaussian_phi_inverse_family()
    if spec.startswith("power:"):
        return measures.power_family(float(spec.split(":", 1)[1]))
    raise ConfigurationError(f"unknown family {spec!r} "
                             "(log | gaussian_phi_inverse | power:s)")


def parse_map(spec: str, n: int) -> LinearMap:
    """Row-major matrix: 'a,b;c,d' or 'rot:angle' in the plane."""
    if spec.startswith("rot:"):
        if n != 2:
            raise ConfigurationError("rot: shorthand is 2-D only")
        return LinearMap.rotation_2d(float(spec.split(":", 1)[1]))
    rows = [[float(v) for v in row.split(",")] for row in spec.split(";")]
    return LinearMap(np.asarray(rows, dtype=float))


def parse_vector(spec: str) -> np.ndarray:
    return np.asarray([float(v) for v in spec.split(",")], dtype=float)


# -- output --------------------------------------------------------------------

_CSV_FIELDS = ["id", "lhs", "rhs", "margin", "tolerance", "pass", "verdict",
               "seed", "samples", "grid", "tol", "witnesses"]


def emit_report(report: Report, fmt: str, out) -> int:
    data = report.to_json_dict()
    if fmt == "json":
        out.write(json.dumps(data, indent=2))
        out.write("\n")
    else:
        writer = csv.DictWriter(out, fieldnames=_CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        row = {k: data[k] for k in ("id", "lhs", "rhs", "margin",
                                    "tolerance", "verdict")}
        row["pass"] = data["pass"]
        row.update({k: data["config"].get(k) for k in ("seed", "samples",
                                                       "grid", "tol")})
        row["witnesses"] = json.dumps(data["witnesses"])
        writer.writerow(row)
    if report.verdict == "hypothesis_violation":
        return EXIT_HYPOTHESIS
    return EXIT_OK if report.passed else EXIT_FAIL


def emit_json(data, out) -> int:
    out.write(json.dumps(data, indent=2))
    out.write("\n")
    return EXIT_OK


def emit_rows(rows: list[dict], fmt: str, out) -> int:
    if fmt == "json":
        return emit_json(rows, out)
    if rows:
        writer = csv.DictWriter(out, fieldnames=list(rows[0].keys()),
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return EXIT_OK


# -- argument plumbing ----------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, body=True, measure=False):
    if body:
        p.add_argument("--body", required=True, help="body spec (or @file)")
    if measure:
        p.add_argument("--measure", default="lebesgue",
                       help="measure spec (default lebesgue)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=measures.DEFAULT_MC_SAMPLES)
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="projbodies")
    sub = top.add_subparsers(dest="command", required=True)

    body = sub.add_parser("body").add_subparsers(dest="action", required=True)
    p = body.add_parser("info")
    _add_common(p)
    p = body.add_parser("transform")
    _add_common(p)
    p.add_argument("--map", required=True, help="row-major 'a,b;c,d' or rot:angle")

    cov = sub.add_parser("covariogram").add_subparsers(dest="action", required=True)
    p = cov.add_parser("eval")
    _add_common(p, measure=True)
    p.add_argument("--x", required=True, help="translation vector 'x1,x2,...'")
    p.add_argument("--mode", choices=("plain", "polarized", "functional"),
                   default="plain")
    p.add_argument("--f", default=None, help="density spec for functional mode")
    p = cov.add_parser("profile")
    _add_common(p, measure=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--steps", type=int, default=32)
    p.add_argument("--mode", choices=("plain", "polarized", "functional"),
                   default="plain")
    p.add_argument("--f", default=None)

    proj = sub.add_parser("projbody").add_subparsers(dest="action", required=True)
    p = proj.add_parser("build")
    _add_common(p, measure=True)
    p.add_argument("--f", default=None)
    p = proj.add_parser("polar-volume")
    _add_common(p, measure=True)
    p = proj.add_parser("brightness")
    _add_common(p, measure=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--mode", choices=("plain", "polarized", "functional"),
                   default="plain")
    p.add_argument("--f", default=None)

    mean = sub.add_parser("meanbody").add_subparsers(dest="action", required=True)
    for action in ("radial", "spectral"):
        p = mean.add_parser(action)
        _add_common(p)
        p.add_argument("--p", required=True,
                       help="exponent (a float, or 'inf')")
    p = mean.add_parser("chain")
    _add_common(p)
    p.add_argument("--p-list", default="0,1,2")

    p = sub.add_parser("verify")
    p.add_argument("id", choices=INEQUALITY_IDS)
    _add_common(p, measure=True)
    p.add_argument("--nu", default=None, help="second measure spec")
    p.add_argument("--f", default=None, help="density spec for functional forms")
    p.add_argument("--family", default=None,
                   help="log | gaussian_phi_inverse | power:s")
    p.add_argument("--s", type=float, default=None)

    iso = sub.add_parser("isotropic").add_subparsers(dest="action", required=True)
    p = iso.add_parser("residual")
    _add_common(p, measure=True)
    p = iso.add_parser("minimize")
    _add_common(p, measure=True)
    p = iso.add_parser("reverse-iso")
    _add_common(p, measure=True)
    p.add_argument("--family", required=True)
    p.add_argument("--mode", choices=("q_form", "f_form"), default="q_form")

    sweep = sub.add_parser("sweep").add_subparsers(dest="action", required=True)
    p = sweep.add_parser("pe")
    _add_common(p)
    p.add_argument("--t-list", default="0.5,1,2,4,8,12,16")
    p = sweep.add_parser("gaussian-sharpness")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--r-list", default="1,2,5,10,20")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p = sweep.add_parser("ehrhard")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--x-list", default="-2,-1,0,1,2")
    p.add_argument("--format", choices=("json", "csv"), default="csv")

    return top


def _config(args) -> RunConfig:
    return RunConfig(seed=args.seed, samples=args.samples, grid=args.grid,
                     tol=args.tol)


def _run(args, out) -> int:
    cmd = args.command
    if cmd == "body":
        K = parse_body(args.body)
        if args.action == "transform":
            K = bodies.apply_linear(K, parse_map(args.map, K.n))
        if isinstance(K, Ball):
            return emit_json({"type": "ball", "dimension": K.n,
                              "radius": K.radius,
                              "center": list(K.center),
                              "volume": K.volume}, out)
        return emit_json({
            "type": "polytope", "dimension": K.n,
            "volume": K.volume,
            "vertex_count": len(K.vertices),
            "facet_count": K.facet_count,
            "symmetric": K.is_symmetric(),
            "diameter": K.diameter,
            "vertices": K.vertices.tolist(),
            "facet_normals": K.normals.tolist(),
            "facet_offsets": K.offsets.tolist(),
            "facet_areas": K.areas.tolist(),
        }, out)

    if cmd == "covariogram":
        K = parse_body(args.body)
        mu = parse_measure(args.measure, K.n)
        f = parse_measure(args.f, K.n) if args.f else None
        cfg = _config(args)
        query = CovariogramQuery(K, mu, f, mode=args.mode,
                                 stream=cfg.stream(), N=args.samples)
        if args.action == "eval":
            res = mu_covariogram(query, parse_vector(args.x))
            return emit_json({"value": res.value,
                              "error": res.error_estimate,
                              "evaluations": res.evaluations}, out)
        theta = parse_vector(args.theta)
        theta = theta / np.linalg.norm(theta)
        rho = bodies.radial_many(bodies.difference_body(K), theta[None, :])[0]
        rows = []
        for i in range(args.steps + 1):
            r = rho * i / args.steps
            res = mu_covariogram(query, r * theta)
            rows.append({"r": r, "value": res.value,
                         "error": res.error_estimate})
        return emit_rows(rows, args.format, out)

    if cmd == "projbody":
        K = parse_body(args.body)
        cfg = _config(args)
        mu = parse_measure(args.measure, K.n)
        if args.action == "build":
            f = parse_measure(args.f, K.n) if args.f else None
            zon = projection_zonoid(K, mu, f=f, tol=args.tol)
            off = offset_vector(K, mu, f=f,
                                stream=cfg.stream() if f is not None else None,
                                N=args.samples, tol=args.tol)
            return emit_json({
                "generators": zon.generators.tolist(),
                "weights": zon.weights.tolist(),
                "weight_errors": zon.weight_errors.tolist(),
                "offset": list(off.value),
                "offset_error": off.error_estimate,
                "offset_kind": off.which}, out)
        if args.action == "polar-volume":
            zon = projection_zonoid(K, mu, tol=args.tol)
            off = offset_vector(K, mu, tol=args.tol)
            grid = sphere_directions(K.n, args.grid)
            val = zonoid_polar_volume(zon.with_offset(off.value), grid)
            return emit_json({"value": val, "grid": args.grid}, out)
        theta = parse_vector(args.theta)
        f = parse_measure(args.f, K.n) if args.f else None
        res = brightness_residual(K, mu, theta, mode=args.mode, f=f,
                                  stream=cfg.stream(), N=args.samples,
                                  tol=args.tol)
        return emit_json({"residual": res.value,
                          "budget": res.error_estimate,
                          "pass": bool(res.value <= 3.0 * res.error_estimate
                                       + 1e-9)}, out)

    if cmd == "meanbody":
        K = parse_body(args.body)
        grid = sphere_directions(K.n, min(args.grid, 256))
        if args.action == "chain":
            p_list = [float(p) for p in args.p_list.split(",")]
            report = inclusion_chain_report(K, p_list, grid, tol=args.tol)
            return emit_report(report, args.format, out)
        p = float("inf") if args.p == "inf" else float(args.p)
        fn = radial_mean_body if args.action == "radial" else spectral_mean_body
        result = fn(K, p, grid, tol=args.tol)
        rows = [{"direction": list(d), "radius": float(r)}
                for d, r in zip(grid.directions, result.star.radii)]
        if args.format == "csv":
            rows = [{"radius": r["radius"],
                     **{f"d{i}": v for i, v in enumerate(r["direction"])}}
                    for r in rows]
        return emit_rows(rows, args.format, out)

    if cmd == "verify":
        K = parse_body(args.body)
        n = K.n
        mu = parse_measure(args.measure, n)
        nu = parse_measure(args.nu, n) if args.nu else None
        f = parse_measure(args.f, n) if args.f else None
        family = parse_family(args.family) if args.family else None
        report = verify(args.id, K, mu=mu, nu=nu, f=f, family=family,
                        s=args.s, precision=_config(args))
        return emit_report(report, args.format, out)

    if cmd == "isotropic":
        K = parse_body(args.body)
        mu = parse_measure(args.measure, K.n)
        cfg = _config(args)
        if args.action == "residual":
            cert = isotropic.isotropy_residual(K, mu, args.tol)
            return emit_json({"residual": cert.residual,
                              "threshold": cert.threshold,
                              "isotropic": cert.isotropic,
                              "weights": cert.weights.tolist()}, out)
        if args.action == "minimize":
            point, value, converged = isotropic.minimize_I(
                K, mu, stream=cfg.stream(), tol=args.tol)
            return emit_json({"matrix": point.matrix.tolist(),
                              "value": value,
                              "converged": converged}, out)
        family = parse_family(args.family)
        report = isotropic.reverse_isoperimetric(K, mu, family,
                                                 mode=args.mode,
                                                 stream=cfg.stream(),
                                                 N=args.samples, cfg=cfg)
        return emit_report(report, args.format, out)

    if cmd == "sweep":
        if args.action == "pe":
            K = parse_body(args.body)
            t_list = [float(t) for t in args.t_list.split(",")]
            rows = pe_sweep(K, t_list, _config(args))
            return emit_rows(rows, args.format, out)
        if args.action == "gaussian-sharpness":
            r_list = [float(r) for r in args.r_list.split(",")]
            rows = gaussian_sharpness_sweep(r_list, n=args.n)
            return emit_rows(rows, args.format, out)
        x_list = [float(x) for x in args.x_list.split(",")]
        rows = [{"x": x, "value": ehrhard_bound_value(args.n, x),
                 "error": 0.0} for x in x_list]
        return emit_rows(rows, args.format, out)

    raise ConfigurationError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return _run(args, sys.stdout)
    except (ConfigurationError, DomainError, FileNotFoundError,
            KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
