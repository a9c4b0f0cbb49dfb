"""Command-line front end.

Subcommands: ``quad`` (selector grid scans), ``solve`` (one polynomial),
``track`` (root trajectories along a path), ``monodromy`` (loop permutation),
``certify`` (obstruction certificates, re-checkable), ``stability`` (ODE
bound reports and Hurwitz rasters).

Exit codes: 0 success/certified, 2 usage or input error, 3 collision
boundary, 4 inconclusive certificate.  Output is deterministic for a fixed
configuration and seed; the seed resolves as flag, then config file, then
the ``ROOTLAB_SEED`` environment variable, then 0.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import reportio
from .families import load_preset, quad_complex_loop, quartic_real_loop
from .monodromy import (
    CheckRecord,
    CollisionOnLoopError,
    INCONCLUSIVE,
    NotClosedError,
    OBSTRUCTION_CERTIFIED,
    PeriodicityViolatedError,
    QUARTIC_LOOP_ENDPOINTS,
    SeparationFailureError,
    branch_elimination_certificate,
    degree5_certificate,
    loop_permutation,
)
from .poly import InvalidInputError, MonicPoly
from .quad import Selector, classify, xi_root_grid
from .solver import NoConvergenceError, SolveControls, solve_all
from .stability import (
    DomainBox,
    StepTooLargeError,
    hurwitz_raster,
    verify_bound,
)
from .tracking import CoefficientPath, StepUnderflowError, TrackControls, track

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_COLLISION = 3
EXIT_INCONCLUSIVE = 4

_SELECTORS = {
    "empty": Selector.EMPTY,
    "full": Selector.FULL,
    "plus": Selector.PLUS,
    "minus": Selector.MINUS,
}


class CliInputError(Exception):
    """Malformed flags or input files; mapped to exit code 2."""


def _emit(text: str, out: str | None) -> None:
    if out:
        reportio.write_text_atomic(out, text)
    else:
        sys.stdout.write(text)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise CliInputError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
    if not isinstance(data, dict):
        raise CliInputError(f"{path}: config must be a JSON object")
    return data


def _setting(args: argparse.Namespace, config: dict, key: str, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _resolve_seed(args: argparse.Namespace, config: dict) -> int:
    value = _setting(args, config, "seed", None)
    if value is None:
        value = os.environ.get("ROOTLAB_SEED")
    if value is None:
        return 0
    try:
        return int(value)
    except (TypeError, ValueError) as exc:
        raise CliInputError(f"seed must be an integer, got {value!r}") from exc


def _solve_controls(args: argparse.Namespace, config: dict) -> SolveControls:
    tol = float(_setting(args, config, "tol", 1e-12))
    max_iter = int(_setting(args, config, "max_iter", 200))
    try:
        return SolveControls(tol=tol, max_iter=max_iter, seed=_resolve_seed(args, config))
    except InvalidInputError as exc:
        raise CliInputError(str(exc)) from exc


def _track_controls(args: argparse.Namespace, config: dict) -> TrackControls:
    try:
        return TrackControls(
            h0=_setting(args, config, "h0", None),
            h_min=_setting(args, config, "h_min", None),
            eps_cont=float(_setting(args, config, "eps_cont", 0.1)),
            guard=float(_setting(args, config, "guard", 4.0)),
            solve=_solve_controls(args, config),
        )
    except InvalidInputError as exc:
        raise CliInputError(str(exc)) from exc


def _parse_box(text: str, n: int, what: str) -> DomainBox:
    parts = text.split(":")
    if len(parts) != 2 * n:
        raise CliInputError(
            f"{what} must hold {2 * n} colon-separated numbers (lo:hi per coordinate), got {text!r}"
        )
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise CliInputError(f"{what}: non-numeric bound in {text!r}") from exc
    intervals = []
    for k in range(n):
        lo, hi = vals[2 * k], vals[2 * k + 1]
        if lo > hi:
            raise CliInputError(f"{what}: coordinate {k} has lo > hi")
        intervals.append((lo, hi))
    return DomainBox.real(intervals)


def _parse_coeffs(text: str) -> tuple[complex, ...]:
    items = [p.strip() for p in text.split(",") if p.strip()]
    if not items:
        raise CliInputError("--coeffs must list at least one coefficient")
    out = []
    for k, item in enumerate(items):
        try:
            out.append(complex(item.replace(" ", "")))
        except ValueError as exc:
            raise CliInputError(f"--coeffs entry {k} is not a number: {item!r}") from exc
    return tuple(out)


def load_path_file(path: str) -> CoefficientPath:
    """Parse the sampled-path JSON schema with field-level diagnostics."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise CliInputError(f"path file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
    if not isinstance(data, dict):
        raise CliInputError(f"{path}: top level must be an object")
    degree = data.get("degree")
    if not isinstance(degree, int) or degree < 1:
        raise CliInputError(f"{path}: 'degree' must be a positive integer")
    field = data.get("field")
    if field not in ("real", "complex"):
        raise CliInputError(f"{path}: 'field' must be 'real' or 'complex'")
    samples = data.get("samples")
    if not isinstance(samples, list) or len(samples) < 2:
        raise CliInputError(f"{path}: 'samples' must be a list with at least 2 entries")
    knots = []
    last_t = -math.inf
    for i, entry in enumerate(samples):
        where = f"{path}: samples[{i}]"
        if not isinstance(entry, dict):
            raise CliInputError(f"{where} must be an object")
        t = entry.get("t")
        if not isinstance(t, (int, float)) or not math.isfinite(t):
            raise CliInputError(f"{where}.t must be a finite number")
        if t <= last_t:
            raise CliInputError(f"{where}.t is not strictly increasing")
        last_t = t
        coeffs = entry.get("coeffs")
        if not isinstance(coeffs, list) or len(coeffs) != degree:
            raise CliInputError(f"{where}.coeffs must list {degree} [re, im] pairs")
        row = []
        for k, pair in enumerate(coeffs):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(v, (int, float)) and math.isfinite(v) for v in pair)
            ):
                raise CliInputError(f"{where}.coeffs[{k}] must be a finite [re, im] pair")
            if field == "real" and pair[1] != 0:
                raise CliInputError(f"{where}.coeffs[{k}]: real path with nonzero imaginary part")
            row.append(complex(pair[0], pair[1]))
        knots.append((float(t), row))
    try:
        return CoefficientPath.from_samples(knots, field_tag=field)
    except InvalidInputError as exc:
        raise CliInputError(f"{path}: {exc}") from exc


def _resolve_path(args: argparse.Namespace) -> CoefficientPath:
    if getattr(args, "preset", None):
        try:
            family = load_preset(args.preset)
        except KeyError as exc:
            raise CliInputError(str(exc.args[0])) from exc
        except InvalidInputError as exc:
            raise CliInputError(str(exc)) from exc
        return family.path()
    if getattr(args, "file", None):
        return load_path_file(args.file)
    raise CliInputError("one of --preset or --file is required")


# ---------------------------------------------------------------------------
# Subcommand handlers


def cmd_quad(args: argparse.Namespace, config: dict) -> int:
    selector = _SELECTORS[args.selector]
    parts = args.box.split(":")
    if len(parts) != 4:
        raise CliInputError(f"--box must be a0lo:a0hi:a1lo:a1hi, got {args.box!r}")
    try:
        a0_lo, a0_hi, a1_lo, a1_hi = (float(p) for p in parts)
    except ValueError as exc:
        raise CliInputError(f"--box: non-numeric bound in {args.box!r}") from exc
    grid = int(_setting(args, config, "grid", 101))
    if grid < 1:
        raise CliInputError("--grid must be >= 1")
    a0s = np.linspace(a0_lo, a0_hi, grid)
    a1s = np.linspace(a1_lo, a1_hi, grid)
    rows = []
    for a0 in a0s:
        roots = xi_root_grid(selector, np.full(grid, a0), a1s)
        for a1, root in zip(a1s, roots):
            rows.append(
                (
                    float(a0),
                    float(a1),
                    classify(float(a0), float(a1)).value,
                    float(root.real),
                    float(root.imag),
                )
            )
    _emit(reportio.csv_text(("a0", "a1", "region", "re", "im"), rows), args.out)
    return EXIT_OK


def cmd_solve(args: argparse.Namespace, config: dict) -> int:
    coeffs = _parse_coeffs(args.coeffs)
    controls = _solve_controls(args, config)
    try:
        poly = MonicPoly(coeffs)
    except InvalidInputError as exc:
        raise CliInputError(str(exc)) from exc
    ms = solve_all(poly, controls)
    if args.format == "csv":
        rows = [(z.real, z.imag, flag) for z, flag in zip(ms.roots, ms.clustered)]
        _emit(reportio.csv_text(("re", "im", "clustered"), rows), args.out)
        return EXIT_OK
    payload = {
        "degree": poly.degree,
        "coeffs": [[c.real, c.imag] for c in coeffs],
        "roots": [[z.real, z.imag] for z in ms.roots],
        "clustered": list(ms.clustered),
        "cluster_radius": ms.cluster_radius,
        "seed": controls.seed,
    }
    _emit(reportio.dumps(payload), args.out)
    return EXIT_OK


def cmd_track(args: argparse.Namespace, config: dict) -> int:
    path = _resolve_path(args)
    controls = _track_controls(args, config)
    bundle = track(path, controls)
    header = ["t"]
    for k in range(bundle.degree):
        header += [f"re_{k + 1}", f"im_{k + 1}"]
    rows = []
    for t, values in zip(bundle.grid, bundle.values):
        row: list = [float(t)]
        for z in values:
            row += [float(z.real), float(z.imag)]
        rows.append(row)
    _emit(reportio.csv_text(header, rows), args.out)
    summary = {
        "source": path.source,
        "degree": path.degree,
        "field": path.field_tag,
        "t_start": path.t_start,
        "t_end": path.t_end,
        "steps": bundle.steps,
        "delta_max": bundle.delta_max,
        "rho_max": bundle.rho_max,
        "s_min": bundle.s_min,
    }
    if args.summary:
        reportio.write_text_atomic(args.summary, reportio.dumps(summary))
    elif args.out:
        sys.stdout.write(reportio.dumps(summary))
    return EXIT_OK


def cmd_monodromy(args: argparse.Namespace, config: dict) -> int:
    if getattr(args, "preset", None):
        spec = args.preset
        turns = int(_setting(args, config, "turns", 1))
        if turns != 1:
            if ":" in spec:
                raise CliInputError("give either --turns or a parameterized preset, not both")
            if spec != "quad_complex_loop":
                raise CliInputError("--turns is supported for the quad_complex_loop preset")
            spec = f"{spec}:{turns}"
        try:
            target = load_preset(spec)
        except KeyError as exc:
            raise CliInputError(str(exc.args[0])) from exc
        except InvalidInputError as exc:
            raise CliInputError(str(exc)) from exc
    else:
        target = _resolve_path(args)
    controls = _track_controls(args, config)
    perm = loop_permutation(target, controls)
    _emit(reportio.dumps(perm.as_dict()), args.out)
    return EXIT_OK


def _certify_deg2c(samples: int, eps_end: float | None, controls: TrackControls) -> dict:
    single = loop_permutation(quad_complex_loop(1), controls)
    doubled = loop_permutation(quad_complex_loop(2), controls)
    checks = [
        CheckRecord("closure_defect", single.closure_defect, 1e-10, "le"),
        CheckRecord("loop_separation", single.s_min, 1.9, "ge"),
        CheckRecord("tracking_residual", single.rho_max, 1e-9, "le"),
        CheckRecord("endpoint_match_defect", single.match_defect, 1e-8, "le"),
        CheckRecord("fixed_point_count", float(sum(1 for k, v in enumerate(single.mapping) if v == k + 1)), 0.0, "le"),
        CheckRecord("branch_swap", 1.0 if single.mapping == (2, 1) else 0.0, 1.0, "ge"),
        CheckRecord("doubled_loop_identity", 1.0 if doubled.is_identity else 0.0, 1.0, "ge"),
    ]
    verdict = OBSTRUCTION_CERTIFIED if all(c.passed for c in checks) else INCONCLUSIVE
    return {
        "name": "deg2c",
        "family": single.family,
        "mapping": list(single.mapping),
        "permutation": single.cycles,
        "fixed_point_free": single.fixed_point_free,
        "s_min": single.s_min,
        "rho_max": single.rho_max,
        "closure_defect": single.closure_defect,
        "doubled_mapping": list(doubled.mapping),
        "doubled_permutation": doubled.cycles,
        "checks": [c.as_dict() for c in checks],
        "verdict": verdict,
    }


def _recheck(path: str) -> tuple[dict, int]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise CliInputError(f"certificate not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
    checks = data.get("checks")
    if not isinstance(checks, list) or not checks:
        raise CliInputError(f"{path}: no checks recorded")
    consistent = True
    all_pass = True
    rechecked = []
    for entry in checks:
        try:
            record = CheckRecord(
                name=str(entry["name"]),
                margin=float(entry["margin"]),
                threshold=float(entry["threshold"]),
                op=str(entry["op"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CliInputError(f"{path}: malformed check record: {entry!r}") from exc
        if record.op not in ("le", "ge"):
            raise CliInputError(f"{path}: unknown comparison op {record.op!r}")
        recomputed = record.passed
        recorded = entry.get("pass")
        consistent = consistent and (recorded == recomputed)
        all_pass = all_pass and recomputed
        rechecked.append({"name": record.name, "pass": recomputed, "recorded": recorded})
    verdict = OBSTRUCTION_CERTIFIED if all_pass else INCONCLUSIVE
    consistent = consistent and (data.get("verdict") == verdict)
    payload = {
        "recheck": path,
        "consistent": consistent,
        "verdict": verdict,
        "checks": rechecked,
    }
    code = EXIT_OK if consistent and all_pass else EXIT_INCONCLUSIVE
    return payload, code


def cmd_certify(args: argparse.Namespace, config: dict) -> int:
    if args.recheck:
        payload, code = _recheck(args.recheck)
        _emit(reportio.dumps(payload), args.out)
        return code
    if not args.name:
        raise CliInputError("a certificate name (deg2c, deg4r, deg5r) or --recheck is required")
    samples = int(_setting(args, config, "samples", 4096))
    eps_end = _setting(args, config, "eps_end", None)
    if eps_end is not None:
        eps_end = float(eps_end)
    controls = _track_controls(args, config)
    if args.name == "deg2c":
        payload = _certify_deg2c(samples, eps_end, controls)
    elif args.name == "deg4r":
        cert = branch_elimination_certificate(
            quartic_real_loop(),
            samples=samples,
            eps_end=eps_end,
            expected_endpoints=QUARTIC_LOOP_ENDPOINTS,
        )
        payload = {"name": "deg4r", **cert.as_dict()}
    else:
        cert = degree5_certificate(samples=samples, eps_end=eps_end)
        payload = {"name": "deg5r", **cert.as_dict()}
    _emit(reportio.dumps(payload), args.out)
    return EXIT_OK if payload["verdict"] == OBSTRUCTION_CERTIFIED else EXIT_INCONCLUSIVE


def cmd_stability(args: argparse.Namespace, config: dict) -> int:
    n = int(args.n)
    if n < 1:
        raise CliInputError("--n must be >= 1")
    box_a = _parse_box(args.box_a, n, "--box-a")
    controls = _solve_controls(args, config)
    payload: dict = {"n": n}
    wrote_any = False

    if args.hurwitz_raster:
        raster_grid = int(_setting(args, config, "raster_grid", 33))
        points, flags = hurwitz_raster(box_a, raster_grid)
        header = tuple(f"a{k}" for k in range(n)) + ("stable",)
        rows = [tuple(float(v) for v in p) + (bool(f),) for p, f in zip(points, flags)]
        text = reportio.csv_text(header, rows)
        if args.raster_csv:
            reportio.write_text_atomic(args.raster_csv, text)
        else:
            sys.stdout.write(text)
        payload["raster_grid"] = raster_grid
        payload["raster_stable_fraction"] = float(np.mean(flags))
        wrote_any = True

    if args.box_w:
        box_w = _parse_box(args.box_w, n, "--box-w")
        report, curve_xi, curve_ratio = verify_bound(
            box_a,
            box_w,
            grid_a=int(_setting(args, config, "grid_a", 4)),
            grid_w=int(_setting(args, config, "grid_w", 3)),
            xi_max=float(_setting(args, config, "xi_max", 50.0)),
            h=_setting(args, config, "h", None),
            refine=not args.no_refine,
            controls=controls,
        )
        payload["bound"] = report.as_dict()
        if args.ratio_csv:
            rows = [(float(x), float(r)) for x, r in zip(curve_xi, curve_ratio)]
            reportio.write_text_atomic(args.ratio_csv, reportio.csv_text(("xi", "ratio"), rows))
        wrote_any = True

    if not wrote_any:
        raise CliInputError("nothing to do: give --box-w for a bound report or --hurwitz-raster")
    _emit(reportio.dumps(payload), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser assembly


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rootlab",
        description="Root selectors, root-path tracking, obstruction certificates, "
        "and stability bound checks for monic polynomial families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config merged under the flags")
        p.add_argument("--seed", type=int, help="solver seed (default: ROOTLAB_SEED or 0)")
        p.add_argument("--out", help="output file (default: stdout)")

    p_quad = sub.add_parser("quad", help="selector values over a coefficient grid (CSV)")
    p_quad.add_argument("--selector", required=True, choices=sorted(_SELECTORS))
    p_quad.add_argument("--box", required=True, help="a0lo:a0hi:a1lo:a1hi")
    p_quad.add_argument("--grid", type=int, help="points per axis (default 101)")
    common(p_quad)
    p_quad.set_defaults(handler=cmd_quad)

    p_solve = sub.add_parser("solve", help="all roots of one monic polynomial")
    p_solve.add_argument("--coeffs", required=True, help="ascending, comma separated (complex ok)")
    p_solve.add_argument("--format", choices=("json", "csv"), default="json")
    p_solve.add_argument("--tol", type=float)
    p_solve.add_argument("--max-iter", dest="max_iter", type=int)
    common(p_solve)
    p_solve.set_defaults(handler=cmd_solve)

    def track_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--preset", help="built-in family name (name or name:arg)")
        p.add_argument("--file", help="sampled path JSON file")
        p.add_argument("--h0", type=float)
        p.add_argument("--h-min", dest="h_min", type=float)
        p.add_argument("--eps-cont", dest="eps_cont", type=float)
        p.add_argument("--guard", type=float)
        p.add_argument("--tol", type=float)
        p.add_argument("--max-iter", dest="max_iter", type=int)

    p_track = sub.add_parser("track", help="track all roots along a coefficient path")
    track_flags(p_track)
    p_track.add_argument("--summary", help="summary JSON file")
    common(p_track)
    p_track.set_defaults(handler=cmd_track)

    p_mono = sub.add_parser("monodromy", help="root permutation around a closed loop")
    track_flags(p_mono)
    p_mono.add_argument("--turns", type=int, help="repeat count for the loop preset")
    common(p_mono)
    p_mono.set_defaults(handler=cmd_monodromy)

    p_cert = sub.add_parser("certify", help="non-existence certificates")
    p_cert.add_argument("name", nargs="?", choices=("deg2c", "deg4r", "deg5r"))
    p_cert.add_argument("--samples", type=int)
    p_cert.add_argument("--eps-end", dest="eps_end", type=float)
    p_cert.add_argument("--recheck", help="re-validate a recorded certificate JSON")
    p_cert.add_argument("--h0", type=float)
    p_cert.add_argument("--h-min", dest="h_min", type=float)
    p_cert.add_argument("--eps-cont", dest="eps_cont", type=float)
    p_cert.add_argument("--guard", type=float)
    p_cert.add_argument("--tol", type=float)
    p_cert.add_argument("--max-iter", dest="max_iter", type=int)
    common(p_cert)
    p_cert.set_defaults(handler=cmd_certify)

    p_stab = sub.add_parser("stability", help="bound reports and Hurwitz rasters")
    p_stab.add_argument("--n", required=True, type=int)
    p_stab.add_argument("--box-a", dest="box_a", required=True, help="2n colon-separated bounds")
    p_stab.add_argument("--box-w", dest="box_w", help="2n colon-separated bounds")
    p_stab.add_argument("--grid-a", dest="grid_a", type=int)
    p_stab.add_argument("--grid-w", dest="grid_w", type=int)
    p_stab.add_argument("--xi-max", dest="xi_max", type=float)
    p_stab.add_argument("--h", type=float)
    p_stab.add_argument("--no-refine", dest="no_refine", action="store_true")
    p_stab.add_argument("--tol", type=float)
    p_stab.add_argument("--max-iter", dest="max_iter", type=int)
    p_stab.add_argument("--ratio-csv", dest="ratio_csv", help="write the (xi, ratio) curve")
    p_stab.add_argument("--hurwitz-raster", dest="hurwitz_raster", action="store_true")
    p_stab.add_argument("--raster-grid", dest="raster_grid", type=int)
    p_stab.add_argument("--raster-csv", dest="raster_csv", help="write the stability raster")
    common(p_stab)
    p_stab.set_defaults(handler=cmd_stability)

    return parser


# Flags whose values routinely begin with '-': gluing them with '=' keeps
# argparse from reading the value as another option.
_VALUE_FLAGS = {"--box", "--box-a", "--box-w", "--coeffs"}


def _normalize_argv(argv: list[str]) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{token}={argv[i + 1]}")
            i += 2
        else:
            out.append(token)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_normalize_argv(list(argv)))
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        config = _load_config(getattr(args, "config", None))
        return args.handler(args, config)
    except CliInputError as exc:
        print(f"rootlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidInputError, NotClosedError, StepTooLargeError) as exc:
        print(f"rootlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StepUnderflowError as exc:
        print(f"rootlab: collision boundary: {exc}", file=sys.stderr)
        return EXIT_COLLISION
    except CollisionOnLoopError as exc:
        print(f"rootlab: collision boundary: {exc}", file=sys.stderr)
        return EXIT_COLLISION
    except (PeriodicityViolatedError, SeparationFailureError) as exc:
        print(f"rootlab: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except NoConvergenceError as exc:
        print(f"rootlab: solver failure: {exc}", file=sys.stderr)
        return EXIT_ERROR


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
