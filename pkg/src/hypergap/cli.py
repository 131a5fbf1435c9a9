"""Command-line front end.

Exit codes: 0 success, 1 invariant failure, 2 input error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict

from .angular import SolverError
from .hypgeo import DomainError, DomainParams, diameter
from .spectrum import (
    InvalidRegime,
    InvariantViolation,
    PreconditionError,
    fundamental_gap,
    log_concavity_probe,
    positive_points,
    shih_c2_bound,
    shih_report,
)
from .sweep import SweepSpec, _csv_cell, default_jobs, run_sweep, write_records
from .verify import corrupted_solver, run_verification

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3

SHIH_THETA0 = math.pi / 4
SHIH_THETA1 = 5 * math.pi / 8
SHIH_C = 0.2

_BOOL_FLAGS = {"symmetric", "shih", "corrupt-eigensolver", "loose"}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _domain_flags(p: argparse.ArgumentParser, many: bool = False) -> None:
    kw = {"nargs": "+"} if many else {}
    p.add_argument("--c", type=float, **kw)
    p.add_argument("--theta0", type=float, **kw)
    p.add_argument("--theta1", type=float, **kw)
    p.add_argument("--theta-star", type=float, **kw)
    p.add_argument("--symmetric", action="store_true", help="theta1 = pi - theta0")
    p.add_argument("--loose", action="store_true", help="skip the strict angle-range validation")


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", type=int, default=2000, help="angular output nodes")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--config", help="file of 'key = value' lines; flags on the command line win")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hypergap", description="Fundamental gaps of sectors in the hyperbolic plane.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gap", help="eigenvalues, diameter and normalized gap of one sector")
    _domain_flags(p)
    p.add_argument("--shih", action="store_true", help="theta0 = pi/4, theta1 = 5pi/8, c = 0.2")
    _common_flags(p)

    p = sub.add_parser("diameter", help="diameter of one sector and its bounds")
    _domain_flags(p)
    p.add_argument("--shih", action="store_true")
    _common_flags(p)

    p = sub.add_parser("sweep", help="evaluate a grid of sectors")
    _domain_flags(p, many=True)
    _common_flags(p)
    p.set_defaults(format="csv")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default $HYPERGAP_JOBS or 1)")

    p = sub.add_parser("verify", help="run every bound and identity over the built-in grid")
    _common_flags(p)
    p.add_argument("--nt", type=int, default=33)
    p.add_argument("--report", choices=("summary", "witnesses"), default="summary")
    p.add_argument("--corrupt-eigensolver", action="store_true", help="perturb eigenvalues by 1e-6 (harness self-test)")

    p = sub.add_parser("shih", help="gap certificate and Hessian probe of the theta0 = pi/4 sector")
    p.add_argument("--c", type=float, default=SHIH_C)
    p.add_argument("--theta1", type=float, default=SHIH_THETA1)
    _common_flags(p)

    p = sub.add_parser("hessian", help="Hessian of log u1 on an interior grid")
    _domain_flags(p)
    p.add_argument("--shih", action="store_true")
    p.add_argument("--nr", type=int, default=40)
    p.add_argument("--ntheta", type=int, default=40)
    _common_flags(p)
    return parser


def read_config(path: str) -> list[str]:
    """Turn ``key = value`` lines into argv tokens; blank lines and ``#`` comments are ignored."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    tokens = []
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{no}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if key.replace("_", "-") in _BOOL_FLAGS:
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(flag)
            elif value.lower() not in ("0", "false", "no", "off"):
                raise InputError(f"{path}:{no}: {key} takes true or false")
        else:
            tokens.append(flag)
            tokens.extend(value.replace(",", " ").split())
    return tokens


def _expand_config(argv: list[str]) -> list[str]:
    """Insert config-file tokens right after the subcommand so that explicit flags override them."""
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
        else:
            continue
        if not argv or argv[0].startswith("-"):
            return argv
        return argv[:1] + read_config(path) + argv[1:]
    return argv


def _domain(args) -> DomainParams:
    if getattr(args, "shih", False):
        c = SHIH_C if args.c is None else args.c
        return DomainParams(c, SHIH_THETA0, SHIH_THETA1, strict=not args.loose)
    if args.c is None:
        raise InputError("--c is required")
    strict = not args.loose
    if args.theta_star is not None:
        if args.theta0 is not None or args.theta1 is not None:
            raise InputError("give either --theta-star or --theta0/--theta1")
        return DomainParams.symmetric(args.c, args.theta_star, strict=strict)
    if args.theta0 is None:
        raise InputError("--theta0 or --theta-star is required")
    theta1 = math.pi - args.theta0 if args.symmetric or args.theta1 is None else args.theta1
    if args.symmetric and args.theta1 is not None and not math.isclose(args.theta1, math.pi - args.theta0):
        raise InputError("--symmetric conflicts with --theta1")
    return DomainParams(args.c, args.theta0, theta1, strict=strict)


def _plain(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def _render(fields: dict, fmt: str) -> str:
    flat = {k: _plain(v) for k, v in fields.items()}
    if fmt == "json":
        return json.dumps(flat, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(flat.keys())
    w.writerow([_csv_cell(v) for v in flat.values()])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _gap_fields(d: DomainParams, grid: int) -> dict:
    rep = fundamental_gap(d, grid)
    return {
        "c": d.c,
        "theta0": d.theta0,
        "theta1": d.theta1,
        "theta_star": d.theta_star,
        "lambda1": rep.lambda1,
        "lambda1_4c2": rep.lambda1_4c2,
        "lambda2_c2": rep.lambda2_c2,
        "lambda2": rep.lambda2,
        "branch": rep.branch,
        "gap": rep.gap,
        "diameter": rep.diameter,
        "normalized_gap": rep.normalized_gap,
        "condition_bound_c": rep.condition_bound_c,
    }


def cmd_gap(args) -> int:
    _emit(_render(_gap_fields(_domain(args), args.grid), args.format), args.out)
    return EXIT_OK


def cmd_diameter(args) -> int:
    rep = diameter(_domain(args))
    fields = {k: v for k, v in asdict(rep).items() if k != "corner_distances"}
    fields.update({f"dist_{k}": v for k, v in rep.corner_distances.items()})
    fields["bounds_hold"] = rep.bounds_hold()
    _emit(_render(fields, args.format), args.out)
    return EXIT_OK if fields["bounds_hold"] else EXIT_INVARIANT


def cmd_sweep(args) -> int:
    cs = args.c or []
    pairs = []
    if args.theta0 or args.theta1:
        if args.symmetric:
            pairs = [(t0, math.pi - t0) for t0 in (args.theta0 or [])]
        else:
            t0s, t1s = args.theta0 or [], args.theta1 or []
            if len(t0s) != len(t1s):
                raise InputError("--theta0 and --theta1 need the same number of values")
            pairs = list(zip(t0s, t1s))
    spec = SweepSpec(
        c_values=cs,
        theta_star_values=list(args.theta_star or []),
        symmetric=True,
        theta_pairs=pairs,
        output_path=args.out,
        format=args.format,
        grid_size=args.grid,
        jobs=args.jobs if args.jobs is not None else default_jobs(),
    )
    try:
        spec.validate()
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    records = run_sweep(spec)
    text = write_records(records, spec)
    if args.out is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    solver = corrupted_solver() if args.corrupt_eigensolver else None
    kw = {"grid_size": args.grid, "n_t": args.nt}
    if solver is not None:
        kw["solver"] = solver
    s = run_verification(**kw)
    lines = [f"checks run: {s.checks_run}", f"failures: {len(s.failures)}"]
    lines += [f"FAIL {name} {dom}: {detail}" for name, dom, detail in s.failures]
    if args.report == "witnesses":
        lines.append(f"witnesses (normalized gap < 1): {len(s.witnesses)}")
        lines += [f"  {w['domain']} normalized_gap={w['normalized_gap']:.10g}" for w in s.witnesses]
        lines.append(f"large-gap witnesses (normalized gap > 1): {len(s.large_gap_witnesses)}")
        lines += [f"  {w['domain']} normalized_gap={w['normalized_gap']:.10g}" for w in s.large_gap_witnesses]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if s.passed else EXIT_INVARIANT


def _probe_summary(d: DomainParams, nr: int, nt: int):
    lam, probes = log_concavity_probe(d, nr, nt)
    live = [p for p in probes if not p.skipped]
    pos = positive_points(probes)
    worst = max((p for p in live), key=lambda p: p.max_eigenvalue)
    return lam, probes, {
        "probe_points": len(live),
        "skipped_points": len(probes) - len(live),
        "positive_points": len(pos),
        "max_eigenvalue": worst.max_eigenvalue,
        "max_eigenvalue_log_r": worst.r_log,
        "max_eigenvalue_theta": worst.theta,
    }


def cmd_shih(args) -> int:
    try:
        cert = shih_report(args.theta1, args.c, args.grid)
    except PreconditionError as exc:
        raise InputError(f"{exc} (c^2 bound {shih_c2_bound():.6g})") from exc
    d = cert.report.domain
    _, _, summary = _probe_summary(d, 40, 40)
    fields = {
        "c": d.c,
        "theta0": d.theta0,
        "theta1": d.theta1,
        "gap": cert.report.gap,
        "diameter": cert.report.diameter,
        "half_bound": cert.half_bound,
        "margin": cert.margin,
        "certificate": "PASS" if cert.passed else "FAIL",
        "normalized_gap": cert.report.normalized_gap,
        **summary,
    }
    _emit(_render(fields, args.format), args.out)
    return EXIT_OK if cert.passed else EXIT_INVARIANT


def cmd_hessian(args) -> int:
    d = _domain(args)
    lam, probes, summary = _probe_summary(d, args.nr, args.ntheta)
    if args.format == "json":
        text = _render({"lambda1": lam, **summary}, "json")
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ("log_r", "theta", "log_u", "H11", "H12", "H22", "grad_sq", "max_eigenvalue")
        w.writerow(cols)
        for p in probes:
            if p.skipped:
                continue
            row = (p.r_log, p.theta, p.log_u, p.H11, p.H12, p.H22, p.grad_sq, p.max_eigenvalue)
            w.writerow([format(v, ".17g") for v in row])
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {
    "gap": cmd_gap,
    "diameter": cmd_diameter,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "shih": cmd_shih,
    "hessian": cmd_hessian,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_expand_config(argv))
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    except (InputError, DomainError, InvalidRegime, PreconditionError) as exc:
        print(f"hypergap: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"hypergap: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except SolverError as exc:
        print(f"hypergap: solver failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"hypergap: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
