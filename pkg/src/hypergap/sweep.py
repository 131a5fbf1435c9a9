"""Parameter sweeps over sectors and their flat-file encodings."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .angular import eigen_bounds
from .hypgeo import DomainError, DomainParams
from .spectrum import (
    angular_problem,
    condition_bound_c,
    fundamental_gap,
    normalized_gap_sandwich,
    rough_gap_bounds,
)

COLUMNS = (
    "c",
    "theta0",
    "theta1",
    "theta_star",
    "lambda1",
    "lambda1_4c2",
    "lambda2_c2",
    "lambda2",
    "branch",
    "diameter",
    "gap",
    "normalized_gap",
    "condition_bound_c",
    "eigen_bounds_ok",
    "rough_gap_ok",
    "diameter_bounds_ok",
    "sandwich_ok",
    "status",
)


@dataclass
class SweepSpec:
    c_values: list[float]
    theta_star_values: list[float] = field(default_factory=list)
    symmetric: bool = True
    theta_pairs: list[tuple[float, float]] = field(default_factory=list)
    output_path: str | None = None
    format: str = "csv"
    grid_size: int = 2000
    jobs: int = 1

    def domains(self) -> list[tuple[float, float, float]]:
        pairs = list(self.theta_pairs)
        if self.symmetric:
            pairs += [(ts, math.pi - ts) for ts in self.theta_star_values]
        points = {(float(c), float(t0), float(t1)) for c in self.c_values for t0, t1 in pairs}
        return sorted(points)

    def validate(self) -> None:
        if not self.c_values:
            raise ValueError("sweep needs at least one c value")
        if not self.domains():
            raise ValueError("sweep grid is empty")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")


def _in_bounds(value, bounds):
    lo, hi = bounds
    return lo < value <= hi * (1.0 + 1e-12)


def evaluate_domain(point: tuple[float, float, float], grid_size: int = 2000) -> dict:
    """One sweep record; invalid points come back with ``status`` set and no values."""
    c, t0, t1 = point
    record = dict.fromkeys(COLUMNS)
    record.update(c=c, theta0=t0, theta1=t1)
    try:
        d = DomainParams(c, t0, t1)
    except DomainError as exc:
        record["status"] = f"skipped: {exc}"
        return record
    rep = fundamental_gap(d, grid_size)
    c2 = c * c
    eig_ok = (
        _in_bounds(rep.lambda1, eigen_bounds(angular_problem(d, c2), 1))
        and _in_bounds(rep.lambda1_4c2, eigen_bounds(angular_problem(d, 4 * c2), 1))
        and _in_bounds(rep.lambda2_c2, eigen_bounds(angular_problem(d, c2), 2))
    )
    rough_ok = sandwich_ok = None
    if condition_bound_c(d):
        lo, hi = rough_gap_bounds(d)
        margin = 1e-9 * c2
        rough_ok = lo + margin < rep.gap < hi - margin
        s_lo, s_hi = normalized_gap_sandwich(d)
        sandwich_ok = s_lo < rep.normalized_gap < s_hi
    record.update(
        theta_star=d.theta_star,
        lambda1=rep.lambda1,
        lambda1_4c2=rep.lambda1_4c2,
        lambda2_c2=rep.lambda2_c2,
        lambda2=rep.lambda2,
        branch=rep.branch,
        diameter=rep.diameter,
        gap=rep.gap,
        normalized_gap=rep.normalized_gap,
        condition_bound_c=rep.condition_bound_c,
        eigen_bounds_ok=eig_ok,
        rough_gap_ok=rough_ok,
        diameter_bounds_ok=rep.diameter_report.bounds_hold(),
        sandwich_ok=sandwich_ok,
        status="ok",
    )
    return record


def _evaluate_star(args):
    return evaluate_domain(*args)


def run_sweep(spec: SweepSpec) -> list[dict]:
    """Evaluate every domain of the sweep; rows come back in sorted input order."""
    spec.validate()
    work = [(p, spec.grid_size) for p in spec.domains()]
    if spec.jobs <= 1 or len(work) == 1:
        return [_evaluate_star(w) for w in work]
    with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
        return list(pool.map(_evaluate_star, work, chunksize=max(1, len(work) // (4 * spec.jobs))))


def meta(spec: SweepSpec, n_records: int) -> dict:
    return {
        "generator": f"hypergap {__version__}",
        "records": n_records,
        "grid_size": spec.grid_size,
        "symmetric": spec.symmetric,
        "columns": list(COLUMNS),
    }


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def to_csv(records: list[dict], meta_info: dict) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(meta_info, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for rec in records:
        writer.writerow([_csv_cell(rec[k]) for k in COLUMNS])
    return buf.getvalue()


def to_json(records: list[dict], meta_info: dict) -> str:
    rows = [{k: rec[k] for k in COLUMNS} for rec in records]
    return json.dumps({"meta": meta_info, "records": rows}, indent=1) + "\n"


def _parse_cell(column: str, text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    if column in ("branch", "status"):
        return text
    return float(text)


def read_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    return [{k: _parse_cell(k, v) for k, v in row.items()} for row in reader]


def write_records(records: list[dict], spec: SweepSpec) -> str:
    info = meta(spec, len(records))
    text = to_csv(records, info) if spec.format == "csv" else to_json(records, info)
    if spec.output_path:
        with open(spec.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("HYPERGAP_JOBS", "1")))
    except ValueError:
        return 1
