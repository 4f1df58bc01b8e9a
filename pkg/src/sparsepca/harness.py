"""Experiment engine: data ingestion, random instances, gamma sweeps,
benchmark runs, and result emission.

Every run is deterministic for a fixed spec: repetition r of a generated
instance uses seed + r, grid points are laid out by rule, and output files
are reproduced byte for byte apart from the timing fields.
"""

import csv
import io
import json
import subprocess
import time
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .block import BlockConfig, solve_block
from .errors import DataFormatError
from .gradient import StopRule
from .linalg import adjusted_variance, rank_one_svd
from .single import PenaltyConfig, gamma_max, init_column, solve_single

MODES = ("solve", "tradeoff", "cardsweep", "bench", "pca")


@dataclass
class ExperimentSpec:
    """Description of one experiment, mirrored verbatim into the output."""

    mode: str
    input_path: Optional[str] = None
    gens: List[Tuple[int, int, int]] = field(default_factory=list)  # (p, n, seed)
    penalty: str = "l1"
    gamma: float = 0.0
    gamma_grid: Optional[Tuple[float, float, int]] = None  # lo, hi, steps (linear)
    block_m: int = 1
    mu: Optional[List[float]] = None
    center: bool = False
    eps: float = 1e-4
    max_iter: int = 100000
    reps: int = 1
    out_format: str = "json"
    out_path: Optional[str] = None
    delimiter: Optional[str] = None
    skip_header: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.gamma_grid is not None:
            lo, hi, steps = self.gamma_grid
            if lo < 0 or hi < lo or steps < 1:
                raise ValueError("gamma grid must satisfy 0 <= lo <= hi, steps >= 1")
        if self.input_path is None and not self.gens:
            raise ValueError("either an input path or a generator spec is required")

    def stop_rule(self):
        return StopRule(relative_tolerance=self.eps, max_iterations=self.max_iter)


@dataclass
class ResultPoint:
    """One solve outcome; the field order is the emission order."""

    gamma: float
    cardinality: int
    variance: float
    variance_ratio: float
    avar: float
    iterations: int
    time_ms: float
    termination: str


@dataclass
class TradeoffPoint:
    """Per-gamma averages across repetitions."""

    gamma: float
    cardinality: float
    variance_ratio: float
    wall_time_ms: float


@dataclass
class TradeoffResult:
    points: List[ResultPoint]
    averages: List[TradeoffPoint]


@dataclass
class BenchRow:
    p: int
    n: int
    mean_time_s: float
    mean_iterations: float
    reps: int


def load_matrix(path, delimiter=None, center_columns=False, skip_header=False):
    """Parse a delimited numeric text file into a p-by-n matrix.

    Rows are samples, columns are variables.  ``delimiter=None`` splits on
    whitespace; pass "," for comma-separated files.  Ragged rows,
    non-numeric or non-finite cells, and empty files raise
    :class:`DataFormatError` with the offending row/column.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    rows = []
    width = None
    for lineno, line in enumerate(lines, start=1):
        if skip_header and lineno == 1:
            continue
        if not line.strip():
            continue
        cells = line.split(delimiter) if delimiter else line.split()
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise DataFormatError(
                f"row {lineno}: expected {width} columns, found {len(cells)}"
            )
        values = []
        for colno, cell in enumerate(cells, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise DataFormatError(
                    f"row {lineno}, column {colno}: not a number: {cell!r}"
                ) from None
            if not np.isfinite(v):
                raise DataFormatError(
                    f"row {lineno}, column {colno}: non-finite value {cell!r}"
                )
            values.append(v)
        rows.append(values)
    if not rows:
        raise DataFormatError("empty input")
    a = np.asarray(rows, dtype=float)
    if center_columns:
        a = a - a.mean(axis=0, keepdims=True)
    return a


def save_matrix(path, a, delimiter=","):
    """Write a matrix as delimited text with full round-trip precision."""
    a = np.asarray(a, dtype=float)
    with open(path, "w", encoding="utf-8") as fh:
        for row in a:
            fh.write(delimiter.join(repr(float(v)) for v in row))
            fh.write("\n")


def gen_gaussian(p, n, seed):
    """p-by-n matrix of independent standard normal entries, deterministic
    for a fixed seed."""
    if p < 1 or n < 1:
        raise ValueError("p and n must be >= 1")
    return np.random.default_rng(seed).standard_normal((p, n))


def default_tradeoff_grid(gmax, points=50):
    """gamma = 0 plus a geometric grid of ``points`` values in (0, gmax),
    reaching to within a factor 1e-6 of the suppression threshold."""
    if gmax <= 0:
        raise ValueError("gamma_max must be positive")
    return np.concatenate(([0.0], np.geomspace(1e-3 * gmax, (1.0 - 1e-6) * gmax, points)))


def default_cardsweep_grid(gmax, points=30):
    """Grid from 0 towards gmax, geometrically dense near the suppression
    threshold where the top column norms cluster."""
    if gmax <= 0:
        raise ValueError("gamma_max must be positive")
    return gmax * (1.0 - np.geomspace(1.0, 1e-6, points))


def _instance(spec, rep):
    """Matrix for repetition ``rep``; generated seeds are offset by rep."""
    if spec.input_path is not None:
        a = load_matrix(
            spec.input_path,
            delimiter=spec.delimiter,
            center_columns=spec.center,
            skip_header=spec.skip_header,
        )
        return a
    p, n, seed = spec.gens[0]
    a = gen_gaussian(p, n, seed + rep)
    if spec.center:
        a = a - a.mean(axis=0, keepdims=True)
    return a


def _timed_single(a, kind, gamma, stop):
    """One single-unit solve timed end to end: initialization, iteration,
    and fill; matrix generation and parsing are excluded."""
    t0 = time.perf_counter()
    res = solve_single(a, PenaltyConfig(kind, gamma), x0=init_column(a), stop=stop)
    dt_ms = (time.perf_counter() - t0) * 1e3
    return res, dt_ms


def _single_point(a, kind, gamma, stop, denom):
    res, dt_ms = _timed_single(a, kind, gamma, stop)
    z = res.z_star
    var = variance_of(a, z)
    return ResultPoint(
        gamma=float(gamma),
        cardinality=int(np.count_nonzero(z)),
        variance=var,
        variance_ratio=var / denom,
        avar=var,
        iterations=int(res.trace.iterations),
        time_ms=dt_ms,
        termination=res.trace.termination,
    )


def variance_of(a, z):
    y = a @ z
    return float(y @ y)


def _block_point(a, spec, gamma, stop, denom):
    cfg = BlockConfig(
        m=spec.block_m,
        penalty=PenaltyConfig(spec.penalty, float(gamma)),
        mu=None if spec.mu is None else np.asarray(spec.mu, dtype=float),
    )
    t0 = time.perf_counter()
    res = solve_block(a, cfg, stop=stop)
    dt_ms = (time.perf_counter() - t0) * 1e3
    avar = adjusted_variance(a @ res.z_star)
    return ResultPoint(
        gamma=float(gamma),
        cardinality=int(np.count_nonzero(res.z_star)),
        variance=avar,
        variance_ratio=avar / denom,
        avar=avar,
        iterations=int(res.trace.iterations),
        time_ms=dt_ms,
        termination=res.trace.termination,
    )


def _pca_denominator(a, spec):
    """Reference variance for ratio curves: the squared dominant singular
    value for single-unit runs, the adjusted variance of the m leading
    principal components for block runs."""
    if spec.block_m == 1:
        return rank_one_svd(a).sigma ** 2
    _, _, vt = np.linalg.svd(a, full_matrices=False)
    return adjusted_variance(a @ vt[: spec.block_m].T)


def _grid(spec, gmax, default):
    if spec.gamma_grid is not None:
        lo, hi, steps = spec.gamma_grid
        return np.linspace(lo, hi, steps)
    return default(gmax)


def tradeoff_sweep(spec):
    """Variance/cardinality trade-off curve: one point per gamma per
    repetition plus per-gamma averages.  Ratios are measured against the
    plain PCA variance on the same matrix."""
    points = []
    stop = spec.stop_rule()
    grids = []
    for rep in range(spec.reps):
        a = _instance(spec, rep)
        denom = _pca_denominator(a, spec)
        grid = _grid(spec, gamma_max(a, spec.penalty), default_tradeoff_grid)
        grids.append(grid)
        for gamma in grid:
            if spec.block_m == 1:
                points.append(_single_point(a, spec.penalty, gamma, stop, denom))
            else:
                points.append(_block_point(a, spec, gamma, stop, denom))
    averages = _per_gamma_averages(points, grids)
    return TradeoffResult(points=points, averages=averages)


def cardinality_sweep(spec):
    """Cardinality against gamma on a grid dense near the suppression
    threshold; same output shape as :func:`tradeoff_sweep`."""
    points = []
    stop = spec.stop_rule()
    grids = []
    for rep in range(spec.reps):
        a = _instance(spec, rep)
        denom = _pca_denominator(a, spec)
        grid = _grid(spec, gamma_max(a, spec.penalty), default_cardsweep_grid)
        grids.append(grid)
        for gamma in grid:
            if spec.block_m == 1:
                points.append(_single_point(a, spec.penalty, gamma, stop, denom))
            else:
                points.append(_block_point(a, spec, gamma, stop, denom))
    averages = _per_gamma_averages(points, grids)
    return TradeoffResult(points=points, averages=averages)


def _per_gamma_averages(points, grids):
    """Average repetitions position-wise along the grid.  Grids may differ
    across repetitions (data-dependent thresholds), so the reported gamma
    is the mean gamma at each grid position."""
    if not points:
        return []
    k = len(grids[0])
    reps = len(grids)
    out = []
    for i in range(k):
        batch = [points[r * k + i] for r in range(reps)]
        out.append(
            TradeoffPoint(
                gamma=float(np.mean([b.gamma for b in batch])),
                cardinality=float(np.mean([b.cardinality for b in batch])),
                variance_ratio=float(np.mean([b.variance_ratio for b in batch])),
                wall_time_ms=float(np.mean([b.time_ms for b in batch])),
            )
        )
    return out


def bench_scaling(spec):
    """Mean per-component extraction time for each (p, n) size.

    The sparsity parameter follows the fixed rule gamma = 0.1 * gamma_max
    for the l1 penalty and 0.01 * gamma_max for the l0 penalty, so the
    extracted cardinalities stay comparable across penalties.
    """
    if spec.input_path is not None or not spec.gens:
        raise ValueError("bench mode requires generator specs")
    rows = []
    stop = spec.stop_rule()
    frac = 0.1 if spec.penalty == "l1" else 0.01
    for p, n, seed in spec.gens:
        times = []
        iters = []
        for rep in range(spec.reps):
            a = gen_gaussian(p, n, seed + rep)
            if spec.center:
                a = a - a.mean(axis=0, keepdims=True)
            gamma = frac * gamma_max(a, spec.penalty)
            res, dt_ms = _timed_single(a, spec.penalty, gamma, stop)
            times.append(dt_ms / 1e3)
            iters.append(res.trace.iterations)
        rows.append(
            BenchRow(
                p=p,
                n=n,
                mean_time_s=float(np.mean(times)),
                mean_iterations=float(np.mean(iters)),
                reps=spec.reps,
            )
        )
    return rows


def run_solve(spec):
    """Single solve at the configured gamma; block solves emit one point
    per component (iterations, time, and termination are shared)."""
    a = _instance(spec, 0)
    stop = spec.stop_rule()
    denom = _pca_denominator(a, spec)
    if spec.block_m == 1:
        return [_single_point(a, spec.penalty, spec.gamma, stop, denom)]
    cfg = BlockConfig(
        m=spec.block_m,
        penalty=PenaltyConfig(spec.penalty, spec.gamma),
        mu=None if spec.mu is None else np.asarray(spec.mu, dtype=float),
    )
    t0 = time.perf_counter()
    res = solve_block(a, cfg, stop=stop)
    dt_ms = (time.perf_counter() - t0) * 1e3
    avar = adjusted_variance(a @ res.z_star)
    points = []
    for j in range(spec.block_m):
        zj = res.z_star[:, j]
        var = variance_of(a, zj)
        points.append(
            ResultPoint(
                gamma=float(spec.gamma),
                cardinality=int(np.count_nonzero(zj)),
                variance=var,
                variance_ratio=var / denom,
                avar=avar,
                iterations=int(res.trace.iterations),
                time_ms=dt_ms,
                termination=res.trace.termination,
            )
        )
    return points


def run_pca(spec):
    """Unpenalized baseline: m leading components by repeated dominant
    singular pairs with deflation; one point per component."""
    from .postprocess import deflate

    a = _instance(spec, 0)
    denom = rank_one_svd(a).sigma ** 2
    b = a.copy()
    points = []
    zs = []
    for _ in range(spec.block_m):
        t0 = time.perf_counter()
        f = rank_one_svd(b)
        dt_ms = (time.perf_counter() - t0) * 1e3
        z = f.v
        zs.append(z)
        var = variance_of(a, z)
        avar = adjusted_variance(a @ np.column_stack(zs))
        points.append(
            ResultPoint(
                gamma=0.0,
                cardinality=int(np.count_nonzero(z)),
                variance=var,
                variance_ratio=var / denom,
                avar=avar,
                iterations=0,
                time_ms=dt_ms,
                termination="converged",
            )
        )
        b = deflate(b, z)
    return points


def git_describe():
    """Best-effort identification of the working tree."""
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True,
            text=True,
            timeout=10,
        )
    except OSError:
        return "unknown"
    return out.stdout.strip() if out.returncode == 0 else "unknown"


def run_experiment(spec):
    """Dispatch a spec to its mode and wrap the outcome into the payload
    emitted by :func:`emit_results`."""
    payload = {"spec": _spec_dict(spec), "git_describe": git_describe()}
    if spec.mode == "solve":
        payload["points"] = [asdict(pt) for pt in run_solve(spec)]
    elif spec.mode == "pca":
        payload["points"] = [asdict(pt) for pt in run_pca(spec)]
    elif spec.mode == "tradeoff":
        payload["points"] = [asdict(pt) for pt in tradeoff_sweep(spec).points]
    elif spec.mode == "cardsweep":
        payload["points"] = [asdict(pt) for pt in cardinality_sweep(spec).points]
    else:
        payload["rows"] = [asdict(row) for row in bench_scaling(spec)]
    return payload


def _spec_dict(spec):
    d = asdict(spec)
    d["gens"] = [list(g) for g in d["gens"]]
    if d["gamma_grid"] is not None:
        d["gamma_grid"] = list(d["gamma_grid"])
    return d


def _format_cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_results(payload, out_format="json", path=None):
    """Serialize a payload as JSON or CSV.

    JSON keeps the field order of construction and full float precision
    (shortest round-trip representation).  CSV mirrors the points (or bench
    rows) table with a header line.  Returns the serialized text; when
    ``path`` is given the text is also written there.
    """
    if out_format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    elif out_format == "csv":
        if "points" in payload:
            records = payload["points"]
            header = [f.name for f in ResultPoint.__dataclass_fields__.values()]
        else:
            records = payload.get("rows", [])
            header = [f.name for f in BenchRow.__dataclass_fields__.values()]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for rec in records:
            writer.writerow([_format_cell(rec[k]) for k in header])
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown format {out_format!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
