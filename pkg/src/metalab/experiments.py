"""Experiment orchestration: run plans, the result store and the bias audit.

A plan expands to one descriptor per (algorithm, problem, run).  Each run
gets its own seed from :func:`metalab.rng.mix64`, so results never depend
on execution order or on the number of worker processes.  Finished runs are
appended to ``records.jsonl``; an interrupted plan resumes by skipping
descriptor ids already present there.  ``results.csv`` is rebuilt from the
store in plan order after every execution.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import plots
from .algorithms import lookup
from .benchmarks import Problem, make_suite, manifest_hash, suite_manifest
from .core import Budget, ConfigError, run_population_loop
from .metrics import Recorder, RunTrace, summarize
from .rng import RngStream, mix64
from .stats import (InsufficientData, competition_positions, cd_groups, friedman,
                    nemenyi_cd, wilcoxon_signed_rank)

RESULT_COLUMNS = ("algo", "func_index", "dim", "run", "seed", "final_error", "evals",
                  "wall_ms", "trace_path")
SUMMARY_COLUMNS = ("algo", "dim", "func_index", "n", "mean", "std", "best", "worst",
                   "median", "mean_floored", "mean_xpl", "mean_xpt")
ERROR_FLOOR = 1e-8
SUITE_COUNTS = (3, 7, 10, 10)


class ResultsFormatError(ConfigError):
    """A results CSV that cannot be parsed; ``row`` is the 1-based line number."""

    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


# ---------------------------------------------------------------------------
# plans
# ---------------------------------------------------------------------------
@dataclass
class ExperimentPlan:
    """Algorithms, suite and repetition settings for one experiment.

    ``params`` maps an algorithm id to parameter overrides applied on top of
    the ``preset`` ("default" or "tuned").  ``funcs`` selects 1-based suite
    indices; ``None`` means the whole suite.
    """

    algos: Sequence[str]
    dims: Sequence[int] = (10,)
    runs: int = 31
    seed: int = 0
    shifted: bool = True
    funcs: Sequence[int] | None = None
    preset: str = "default"
    params: dict[str, dict] = field(default_factory=dict)
    budget_multiplier: int = 10000
    suite_seed: int = 2017
    rotate: bool = True
    stride: int = 1
    out: str | Path = "results"

    def __post_init__(self):
        self.algos = tuple(self.algos)
        self.dims = tuple(int(d) for d in self.dims)
        if self.funcs is not None:
            self.funcs = tuple(int(f) for f in self.funcs)

    def validate(self) -> None:
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if not self.algos:
            raise ConfigError("no algorithms selected")
        if not self.dims or any(d < 1 for d in self.dims):
            raise ConfigError(f"invalid dims {self.dims}")
        if self.budget_multiplier < 1:
            raise ConfigError("budget multiplier must be positive")
        n_funcs = sum(SUITE_COUNTS)
        for f in self.funcs or ():
            if not 1 <= f <= n_funcs:
                raise ConfigError(f"unknown function id {f} (suite has 1..{n_funcs})")
        for a in self.algos:
            spec = lookup(a)
            for d in self.dims:
                resolve_params(self, a, d, spec)
        for a in self.params:
            if a not in self.algos:
                raise ConfigError(f"overrides given for unselected algorithm {a!r}")

    def func_indices(self) -> tuple[int, ...]:
        return self.funcs if self.funcs is not None else tuple(range(1, sum(SUITE_COUNTS) + 1))

    def manifest(self) -> str:
        """Canonical JSON of everything that determines the results."""
        rec = {k: v for k, v in asdict(self).items() if k != "out"}
        rec["funcs"] = list(self.func_indices())
        return json.dumps(rec, sort_keys=True, separators=(",", ":"), default=list) + "\n"


def resolve_params(plan: ExperimentPlan, algo: str, dim: int, spec=None) -> dict:
    spec = spec or lookup(algo)
    base = spec.preset(dim, plan.preset)
    base.update(plan.params.get(algo, {}))
    return spec.validate(base)


@dataclass(frozen=True)
class RunDescriptor:
    algo: str
    func_index: int
    dim: int
    run: int
    seed: int

    @property
    def id(self) -> str:
        return f"{self.algo}|f{self.func_index}|d{self.dim}|r{self.run}"

    @property
    def trace_name(self) -> str:
        return f"traces/{self.algo}_f{self.func_index}_d{self.dim}_r{self.run}.jsonl"


def run_seed(base: int, algo: str, func_index: int, dim: int, run: int) -> int:
    return mix64(base, algo, func_index, dim, run)


def plan_matrix(plan: ExperimentPlan) -> list[RunDescriptor]:
    """Cartesian product algorithms x dims x functions x runs, in that order."""
    return [RunDescriptor(a, f, d, r, run_seed(plan.seed, a, f, d, r))
            for a in plan.algos for d in plan.dims for f in plan.func_indices()
            for r in range(plan.runs)]


# ---------------------------------------------------------------------------
# records and the store
# ---------------------------------------------------------------------------
@dataclass
class RunRecord:
    algo: str
    func_index: int
    dim: int
    run: int
    seed: int
    final_error: float
    evals: int
    wall_ms: int
    trace_path: str

    @property
    def id(self) -> str:
        return f"{self.algo}|f{self.func_index}|d{self.dim}|r{self.run}"

    def row(self) -> list[str]:
        return [self.algo, str(self.func_index), str(self.dim), str(self.run), str(self.seed),
                repr(float(self.final_error)), str(self.evals), str(self.wall_ms),
                self.trace_path]


class ResultStore:
    """Append-only JSON Lines store of :class:`RunRecord` keyed by descriptor id."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.path = self.root / "records.jsonl"
        self.records: dict[str, RunRecord] = {}
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        lines = self.path.read_text(encoding="utf-8").splitlines()
        for k, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                rec = RunRecord(**json.loads(line))
            except (json.JSONDecodeError, TypeError):
                if k == len(lines) - 1:     # torn final write from an interrupted run
                    continue
                raise ConfigError(f"{self.path}: corrupt record on line {k + 1}") from None
            self.records[rec.id] = rec

    def __len__(self) -> int:
        return len(self.records)

    def __contains__(self, key: str) -> bool:
        return key in self.records

    def append(self, rec: RunRecord) -> None:
        if rec.id in self.records:
            raise ConfigError(f"duplicate record {rec.id}")
        self.root.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(asdict(rec), sort_keys=True) + "\n")
        self.records[rec.id] = rec

    def ordered(self, descriptors: Iterable[RunDescriptor] | None = None) -> list[RunRecord]:
        if descriptors is None:
            return sorted(self.records.values(),
                          key=lambda r: (r.algo, r.dim, r.func_index, r.run))
        return [self.records[d.id] for d in descriptors if d.id in self.records]


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------
_SUITES: dict[tuple, list[Problem]] = {}


def suite_for(dim: int, shifted: bool, suite_seed: int, rotate: bool) -> list[Problem]:
    key = (dim, shifted, suite_seed, rotate)
    if key not in _SUITES:
        _SUITES[key] = make_suite(dim, SUITE_COUNTS, shifted=shifted, seed=suite_seed,
                                  rotate=rotate)
    return _SUITES[key]


def execute_one(plan: ExperimentPlan, desc: RunDescriptor, root: str | Path) -> RunRecord:
    """Run one descriptor and write its trace under ``root``."""
    problem = suite_for(desc.dim, plan.shifted, plan.suite_seed, plan.rotate)[desc.func_index - 1]
    spec = lookup(desc.algo)
    params = resolve_params(plan, desc.algo, desc.dim, spec)
    trace_path = Path(root) / desc.trace_name
    trace_path.parent.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    tr = run_population_loop(spec, params, problem, Budget.for_dim(desc.dim, plan.budget_multiplier),
                             RngStream(desc.seed), Recorder(plan.stride, trace_path))
    wall = int(round(1000.0 * (time.perf_counter() - start)))
    return RunRecord(desc.algo, desc.func_index, desc.dim, desc.run, desc.seed,
                     float(tr.error), int(tr.used_evals), wall, desc.trace_name)


def _worker(args):
    plan, desc, root = args
    return execute_one(plan, desc, root)


def execute(plan: ExperimentPlan, parallelism: int = 1, out: str | Path | None = None,
            progress=None) -> ResultStore:
    """Run every descriptor not yet in the store, then write ``results.csv``.

    Workers only compute; the parent process appends records, so the store
    has a single writer.
    """
    if parallelism < 1:
        raise ConfigError(f"parallelism must be >= 1, got {parallelism}")
    plan.validate()
    root = Path(out if out is not None else plan.out)
    root.mkdir(parents=True, exist_ok=True)
    descriptors = plan_matrix(plan)
    write_manifests(plan, root)
    store = ResultStore(root)
    todo = [d for d in descriptors if d.id not in store]
    if parallelism == 1 or len(todo) <= 1:
        for d in todo:
            store.append(execute_one(plan, d, root))
            if progress:
                progress(len(store), len(descriptors))
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            futures = [pool.submit(_worker, (plan, d, root)) for d in todo]
            for fut in as_completed(futures):
                store.append(fut.result())
                if progress:
                    progress(len(store), len(descriptors))
    write_results_csv(store.ordered(descriptors), root / "results.csv", header_lines(plan))
    return store


def write_manifests(plan: ExperimentPlan, root: Path) -> dict[str, str]:
    hashes = {}
    text = plan.manifest()
    (root / "plan.json").write_text(text, encoding="utf-8")
    hashes["plan"] = manifest_hash(text)
    for d in plan.dims:
        suite = suite_for(d, plan.shifted, plan.suite_seed, plan.rotate)
        text = suite_manifest(suite, plan.suite_seed)
        (root / f"suite_d{d}.jsonl").write_text(text, encoding="utf-8")
        hashes[f"suite_d{d}"] = manifest_hash(text)
    return hashes


def header_lines(plan: ExperimentPlan) -> list[str]:
    lines = [f"plan_sha256={manifest_hash(plan.manifest())}"]
    for d in plan.dims:
        suite = suite_for(d, plan.shifted, plan.suite_seed, plan.rotate)
        lines.append(f"suite_d{d}_sha256={manifest_hash(suite_manifest(suite, plan.suite_seed))}")
    return lines


# ---------------------------------------------------------------------------
# CSV import and export
# ---------------------------------------------------------------------------
def write_results_csv(records: Sequence[RunRecord], path: str | Path,
                      header: Sequence[str] = ()) -> None:
    buf = io.StringIO()
    for line in header:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for rec in records:
        w.writerow(rec.row())
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


_PARSERS = {"func_index": int, "dim": int, "run": int, "seed": int, "final_error": float,
            "evals": int, "wall_ms": int}


def read_results_csv(path: str | Path) -> list[RunRecord]:
    """Parse a results CSV; raises :class:`ResultsFormatError` naming the bad row."""
    out = []
    header = None
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].startswith("#"):
                continue
            if header is None:
                if tuple(row) != RESULT_COLUMNS:
                    raise ResultsFormatError(lineno, f"expected header {','.join(RESULT_COLUMNS)}")
                header = row
                continue
            if len(row) != len(RESULT_COLUMNS):
                raise ResultsFormatError(lineno, f"expected {len(RESULT_COLUMNS)} fields, "
                                                 f"got {len(row)}")
            values = {}
            for key, raw in zip(RESULT_COLUMNS, row):
                try:
                    values[key] = _PARSERS.get(key, str)(raw)
                except ValueError:
                    raise ResultsFormatError(lineno, f"bad {key} value {raw!r}") from None
            if not math.isfinite(values["final_error"]):
                raise ResultsFormatError(lineno, "final_error is not finite")
            out.append(RunRecord(**values))
    if header is None:
        raise ResultsFormatError(1, "missing header")
    return out


def floored(errors) -> np.ndarray:
    """Errors below the zero threshold reported as 0."""
    e = np.asarray(errors, dtype=float)
    return np.where(e < ERROR_FLOOR, 0.0, e)


@dataclass
class ResultMatrix:
    """Rows are (dim, function) problems, columns algorithms, cells aggregated errors."""

    values: np.ndarray
    algos: list[str]
    problems: list[tuple[int, int]]


def result_matrix(records: Sequence[RunRecord], stat: str = "mean",
                  floor: bool = True, dim: int | None = None) -> ResultMatrix:
    """Aggregate final errors per cell (``stat`` is "mean" or "median")."""
    if stat not in ("mean", "median"):
        raise ConfigError(f"unknown aggregate {stat!r}")
    cells: dict[tuple, list[float]] = {}
    algos: list[str] = []
    for r in records:
        if dim is not None and r.dim != dim:
            continue
        cells.setdefault((r.dim, r.func_index, r.algo), []).append(r.final_error)
        if r.algo not in algos:
            algos.append(r.algo)
    problems = sorted({(d, f) for d, f, _ in cells})
    M = np.full((len(problems), len(algos)), np.nan)
    agg = np.mean if stat == "mean" else np.median
    for (d, f, a), errs in cells.items():
        e = floored(errs) if floor else np.asarray(errs)
        M[problems.index((d, f)), algos.index(a)] = agg(e)
    return ResultMatrix(M, algos, problems)


def summary_rows(records: Sequence[RunRecord], root: str | Path | None = None) -> list[dict]:
    groups: dict[tuple, list[RunRecord]] = {}
    for r in records:
        groups.setdefault((r.algo, r.dim, r.func_index), []).append(r)
    rows = []
    for (a, d, f), recs in sorted(groups.items()):
        errors = [r.final_error for r in recs]
        s = summarize(errors)
        xpl = xpt = math.nan
        if root is not None:
            traces = [_load_trace(root, r) for r in recs]
            traces = [t for t in traces if t is not None and t.xpl]
            if traces:
                xpl = float(np.mean([np.mean(t.xpl) for t in traces]))
                xpt = float(np.mean([np.mean(t.xpt) for t in traces]))
        rows.append({"algo": a, "dim": d, "func_index": f, "n": s.n, "mean": s.mean,
                     "std": s.std, "best": s.best, "worst": s.worst, "median": s.median,
                     "mean_floored": float(np.mean(floored(errors))),
                     "mean_xpl": xpl, "mean_xpt": xpt})
    return rows


def _load_trace(root, rec: RunRecord) -> RunTrace | None:
    p = Path(root) / rec.trace_path
    return RunTrace.from_jsonl(p) if p.exists() else None


def write_summary_csv(rows: Sequence[dict], path: str | Path) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for row in rows:
        w.writerow([repr(row[c]) if isinstance(row[c], float) else row[c]
                    for c in SUMMARY_COLUMNS])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


# ---------------------------------------------------------------------------
# statistics and reports
# ---------------------------------------------------------------------------
def rank_table(ranks: Sequence[float], algos: Sequence[str]) -> list[str]:
    """Lines ``algo  3.9333 (1)`` ordered as given."""
    pos = competition_positions(ranks)
    width = max(len(a) for a in algos)
    return [f"{a:<{width}}  {r:.4f} ({p})" for a, r, p in zip(algos, ranks, pos)]


def stats_report(records: Sequence[RunRecord], alpha: float = 0.05, stat: str = "mean",
                 iman_davenport: bool = False) -> tuple[str, dict]:
    """Friedman ranks with Nemenyi CD per dimension, or Wilcoxon for two algorithms."""
    lines: list[str] = []
    geometry: dict = {}
    for d in sorted({r.dim for r in records}):
        rm = result_matrix(records, stat=stat, dim=d)
        if np.isnan(rm.values).any():
            raise ConfigError(f"incomplete result matrix at dim {d}")
        lines.append(f"== dim {d}: {len(rm.problems)} problems x {len(rm.algos)} algorithms ==")
        k = len(rm.algos)
        if k >= 3:
            rep = friedman(rm.values, alpha, iman_davenport)
            ranks = rep.details["ranks"]
            lines.append(f"Friedman chi2={rep.details['chi2']:.4f} p={rep.p_value:.6g} "
                         f"({rep.verdict})")
            lines.extend(rank_table(ranks, rm.algos))
            lines.append(f"sum of ranks = {np.sum(ranks):.4f}")
            if len(rm.problems) >= 1 and k <= 50:
                cd = nemenyi_cd(k, len(rm.problems), alpha)
                groups = cd_groups(ranks, cd)
                lines.append(f"Nemenyi CD = {cd:.4f}")
                for g in groups:
                    lines.append("  group: " + ", ".join(rm.algos[i] for i in g))
                geometry[d] = {"ranks": [float(r) for r in ranks], "algos": rm.algos, "cd": cd,
                               "groups": groups}
        elif k == 2:
            try:
                rep = wilcoxon_signed_rank(rm.values[:, 0], rm.values[:, 1], alpha)
                lines.append(f"Wilcoxon {rm.algos[0]} vs {rm.algos[1]}: "
                             f"R+={rep.details['r_plus']:.1f}, R-={rep.details['r_minus']:.1f}, "
                             f"p={rep.p_value:.6f} ({rep.verdict}, {rep.details['direction']})")
            except InsufficientData as exc:
                lines.append(f"Wilcoxon {rm.algos[0]} vs {rm.algos[1]}: {exc}")
        else:
            lines.append("a single algorithm: nothing to compare")
    return "\n".join(lines) + "\n", geometry


def report(root: str | Path, alpha: float = 0.05) -> dict[str, Path]:
    """Summary CSV, stats text, plot data CSVs and SVGs from a results directory."""
    root = Path(root)
    csv_path = root / "results.csv"
    records = read_results_csv(csv_path) if csv_path.exists() else []
    if not records:
        raise ConfigError("no records")
    rdir = root / "report"
    rdir.mkdir(exist_ok=True)
    out = {}
    out["summary"] = rdir / "summary.csv"
    write_summary_csv(summary_rows(records, root), out["summary"])
    text, geometry = stats_report(records, alpha)
    out["stats"] = rdir / "stats.txt"
    out["stats"].write_text(text, encoding="utf-8")
    for d, g in geometry.items():
        p = rdir / f"cd_d{d}.svg"
        p.write_text(plots.cd_plot(g["algos"], g["ranks"], g["cd"], g["groups"],
                                   title=f"Critical difference, D={d}"), encoding="utf-8")
        out[f"cd_d{d}"] = p
    out.update(_curve_outputs(records, root, rdir))
    return out


def _median_curve(traces: Sequence[RunTrace], key: str) -> tuple[np.ndarray, np.ndarray]:
    """Series ``key`` against evaluations, medians over runs at shared generation indices."""
    n = min(len(t.gen) for t in traces)
    ev = np.median([t.evals[:n] for t in traces], axis=0)
    val = np.median([getattr(t, key)[:n] for t in traces], axis=0)
    return ev, val


def _curve_outputs(records, root: Path, rdir: Path) -> dict[str, Path]:
    out = {}
    groups: dict[tuple, dict[str, list[RunRecord]]] = {}
    for r in records:
        groups.setdefault((r.dim, r.func_index), {}).setdefault(r.algo, []).append(r)
    for (d, f), by_algo in sorted(groups.items()):
        series = {"best": {}, "div": {}, "xpl": {}, "xpt": {}}
        for a, recs in by_algo.items():
            traces = [t for t in (_load_trace(root, r) for r in recs) if t is not None and t.gen]
            if not traces:
                continue
            fstar = 100.0 * f
            for key in series:
                ev, val = _median_curve(traces, key)
                if key == "best":
                    val = np.maximum(val - fstar, ERROR_FLOOR)
                series[key][a] = (ev, val)
        if not series["best"]:
            continue
        tag = f"f{f}_d{d}"
        data = rdir / f"curves_{tag}.csv"
        with open(data, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("algo", "series", "evals", "value"))
            for key, per in series.items():
                for a, (ev, val) in per.items():
                    for e, v in zip(ev, val):
                        w.writerow((a, key, int(e), repr(float(v))))
        out[f"curves_{tag}"] = data
        for name, svg in (
                ("convergence", plots.line_plot(series["best"], log_y=True,
                                                title=f"F{f} D={d} error", ylabel="error")),
                ("diversity", plots.line_plot(series["div"], title=f"F{f} D={d} diversity",
                                              ylabel="Div")),
                ("xplxpt", plots.tradeoff_plot(series["xpl"], series["xpt"],
                                               title=f"F{f} D={d} XPL% / XPT%"))):
            p = rdir / f"{name}_{tag}.svg"
            p.write_text(svg, encoding="utf-8")
            out[f"{name}_{tag}"] = p
    return out


# ---------------------------------------------------------------------------
# bias audit
# ---------------------------------------------------------------------------
@dataclass
class AlgoVerdict:
    algo: str
    r_plus: float
    r_minus: float
    p_value: float
    n: int
    biased: bool

    def line(self) -> str:
        return (f"{self.algo}: R+={self.r_plus:.1f}, R−={self.r_minus:.1f}, "
                f"p={self.p_value:.6f}, biased={'yes' if self.biased else 'no'}")


@dataclass
class BiasAuditReport:
    """Per-algorithm paired Wilcoxon (nonshifted against shifted) and rank tables."""

    algos: list[str]
    dims: list[int]
    verdicts: dict[str, AlgoVerdict]
    ranks: dict[tuple[str, int], list[float]] = field(default_factory=dict)
    cd: dict[tuple[str, int], float] = field(default_factory=dict)
    alpha: float = 0.05

    def lines(self) -> list[str]:
        return [self.verdicts[a].line() for a in self.algos]

    def table(self) -> str:
        """Rank and position per algorithm per condition and dimension."""
        cols = [(c, d) for d in self.dims for c in ("nonshifted", "shifted")
                if (c, d) in self.ranks]
        if not cols:
            return "(fewer than three algorithms: no rank table)\n"
        width = max(len(a) for a in self.algos)
        head = f"{'algorithm':<{width}}" + "".join(f"  {c + ' D=' + str(d):>18}" for c, d in cols)
        rows = [head]
        cells = {}
        for col in cols:
            pos = competition_positions(self.ranks[col])
            cells[col] = [f"{r:.4f} ({p})" for r, p in zip(self.ranks[col], pos)]
        for i, a in enumerate(self.algos):
            rows.append(f"{a:<{width}}" + "".join(f"  {cells[c][i]:>18}" for c in cols))
        return "\n".join(rows) + "\n"

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n\n" + self.table()


def check_pairing(nonshifted: Sequence[Problem], shifted: Sequence[Problem]) -> None:
    """Each shifted problem must have a partner of equal base, rotation and index."""
    if len(nonshifted) != len(shifted):
        raise ConfigError("unpaired suites: different sizes")
    for a, b in zip(nonshifted, shifted):
        if (a.index, a.name, a.rotation_seed, a.kind) != (b.index, b.name, b.rotation_seed, b.kind):
            raise ConfigError(f"unpaired suites at problem {a.index}")


def bias_audit(algos: Sequence[str], dims: Sequence[int] = (10,), runs: int = 31,
               seed: int = 0, budget_multiplier: int = 10000, funcs: Sequence[int] | None = None,
               parallelism: int = 1, out: str | Path = "bias-audit", alpha: float = 0.05,
               preset: str = "default", params: dict | None = None,
               suite_seed: int = 2017, stride: int = 1) -> BiasAuditReport:
    """Run each algorithm on the shifted and nonshifted suites and compare.

    The two conditions use independent run seeds.  The paired quantity is
    the per-function mean error; ``R+`` counts functions where the
    nonshifted mean is lower, and the verdict is "biased" when that side
    wins with ``p <= alpha``.
    """
    out = Path(out)
    dims = [int(d) for d in dims]
    for d in dims:
        check_pairing(suite_for(d, False, suite_seed, True), suite_for(d, True, suite_seed, True))
    stores = {}
    for cond, shifted in (("nonshifted", False), ("shifted", True)):
        plan = ExperimentPlan(algos, dims, runs, mix64(seed, cond), shifted, funcs, preset,
                              dict(params or {}), budget_multiplier, suite_seed, True, stride)
        stores[cond] = execute(plan, parallelism, out / cond).ordered(plan_matrix(plan))
    algos = list(algos)
    verdicts = {}
    for a in algos:
        a_ns = result_matrix([r for r in stores["nonshifted"] if r.algo == a]).values[:, 0]
        a_s = result_matrix([r for r in stores["shifted"] if r.algo == a]).values[:, 0]
        try:
            rep = wilcoxon_signed_rank(a_ns, a_s, alpha)
            rp, rm, p, n = rep.details["r_plus"], rep.details["r_minus"], rep.p_value, rep.details["n"]
        except InsufficientData:
            d = a_ns - a_s
            rp, rm, p, n = 0.0, 0.0, 1.0, int(np.count_nonzero(d))
        verdicts[a] = AlgoVerdict(a, rp, rm, p, n, bool(p <= alpha and rp > rm))
    rep = BiasAuditReport(algos, dims, verdicts, alpha=alpha)
    if len(algos) >= 3:
        for cond, recs in stores.items():
            for d in dims:
                rm_ = result_matrix(recs, dim=d)
                fr = friedman(rm_.values, alpha)
                rep.ranks[(cond, d)] = [float(x) for x in fr.details["ranks"]]
                if len(algos) <= 50:
                    rep.cd[(cond, d)] = nemenyi_cd(len(algos), len(rm_.problems), alpha)
                    groups = cd_groups(fr.details["ranks"], rep.cd[(cond, d)])
                    (out / f"cd_{cond}_d{d}.svg").write_text(
                        plots.cd_plot(algos, rep.ranks[(cond, d)], rep.cd[(cond, d)], groups,
                                      title=f"{cond}, D={d}"), encoding="utf-8")
    (out / "bias_audit.txt").write_text(rep.text(), encoding="utf-8")
    return rep


def default_parallelism() -> int:
    return max(1, (os.cpu_count() or 1))
