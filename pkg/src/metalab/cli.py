"""Command-line entry point: ``metalab {list,run,tune,stats,bias-audit,report}``.

Settings come from built-in defaults, then an optional JSON ``--config``
file, then explicit flags (flags win).  ``--set key=value`` overrides a
plan field (``runs=5``) or an algorithm parameter (``de.F=0.7``).  The
``METALAB_OUT`` environment variable only changes the default output
directory.  Configuration errors exit with status 2.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .algorithms import IMPLEMENTED_IDS, all_ids, lookup
from .core import ConfigError
from .experiments import (ExperimentPlan, bias_audit, execute, plan_matrix, read_results_csv,
                          report, stats_report, suite_for)
from .rng import RngStream, mix64

OUT_ENV = "METALAB_OUT"

DEFAULTS = {
    "algos": ",".join(IMPLEMENTED_IDS),
    "funcs": None,
    "dims": "10",
    "runs": 31,
    "seed": 0,
    "budget_multiplier": 10000,
    "shifted": True,
    "parallelism": 1,
    "preset": "default",
    "alpha": 0.05,
    "stride": 1,
    "suite_seed": 2017,
    "set": [],
    "budget": None,
    "budget_per_eval": None,
    "results": None,
    "median": False,
    "iman_davenport": False,
}
# two functions from each class: unimodal, multimodal, hybrid, composition
TUNE_FUNCS = "1,3,5,9,11,17,21,27"
TUNE_RUNS = 200
PLAN_KEYS = {"runs": int, "seed": int, "budget_multiplier": int, "stride": int,
             "suite_seed": int, "shifted": lambda s: s.lower() in ("1", "true", "yes")}


def default_out(command: str) -> str:
    return os.environ.get(OUT_ENV) or ("bias-audit" if command == "bias-audit" else "results")


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------
def _common(p: argparse.ArgumentParser, *names: str) -> None:
    add = {
        "config": lambda: p.add_argument("--config", help="JSON file of settings; flags override it"),
        "set": lambda: p.add_argument("--set", action="append", metavar="KEY=VALUE",
                                      help="override a plan field (runs=5) or an algorithm "
                                           "parameter (de.F=0.7); repeatable"),
        "algos": lambda: p.add_argument("--algos", help="comma-separated algorithm ids "
                                                        "(default: the twelve implemented)"),
        "funcs": lambda: p.add_argument("--funcs", help="comma-separated 1-based suite indices "
                                                        "or ranges like 1-10 (default: all 30)"),
        "dims": lambda: p.add_argument("--dims", help="comma-separated dimensions (default 10)"),
        "runs": lambda: p.add_argument("--runs", type=int, help="runs per cell (default 31)"),
        "seed": lambda: p.add_argument("--seed", type=int, help="base seed (default 0)"),
        "budget_multiplier": lambda: p.add_argument(
            "--budget-multiplier", type=int,
            help="evaluations per dimension per run (default 10000)"),
        "shifted": lambda: _shift_flags(p),
        "parallelism": lambda: p.add_argument("--parallelism", type=int,
                                              help="worker processes (default 1)"),
        "out": lambda: p.add_argument("--out", help=f"output directory (default ${OUT_ENV} "
                                                    "or a per-command name)"),
        "preset": lambda: p.add_argument("--preset", help="default, tuned, or a tuned-preset "
                                                          "JSON file written by 'tune'"),
        "alpha": lambda: p.add_argument("--alpha", type=float,
                                        help="significance level, 0.05 or 0.10 (default 0.05)"),
        "stride": lambda: p.add_argument("--stride", type=int,
                                         help="keep every k-th generation in traces (default 1)"),
    }
    for n in names:
        add[n]()


def _shift_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--shifted", dest="shifted", action="store_const", const=True,
                   help="use the shifted suite (default)")
    g.add_argument("--nonshifted", dest="shifted", action="store_const", const=False,
                   help="use the suite with every optimum at the origin")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="metalab", description="Metaheuristic comparison laboratory")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list algorithms, taxonomy tags and parameter spaces",
                   description="List algorithm ids with tags, parameters and defaults.")

    p = sub.add_parser("run", help="run an experiment plan", description="Run an experiment plan.")
    _common(p, "config", "set", "algos", "funcs", "dims", "runs", "seed", "budget_multiplier",
            "shifted", "parallelism", "out", "preset", "stride")
    p.add_argument("--dry-run", action="store_true",
                   help="print the number of run descriptors and write nothing")

    p = sub.add_parser("tune", help="tune algorithm parameters by iterated racing",
                       description="Tune parameters by iterated racing on suite problems.")
    _common(p, "config", "set", "algos", "dims", "seed", "out", "alpha")
    p.add_argument("--funcs", help=f"training functions as suite indices (default {TUNE_FUNCS})")
    p.add_argument("--budget", type=int, help="total evaluations per tuning session "
                                              f"(default {TUNE_RUNS} x budget per eval)")
    p.add_argument("--budget-per-eval", type=int,
                   help="evaluations per tuning run (default 10000 x dim)")

    p = sub.add_parser("stats", help="Friedman, Wilcoxon and CD reports from a results CSV",
                       description="Statistical comparison from a results CSV.")
    _common(p, "config", "out", "alpha")
    p.add_argument("--results", help="results CSV (default OUT/results.csv)")
    p.add_argument("--median", action="store_const", const=True,
                   help="aggregate runs by median instead of mean")
    p.add_argument("--iman-davenport", action="store_const", const=True,
                   help="decide Friedman significance with the Iman-Davenport F correction")

    p = sub.add_parser("bias-audit", help="shifted against nonshifted paired experiment",
                       description="Run the origin-bias audit end to end.")
    _common(p, "config", "set", "algos", "funcs", "dims", "runs", "seed", "budget_multiplier",
            "parallelism", "out", "preset", "alpha", "stride")

    p = sub.add_parser("report", help="summary CSV, stats and SVG plots for a results directory",
                       description="Render summaries and plots for a results directory.")
    _common(p, "config", "out", "alpha")
    return ap


def _merge(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    cfg["out"] = default_out(args.command)
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, value in data.items():
            key = key.replace("-", "_")
            if key not in cfg:
                raise ConfigError(f"unknown config key {key!r}")
            if key in ("algos", "funcs", "dims") and isinstance(value, list):
                value = ",".join(str(v) for v in value)
            cfg[key] = value
    for key, value in vars(args).items():
        if value is not None and key not in ("command", "config"):
            cfg[key] = value
    return cfg


def _ids(text: str) -> list[str]:
    ids = [s.strip() for s in str(text).split(",") if s.strip()]
    known = set(all_ids())
    for a in ids:
        if a not in known:
            raise ConfigError(f"unknown algorithm id {a!r}")
    return ids


def _ints(text, what: str) -> list[int]:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part[1:]:
                lo, hi = part.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise ConfigError(f"unknown {what} id {part!r}") from None
    return out


def _overrides(cfg: dict, algos: list[str]) -> tuple[dict, dict]:
    """Split ``--set`` items into plan fields and per-algorithm parameters."""
    plan_fields: dict = {}
    params: dict[str, dict] = {}
    for item in cfg.get("set") or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not KEY=VALUE")
        key, raw = item.split("=", 1)
        if "." in key:
            algo, name = key.split(".", 1)
            if algo not in algos:
                raise ConfigError(f"override for unselected algorithm {algo!r}")
            spec = lookup(algo)
            if name in spec.options:
                value = json.loads(raw) if raw not in ("", None) else None
            else:
                value = spec.param(name).check(raw)
            params.setdefault(algo, {})[name] = value
        elif key in PLAN_KEYS:
            try:
                plan_fields[key] = PLAN_KEYS[key](raw)
            except ValueError:
                raise ConfigError(f"bad value for {key}: {raw!r}") from None
        else:
            raise ConfigError(f"unknown override key {key!r}")
    return plan_fields, params


def _preset(cfg: dict, params: dict) -> str:
    """Resolve ``--preset``; a file path merges its parameters into ``params``."""
    preset = cfg["preset"]
    if preset in ("default", "tuned"):
        return preset
    path = Path(preset)
    if not path.exists():
        raise ConfigError(f"unknown preset {preset!r}")
    data = json.loads(path.read_text(encoding="utf-8"))
    entries = data if isinstance(data, list) else [data]
    for e in entries:
        spec = lookup(e["algo"])
        spec.validate(e["params"])
        merged = dict(e["params"])
        merged.update(params.get(e["algo"], {}))
        params[e["algo"]] = merged
    return "default"


def _plan(cfg: dict) -> ExperimentPlan:
    algos = _ids(cfg["algos"])
    plan_fields, params = _overrides(cfg, algos)
    preset = _preset(cfg, params)
    funcs = _ints(cfg["funcs"], "function") if cfg["funcs"] is not None else None
    fields = {"runs": int(cfg["runs"]), "seed": int(cfg["seed"]),
              "budget_multiplier": int(cfg["budget_multiplier"]),
              "shifted": bool(cfg["shifted"]), "stride": int(cfg["stride"]),
              "suite_seed": int(cfg["suite_seed"])}
    fields.update(plan_fields)
    plan = ExperimentPlan(algos, _ints(cfg["dims"], "dimension"), funcs=funcs, preset=preset,
                          params=params, out=cfg["out"], **fields)
    plan.validate()
    return plan


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------
def cmd_list(cfg: dict) -> int:
    for a in all_ids():
        spec = lookup(a)
        status = "" if spec.implemented else "  [reference only]"
        tags = ",".join(spec.tags) or "toy"
        print(f"{spec.id:<14} {tags:<18} {spec.name}{status}")
        for p in spec.params:
            print(f"    {p.describe()}")
        for name, value in spec.options.items():
            print(f"    {name} (option) default={value}")
    return 0


def cmd_run(cfg: dict) -> int:
    plan = _plan(cfg)
    descriptors = plan_matrix(plan)
    if cfg.get("dry_run"):
        print(f"{len(descriptors)} run descriptors")
        return 0
    store = execute(plan, int(cfg["parallelism"]), cfg["out"])
    print(f"{len(store)} records in {Path(cfg['out']) / 'results.csv'}")
    return 0


def cmd_tune(cfg: dict) -> int:
    from .tuner import tune

    algos = _ids(cfg["algos"])
    plan_fields, params = _overrides(cfg, algos)
    if plan_fields:
        raise ConfigError(f"tune does not accept plan overrides {sorted(plan_fields)}")
    funcs = _ints(cfg["funcs"] if cfg["funcs"] is not None else TUNE_FUNCS, "function")
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    for d in _ints(cfg["dims"], "dimension"):
        suite = suite_for(d, True, int(cfg["suite_seed"]), True)
        if funcs is not None:
            bad = [f for f in funcs if not 1 <= f <= len(suite)]
            if bad:
                raise ConfigError(f"unknown function id {bad[0]}")
        instances = [suite[f - 1] for f in funcs]
        per_eval = int(cfg["budget_per_eval"] or 10000 * d)
        budget = int(cfg["budget"] or TUNE_RUNS * per_eval)
        for a in algos:
            spec = lookup(a)
            fixed = params.get(a, {})
            space = [p for p in spec.params if p.name not in fixed]
            rng = RngStream(mix64(int(cfg["seed"]), "tune", a, d))
            res = tune(spec, space, instances, budget, rng,
                       budget_per_eval=per_eval, elimination_alpha=float(cfg["alpha"]),
                       fixed=fixed, audit_path=out / f"tune_{a}_d{d}.log.jsonl")
            best = spec.validate({**fixed, **res.best})
            best = {p.name: best[p.name] for p in spec.params}
            path = out / f"tuned_{a}_d{d}.json"
            path.write_text(json.dumps({"algo": a, "dim": d, "params": best,
                                        "score": res.best_score, "evals": res.evals_used},
                                       sort_keys=True, indent=1, default=float) + "\n",
                            encoding="utf-8")
            print(f"{a} D={d}: {json.dumps(best, sort_keys=True, default=float)} -> {path}")
    return 0


def cmd_stats(cfg: dict) -> int:
    path = Path(cfg["results"] or Path(cfg["out"]) / "results.csv")
    if not path.exists():
        raise ConfigError(f"no results file at {path}")
    records = read_results_csv(path)
    if not records:
        raise ConfigError("no records")
    text, _ = stats_report(records, float(cfg["alpha"]), "median" if cfg["median"] else "mean",
                           bool(cfg["iman_davenport"]))
    sys.stdout.write(text)
    return 0


def cmd_bias_audit(cfg: dict) -> int:
    algos = _ids(cfg["algos"])
    plan_fields, params = _overrides(cfg, algos)
    preset = _preset(cfg, params)
    funcs = _ints(cfg["funcs"], "function") if cfg["funcs"] is not None else None
    rep = bias_audit(algos, _ints(cfg["dims"], "dimension"),
                     runs=int(plan_fields.get("runs", cfg["runs"])),
                     seed=int(plan_fields.get("seed", cfg["seed"])),
                     budget_multiplier=int(plan_fields.get("budget_multiplier",
                                                           cfg["budget_multiplier"])),
                     funcs=funcs, parallelism=int(cfg["parallelism"]), out=cfg["out"],
                     alpha=float(cfg["alpha"]), preset=preset, params=params,
                     suite_seed=int(plan_fields.get("suite_seed", cfg["suite_seed"])),
                     stride=int(plan_fields.get("stride", cfg["stride"])))
    sys.stdout.write(rep.text())
    return 0


def cmd_report(cfg: dict) -> int:
    outputs = report(cfg["out"], float(cfg["alpha"]))
    for name, path in sorted(outputs.items()):
        print(f"{name}: {path}")
    return 0


COMMANDS = {"list": cmd_list, "run": cmd_run, "tune": cmd_tune, "stats": cmd_stats,
            "bias-audit": cmd_bias_audit, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"metalab {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
