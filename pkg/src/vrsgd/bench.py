"""Experiment harness: flat-file configs, CSV traces, summaries, and a CLI."""

import argparse
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .data import (
    ParseError,
    gen_synthetic,
    load_libsvm,
    normalize_rows,
    save_libsvm,
)
from .diagnostics import ridge_closed_form, theoretical_rate_sc
from .model import (
    elastic_net,
    l1_reg,
    l2_reg,
    make_objective,
    no_reg,
    objective_value,
)
from .solvers import RunRecord, SolverConfig, run_solver

__all__ = [
    "ExperimentConfig",
    "parse_experiment_config",
    "load_experiment_config",
    "run_experiment",
    "emit_csv",
    "parse_trace_csv",
    "passes_to_tolerance",
    "seconds_to_tolerance",
    "cli_main",
    "main",
]

_FSTAR_MODES = ("none", "ridge-oracle", "best-of-long-run")


@dataclass(frozen=True)
class ExperimentConfig:
    """A dataset, an objective, and a list of labelled solver entries."""

    dataset: str
    loss: str = "logistic"
    lam1: float = 0.0
    lam2: float = 0.0
    fold_l2: bool = False
    fstar_mode: str = "none"
    out_dir: str = "results"
    seeds: int = 1
    tolerance: float = 1e-8
    normalize: bool = False
    solvers: tuple = ()

    def __post_init__(self):
        if not self.solvers:
            raise ValueError("config needs at least one solver entry")
        if self.seeds < 1:
            raise ValueError("seeds (repetitions) must be >= 1")
        if self.fstar_mode not in _FSTAR_MODES:
            raise ValueError(f"fstar mode must be one of {_FSTAR_MODES}")


_TOP_FIELDS = {
    "dataset": str,
    "loss": str,
    "lam1": float,
    "lam2": float,
    "fold_l2": bool,
    "fstar": str,
    "out": str,
    "seeds": int,
    "tolerance": float,
    "normalize": bool,
}
_SOLVER_FIELDS = {
    "label": str,
    "algorithm": str,
    "epochs": int,
    "m": int,
    "eta0": float,
    "alpha": float,
    "lr_mode": str,
    "snapshot": str,
    "update_rule": str,
    "batch": int,
    "rho": float,
    "m1": int,
    "w1": float,
    "momentum_option": str,
    "method": str,
    "variant": str,
    "lazy": str,
}


def _parse_bool(text):
    low = text.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _convert(caster, text, key):
    try:
        if caster is bool:
            return _parse_bool(text)
        return caster(text)
    except ValueError:
        raise ValueError(f"bad value for {key}: {text!r}") from None


def parse_experiment_config(text):
    """Parse the flat `key = value` grammar (see README for the full list).

    Solver entries use `solver.<i>.<key> = value` lines; `<i>` indexes the
    entry. Blank lines and `#` comments are ignored; unknown keys are errors.
    """
    top = {}
    solver_raw = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key.startswith("solver."):
            parts = key.split(".")
            if len(parts) != 3 or not parts[1].isdigit():
                raise ValueError(f"config line {lineno}: solver keys look "
                                 f"like solver.<i>.<key>")
            idx, skey = int(parts[1]), parts[2]
            if skey not in _SOLVER_FIELDS:
                raise ValueError(f"config line {lineno}: unknown solver key "
                                 f"{skey!r}")
            solver_raw.setdefault(idx, {})[skey] = _convert(
                _SOLVER_FIELDS[skey], value, key)
        else:
            if key not in _TOP_FIELDS:
                raise ValueError(f"config line {lineno}: unknown key {key!r}")
            top[key] = _convert(_TOP_FIELDS[key], value, key)
    if "dataset" not in top:
        raise ValueError("config is missing the dataset path")
    solvers = []
    for idx in sorted(solver_raw):
        entry = dict(solver_raw[idx])
        label = entry.pop("label", None)
        cfg = SolverConfig(**entry)
        solvers.append((label or f"{cfg.algorithm}-{idx}", cfg))
    kwargs = {
        "dataset": top["dataset"],
        "loss": top.get("loss", "logistic"),
        "lam1": top.get("lam1", 0.0),
        "lam2": top.get("lam2", 0.0),
        "fold_l2": top.get("fold_l2", False),
        "fstar_mode": top.get("fstar", "none"),
        "out_dir": top.get("out", "results"),
        "seeds": top.get("seeds", 1),
        "tolerance": top.get("tolerance", 1e-8),
        "normalize": top.get("normalize", False),
        "solvers": tuple(solvers),
    }
    return ExperimentConfig(**kwargs)


def load_experiment_config(path):
    return parse_experiment_config(Path(path).read_text())


def _build_regularizer(lam1, lam2):
    if lam1 > 0.0 and lam2 > 0.0:
        return elastic_net(lam1, lam2)
    if lam1 > 0.0:
        return l2_reg(lam1)
    if lam2 > 0.0:
        return l1_reg(lam2)
    return no_reg()


def _resolve_fstar(cfg, obj):
    if cfg.fstar_mode != "ridge-oracle":
        return None
    if cfg.loss != "squared" or cfg.lam2 > 0.0:
        raise ValueError("the ridge-oracle F* mode needs squared loss with "
                         "an l2-only regularizer")
    xstar = ridge_closed_form(obj.data, cfg.lam1)
    return objective_value(obj, xstar)


def _set_gaps(record, fstar):
    record.gap = [o - fstar for o in record.objective]


def _record_min(record, obj):
    best = min(record.objective) if record.objective else math.inf
    if record.x_final is not None:
        best = min(best, objective_value(obj, record.x_final))
    return best


def passes_to_tolerance(record, tol):
    """First effective-passes value at which the gap reaches tol, else None."""
    for p, g in zip(record.passes, record.gap):
        if not math.isnan(g) and g <= tol:
            return p
    return None


def seconds_to_tolerance(record, tol):
    """First wall-seconds value at which the gap reaches tol, else None."""
    for t, g in zip(record.seconds, record.gap):
        if not math.isnan(g) and g <= tol:
            return t
    return None


def run_experiment(cfg):
    """Run every (solver, seed) pair; write traces and a summary CSV.

    Returns a dict with the records, trace paths, summary rows, the summary
    path, and the resolved F*. With fstar_mode="best-of-long-run", F* is the
    minimum objective seen across all runs re-executed with 5x the epochs.
    """
    ds = load_libsvm(cfg.dataset)
    if cfg.normalize:
        ds = normalize_rows(ds)
    reg = _build_regularizer(cfg.lam1, cfg.lam2)
    obj = make_objective(ds, cfg.loss, reg, fold_l2=cfg.fold_l2)
    fstar = _resolve_fstar(cfg, obj)
    records = {}
    for label, scfg in cfg.solvers:
        for rep in range(cfg.seeds):
            rcfg = replace(scfg, seed=rep, fstar=fstar)
            records[(label, rep)] = run_solver(rcfg, obj)
    if cfg.fstar_mode == "best-of-long-run":
        best = math.inf
        for label, scfg in cfg.solvers:
            for rep in range(cfg.seeds):
                long_cfg = replace(scfg, seed=rep, fstar=None,
                                   epochs=5 * scfg.epochs)
                best = min(best, _record_min(run_solver(long_cfg, obj), obj))
        fstar = best
        for record in records.values():
            _set_gaps(record, fstar)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    traces = {}
    summary = []
    for (label, rep), record in records.items():
        path = out / f"{label}-seed{rep}.csv"
        emit_csv(record, path)
        traces[(label, rep)] = path
        summary.append({
            "solver": label,
            "seed": rep,
            "passes_to_tol": passes_to_tolerance(record, cfg.tolerance),
            "seconds_to_tol": seconds_to_tolerance(record, cfg.tolerance),
            "final_objective": record.objective[-1]
            if record.objective else math.nan,
            "final_gap": record.gap[-1] if record.gap else math.nan,
            "diverged": record.diverged,
        })
    summary_path = out / "summary.csv"
    with open(summary_path, "w") as fh:
        fh.write("solver,seed,passes_to_tol,seconds_to_tol,"
                 "final_objective,final_gap,diverged\n")
        for row in summary:
            fh.write("%s,%d,%s,%s,%s,%s,%d\n" % (
                row["solver"], row["seed"],
                _fmt_opt(row["passes_to_tol"]),
                _fmt_opt(row["seconds_to_tol"]),
                _fmt_num(row["final_objective"]),
                _fmt_num(row["final_gap"]),
                int(row["diverged"])))
    return {"records": records, "traces": traces, "summary": summary,
            "summary_path": summary_path, "fstar": fstar}


def _fmt_num(v):
    return "" if (isinstance(v, float) and math.isnan(v)) else "%.17g" % v


def _fmt_opt(v):
    return "" if v is None else "%.17g" % v


def emit_csv(record, path):
    """Write one trace: epoch,effective_passes,wall_seconds,objective,gap.

    Numbers carry 17 significant digits so a parse round-trips exactly; an
    unknown gap (no F*) leaves the column empty.
    """
    with open(path, "w") as fh:
        fh.write("epoch,effective_passes,wall_seconds,objective,gap\n")
        for i in range(len(record.epochs)):
            gap = record.gap[i]
            fh.write("%d,%.17g,%.17g,%.17g,%s\n" % (
                record.epochs[i], record.passes[i], record.seconds[i],
                record.objective[i], "" if math.isnan(gap) else "%.17g" % gap))


def parse_trace_csv(path):
    """Read an emitted trace back into a RunRecord (empty gap -> NaN)."""
    record = RunRecord(algorithm="trace", seed=-1)
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "epoch,effective_passes,wall_seconds,objective,gap":
            raise ValueError(f"unrecognized trace header in {path}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 5:
                raise ValueError(f"malformed trace row in {path}: {line!r}")
            record.epochs.append(int(parts[0]))
            record.passes.append(float(parts[1]))
            record.seconds.append(float(parts[2]))
            record.objective.append(float(parts[3]))
            record.gap.append(float(parts[4]) if parts[4] else math.nan)
    return record


def _cmd_run(args):
    cfg = load_experiment_config(args.config)
    result = run_experiment(cfg)
    print(f"wrote {len(result['traces'])} trace files and "
          f"{result['summary_path']}")
    for row in result["summary"]:
        reached = ("passes_to_tol=%s" % _fmt_opt(row["passes_to_tol"])
                   if row["passes_to_tol"] is not None else "tol not reached")
        state = " DIVERGED" if row["diverged"] else ""
        print(f"  {row['solver']} seed={row['seed']}: "
              f"final_objective={_fmt_num(row['final_objective'])} "
              f"{reached}{state}")
    return 0


def _cmd_gen_synth(args):
    ds = gen_synthetic(args.kind, args.n, args.d, seed=args.seed,
                       density=args.density)
    save_libsvm(ds, args.out)
    print(f"wrote {args.n} x {args.d} {args.kind} instance to {args.out}")
    return 0


def _cmd_rate(args):
    report = theoretical_rate_sc(args.L, args.mu, args.eta, args.m, args.c,
                                 option=args.option)
    print("rho = %.17g" % report.rho)
    print("convergent: %s" % ("yes" if report.convergent else "no"))
    return 0


def _cmd_verify(_args):
    from .verify import run_verify

    return run_verify()


def cli_main(argv=None):
    """Entry point; returns a process exit code instead of raising."""
    parser = argparse.ArgumentParser(
        prog="vrsgd-bench",
        description="Run solver experiments, generate synthetic instances, "
                    "check the install, and evaluate convergence rates.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run the experiment in a config file")
    p_run.add_argument("config")
    sub.add_parser("verify", help="run the built-in self checks")
    p_gen = sub.add_parser("gen-synth", help="write a synthetic instance")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--d", type=int, required=True)
    p_gen.add_argument("--kind", default="ridge",
                       choices=["ridge", "logistic", "sigmoid"])
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--density", type=float, default=1.0)
    p_rate = sub.add_parser("rate", help="evaluate the geometric rate bound")
    p_rate.add_argument("--L", type=float, required=True)
    p_rate.add_argument("--mu", type=float, required=True)
    p_rate.add_argument("--eta", type=float, required=True)
    p_rate.add_argument("--m", type=int, required=True)
    p_rate.add_argument("--c", type=float, required=True)
    p_rate.add_argument("--option", default="II", choices=["I", "II"])
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"run": _cmd_run, "gen-synth": _cmd_gen_synth,
                "rate": _cmd_rate, "verify": _cmd_verify}
    try:
        return handlers[args.command](args)
    except (ValueError, OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
