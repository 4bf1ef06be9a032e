"""Command-line front end: train, eval, predict, ablate-step, boost-diagnose, trace-node, synth.

Every command honors --seed for bit-level reproducibility.  Exit codes:
0 success, 2 configuration error, 3 data error, 4 model/data dimension
mismatch, 5 per-stage bound violation (boost-diagnose only).  The HRT_LOG
environment variable ({error|info|debug}, default error) controls
verbosity; debug additionally prints tracebacks.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import asdict

import numpy as np

from .boost import BoostConfig, BoostModel, fit_boost, gamma_bound_check, predict_boost_batch
from .datasets import (
    Dataset,
    StandardizeTransform,
    gen_synthetic,
    load_features,
    parse_dataset_spec,
    split_train_test,
    standardize,
    write_csv,
)
from .errors import DimensionMismatch, HingeTreeError
from .metrics import boost_inference_flops, complexity_report, evaluate, hrt_inference_flops
from .serialize import load_model, save_model
from .split import SplitConfig, select_split
from .tree import TreeConfig, build_tree, derive_seed, predict_batch

log = logging.getLogger("hingetree")


class CliConfigError(Exception):
    """Bad flag or configuration-file value; the message names the offender."""


# Command defaults; single-tree values follow the 1-D benchmark settings.
HRT_DEFAULTS = {
    "max_depth": 6,
    "ridge": 0.001,
    "step": 0.01,
    "tau": 0.03,
    "n_min": 5,
    "t_max": 100,
    "epsilon": 0.03,
    "min_subset": 2,
}
BOOST_DEFAULTS = {
    **HRT_DEFAULTS,
    "max_depth": 3,
    "step": "auto",
    "tau": 0.0,
    "stages": 50,
    "eta": 0.1,
}

_NUM = {"type": "number"}
_INT = {"type": "integer"}
_EVAL = {
    "type": "object",
    "required": ["rmse", "mae", "r2", "n", "r2_defined"],
    "properties": {
        "rmse": _NUM,
        "mae": _NUM,
        "r2": {"type": ["number", "null"]},
        "n": _INT,
        "r2_defined": {"type": "boolean"},
    },
}
_FLOPS = {
    "type": "object",
    "required": ["mode", "inference_flops_per_sample", "total_parameters"],
    "properties": {
        "mode": {"enum": ["two", "diff"]},
        "inference_flops_per_sample": _NUM,
        "total_parameters": _INT,
    },
}

# Published shapes for the --json artifacts, keyed by command name.
SCHEMAS = {
    "train": {
        "type": "object",
        "required": ["command", "dataset", "model_kind", "config", "seed",
                     "train_eval", "complexity", "flops", "fit_time_s", "model_path"],
        "properties": {
            "command": {"const": "train"},
            "model_kind": {"enum": ["hrt", "boost"]},
            "train_eval": _EVAL,
            "flops": _FLOPS,
            "fit_time_s": _NUM,
        },
    },
    "eval": {
        "type": "object",
        "required": ["command", "model_path", "dataset", "eval", "complexity", "flops"],
        "properties": {
            "command": {"const": "eval"},
            "eval": _EVAL,
            "flops": _FLOPS,
        },
    },
    "ablate-step": {
        "type": "object",
        "required": ["command", "dataset", "repeats", "train_fraction", "rows"],
        "properties": {
            "command": {"const": "ablate-step"},
            "repeats": _INT,
            "rows": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["mu", "rmse", "leaves", "avg_iters", "fit_time_s",
                                 "fallbacks", "splits", "fallback_rate_pct"],
                    "properties": {
                        "mu": {"type": ["number", "string"]},
                        "rmse": _NUM,
                        "leaves": _NUM,
                        "avg_iters": _NUM,
                        "fit_time_s": _NUM,
                        "fallbacks": _NUM,
                        "splits": _NUM,
                        "fallback_rate_pct": _NUM,
                    },
                },
            },
        },
    },
    "boost-diagnose": {
        "type": "object",
        "required": ["command", "model_path", "stages", "all_ok"],
        "properties": {
            "command": {"const": "boost-diagnose"},
            "all_ok": {"type": "boolean"},
            "stages": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["stage", "gamma", "loss", "bound_rhs", "ok"],
                    "properties": {
                        "stage": _INT,
                        "gamma": _NUM,
                        "loss": _NUM,
                        "bound_rhs": _NUM,
                        "ok": {"type": "boolean"},
                    },
                },
            },
        },
    },
    "trace-node": {
        "type": "object",
        "required": ["command", "rows"],
        "properties": {
            "command": {"const": "trace-node"},
            "rows": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["iteration", "objective", "s1_size", "s2_size"],
                },
            },
        },
    },
}


def _setup_logging() -> None:
    level = os.environ.get("HRT_LOG", "error").lower()
    chosen = {"error": logging.ERROR, "info": logging.INFO,
              "debug": logging.DEBUG}.get(level, logging.ERROR)
    logging.basicConfig(level=chosen, format="%(levelname)s %(name)s: %(message)s")
    log.setLevel(chosen)


def _debug_mode() -> bool:
    return os.environ.get("HRT_LOG", "").lower() == "debug"


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliConfigError(f"--config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise CliConfigError(f"--config {path}: expected a JSON object")
    return doc


def _resolve(args, file_cfg: dict, key: str, defaults: dict):
    """Flag value if given, else config-file value, else command default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in file_cfg:
        return file_cfg[key]
    return defaults[key]


def _parse_step(raw, flag: str = "--step"):
    if isinstance(raw, str):
        token = raw.strip().lower()
        if token == "auto":
            return "auto"
        try:
            raw = float(token)
        except ValueError:
            raise CliConfigError(f"{flag}: expected a number in (0, 1] or 'auto', "
                                 f"got {raw!r}") from None
    value = float(raw)
    if not 0.0 < value <= 1.0:
        raise CliConfigError(f"{flag}: damping factor {value} outside (0, 1]")
    return value


def _split_config(args, file_cfg, defaults, seed: int) -> SplitConfig:
    try:
        return SplitConfig(
            t_max=int(_resolve(args, file_cfg, "t_max", defaults)),
            step=_parse_step(_resolve(args, file_cfg, "step", defaults)),
            epsilon=float(_resolve(args, file_cfg, "epsilon", defaults)),
            ridge_alpha=float(_resolve(args, file_cfg, "ridge", defaults)),
            min_subset=int(_resolve(args, file_cfg, "min_subset", defaults)),
            seed=seed,
        )
    except ValueError as exc:
        raise CliConfigError(f"split configuration: {exc}") from None


def _tree_config(args, file_cfg, defaults, seed: int, diagnostics: bool) -> TreeConfig:
    try:
        return TreeConfig(
            d_max=int(_resolve(args, file_cfg, "max_depth", defaults)),
            n_min=int(_resolve(args, file_cfg, "n_min", defaults)),
            tau_rmse=float(_resolve(args, file_cfg, "tau", defaults)),
            split=_split_config(args, file_cfg, defaults, seed),
            collect_traces=diagnostics,
        )
    except ValueError as exc:
        raise CliConfigError(f"tree configuration: {exc}") from None


def _dataset(args) -> Dataset:
    target = getattr(args, "target", None)
    header = not getattr(args, "no_header", False)
    if target is None:
        target = "y"
    elif target.isdigit() or (target.startswith("-") and target[1:].isdigit()):
        target = int(target)
    return parse_dataset_spec(args.dataset, target=target, header=header)


def _apply_preprocess(model, X: np.ndarray) -> np.ndarray:
    if model.preprocess is None:
        return X
    transform = StandardizeTransform.from_dict(model.preprocess["standardize"])
    return transform.apply(X)


def _predictions(model, X: np.ndarray) -> np.ndarray:
    X = _apply_preprocess(model, X)
    if isinstance(model, BoostModel):
        return predict_boost_batch(model, X)
    return predict_batch(model, X)


def _flops_report(model, mode: str) -> dict:
    if isinstance(model, BoostModel):
        report = boost_inference_flops(model, mode)
    else:
        report = hrt_inference_flops(model, mode)
    return {
        "mode": mode,
        "inference_flops_per_sample": report.inference_flops_per_sample,
        "total_parameters": report.total_parameters,
    }


def _eval_dict(report) -> dict:
    return {
        "rmse": report.rmse,
        "mae": report.mae,
        "r2": report.r2 if report.r2_defined else None,
        "n": report.n,
        "r2_defined": report.r2_defined,
    }


def _write_json(args, payload: dict) -> None:
    path = getattr(args, "json", None)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _print_eval(label: str, report) -> None:
    r2 = _fmt(report.r2) if report.r2_defined else "undefined"
    print(f"{label}: rmse={_fmt(report.rmse)} mae={_fmt(report.mae)} "
          f"r2={r2} n={report.n}")


def _print_flops(flops: dict) -> None:
    print(f"flops/sample={_fmt(flops['inference_flops_per_sample'])} "
          f"parameters={flops['total_parameters']} (mode={flops['mode']})")


def cmd_train(args) -> int:
    file_cfg = _load_config_file(args.config)
    ds = _dataset(args)
    kind = args.kind
    seed = args.seed

    preprocess = None
    if args.standardize:
        ds, _, transform = standardize(ds)
        preprocess = {"standardize": transform.to_dict()}

    started = time.perf_counter()
    if kind == "hrt":
        config = _tree_config(args, file_cfg, HRT_DEFAULTS, seed, args.diagnostics)
        model = build_tree(ds.X, ds.y, config)
        config_doc = asdict(config)
    else:
        tree_cfg = _tree_config(args, file_cfg, BOOST_DEFAULTS, seed, args.diagnostics)
        try:
            config = BoostConfig(
                m_stages=int(_resolve(args, file_cfg, "stages", BOOST_DEFAULTS)),
                eta=float(_resolve(args, file_cfg, "eta", BOOST_DEFAULTS)),
                tree=tree_cfg,
            )
        except ValueError as exc:
            raise CliConfigError(f"boost configuration: {exc}") from None
        model = fit_boost(ds.X, ds.y, config)
        config_doc = {"m_stages": config.m_stages, "eta": config.eta,
                      "record_gamma": config.record_gamma, "tree": asdict(config.tree)}
    fit_time = time.perf_counter() - started
    model.preprocess = preprocess

    report = evaluate(_predictions(model, ds.X), ds.y)
    flops = _flops_report(model, args.flops_mode)
    complexity = complexity_report(model)
    save_model(model, args.out)

    payload = {
        "command": "train",
        "dataset": {"spec": args.dataset, "n": ds.n, "d": ds.d},
        "model_kind": kind,
        "config": config_doc,
        "seed": seed,
        "standardized": bool(args.standardize),
        "train_eval": _eval_dict(report),
        "complexity": complexity,
        "flops": flops,
        "fit_time_s": fit_time,
        "model_path": args.out,
    }
    if kind == "hrt":
        payload["stats"] = {
            "n_leaves": model.stats.n_leaves,
            "depth": model.stats.depth,
            "n_splits": model.stats.n_splits,
            "n_fallbacks": model.stats.n_fallbacks,
            "total_split_iterations": model.stats.total_split_iterations,
            "total_variant_iterations": model.stats.total_variant_iterations,
            "fallback_rate": model.stats.fallback_rate,
        }
        if args.diagnostics and model.stats.per_node_traces is not None:
            payload["per_node_traces"] = model.stats.per_node_traces
    else:
        payload["stats"] = {
            "stages_retained": len(model.learners),
            "stages_recorded": len(model.stage_retained),
            "final_loss": model.loss_trace[-1],
        }

    print(f"dataset: {args.dataset} (n={ds.n}, d={ds.d})")
    print(f"model: {kind}  seed={seed}")
    print(f"config: {json.dumps(config_doc, sort_keys=True)}")
    _print_eval("train", report)
    if kind == "hrt":
        s = model.stats
        print(f"tree: depth={s.depth} leaves={s.n_leaves} splits={s.n_splits} "
              f"fallbacks={s.n_fallbacks} fallback_rate={_fmt(100 * s.fallback_rate)}%")
    else:
        print(f"boost: stages={len(model.learners)} "
              f"total_leaves={complexity['total_leaves']} "
              f"final_loss={_fmt(model.loss_trace[-1])}")
    _print_flops(flops)
    print(f"fit_time_s={_fmt(fit_time)} (training only)")
    print(f"wrote model to {args.out}")
    _write_json(args, payload)
    return 0


def cmd_eval(args) -> int:
    model = load_model(args.model)
    ds = _dataset(args)
    if ds.d != model.d:
        raise DimensionMismatch(f"model expects {model.d} features, data has {ds.d}")
    report = evaluate(_predictions(model, ds.X), ds.y)
    flops = _flops_report(model, args.flops_mode)
    complexity = complexity_report(model)

    print(f"model: {args.model}")
    print(f"dataset: {args.dataset} (n={ds.n}, d={ds.d})")
    _print_eval("eval", report)
    print(f"complexity: {json.dumps(complexity, sort_keys=True)}")
    _print_flops(flops)
    _write_json(args, {
        "command": "eval",
        "model_path": args.model,
        "dataset": {"spec": args.dataset, "n": ds.n, "d": ds.d},
        "eval": _eval_dict(report),
        "complexity": complexity,
        "flops": flops,
    })
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    if args.target is not None:
        ds = _dataset(args)
        X, names = ds.X, ds.feature_names
    else:
        X, names = load_features(args.dataset, header=not args.no_header)
    if X.shape[1] != model.d:
        raise DimensionMismatch(f"model expects {model.d} features, data has {X.shape[1]}")
    preds = _predictions(model, X)
    lines = ["prediction"] + [f"{v:.17g}" for v in preds]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {preds.shape[0]} predictions to {args.out}")
    else:
        sys.stdout.write(text)
    _write_json(args, {"command": "predict", "n": int(preds.shape[0]),
                       "out": args.out})
    return 0


def ablate_step_rows(dataset_spec: str, mu_values, repeats: int,
                     make_config, train_fraction: float = 0.7,
                     seed: int = 0, use_standardize: bool = False,
                     target="y", header: bool = True):
    """Train `repeats` models per step-size value and average the metrics.

    ``make_config(mu, seed) -> TreeConfig`` builds the per-run settings.
    Synthetic datasets are regenerated per repeat with a derived seed so
    every step size sees the same sequence of datasets and splits; file
    datasets are re-split only.  The fallback rate is the ratio of mean
    fallbacks to mean splits, as a percentage.
    """
    ds0 = parse_dataset_spec(dataset_spec, target=target, header=header)
    synthetic = ds0.provenance.get("kind") == "synthetic"
    per_mu = {i: [] for i in range(len(mu_values))}
    for r in range(repeats):
        rep_seed = derive_seed(seed, r, 4)
        if synthetic:
            prov = ds0.provenance
            ds = gen_synthetic(prov["name"], prov["n"], prov["sigma"], rep_seed)
        else:
            ds = ds0
        train, test = split_train_test(ds, train_fraction,
                                       derive_seed(rep_seed, 0, 5))
        if use_standardize:
            train, test, _ = standardize(train, test)
        for i, mu in enumerate(mu_values):
            config = make_config(mu, derive_seed(rep_seed, 0, 6))
            started = time.perf_counter()
            model = build_tree(train.X, train.y, config)
            fit_time = time.perf_counter() - started
            report = evaluate(predict_batch(model, test.X), test.y)
            s = model.stats
            iters = (s.total_variant_iterations / s.n_splits) if s.n_splits else 0.0
            per_mu[i].append({
                "rmse": report.rmse,
                "leaves": s.n_leaves,
                "avg_iters": iters,
                "fit_time_s": fit_time,
                "fallbacks": s.n_fallbacks,
                "splits": s.n_splits,
            })
    rows = []
    for i, mu in enumerate(mu_values):
        runs = per_mu[i]
        mean = {k: float(np.mean([run[k] for run in runs]))
                for k in ("rmse", "leaves", "avg_iters", "fit_time_s",
                          "fallbacks", "splits")}
        rate = 100.0 * mean["fallbacks"] / mean["splits"] if mean["splits"] else 0.0
        rows.append({"mu": mu, **mean, "fallback_rate_pct": rate})
    return rows


def cmd_ablate_step(args) -> int:
    file_cfg = _load_config_file(args.config)
    if args.repeats < 1:
        raise CliConfigError("--repeats: must be at least 1")
    mu_values = []
    for token in args.mu_list.split(","):
        token = token.strip()
        if not token:
            continue
        mu_values.append(_parse_step(token, flag="--mu-list"))
    if not mu_values:
        raise CliConfigError("--mu-list: no step sizes given")

    def make_config(mu, run_seed):
        holder = argparse.Namespace(**{**vars(args), "step": None})
        config = _tree_config(holder, file_cfg, HRT_DEFAULTS, run_seed, False)
        from dataclasses import replace
        return replace(config, split=replace(config.split, step=mu))

    rows = ablate_step_rows(
        args.dataset, mu_values, args.repeats, make_config,
        train_fraction=args.train_fraction, seed=args.seed,
        use_standardize=args.standardize,
        target=(args.target if args.target is not None else "y"),
        header=not args.no_header,
    )
    header_cols = ("mu", "rmse", "leaves", "avg_iters", "fit_time_s",
                   "fallbacks", "splits", "fallback_rate_pct")
    print("# avg_iters sums both hinge variants per materialized split;")
    print("# fit_time_s covers training only (data generation excluded).")
    print("  ".join(f"{c:>17}" for c in header_cols))
    for row in rows:
        cells = [str(row["mu"]) if isinstance(row["mu"], str) else _fmt(row["mu"])]
        cells += [_fmt(row[c]) for c in header_cols[1:]]
        print("  ".join(f"{c:>17}" for c in cells))
    _write_json(args, {
        "command": "ablate-step",
        "dataset": args.dataset,
        "repeats": args.repeats,
        "train_fraction": args.train_fraction,
        "seed": args.seed,
        "rows": rows,
    })
    return 0


def cmd_boost_diagnose(args) -> int:
    model = load_model(args.model)
    if not isinstance(model, BoostModel):
        raise CliConfigError(f"model-path: {args.model} does not hold a boost model")
    checks = gamma_bound_check(model)
    print(f"{'stage':>6} {'gamma':>14} {'loss':>14} {'bound_rhs':>14} {'ok':>4}")
    for c in checks:
        print(f"{c.stage:>6} {_fmt(model.gamma_trace[c.stage - 1]):>14} "
              f"{_fmt(c.lhs):>14} {_fmt(c.rhs):>14} {str(c.ok):>4}")
    all_ok = all(c.ok for c in checks)
    _write_json(args, {
        "command": "boost-diagnose",
        "model_path": args.model,
        "stages": [{"stage": c.stage, "gamma": model.gamma_trace[c.stage - 1],
                    "loss": c.lhs, "bound_rhs": c.rhs, "ok": c.ok}
                   for c in checks],
        "all_ok": all_ok,
    })
    return 0 if all_ok else 5


def cmd_trace_node(args) -> int:
    file_cfg = _load_config_file(args.config)
    ds = _dataset(args)
    config = _split_config(args, file_cfg, HRT_DEFAULTS, args.seed)
    outcome = select_split(ds.X, ds.y, config)
    print("iteration,objective,mu,s1_size,s2_size")
    rows = []
    for i, value in enumerate(outcome.objective_trace):
        mu = "" if i == 0 else _fmt(outcome.mu_trace[i - 1])
        n1, n2 = outcome.partition_sizes[i]
        print(f"{i},{value:.17g},{mu},{n1},{n2}")
        rows.append({"iteration": i, "objective": value,
                     "mu": None if i == 0 else outcome.mu_trace[i - 1],
                     "s1_size": n1, "s2_size": n2})
    _write_json(args, {
        "command": "trace-node",
        "dataset": args.dataset,
        "kind": outcome.kind.value,
        "converged": outcome.converged,
        "rows": rows,
    })
    return 0


def cmd_synth(args) -> int:
    ds = parse_dataset_spec(args.dataset)
    write_csv(ds, args.out)
    print(f"wrote {ds.n} rows (d={ds.d}) to {args.out}")
    _write_json(args, {"command": "synth", "dataset": args.dataset,
                       "n": ds.n, "d": ds.d, "out": args.out})
    return 0


def _add_dataset_arg(sub):
    sub.add_argument("dataset", help="CSV path or synthetic spec "
                                     "name:n=<N>:sigma=<s>:seed=<k>")
    sub.add_argument("--target", default=None,
                     help="target column name or index for CSV data (default y)")
    sub.add_argument("--no-header", action="store_true",
                     help="CSV file has no header row")


def _add_common(sub):
    sub.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    sub.add_argument("--json", metavar="PATH", default=None,
                     help="also write a machine-readable report to PATH")
    sub.add_argument("--config", metavar="PATH", default=None,
                     help="JSON file with default hyperparameters "
                          "(flags override file values)")


def _add_hyper(sub, boost: bool):
    sub.add_argument("--max-depth", dest="max_depth", type=int, default=None)
    sub.add_argument("--ridge", dest="ridge", type=float, default=None,
                     help="ridge penalty on weights (bias excluded)")
    sub.add_argument("--step", dest="step", default=None,
                     help="damping factor in (0,1] or 'auto'")
    sub.add_argument("--tau", dest="tau", type=float, default=None,
                     help="leaf RMSE threshold")
    sub.add_argument("--n-min", dest="n_min", type=int, default=None,
                     help="minimum samples to split a node")
    sub.add_argument("--t-max", dest="t_max", type=int, default=None,
                     help="maximum split iterations")
    sub.add_argument("--epsilon", dest="epsilon", type=float, default=None,
                     help="convergence tolerance on parameter change")
    sub.add_argument("--min-subset", dest="min_subset", type=int, default=None,
                     help="minimum side size refit during a split step")
    if boost:
        sub.add_argument("--stages", dest="stages", type=int, default=None,
                         help="number of boosting stages")
        sub.add_argument("--eta", dest="eta", type=float, default=None,
                         help="learning rate in (0,1]")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hingetree",
        description="Train, evaluate and diagnose hinge regression trees "
                    "and their boosted ensembles.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    train = subs.add_parser("train", help="fit a model and write it to disk")
    _add_dataset_arg(train)
    train.add_argument("kind", choices=["hrt", "boost"], help="model kind")
    _add_hyper(train, boost=True)
    train.add_argument("--out", required=True, help="model file to write")
    train.add_argument("--diagnostics", action="store_true",
                       help="retain per-node objective traces")
    train.add_argument("--standardize", action="store_true",
                       help="standardize features (transform stored in the model)")
    train.add_argument("--flops-mode", choices=["two", "diff"], default="two")
    _add_common(train)
    train.set_defaults(func=cmd_train)

    ev = subs.add_parser("eval", help="evaluate a saved model on a dataset")
    ev.add_argument("model", help="model file")
    _add_dataset_arg(ev)
    ev.add_argument("--flops-mode", choices=["two", "diff"], default="two")
    _add_common(ev)
    ev.set_defaults(func=cmd_eval)

    pred = subs.add_parser("predict", help="emit predictions for a CSV file")
    pred.add_argument("model", help="model file")
    pred.add_argument("dataset", help="CSV of feature rows")
    pred.add_argument("--target", default=None,
                      help="target column to drop from the CSV, if present")
    pred.add_argument("--no-header", action="store_true")
    pred.add_argument("--out", default=None, help="output CSV (default stdout)")
    _add_common(pred)
    pred.set_defaults(func=cmd_predict)

    ab = subs.add_parser("ablate-step",
                         help="sweep step sizes and tabulate averaged metrics")
    _add_dataset_arg(ab)
    ab.add_argument("--mu-list", required=True,
                    help="comma-separated step sizes, e.g. 0.01,0.05,auto")
    ab.add_argument("--repeats", type=int, default=10)
    ab.add_argument("--train-fraction", dest="train_fraction", type=float,
                    default=0.7)
    _add_hyper(ab, boost=False)
    ab.add_argument("--standardize", action="store_true")
    _add_common(ab)
    ab.set_defaults(func=cmd_ablate_step)

    diag = subs.add_parser("boost-diagnose",
                           help="verify the per-stage risk bound of a saved ensemble")
    diag.add_argument("model", help="boost model file")
    _add_common(diag)
    diag.set_defaults(func=cmd_boost_diagnose)

    tr = subs.add_parser("trace-node",
                         help="optimize one node split and emit its objective trace")
    _add_dataset_arg(tr)
    _add_hyper(tr, boost=False)
    _add_common(tr)
    tr.set_defaults(func=cmd_trace_node)

    synth = subs.add_parser("synth", help="write a generated dataset to CSV")
    synth.add_argument("dataset", help="synthetic spec name:n=<N>:sigma=<s>:seed=<k>")
    synth.add_argument("--out", required=True, help="CSV file to write")
    _add_common(synth)
    synth.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliConfigError as exc:
        if _debug_mode():
            log.exception("configuration error")
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        if _debug_mode():
            log.exception("configuration error")
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DimensionMismatch as exc:
        if _debug_mode():
            log.exception("dimension mismatch")
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (HingeTreeError, OSError) as exc:
        if _debug_mode():
            log.exception("data error")
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())
