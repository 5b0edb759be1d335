"""Command-line surface binding the library modules.

Configuration comes from a JSON file validated against the shipped schema
(`zerocover/schemas/config.schema.json`); `--set key=value` flags override
top-level scalars before validation. Diagnostics go to stderr as
line-delimited JSON. Exit codes: 0 success, 2 configuration invalid,
3 runtime infeasibility.
"""

from __future__ import annotations

import argparse
import csv
import functools
import importlib.resources
import json
import logging
import math
import os
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import figures
from .covering import (
    CLASS_NAMES,
    BallClass,
    box_counting_dimension,
    build_grid_covering,
    classify_covering,
    count_occupancy,
)
from .density import CATALOG_IDS, SmoothnessOrders, _TailModel, get_model
from .errors import ConfigError, InfeasibleError, ZerocoverError
from .experiments import (
    SweepConfig,
    heatmap_1d,
    reconstruct_zero_set,
    run_sweep,
    write_sweep_csv,
)
from .geometry import zero_set_from_json
from .noncompact import build_truncation_schedule, fit_outside_min_decay
from .rates import RateSchedule, check_conditions
from .sampling import sample

__all__ = ["main"]

logger = logging.getLogger("zerocover")


class _JsonLineFormatter(logging.Formatter):
    def format(self, record):
        return json.dumps(
            {"level": record.levelname.lower(), "message": record.getMessage()},
            sort_keys=True,
        )


def _emit_error(kind: str, message: str) -> None:
    print(json.dumps({"error": message, "type": kind}, sort_keys=True), file=sys.stderr)


@functools.cache
def _schema() -> dict:
    text = importlib.resources.files("zerocover.schemas").joinpath("config.schema.json").read_text()
    return json.loads(text)


def _load_config(path: str | None, overrides: list[str]) -> dict:
    cfg: dict = {}
    if path is not None:
        try:
            with open(path) as fh:
                cfg = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}")
        if not isinstance(cfg, dict):
            raise ConfigError("config root must be a JSON object")
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        try:
            cfg[key] = json.loads(raw)
        except json.JSONDecodeError:
            cfg[key] = raw
    return cfg


def _validate(command_key: str, cfg: dict) -> None:
    schema = {"$ref": f"#/$defs/{command_key}", "$defs": _schema()["$defs"]}
    try:
        jsonschema.validate(cfg, schema)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config invalid for {command_key}: {exc.message}")


def _resolve_model(model_id: str):
    try:
        return get_model(model_id)
    except KeyError as exc:
        raise ConfigError(str(exc))


def _outdir(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommand implementations


def _cmd_sample(args, cfg) -> int:
    model = _resolve_model(cfg["model"])
    batch = sample(model, cfg["n"], cfg["seed"])
    out = _outdir(args)
    batch.to_csv(out / "samples.csv")
    logger.info("wrote %s", out / "samples.csv")
    return 0


def _cmd_cover(args, cfg) -> int:
    model = _resolve_model(cfg["model"])
    if model.support is None:
        raise InfeasibleError(f"{model.model_id}: covering needs a compact support")
    covering = build_grid_covering(model.support, cfg["r"])
    classified = classify_covering(covering, model.zero_set, cfg["eps"])
    counts = None
    if "n" in cfg:
        batch = sample(model, cfg["n"], cfg.get("seed", 0))
        counts = count_occupancy(classified, batch).per_ball_counts
    out = _outdir(args)
    classified.to_csv(out / "covering.csv", per_ball_counts=counts)
    logger.info("wrote %s", out / "covering.csv")
    return 0


def _cmd_detect(args, cfg) -> int:
    model = _resolve_model(cfg["model"])
    if model.support is None:
        raise InfeasibleError(f"{model.model_id}: detection runs on a compact support")
    n = cfg["n"]
    r = cfg["m_r"] * n ** (-cfg["eta"])
    eps = cfg["m_eps"] * n ** (-cfg["psi"])
    if 2.0 * r > eps:
        raise InfeasibleError(f"2r(n)={2 * r:.6g} > eps(n)={eps:.6g} at n={n}")
    if eps >= 1.0:
        raise InfeasibleError(f"eps(n)={eps:.6g} >= 1 at n={n}")
    batch = sample(model, n, cfg["seed"])
    covering = build_grid_covering(model.support, r)
    classified = classify_covering(covering, model.zero_set, eps)
    occupancy = count_occupancy(classified, batch)
    result = reconstruct_zero_set(classified, occupancy, model.zero_set)

    out = _outdir(args)
    classified.to_csv(out / "balls.csv", per_ball_counts=occupancy.per_ball_counts)
    with open(out / "occupancy.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["class", "n_balls", "n_nonempty", "fraction"])
        for cls in (BallClass.EPS_INSIDE, BallClass.EPS_NEIGHBORING, BallClass.EPS_OUTSIDE):
            writer.writerow([
                CLASS_NAMES[cls], int(occupancy.class_counts[cls]),
                int(occupancy.class_nonempty[cls]), repr(float(occupancy.filled_fractions[cls])),
            ])
    # +inf distances (empty estimate or no zero set) are encoded as JSON null
    def _enc(x: float):
        return None if math.isinf(x) else x

    summary = {
        "model": model.model_id, "n": n, "r": r, "eps": eps, "seed": cfg["seed"],
        "n_empty_balls": int(len(result.empty_centers)),
        "hausdorff_estimate_to_zero_set": _enc(result.hausdorff_estimate_to_zero_set),
        "hausdorff_zero_set_to_estimate": _enc(result.hausdorff_zero_set_to_estimate),
        "event_A": occupancy.event_no_empty_outside,
        "event_B": occupancy.event_all_inside_empty,
    }
    (out / "reconstruction.json").write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    if model.dim == 2:
        figures.render_detection_figure(
            classified, batch.points, result.empty_centers, model.zero_set, out / "detection.svg"
        )
    logger.info("wrote detection artifacts to %s", out)
    return 0


def _cmd_sweep(args, cfg) -> int:
    sweep_cfg = SweepConfig(
        model_id=cfg["model"], ns=cfg["ns"], m_r_values=cfg["m_r_values"],
        m_eps_values=cfg["m_eps_values"], eta=cfg["eta"], psi=cfg["psi"],
        replications=cfg["replications"], base_seed=cfg["base_seed"],
    )
    _resolve_model(sweep_cfg.model_id)
    rows = run_sweep(sweep_cfg, threads=args.threads)
    if not rows:
        raise InfeasibleError("every sweep cell violates 2r(n) <= eps(n) < 1")
    out = _outdir(args)
    write_sweep_csv(sweep_cfg, rows, out / "sweep.csv")
    figures.render_sweep_figure(sweep_cfg, rows, out / "sweep.svg")
    logger.info("wrote %s and %s", out / "sweep.csv", out / "sweep.svg")
    return 0


def _cmd_heatmap(args, cfg) -> int:
    models = [_resolve_model(mid) for mid in cfg["models"]]
    for model in models:
        if model.dim != 1:
            raise ConfigError(f"{model.model_id}: heatmaps need univariate models")
    bins = cfg["bins"]
    occupancies = {m.model_id: heatmap_1d(m, cfg["n"], bins, cfg["seed"]) for m in models}
    out = _outdir(args)
    with open(out / "heatmap.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["model", "bin", "left", "right", "occupied"])
        edges = np.linspace(-1.0, 1.0, bins + 1)
        for mid, bits in occupancies.items():
            for b in range(bins):
                writer.writerow([mid, b, repr(float(edges[b])), repr(float(edges[b + 1])), int(bits[b])])
    figures.render_heatmap_figure(occupancies, out / "heatmap.svg")
    logger.info("wrote %s and %s", out / "heatmap.csv", out / "heatmap.svg")
    return 0


def _cmd_rates_check(args, cfg) -> int:
    if "model" in cfg:
        model = _resolve_model(cfg["model"])
        if model.zero_set is None:
            raise ConfigError(f"{model.model_id}: no zero set, nothing to check")
        dim, zero_dim = model.dim, model.zero_set.dimension
        orders = model.smoothness_orders()
    else:
        missing = [k for k in ("d", "d0", "k_upper", "k_lower") if k not in cfg]
        if missing:
            raise ConfigError(f"rates check needs either a model or explicit {missing}")
        dim, zero_dim = cfg["d"], cfg["d0"]
        orders = SmoothnessOrders(cfg["k_upper"], cfg["k_lower"], 1.0, 1.0)
    try:
        schedule = RateSchedule(dim=dim, eta=cfg["eta"], psi=cfg["psi"], xi=cfg["xi"],
                                m_r=cfg["m_r"], m_eps=cfg["m_eps"])
    except ValueError as exc:
        raise ConfigError(str(exc))
    report = check_conditions(dim, zero_dim, orders, schedule)
    print(report.to_json())
    return 0


def _cmd_tail_support(args, cfg) -> int:
    model = _resolve_model(cfg["model"])
    if not isinstance(model, _TailModel):
        raise ConfigError(f"{model.model_id}: tail-support requires a tail model")
    sched = build_truncation_schedule(model, cfg["eta"], cfg["xi"], cfg.get("m_delta", 0.25))
    ns = sorted(set(int(n) for n in cfg["ns"]))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "delta", "B", "eps", "m_f"])
    for n in ns:
        writer.writerow([
            n, repr(float(sched.delta(n))), repr(sched.halfwidth(n)),
            repr(float(sched.eps(n))), repr(sched.min_density(n)),
        ])
    if len(ns) >= 3 and max(ns) / min(ns) >= 100:
        slope = fit_outside_min_decay(model, sched, ns)
        logger.info("fitted min-density decay slope %.6f (target -xi = %.6f)", slope, -cfg["xi"])
    return 0


def _cmd_boxdim(args, cfg) -> int:
    if "zero_set" in cfg:
        zero_set = zero_set_from_json(cfg["zero_set"])
    elif "model" in cfg:
        model = _resolve_model(cfg["model"])
        if model.zero_set is None:
            raise ConfigError(f"{model.model_id}: model has no zero set")
        zero_set = model.zero_set
    else:
        raise ConfigError("boxdim needs either a zero_set or a model")
    try:
        result = box_counting_dimension(zero_set, cfg["deltas"])
    except ValueError as exc:
        raise ConfigError(str(exc))
    print(json.dumps({
        "upper_estimate": result.upper_estimate,
        "lower_estimate": result.lower_estimate,
        "deltas": [float(d) for d in cfg["deltas"]],
        "counts": list(result.counts),
    }, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerocover",
        description="Detect lower-dimensional zero-density regions with shrinking ball coverings.",
        epilog=f"catalog models: {', '.join(CATALOG_IDS)}",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, writes: bool = True):
        p.add_argument("--config", "-c", help="JSON configuration file")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override a top-level config scalar")
        if writes:
            p.add_argument("--output-dir", "-o", default="out",
                           help="directory for all artifacts (default: out)")

    common(sub.add_parser("sample", help="draw a sample batch to CSV"))
    common(sub.add_parser("cover", help="build and classify a grid covering"))
    common(sub.add_parser("detect", help="one detection trial: occupancy + reconstruction"))
    sweep = sub.add_parser("sweep", help="occupancy sweep over (n, M_r, M_eps)")
    common(sweep)
    sweep.add_argument("--threads", type=int, default=max(1, os.cpu_count() or 1),
                       help="harness parallelism cap (default: machine parallelism); "
                            "results are independent of it")
    common(sub.add_parser("heatmap", help="binary 1-d bin-occupancy strips"))
    rates = sub.add_parser("rates", help="rate condition utilities")
    rates_sub = rates.add_subparsers(dest="rates_command", required=True)
    common(rates_sub.add_parser("check", help="evaluate the sufficient conditions"), writes=False)
    common(sub.add_parser("tail-support", help="truncation schedule table for a tail model"),
           writes=False)
    common(sub.add_parser("boxdim", help="box-counting dimension estimates"), writes=False)
    return parser


_DISPATCH = {
    "sample": ("sample", _cmd_sample),
    "cover": ("cover", _cmd_cover),
    "detect": ("detect", _cmd_detect),
    "sweep": ("sweep", _cmd_sweep),
    "heatmap": ("heatmap", _cmd_heatmap),
    "rates": ("rates_check", _cmd_rates_check),
    "tail-support": ("tail_support", _cmd_tail_support),
    "boxdim": ("boxdim", _cmd_boxdim),
}


def main(argv=None) -> int:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_JsonLineFormatter())
    root = logging.getLogger("zerocover")
    root.handlers = [handler]
    root.setLevel(logging.INFO)

    args = _build_parser().parse_args(argv)
    schema_key, handler_fn = _DISPATCH[args.command]
    try:
        cfg = _load_config(args.config, args.overrides)
        _validate(schema_key, cfg)
        return handler_fn(args, cfg)
    except ConfigError as exc:
        _emit_error("config", str(exc))
        return 2
    except InfeasibleError as exc:
        _emit_error("infeasible", str(exc))
        return 3
    except ZerocoverError as exc:  # pragma: no cover
        _emit_error("error", str(exc))
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
