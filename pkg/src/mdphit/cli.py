"""``mdp`` command-line entry point.

Exit status: 0 on success, 2 on configuration errors, 3 on I/O errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from .config import (
    COMMANDS,
    ConfigError,
    build_distribution,
    floats,
    manifest_text,
    number,
    parse_overrides,
    read_config_file,
    resolve,
)
from .distributions import ConvergenceFailure, check_assumptions, legendre
from .montecarlo import (
    ExperimentConfig,
    Tail,
    clt_check,
    lln_check,
    run_experiment,
    scaled_deviations,
)
from .output import fmt, rate_csv, rate_svg, table_csv
from .rate_functions import (
    PiecewisePath,
    endpoint_infimum,
    eval_I,
    eval_J,
    verify_endpoint_infimum,
)

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mdp", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="INI file with a [command] section")
    p.add_argument("--preset", help="compiled-in rate-curve preset (example1, example2)")
    p.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--overrides", nargs="+", default=[], metavar="KEY=VALUE")
    p.add_argument("--out", default="mdp_out", help="output directory")
    p.add_argument("--plot", action="store_true", help="write rate_curve.svg")
    p.add_argument("--raw", action="store_true", help="write deviations.csv")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--endpoint", nargs=2, type=float, metavar=("A", "T"))
    return p


def _experiment_config(v) -> ExperimentConfig:
    dist = build_distribution(v)
    n = number(v, "n", int)
    replications = number(v, "replications", int)
    an_exp = number(v, "an_exponent")
    if "t_grid" in v and "t_max" in v:
        raise ConfigError("give either t_grid or t_max, not both")
    if "t_grid" in v:
        grid = floats(v["t_grid"])
    elif "t_max" in v:
        t_max, points = number(v, "t_max"), number(v, "t_points", int)
        grid = [t_max * k / points for k in range(1, points + 1)]
    else:
        grid = None
    try:
        return ExperimentConfig(
            dist=dist, n=n, r=number(v, "r"), an_exponent=an_exp, replications=replications,
            t_grid=grid, horizon=number(v, "horizon") if "horizon" in v else None,
            master_seed=number(v, "seed", int), tail=Tail(v["tail"].lower()),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_rate_curve(v, args, out: Path) -> dict:
    cfg = _experiment_config(v)
    # pin the resolved grid so the manifest reproduces it exactly
    v = {k: x for k, x in v.items() if k not in ("t_max", "t_points")}
    v["t_grid"] = ",".join(fmt(t) for t in cfg.t_grid)
    start = time.perf_counter()
    deviations = scaled_deviations(cfg, workers=args.threads)
    curve = run_experiment(cfg, deviations=deviations)
    wall = time.perf_counter() - start
    files = {"manifest.txt": manifest_text("rate-curve", v)}
    if curve.upper is not None:
        files["rate_curve.csv"] = rate_csv(curve.upper)
    if curve.lower is not None:
        files["rate_curve_lower.csv" if curve.upper is not None else "rate_curve.csv"] = rate_csv(curve.lower)
    if args.plot:
        title = f"{v['dist']} increments, n={cfg.n}, r={fmt(cfg.r)}, M={cfg.replications}"
        files["rate_curve.svg"] = rate_svg(curve.rows, title)
    if args.raw:
        files["deviations.csv"] = table_csv(["d"], ([x] for x in deviations))
    finite = sum(math.isfinite(r.empirical_rate) for r in curve.rows)
    print(f"rate-curve: dist={v['dist']} n={cfg.n} r={fmt(cfg.r)} M={cfg.replications} "
          f"rows={len(curve.rows)} finite={finite} censored={curve.meta['censored']} "
          f"wall={wall:.2f}s -> {out / 'rate_curve.csv'}")
    return files


def cmd_clt_check(v, args, out: Path) -> dict:
    dist = build_distribution(v)
    n, r = number(v, "n", int), number(v, "r")
    if not 0 < r < dist.mu:
        raise ConfigError(f"r={r} outside (0, mu={dist.mu})")
    res = clt_check(dist, n, r, number(v, "replications", int), number(v, "seed", int),
                    horizon=number(v, "horizon") if "horizon" in v else None, workers=args.threads)
    text = "".join(f"{k}: {fmt(getattr(res, k))}\n"
                   for k in ("sample_var", "target_var", "ks_distance", "censored"))
    sys.stdout.write(text)
    return {"manifest.txt": manifest_text("clt-check", v), "clt_check.txt": text}


def cmd_lln_check(v, args, out: Path) -> dict:
    dist = build_distribution(v)
    n_list = [int(x) for x in floats(v["n_list"])]
    try:
        res = lln_check(dist, number(v, "r"), n_list, number(v, "replications", int),
                        number(v, "seed", int), workers=args.threads)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    text = table_csv(["n", "median_abs_dev"], res)
    sys.stdout.write(text)
    return {"manifest.txt": manifest_text("lln-check", v), "lln_check.csv": text}


def cmd_legendre(v, args, out: Path) -> dict:
    dist = build_distribution(v)
    method = v["method"]
    if method not in ("auto", "numeric", "closed"):
        raise ConfigError(f"unknown method {method!r}")
    try:
        rows = [(x, legendre(dist, x, method)) for x in floats(v["x"])]
    except NotImplementedError as exc:
        raise ConfigError(str(exc)) from exc
    text = table_csv(["x", "legendre"], rows)
    sys.stdout.write(text)
    return {"manifest.txt": manifest_text("legendre", v), "legendre.csv": text}


def read_path_file(path: str) -> PiecewisePath:
    knots = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line or line.lower().startswith("t,"):
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise ConfigError(f"{path}:{lineno}: expected 't, value'")
            try:
                knots.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    try:
        return PiecewisePath.from_knots(knots) if knots else PiecewisePath([], [])
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def cmd_path_rate(v, args, out: Path) -> dict:
    dist = build_distribution(v)
    sigma2 = number(v, "sigma2") if "sigma2" in v else dist.sigma2
    if not sigma2 > 0:
        raise ConfigError(f"sigma2 must be positive, got {sigma2}")
    if args.endpoint is not None:
        v = dict(v, endpoint_a=fmt(args.endpoint[0]), endpoint_T=fmt(args.endpoint[1]))
    lines = []
    if "path" in v:
        path = read_path_file(v["path"])
        try:
            j = eval_J(path, dist)
        except ConvergenceFailure as exc:
            raise ConfigError(str(exc)) from exc
        lines += [f"I_T: {fmt(eval_I(path, sigma2))}", f"J_T: {fmt(j)}"]
    if "endpoint_a" in v or "endpoint_T" in v:
        a, T = number(v, "endpoint_a"), number(v, "endpoint_T")
        segments = number(v, "segments", int)
        if not T > 0 or segments < 1:
            raise ConfigError("endpoint needs T > 0 and segments >= 1")
        lines += [f"endpoint_infimum: {fmt(endpoint_infimum(a, T, sigma2))}",
                  f"verify_endpoint_infimum: {fmt(verify_endpoint_infimum(a, T, sigma2, segments))}"]
    if not lines:
        raise ConfigError("path-rate needs path=FILE or --endpoint A T")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    return {"manifest.txt": manifest_text("path-rate", v), "path_rate.txt": text}


def cmd_validate(v, args, out: Path) -> dict:
    report = check_assumptions(build_distribution(v))
    text = "\n".join(report.lines()) + "\n"
    sys.stdout.write(text)
    return {"manifest.txt": manifest_text("validate", v)}


HANDLERS = {
    "rate-curve": cmd_rate_curve,
    "clt-check": cmd_clt_check,
    "lln-check": cmd_lln_check,
    "legendre": cmd_legendre,
    "path-rate": cmd_path_rate,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    try:
        file_values = read_config_file(args.config, args.command) if args.config else {}
        overrides = parse_overrides(args.overrides + args.sets)
        values = resolve(args.command, file_values, overrides, preset=args.preset, seed=args.seed)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        with np.errstate(all="ignore"):
            files = HANDLERS[args.command](values, args, out)
    except ConfigError as exc:
        print(f"mdp: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        if args.config and exc.filename == args.config:
            print(f"mdp: config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"mdp: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"mdp: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (out / name).write_text(text, encoding="utf-8")
    except OSError as exc:
        print(f"mdp: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
