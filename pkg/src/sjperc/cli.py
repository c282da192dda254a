"""Command-line front door: config parsing, experiment dispatch, CSV/JSON output.

Exit codes: 0 success / checks passed, 1 a verification failed, 2 bad
configuration.  Identical argv (plus config file) produce byte-identical
outputs, independent of --threads.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import fpp, lemma, mc, shape, web
from .env import ConfigurationError, DistributionSpec, EnvironmentConfig, sample_environment

FLOOR_NOTE = (
    "Directions --x/--y are real; at size n the passage point is "
    "(floor(n*x), floor(n*y))."
)


def _build_config(opts) -> EnvironmentConfig:
    xi = DistributionSpec.parse(opts["xi"])
    eta = DistributionSpec.parse(opts["eta"])
    mode = opts["mode"]
    if mode is None:
        mode = "int" if (xi.is_integer_valued() and eta.is_integer_valued()) else "real"
    if mode not in ("int", "real"):
        raise ConfigurationError(f"--mode must be int or real, got {mode!r}")
    return EnvironmentConfig(
        p_bern=opts["p"],
        xi_dist=xi,
        eta_dist=eta,
        arithmetic_mode="integer" if mode == "int" else "real",
    )


def _resolve(args, defaults: dict) -> dict:
    """defaults < JSON config file < explicit flags (flag names match keys)."""
    merged = dict(defaults)
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            with open(config_path) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config file: {exc}") from None
        unknown = set(loaded) - set(defaults)
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        merged.update(loaded)
    for key in defaults:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            merged[key] = value
    return merged


def _emit(result: mc.ExperimentResult, opts):
    if opts["format"] == "csv":
        text = mc.records_csv_text(result.records)
    else:
        text = mc.summary_json_text(result.summary)
    if opts["out"]:
        with open(opts["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_ENV_DEFAULTS = {"p": 0.5, "xi": "const:1", "eta": "const:1", "mode": None}
_RUN_DEFAULTS = {"replicas": 100, "seed": 0, "threads": 1, "out": None, "format": "json"}


def _add_env_flags(parser):
    parser.add_argument("--p", type=float, help="switch probability P(B=1)")
    parser.add_argument("--xi", help="horizontal candidate law, e.g. bernoulli:0.5")
    parser.add_argument("--eta", help="vertical candidate law, e.g. exp:1.0")
    parser.add_argument("--mode", choices=["int", "real"], help="arithmetic mode")
    parser.add_argument("--config", help="JSON file with flag values (flags win)")


def _add_run_flags(parser):
    parser.add_argument("--replicas", type=int, help="replicas per size")
    parser.add_argument("--seed", type=int, help="base seed; replica r uses seed+r")
    parser.add_argument("--threads", type=int, help="worker processes (results identical)")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"], help="records CSV or summary JSON")


def _parse_sizes(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    try:
        return tuple(int(tok) for tok in str(text).split(","))
    except ValueError:
        raise ConfigurationError(f"bad --sizes list: {text!r}") from None


def _cmd_passage(args) -> int:
    defaults = {**_ENV_DEFAULTS, "m": 10, "n": 10, "seed": 0, "geodesic": False}
    opts = _resolve(args, defaults)
    config = _build_config(opts)
    m, n = opts["m"], opts["n"]
    env = sample_environment(config, opts["seed"], (m, n))
    for label, variant in (("F", fpp.Variant.FULL), ("F_H", fpp.Variant.H), ("F_V", fpp.Variant.V)):
        grid = fpp.first_passage_grid(env, variant, m, n, "rolling")
        print(f"{label}={grid.final}")
    if opts["geodesic"]:
        path = fpp.geodesic(env, fpp.Variant.FULL, m, n)
        steps = "".join(
            "R" if v2[0] > v1[0] else "U" for v1, v2 in zip(path.vertices, path.vertices[1:])
        )
        print(f"geodesic={steps}")
        print(f"geodesic_weight={path.total}")
    return 0


def _cmd_oracle_test(args) -> int:
    defaults = {**_ENV_DEFAULTS, "xi": "bernoulli:0.7", "eta": "geom:0.4", "seeds": 50, "seed": 0}
    opts = _resolve(args, defaults)
    config = _build_config(opts)
    if config.arithmetic_mode != "integer":
        raise ConfigurationError("oracle-test runs in integer mode")
    failures = 0
    checked = 0
    for k in range(opts["seeds"]):
        seed = opts["seed"] + k
        rng = random.Random(seed)
        m = rng.randint(0, 7)
        n = rng.randint(0, 7)
        env = sample_environment(config, seed, (m, n))
        for variant in (fpp.Variant.FULL, fpp.Variant.H, fpp.Variant.V):
            got = fpp.first_passage_grid(env, variant, m, n, "rolling").final
            want = fpp.brute_force_value(env, variant, m, n)
            checked += 1
            if got != want:
                failures += 1
                print(f"MISMATCH seed={seed} ({m},{n}) {variant.name}: dp={got} brute={want}",
                      file=sys.stderr)
    print(f"oracle-test: {checked} comparisons, {failures} failures")
    return 1 if failures else 0


def _cmd_lemma_check(args) -> int:
    defaults = {**_ENV_DEFAULTS, "xi": "bernoulli:0.5", "eta": "bernoulli:0.5",
                "m": 100, "n": 100, "seeds": 10, "seed": 0}
    opts = _resolve(args, defaults)
    config = _build_config(opts)
    worst = 0.0
    violations = 0
    for k in range(opts["seeds"]):
        env = sample_environment(config, opts["seed"] + k, (opts["m"], opts["n"]))
        report = lemma.verify_identity(lemma.negate_boundary(env), opts["m"], opts["n"])
        worst = max(worst, report.max_abs_discrepancy)
        violations += report.violations
    print(f"lemma-check: {opts['seeds']} environments, max discrepancy {worst}, "
          f"{violations} violations")
    return 1 if violations else 0


def _cmd_shape(args) -> int:
    defaults = {"p": 0.5, "x": 1.0, "y": 1.0}
    opts = _resolve(args, defaults)
    p, x, y = opts["p"], opts["x"], opts["y"]
    print(f"f={shape.limit_shape_bernoulli(p, x, y)}")
    if x > 0 and y > 0 and p * x > (1 - p) * y:
        coeffs = shape.coefficients(p, x, y)
        print(f"tau={coeffs.tau}")
        print(f"chi={coeffs.chi}")
        print(f"rho={coeffs.rho}")
    else:
        print("coefficients undefined at or below the critical line")
    return 0


def _experiment_cmd(kind, extra_defaults):
    def run(args) -> int:
        defaults = {**_ENV_DEFAULTS, **_RUN_DEFAULTS, **extra_defaults}
        opts = _resolve(args, defaults)
        config = _build_config(opts)
        if "sizes" in opts:
            sizes = _parse_sizes(opts["sizes"])
            x, y = opts["x"], opts["y"]
        else:
            sizes = (1,)
            x, y = float(opts["m"]), float(opts["n"])
        spec = mc.ExperimentSpec(
            kind=kind, config=config, x=x, y=y, sizes=sizes,
            replicas=opts["replicas"], base_seed=opts["seed"],
        )
        result = mc.run_experiment(spec, threads=opts["threads"])
        _emit(result, opts)
        return 0

    return run


def _cmd_web(args) -> int:
    defaults = {**_ENV_DEFAULTS, "m": 10, "n": 10, "seed": 0, "out": None}
    opts = _resolve(args, defaults)
    config = _build_config(opts)
    env = sample_environment(config, opts["seed"], (opts["m"], opts["n"]))
    graph = web.build_web(env)
    if opts["out"]:
        web.export_web(graph, opts["out"])
    else:
        web.export_web(graph, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sjperc",
        description="Directed first-passage percolation with a Bernoulli switch field.",
        epilog=FLOOR_NOTE,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, helptext, func):
        p = sub.add_parser(name, help=helptext, description=helptext, epilog=FLOOR_NOTE)
        p.set_defaults(func=func)
        return p

    p = add("passage", "One DP run: print F, F_H, F_V (and optionally a geodesic).",
            _cmd_passage)
    _add_env_flags(p)
    p.add_argument("--m", type=int, help="target first coordinate")
    p.add_argument("--n", type=int, help="target second coordinate")
    p.add_argument("--seed", type=int, help="environment seed")
    p.add_argument("--geodesic", action="store_true", default=None,
                   help="also print a minimizing path")

    p = add("oracle-test", "Small-grid DP vs exhaustive path enumeration.", _cmd_oracle_test)
    _add_env_flags(p)
    p.add_argument("--seeds", type=int, help="number of seeded environments")
    p.add_argument("--seed", type=int, help="base seed")

    p = add("lemma-check", "Boundary-flip identity sweep (negated y-axis eta).",
            _cmd_lemma_check)
    _add_env_flags(p)
    p.add_argument("--m", type=int, help="grid width")
    p.add_argument("--n", type=int, help="grid height")
    p.add_argument("--seeds", type=int, help="number of seeded environments")
    p.add_argument("--seed", type=int, help="base seed")

    p = add("shape", "Closed-form limit shape and fluctuation coefficients.", _cmd_shape)
    p.add_argument("--p", type=float, help="Bernoulli parameter of horizontal weights")
    p.add_argument("--x", type=float, help="direction, first coordinate")
    p.add_argument("--y", type=float, help="direction, second coordinate")
    p.add_argument("--config", help="JSON file with flag values (flags win)")

    for name, kind, extra, helptext in (
        ("fluct", "fluctuation", {"x": 4.0, "y": 1.0, "sizes": "1000"},
         "Scaled-fluctuation experiment against the TW-GUE reference."),
        ("gap", "gap", {"x": 4.0, "y": 1.0, "sizes": "250,500,1000"},
         "Prelimit gap F - max(F_H, F_V) at several sizes."),
        ("entry-scaling", "entry_scaling", {"x": 4.0, "y": 1.0, "sizes": "250,500,1000"},
         "Entry-point quantiles per size."),
    ):
        p = add(name, helptext, _experiment_cmd(kind, extra))
        _add_env_flags(p)
        _add_run_flags(p)
        p.add_argument("--x", type=float, help="direction, first coordinate")
        p.add_argument("--y", type=float, help="direction, second coordinate")
        p.add_argument("--sizes", help="comma list of sizes n")

    p = add("de-law", "Departure vs entry point: equality in law at one endpoint.",
            _experiment_cmd("de_law", {"m": 60, "n": 40, "replicas": 500}))
    _add_env_flags(p)
    _add_run_flags(p)
    p.add_argument("--m", type=int, help="endpoint first coordinate")
    p.add_argument("--n", type=int, help="endpoint second coordinate")

    p = add("web", "Build the random walk web and export its CSV edge list.", _cmd_web)
    _add_env_flags(p)
    p.add_argument("--m", type=int, help="grid width")
    p.add_argument("--n", type=int, help="grid height")
    p.add_argument("--seed", type=int, help="environment seed")
    p.add_argument("--out", help="destination CSV path (default: stdout)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


dispatch = main

if __name__ == "__main__":
    raise SystemExit(main())
