"""Monte Carlo experiment drivers, KS statistics and the TW-GUE reference.

Replica r of an experiment uses seed base_seed + r, so runs are
reproducible and embarrassingly parallel; aggregation always folds in
replica order, making outputs byte-identical regardless of the worker
count.  Sizes follow the floor convention: at size n and direction (x,y)
the passage point is (floor(n x), floor(n y)).
"""

from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .env import ConfigurationError, EnvironmentConfig, sample_environment
from .fpp import Variant, advance_row, base_row, entry_from_trace, first_passage_grid
from .fpp import departure_point as _departure_point
from .shape import coefficients, scaled_fluctuation

TW_TABLE_ENV_VAR = "SJPERC_TW_TABLE"

EXPERIMENT_KINDS = ("shape", "gap", "fluctuation", "entry_scaling", "de_law")

RECORD_CSV_HEADER = "n,seed,F,FH,FV,E,scaled"

_QUANTILE_PROBS = (0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95)


@dataclass(frozen=True)
class ExperimentSpec:
    """What to run: weight laws, direction, sizes, replica count, base seed."""

    kind: str
    config: EnvironmentConfig
    x: float
    y: float
    sizes: tuple
    replicas: int
    base_seed: int

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigurationError(f"unknown experiment kind {self.kind!r}")
        if self.x < 0 or self.y < 0 or (self.x == 0 and self.y == 0):
            raise ConfigurationError(f"bad direction ({self.x},{self.y})")
        if self.kind in ("fluctuation", "entry_scaling") and (self.x <= 0 or self.y <= 0):
            raise ConfigurationError(f"{self.kind} needs a strictly positive direction")
        if not self.sizes or any(n < 1 for n in self.sizes):
            raise ConfigurationError(f"sizes must be positive integers: {self.sizes}")
        if self.replicas < 1:
            raise ConfigurationError(f"need at least one replica: {self.replicas}")

    def point(self, n):
        return math.floor(n * self.x), math.floor(n * self.y)

    def echo(self) -> dict:
        """Spec identity for JSON summaries (never includes execution details)."""
        return {
            "kind": self.kind,
            "p": self.config.p_bern,
            "xi": self.config.xi_dist.spec_string(),
            "eta": self.config.eta_dist.spec_string(),
            "mode": self.config.arithmetic_mode,
            "x": self.x,
            "y": self.y,
            "sizes": list(self.sizes),
            "replicas": self.replicas,
            "seed": self.base_seed,
        }


@dataclass(frozen=True)
class SampleRecord:
    """One replica at one size: the three passage values plus the entry point."""

    n: int
    seed: int
    full: float
    horiz: float
    vert: float
    entry: int
    scaled: float | None = None

    def __post_init__(self):
        # model invariant, exact even in float arithmetic (monotone DP)
        if self.full < max(self.horiz, self.vert):
            raise AssertionError(f"domination violated: {self}")


def _passage_profile(env, m, n):
    """(F, F_H, F_V, E) at (m,n) in a single sweep over shared weight rows."""
    switch, xi, eta = env.rows(0, m)
    horiz_w = switch * xi
    dtype = env.weight_dtype
    row_full = base_row(horiz_w, m, dtype)
    row_h = row_full.copy()
    row_v = np.zeros(m + 1, dtype=dtype)
    trace_h = np.empty(n + 1, dtype=dtype)
    trace_h[0] = row_h[m]
    for j in range(1, n + 1):
        switch, xi, eta = env.rows(j, m)
        horiz_w = switch * xi
        vert_w = (1 - switch) * eta
        row_full = advance_row(row_full, horiz_w, vert_w)
        row_h = advance_row(row_h, horiz_w, None)
        row_v = advance_row(row_v, None, vert_w)
        trace_h[j] = row_h[m]
    entry = entry_from_trace(trace_h, env.arithmetic_mode)
    return row_full[m].item(), row_h[m].item(), row_v[m].item(), entry


def _record_worker(args):
    config, seed, n, m_pt, n_pt = args
    env = sample_environment(config, seed, (m_pt, n_pt))
    full, horiz, vert, entry = _passage_profile(env, m_pt, n_pt)
    return SampleRecord(n, seed, full, horiz, vert, entry)


def _departure_worker(args):
    config, seed, m_pt, n_pt = args
    env = sample_environment(config, seed, (m_pt, n_pt))
    return _departure_point(env, m_pt, n_pt)


def _map_ordered(worker, jobs, threads):
    if threads <= 1 or len(jobs) <= 1:
        return [worker(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        chunk = max(1, len(jobs) // (threads * 8))
        return list(pool.map(worker, jobs, chunksize=chunk))


def _collect_records(spec: ExperimentSpec, threads: int):
    """Records for every (size, replica), in (size, replica) order."""
    per_size = {}
    for n in spec.sizes:
        m_pt, n_pt = spec.point(n)
        jobs = [(spec.config, spec.base_seed + r, n, m_pt, n_pt) for r in range(spec.replicas)]
        per_size[n] = _map_ordered(_record_worker, jobs, threads)
    return per_size


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    records: list
    summary: dict
    fluctuations: list | None = None


def _mean_se(values):
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return mean, se


def run_shape_experiment(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    """Per-size means of F/n, F_H/n and F_V/n with standard errors."""
    per_size = _collect_records(spec, threads)
    sizes_summary = []
    for n in spec.sizes:
        recs = per_size[n]
        entry = {"n": n}
        for name, field in (("F", "full"), ("FH", "horiz"), ("FV", "vert")):
            mean, se = _mean_se([getattr(r, field) / n for r in recs])
            entry[f"mean_{name}_over_n"] = mean
            entry[f"se_{name}_over_n"] = se
        sizes_summary.append(entry)
    summary = {"experiment": "shape", "spec": spec.echo(), "per_size": sizes_summary}
    return ExperimentResult(spec, [r for n in spec.sizes for r in per_size[n]], summary)


def run_gap_experiment(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    """Per-size means of (F - max(F_H, F_V))/n and /n^{1/3}."""
    per_size = _collect_records(spec, threads)
    sizes_summary = []
    for n in spec.sizes:
        gaps = [r.full - max(r.horiz, r.vert) for r in per_size[n]]
        mean_n, se_n = _mean_se([g / n for g in gaps])
        mean_cbrt, se_cbrt = _mean_se([g / n ** (1.0 / 3.0) for g in gaps])
        sizes_summary.append(
            {
                "n": n,
                "mean_gap_over_n": mean_n,
                "se_gap_over_n": se_n,
                "mean_gap_over_cbrt_n": mean_cbrt,
                "se_gap_over_cbrt_n": se_cbrt,
            }
        )
    summary = {"experiment": "gap", "spec": spec.echo(), "per_size": sizes_summary}
    return ExperimentResult(spec, [r for n in spec.sizes for r in per_size[n]], summary)


def effective_bernoulli_p(config: EnvironmentConfig) -> float:
    """P(horizontal weight = 1) when B*xi is {0,1}-valued; error otherwise."""
    if not config.xi_dist.is_indicator():
        raise ConfigurationError(
            "fluctuation theory needs {0,1}-valued horizontal weights; "
            f"xi law {config.xi_dist.spec_string()!r} is not an indicator"
        )
    return config.p_bern * (1.0 - config.xi_dist.zero_probability())


@dataclass(frozen=True)
class FluctuationSummary:
    """Empirical scaled fluctuations against the TW-GUE reference."""

    n: int
    count: int
    mean: float
    sd: float
    ks_distance: float
    quantiles: dict


def run_fluctuation_experiment(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    """Scaled fluctuations of F at each size, summarized against TW-GUE."""
    p_eff = effective_bernoulli_p(spec.config)
    try:
        coeffs = coefficients(p_eff, spec.x, spec.y)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None
    reference = tw_reference()

    per_size = _collect_records(spec, threads)
    records = []
    summaries = []
    for n in spec.sizes:
        scaled = []
        for rec in per_size[n]:
            value = scaled_fluctuation(rec.full, n, coeffs)
            scaled.append(value)
            records.append(
                SampleRecord(rec.n, rec.seed, rec.full, rec.horiz, rec.vert, rec.entry, value)
            )
        arr = np.asarray(scaled)
        quantiles = {
            repr(q): float(np.quantile(arr, q)) for q in _QUANTILE_PROBS
        }
        summaries.append(
            FluctuationSummary(
                n=n,
                count=arr.size,
                mean=float(arr.mean()),
                sd=float(arr.std(ddof=1)) if arr.size > 1 else 0.0,
                ks_distance=ks_statistic(arr, reference.cdf),
                quantiles=quantiles,
            )
        )
    summary = {
        "experiment": "fluctuation",
        "spec": spec.echo(),
        "p_effective": p_eff,
        "per_size": [s.__dict__ for s in summaries],
    }
    return ExperimentResult(spec, records, summary, fluctuations=summaries)


def run_entry_scaling_experiment(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    """Median and 90th percentile of E/n^{1/3} and E/n per size."""
    per_size = _collect_records(spec, threads)
    sizes_summary = []
    for n in spec.sizes:
        entries = np.asarray([r.entry for r in per_size[n]], dtype=float)
        cbrt = n ** (1.0 / 3.0)
        sizes_summary.append(
            {
                "n": n,
                "median_E_over_cbrt_n": float(np.median(entries)) / cbrt,
                "q90_E_over_cbrt_n": float(np.quantile(entries, 0.9)) / cbrt,
                "median_E_over_n": float(np.median(entries)) / n,
                "q90_E_over_n": float(np.quantile(entries, 0.9)) / n,
            }
        )
    summary = {"experiment": "entry_scaling", "spec": spec.echo(), "per_size": sizes_summary}
    return ExperimentResult(spec, [r for n in spec.sizes for r in per_size[n]], summary)


def run_de_law_experiment(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    """Departure vs entry points at one endpoint: equality in law via KS.

    Endpoint given through the usual floor convention (use sizes=[1] and
    (x,y)=(m,n) for a literal lattice point).  D and E samples use disjoint
    seed ranges; E replicas also yield ordinary sample records.
    """
    n0 = spec.sizes[0]
    m_pt, n_pt = spec.point(n0)
    if m_pt < 1:
        raise ConfigurationError("departure points need m >= 1")
    d_jobs = [(spec.config, spec.base_seed + r, m_pt, n_pt) for r in range(spec.replicas)]
    d_samples = _map_ordered(_departure_worker, d_jobs, threads)
    e_jobs = [
        (spec.config, spec.base_seed + spec.replicas + r, n0, m_pt, n_pt)
        for r in range(spec.replicas)
    ]
    records = _map_ordered(_record_worker, e_jobs, threads)
    e_samples = [r.entry for r in records]

    def counts(samples):
        table = {}
        for s in samples:
            table[s] = table.get(s, 0) + 1
        return {str(k): table[k] for k in sorted(table)}

    summary = {
        "experiment": "de_law",
        "spec": spec.echo(),
        "point": [m_pt, n_pt],
        "ks_distance": two_sample_ks(d_samples, e_samples),
        "departure_counts": counts(d_samples),
        "entry_counts": counts(e_samples),
    }
    return ExperimentResult(spec, records, summary)


def run_experiment(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    driver = {
        "shape": run_shape_experiment,
        "gap": run_gap_experiment,
        "fluctuation": run_fluctuation_experiment,
        "entry_scaling": run_entry_scaling_experiment,
        "de_law": run_de_law_experiment,
    }[spec.kind]
    return driver(spec, threads)


def ks_statistic(samples, reference_cdf) -> float:
    """One-sample Kolmogorov-Smirnov sup-distance to a reference CDF."""
    data = np.sort(np.asarray(samples, dtype=float))
    if data.size == 0:
        raise ValueError("need at least one sample")
    n = data.size
    cdf = np.asarray(reference_cdf(data), dtype=float)
    steps = np.arange(1, n + 1) / n
    return float(np.max(np.maximum(steps - cdf, cdf - (steps - 1.0 / n))))


def two_sample_ks(a, b) -> float:
    """Sup-distance between two empirical CDFs."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("need nonempty samples on both sides")
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / a.size
    cdf_b = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


@dataclass(frozen=True)
class TWReference:
    """Tracy-Widom GUE CDF table with linear interpolation and clamped tails."""

    grid: np.ndarray
    values: np.ndarray

    def cdf(self, x):
        return np.interp(x, self.grid, self.values)

    def quantile(self, q: float) -> float:
        return float(np.interp(q, self.values, self.grid))


def tw_reference(path=None) -> TWReference:
    """Load the TW-GUE CDF table (package data, or SJPERC_TW_TABLE override)."""
    if path is None:
        path = os.environ.get(TW_TABLE_ENV_VAR)
    if path is None:
        text = resources.files("sjperc").joinpath("data/tw_gue_cdf.csv").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    try:
        table = np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1, ndmin=2)
    except Exception as exc:
        raise ValueError(f"cannot parse TW table: {exc}") from None
    if table.shape[0] < 2 or table.shape[1] != 2:
        raise ValueError("TW table needs at least two (s, cdf) rows")
    grid, values = table[:, 0], table[:, 1]
    if np.any(np.diff(grid) <= 0):
        raise ValueError("TW table abscissae must be strictly increasing")
    if np.any(values < 0) or np.any(values > 1) or np.any(np.diff(values) < 0):
        raise ValueError("TW table values must be a nondecreasing CDF in [0,1]")
    return TWReference(grid, values)


def _format_number(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    as_float = float(value)
    return str(int(as_float)) if as_float.is_integer() else repr(as_float)


def records_csv_text(records) -> str:
    """CSV with one row per sample record, schema n,seed,F,FH,FV,E,scaled."""
    lines = [RECORD_CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    str(r.n),
                    str(r.seed),
                    _format_number(r.full),
                    _format_number(r.horiz),
                    _format_number(r.vert),
                    str(r.entry),
                    _format_number(r.scaled),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def summary_json_text(summary: dict) -> str:
    """Deterministic JSON rendering of an experiment summary."""
    return json.dumps(summary, sort_keys=True, indent=2) + "\n"
