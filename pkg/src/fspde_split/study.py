"""Coupled-resolution strong-error studies and their reports.

One realisation samples a single fine noise lattice, runs the reference
resolution on it, then reruns every coarser resolution on the block-sum
of the same lattice, so all resolutions see the same noise path.  The
root-mean-square of the final-time L^2 coefficient errors over many
realisations, fitted against the step size on log-log axes, estimates
the strong convergence rate.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from .noise import sample_noise_lattice
from .scheme import SchemeConfig, run_trajectory

__all__ = [
    "StudyConfig",
    "ConvergenceReport",
    "convergence_study",
    "fit_rate",
    "emit_report",
    "worker_count",
]

_ENV_THREADS = "FSPDE_THREADS"


def worker_count(explicit: Optional[int] = None) -> int:
    """Resolve the worker count: explicit argument, else FSPDE_THREADS, else 1."""
    if explicit is not None:
        n = int(explicit)
    else:
        raw = os.environ.get(_ENV_THREADS, "").strip()
        n = int(raw) if raw else 1
    if n < 1:
        raise ValueError("worker count must be >= 1")
    return n


@dataclass(frozen=True)
class StudyConfig:
    """A convergence study around a reference configuration.

    ``base`` must be configured at the reference resolution
    (base.n_steps == l_ref); every entry of ``l_list`` must divide
    l_ref.  l == l_ref is allowed (it reproduces the reference run, so
    its error is exactly zero and it is excluded from the rate fit).
    ``n_realizations`` is the Monte Carlo sample count.
    """

    base: SchemeConfig
    l_list: Tuple[int, ...]
    l_ref: int
    n_realizations: int
    error_norm: str = "l2"
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.base.n_steps != self.l_ref:
            raise ValueError("base.n_steps must equal l_ref")
        ls = tuple(int(l) for l in self.l_list)
        if not ls:
            raise ValueError("l_list must not be empty")
        if len(set(ls)) != len(ls):
            raise ValueError("l_list entries must be distinct")
        for l in ls:
            if l < 1 or l > self.l_ref or self.l_ref % l:
                raise ValueError(f"every l must divide l_ref; offending l={l}")
        object.__setattr__(self, "l_list", tuple(sorted(ls)))
        if self.n_realizations < 2:
            raise ValueError("need at least 2 realizations")
        if self.error_norm != "l2":
            raise ValueError("only the L2 coefficient norm is supported")


@dataclass(frozen=True)
class ConvergenceReport:
    hurst: float
    theory_slope: float
    l_ref: int
    l_list: Tuple[int, ...]
    dts: Tuple[float, ...]
    rms_error: Tuple[float, ...]
    std_error: Tuple[float, ...]
    slope: float
    intercept: float
    max_residual: float
    slope_large_dt: float
    n_large_dt: int
    n_realizations: int
    seed: int
    config: dict
    elapsed_seconds: float


def _realization_seed(seed: int, m: int) -> int:
    # stable per-realization lattice seed, independent of worker layout
    ss = np.random.SeedSequence(seed, spawn_key=(m,))
    return int(ss.generate_state(1, np.uint64)[0])


def _realization_sq_errors(study: StudyConfig, m: int) -> np.ndarray:
    base = study.base
    lattice = sample_noise_lattice(
        n_modes=base.n_modes,
        n_steps=study.l_ref,
        hurst=base.hurst,
        dt_fine=base.t_end / study.l_ref,
        seed=_realization_seed(base.seed, m),
    )
    try:
        ref = run_trajectory(base, lattice)[-1].field.coeffs
    except Exception as exc:
        raise RuntimeError(f"realization {m}, reference L={study.l_ref}: {exc}") from exc
    out = np.empty(len(study.l_list))
    for i, l in enumerate(study.l_list):
        cfg = dataclasses.replace(base, n_steps=l)
        try:
            final = run_trajectory(cfg, lattice)[-1].field.coeffs
        except Exception as exc:
            raise RuntimeError(f"realization {m}, L={l}: {exc}") from exc
        out[i] = float(np.sum((final - ref) ** 2))
    return out


def _worker(args) -> np.ndarray:
    study, m = args
    return _realization_sq_errors(study, m)


def fit_rate(dts: Sequence[float], values: Sequence[float]) -> Tuple[float, float, float]:
    """Least-squares slope and intercept of log(values) against log(dts).

    Returns (slope, intercept, max |log residual|).
    """
    x = np.log(np.asarray(dts, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    if x.shape != y.shape or x.size < 2:
        raise ValueError("need at least two (dt, value) points")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.max(np.abs(resid)))


def _config_echo(study: StudyConfig) -> dict:
    base = study.base
    drift = base.drift
    echo = {
        "T": base.t_end,
        "N": base.n_modes,
        "eps": base.eps,
        "hurst": base.hurst.hurst,
        "x0": base.x0 if isinstance(base.x0, str) else list(map(float, base.x0)),
        "seed": base.seed,
        "drift": {"f": drift.f_kind, "g": drift.g_kind, "q": drift.q},
        "L_ref": study.l_ref,
        "L_list": list(study.l_list),
        "M": study.n_realizations,
        "error_norm": study.error_norm,
    }
    return echo


def convergence_study(study: StudyConfig, n_workers: Optional[int] = None) -> ConvergenceReport:
    """Run the full coupled Monte Carlo study.

    Realisations are independent work items; results are placed by
    realisation index and reduced in that fixed order, so the report is
    identical for any worker count.
    """
    t0 = time.monotonic()
    workers = worker_count(n_workers)
    m_total = study.n_realizations
    sq = np.empty((m_total, len(study.l_list)))
    if workers == 1:
        for m in range(m_total):
            sq[m] = _realization_sq_errors(study, m)
    else:
        jobs = [(study, m) for m in range(m_total)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for m, row in enumerate(pool.map(_worker, jobs, chunksize=max(1, m_total // (4 * workers)))):
                sq[m] = row

    mean_sq = sq.mean(axis=0)
    rms = np.sqrt(mean_sq)
    se_mean_sq = np.sqrt(sq.var(axis=0, ddof=1) / m_total)
    with np.errstate(divide="ignore", invalid="ignore"):
        # delta method through the square root; a zero point (l == l_ref) has zero spread
        std_error = np.where(rms > 0.0, se_mean_sq / (2.0 * rms), 0.0)

    base = study.base
    dts = tuple(base.t_end / l for l in study.l_list)
    # an l == l_ref entry reproduces the reference exactly; it cannot enter a log fit
    pos = np.asarray([i for i, v in enumerate(rms) if v > 0.0], dtype=int)
    fit_dts = np.asarray(dts)[pos]
    if pos.size >= 2:
        slope, intercept, max_resid = fit_rate(fit_dts, rms[pos])
        n_large = max(2, math.ceil(pos.size / 2))
        order = np.argsort(fit_dts)[::-1][:n_large]
        slope_large, _, _ = fit_rate(fit_dts[order], rms[pos][order])
    else:
        slope = intercept = max_resid = slope_large = float("nan")
        n_large = 0

    return ConvergenceReport(
        hurst=base.hurst.hurst,
        theory_slope=base.hurst.hurst - 0.25,
        l_ref=study.l_ref,
        l_list=study.l_list,
        dts=dts,
        rms_error=tuple(float(v) for v in rms),
        std_error=tuple(float(v) for v in std_error),
        slope=slope,
        intercept=intercept,
        max_residual=max_resid,
        slope_large_dt=slope_large,
        n_large_dt=n_large,
        n_realizations=m_total,
        seed=base.seed,
        config=_config_echo(study),
        elapsed_seconds=time.monotonic() - t0,
    )


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

_GNUPLOT_TEMPLATE = """# strong-error convergence plot
set datafile separator ","
set logscale xy
set xlabel "dt"
set ylabel "rms error at final time"
set key left top
fitted(x) = exp({intercept!r}) * x**{slope!r}
guide(x)  = exp({intercept!r}) * x**{theory!r}
plot "rates.csv" every ::1 using 1:2:3 with yerrorlines title "measured", \\
     fitted(x) title "fit, slope {slope:.3f}", \\
     guide(x) dashtype 2 title "theory slope {theory:.3f}"
"""


def emit_report(report: ConvergenceReport, out_dir) -> dict:
    """Write rates.csv, report.json, and rates.gp into ``out_dir``.

    Rows of rates.csv are sorted by decreasing dt.  All numbers are
    formatted by repr, which is locale-independent and round-trips.
    Returns the paths written.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    order = np.argsort(report.dts)[::-1]
    csv_path = out / "rates.csv"
    with open(csv_path, "w", newline="\n") as fh:
        fh.write("dt,rms_error,std_error\n")
        for i in order:
            fh.write(
                f"{float(report.dts[i])!r},{float(report.rms_error[i])!r},"
                f"{float(report.std_error[i])!r}\n"
            )

    json_path = out / "report.json"
    payload = dataclasses.asdict(report)
    payload["l_list"] = list(report.l_list)
    payload["dts"] = list(report.dts)
    payload["rms_error"] = list(report.rms_error)
    payload["std_error"] = list(report.std_error)
    with open(json_path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")

    gp_path = out / "rates.gp"
    with open(gp_path, "w", newline="\n") as fh:
        fh.write(
            _GNUPLOT_TEMPLATE.format(
                intercept=report.intercept, slope=report.slope, theory=report.theory_slope
            )
        )

    return {"rates_csv": str(csv_path), "report_json": str(json_path), "rates_gp": str(gp_path)}
