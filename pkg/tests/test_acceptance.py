"""Acceptance battery.

Each test prints one machine-readable verdict line (picked up by the
-rP summary) before asserting, so a full run shows the per-criterion
outcomes at a glance.
"""

import math
import time

import numpy as np

from fspde_split.flows import DriftSplit, cubic_linear_flow, ode_oracle, poly_flow
from fspde_split.fou import FouSpec, discrete_fou_variance
from fspde_split.lemmas import error_decay_check, moment_decay_check
from fspde_split.noise import fgn_autocovariance, sample_fgn_path, sample_noise_lattice
from fspde_split.scheme import SchemeConfig, run_linear
from fspde_split.spectral import (
    SpectralField,
    dst_forward,
    dst_inverse,
    semigroup_factors,
    smoothing_factors,
    laplacian_eigenvalues,
)
from fspde_split.study import StudyConfig, convergence_study

SEED = 20260817

STUDY_BAND_LIMIT_SECONDS = 600.0
LEMMA_LIMIT_SECONDS = 60.0


def _verdict(tag: str, ok: bool, detail: str) -> None:
    print(f"{tag} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"{tag}: {detail}"


def _rate_study(hurst, drift, l_list):
    base = SchemeConfig(
        t_end=1.0,
        n_steps=2048,
        n_modes=64,
        eps=1.0,
        drift=drift,
        hurst=hurst,
        x0="sin_pi",
        seed=SEED,
    )
    study = StudyConfig(base=base, l_list=l_list, l_ref=2048, n_realizations=100)
    return convergence_study(study)


def test_a01_strong_rate_smooth_regime():
    rep = _rate_study(
        0.7, DriftSplit(f_kind="poly_odd", q=1, g_kind="identity"), (8, 16, 32, 64, 128, 256)
    )
    ok = 0.30 <= rep.slope <= 0.60 and rep.elapsed_seconds < STUDY_BAND_LIMIT_SECONDS
    _verdict(
        "A1",
        ok,
        f"H=0.7 slope={rep.slope:.4f} band=[0.30,0.60] theory={rep.theory_slope:.2f} "
        f"elapsed={rep.elapsed_seconds:.0f}s (limit {STUDY_BAND_LIMIT_SECONDS:.0f}s)",
    )


def test_a02_strong_rate_high_hurst():
    rep = _rate_study(
        0.9, DriftSplit(f_kind="poly_odd", q=1, g_kind="identity"), (8, 16, 32, 64, 128, 256)
    )
    ok = 0.50 <= rep.slope <= 0.80
    _verdict(
        "A2",
        ok,
        f"H=0.9 slope={rep.slope:.4f} band=[0.50,0.80] theory={rep.theory_slope:.2f}",
    )


def test_a03_strong_rate_rough_regime():
    rep = _rate_study(
        0.3, DriftSplit(f_kind="poly_odd", q=1, g_kind="identity"), (8, 16, 32, 64, 128)
    )
    ok = 0.03 <= rep.slope <= 0.35
    _verdict(
        "A3",
        ok,
        f"H=0.3 slope={rep.slope:.4f} band=[0.03,0.35] theory={rep.theory_slope:.2f} "
        f"large-dt slope={rep.slope_large_dt:.4f} (over {rep.n_large_dt} points)",
    )


def test_a04_strong_rate_full_phase_flow():
    rep = _rate_study(
        0.7, DriftSplit(f_kind="cubic_linear", g_kind="zero"), (8, 16, 32, 64, 128, 256)
    )
    ok = 0.30 <= rep.slope <= 0.60
    _verdict(
        "A4",
        ok,
        f"H=0.7 cubic-linear flow, g=0: slope={rep.slope:.4f} band=[0.30,0.60]",
    )


def test_a05_mode_variance_decay_in_damping():
    t0 = time.monotonic()
    parts = []
    ok = True
    for h in (0.3, 0.7):
        check = moment_decay_check(h)
        ok = ok and abs(check.fitted_exponent - (-2.0 * h)) <= 0.1
        parts.append(f"H={h} fitted={check.fitted_exponent:.3f} expected={-2.0 * h:.1f}")
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < LEMMA_LIMIT_SECONDS
    _verdict(
        "A5",
        ok,
        "; ".join(parts) + f"; tol 0.1; elapsed={elapsed:.1f}s (limit {LEMMA_LIMIT_SECONDS:.0f}s)",
    )


def test_a06_scheme_error_decay_smooth():
    check = error_decay_check(0.7)
    ok = abs(check.fitted_exponent - 2.0) <= 0.1
    _verdict(
        "A6",
        ok,
        f"H=0.7 lam=20 fitted={check.fitted_exponent:.3f} expected=2.0 tol=0.1 "
        f"(lam*dt<1 subset)",
    )


def test_a07_scheme_error_decay_rough():
    check = error_decay_check(0.3)
    ok = check.one_sided and check.fitted_exponent >= 0.9
    _verdict(
        "A7",
        ok,
        f"H=0.3 lam=20 fitted={check.fitted_exponent:.3f} >= 0.9 (one-sided, 2*alpha at alpha=0.45)",
    )


def test_a08_flow_maps_match_ode_oracle():
    z_grid = (-3.0, -1.5, -0.5, 0.0, 0.5, 1.5, 3.0)
    s_grid = (1e-3, 0.1, 0.5, 1.0)
    worst = 0.0
    for z in z_grid:
        for s in s_grid:
            worst = max(
                worst, abs(float(poly_flow(z, s, 1)) - ode_oracle(z, s, lambda v: -(v**3)))
            )
            worst = max(
                worst,
                abs(float(cubic_linear_flow(z, s)) - ode_oracle(z, s, lambda v: v - v**3)),
            )
    ok = worst <= 1e-8
    _verdict(
        "A8",
        ok,
        f"max |closed form - oracle| = {worst:.2e} (limit 1e-8) over "
        f"{len(z_grid)}x{len(s_grid)} grid, both drifts",
    )


def test_a09_transform_and_semigroup_identities():
    rng = np.random.default_rng(SEED)
    worst_rt = worst_sg = 0.0
    smooth_ok = True
    for _ in range(200):
        n = int(rng.integers(1, 129))
        eps = float(10.0 ** rng.uniform(-3, 1))
        dt_a = float(10.0 ** rng.uniform(-6, 0.3))
        dt_b = float(10.0 ** rng.uniform(-6, 0.3))
        coeffs = rng.normal(size=n)

        back = dst_forward(dst_inverse(SpectralField(coeffs, eps)), eps).coeffs
        worst_rt = max(worst_rt, float(np.max(np.abs(back - coeffs))))

        two = semigroup_factors(n, eps, dt_a) * semigroup_factors(n, eps, dt_b)
        one = semigroup_factors(n, eps, dt_a + dt_b)
        worst_sg = max(worst_sg, float(np.max(np.abs(two - one))))

        fac = smoothing_factors(n, eps, dt_a)
        smooth_ok = smooth_ok and bool(np.all(fac > 0.0)) and bool(
            np.all(fac <= dt_a * (1 + 1e-15))
        )
    ok = worst_rt <= 1e-12 and worst_sg <= 1e-13 and smooth_ok
    _verdict(
        "A9",
        ok,
        f"round-trip={worst_rt:.2e} (limit 1e-12), semigroup law={worst_sg:.2e} "
        f"(limit 1e-13), smoothing factor in (0, dt]: {smooth_ok} (200 random configs)",
    )


def test_a10_sampler_matches_exact_covariance():
    n, paths = 8, 100_000
    cases = ((0.3, tuple(range(6))), (0.7, tuple(range(6))), (0.5, tuple(range(1, 6))))
    parts = []
    ok = True
    for h, lags in cases:
        rng = np.random.default_rng(SEED + int(h * 1000))
        x = np.empty((paths, n))
        for i in range(paths):
            x[i] = sample_fgn_path(n, h, 1.0, rng)
        worst = 0.0
        for lag in lags:
            prods = x[:, : n - lag] * x[:, lag:] if lag else x * x
            per_path = prods.mean(axis=1)
            est = float(per_path.mean())
            se = float(per_path.std(ddof=1) / math.sqrt(paths))
            target = float(fgn_autocovariance(lag, h, 1.0))
            worst = max(worst, abs(est - target) / se)
        ok = ok and worst <= 3.0
        parts.append(f"H={h} worst dev={worst:.2f} s.e. over lags {lags[0]}..{lags[-1]}")
    _verdict("A10", ok, "; ".join(parts) + f"; {paths} paths, limit 3 s.e.")


def test_a11_linear_solution_matches_variance_oracle():
    n_modes, n_steps, m = 16, 64, 2000
    parts = []
    ok = True
    for h_i, h in enumerate((0.3, 0.7)):
        cfg = SchemeConfig(
            t_end=1.0,
            n_steps=n_steps,
            n_modes=n_modes,
            eps=1.0,
            drift=DriftSplit(f_kind="zero", g_kind="zero"),
            hurst=h,
            x0="zero",
            seed=0,
        )
        target = sum(
            discrete_fou_variance(FouSpec(lam=lam, hurst=h, dt=cfg.dt, n=n_steps))
            for lam in laplacian_eigenvalues(n_modes)
        )
        sq = np.empty(m)
        for i in range(m):
            lat = sample_noise_lattice(
                n_modes, n_steps, h, cfg.dt, seed=SEED + 100_000 * (h_i + 1) + i
            )
            sq[i] = float(np.sum(run_linear(cfg, lat)[-1].coeffs ** 2))
        est = float(sq.mean())
        se = float(sq.std(ddof=1) / math.sqrt(m))
        dev = abs(est - target) / se
        ok = ok and dev <= 3.0
        parts.append(f"H={h} mean|Z|^2={est:.6f} exact={target:.6f} dev={dev:.2f} s.e.")
    _verdict("A11", ok, "; ".join(parts) + "; limit 3 s.e.")
