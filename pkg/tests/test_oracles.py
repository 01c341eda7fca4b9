"""Tests for the Monte Carlo and quadrature oracles."""

import math

import numpy as np
import pytest

from secrelay import kernels, oracles
from secrelay.closed_form import sop
from secrelay.errors import DomainError
from secrelay.fading import (
    CsiMode,
    DRAWS_PER_TRIAL,
    SCHEME_ORDER,
    Scheme,
    combine,
    params_from_db,
    sample_trial,
    secrecy_rate,
    trial_stream,
)
from secrelay.sweep import sample_grid


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


def test_estimates_reproducible(base_params):
    a = oracles.monte_carlo_sop(base_params, Scheme.MRC_SC, CsiMode.CSI, 200_000, seed=1)
    b = oracles.monte_carlo_sop(base_params, Scheme.MRC_SC, CsiMode.CSI, 200_000, seed=1)
    assert a == b
    c = oracles.monte_carlo_sop(base_params, Scheme.MRC_SC, CsiMode.CSI, 200_000, seed=2)
    assert a != c


def test_estimates_thread_invariant(base_params):
    n = 3 * oracles.CHUNK_TRIALS + 117
    a = oracles.monte_carlo_all(base_params, n, seed=4, n_jobs=1)
    b = oracles.monte_carlo_all(base_params, n, seed=4, n_jobs=4)
    for scheme in SCHEME_ORDER:
        for csi in (CsiMode.NOCSI, CsiMode.CSI):
            assert a.sop(scheme, csi) == b.sop(scheme, csi)
            assert a.esr(scheme, csi) == b.esr(scheme, csi)


def test_batch_matches_scalar_sampling(base_params):
    # the reduction kernel must agree with the scalar single-trial path
    n = 4000
    rho = base_params.rho
    counts = {s: 0 for s in SCHEME_ORDER}
    csums = {s: 0.0 for s in SCHEME_ORDER}
    gen = trial_stream(21, 0)
    for _ in range(n):
        d = sample_trial(base_params, gen)
        for s in SCHEME_ORDER:
            gm, ge = combine(s, d)
            if gm < rho * (1.0 + ge) - 1.0:
                counts[s] += 1
            if gm > ge:
                csums[s] += secrecy_rate(gm, ge)
    mc = oracles.monte_carlo_all(base_params, n, seed=21)
    for s in SCHEME_ORDER:
        est = mc.sop(s, CsiMode.NOCSI)
        assert est.value * n == counts[s]
        assert mc.esr(s, CsiMode.CSI).value * n == pytest.approx(csums[s], rel=1e-10)


def test_sop_estimate_stderr_formula(base_params):
    est = oracles.monte_carlo_sop(base_params, Scheme.SC_SC, CsiMode.NOCSI, 10**5, seed=3)
    assert est.trials == 10**5
    assert est.stderr == pytest.approx(
        math.sqrt(est.value * (1.0 - est.value) / est.trials)
    )


def test_high_target_rate_saturates(base_params):
    p = base_params.with_(rate_rs=60.0)
    est = oracles.monte_carlo_sop(p, Scheme.MRC_MRC, CsiMode.NOCSI, 10**4, seed=5)
    assert est.value == 1.0


def test_wiretap_coin_flip(wiretap_params):
    est = oracles.monte_carlo_sop(
        wiretap_params, Scheme.MRC_SC, CsiMode.NOCSI, 10**6, seed=8
    )
    assert abs(est.value - 0.5) < 0.0015


def test_esr_estimates(wiretap_params, base_params):
    # symmetric silent-relay channel has zero expected log-ratio
    est = oracles.monte_carlo_esr(
        wiretap_params, Scheme.SC_SC, CsiMode.NOCSI, 10**6, seed=9
    )
    assert abs(est.value) <= 3.0 * est.stderr
    # the CSI statistic is non-negative by construction
    for seed in (1, 2, 3):
        est = oracles.monte_carlo_esr(base_params, Scheme.SC_MRC, CsiMode.CSI, 10**4, seed=seed)
        assert est.value >= 0.0


def test_esr_estimate_matches_closed_form_reference_point():
    # eavesdropper links 3 / 3.5 dB, direct link 9.5 dB, balanced 10 dB hops
    from secrelay.closed_form import esr

    p = params_from_db(3.0, 3.5, 9.5, 10.0, 10.0, 3.0, 1.0)
    est = oracles.monte_carlo_esr(p, Scheme.SC_MRC, CsiMode.CSI, 10**7, seed=41)
    assert abs(est.value - esr(p, Scheme.SC_MRC, CsiMode.CSI).value) <= 3.0 * est.stderr


def test_trial_count_validation(base_params):
    with pytest.raises(DomainError):
        oracles.monte_carlo_sop(base_params, Scheme.MRC_SC, CsiMode.CSI, 0, seed=1)


def test_backends_agree(base_params):
    if not kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    u = trial_stream(33).random((50_000, DRAWS_PER_TRIAL))
    rates = (
        base_params.beta_sd,
        base_params.beta_sr,
        base_params.beta_rd,
        base_params.alpha_se,
        base_params.alpha_re,
    )
    out_nb = kernels.reduce_trials(u, rates, base_params.gamma_th, base_params.rho, backend="numba")
    out_np = kernels.reduce_trials(u, rates, base_params.gamma_th, base_params.rho, backend="numpy")
    # counts are exact; floating sums may differ in the last few ulps
    assert np.array_equal(out_nb[0], out_np[0])
    assert np.array_equal(out_nb[1], out_np[1])
    for a, b in zip(out_nb[2:], out_np[2:]):
        np.testing.assert_allclose(a, b, rtol=1e-12)


def test_backend_env_selection(monkeypatch):
    monkeypatch.setenv(kernels.ENV_BACKEND, "numpy")
    assert kernels.active_backend() == "numpy"
    monkeypatch.setenv(kernels.ENV_BACKEND, "nonsense")
    with pytest.raises(ValueError):
        kernels.active_backend()


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


def test_quadrature_wiretap_limit(wiretap_params):
    from secrelay.asymptotics import sop_wiretap

    r = oracles.quadrature_sop(wiretap_params, Scheme.SC_MRC, CsiMode.NOCSI, tol=1e-10)
    assert abs(r.value - sop_wiretap(wiretap_params)) < 1e-10
    assert r.abs_error_bound <= 1e-10
    assert r.evaluations > 0


def test_quadrature_degenerate_rates_well_posed(base_params):
    p = base_params.with_(beta_rd=base_params.beta_sd)
    r = oracles.quadrature_sop(p, Scheme.MRC_MRC, CsiMode.NOCSI)
    assert 0.0 <= r.value <= 1.0


def test_quadrature_error_bound_honesty():
    for params in sample_grid(5, seed=31):
        for scheme, csi in ((Scheme.MRC_MRC, CsiMode.NOCSI), (Scheme.SC_MRC, CsiMode.CSI)):
            coarse = oracles.quadrature_sop(params, scheme, csi, tol=1e-6)
            fine = oracles.quadrature_sop(params, scheme, csi, tol=5e-7)
            assert abs(coarse.value - fine.value) <= coarse.abs_error_bound + 1e-15
            ec = oracles.quadrature_esr(params, scheme, csi, tol=1e-6)
            ef = oracles.quadrature_esr(params, scheme, csi, tol=5e-7)
            assert abs(ec.value - ef.value) <= ec.abs_error_bound + 1e-15


def test_quadrature_matches_closed_form_random_point():
    params = sample_grid(3, seed=77)[2]
    for scheme in SCHEME_ORDER:
        for csi in (CsiMode.NOCSI, CsiMode.CSI):
            q = oracles.quadrature_sop(params, scheme, csi)
            assert abs(q.value - sop(params, scheme, csi).value) < 1e-6


def test_quadrature_tolerance_validation(base_params):
    with pytest.raises(DomainError):
        oracles.quadrature_sop(base_params, Scheme.MRC_SC, CsiMode.CSI, tol=0.0)


def test_quadrature_unreachable_tolerance_raises(base_params):
    from secrelay.errors import NumericError

    with pytest.raises(NumericError):
        oracles.quadrature_sop(base_params, Scheme.MRC_MRC, CsiMode.NOCSI, tol=1e-300)


def test_three_way_agreement_spot_check():
    params = sample_grid(2, seed=55)[1]
    mc = oracles.monte_carlo_all(params, 10**6, seed=55)
    for scheme in SCHEME_ORDER:
        for csi in (CsiMode.NOCSI, CsiMode.CSI):
            cf = sop(params, scheme, csi).value
            q = oracles.quadrature_sop(params, scheme, csi).value
            est = mc.sop(scheme, csi)
            assert abs(cf - q) < 1e-6
            assert abs(cf - est.value) <= 3.0 * est.stderr + 1e-4
