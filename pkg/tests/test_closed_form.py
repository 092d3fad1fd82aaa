import math

import numpy as np
import pytest

from hbfsim import channel as ch
from hbfsim import closed_form as cf
from hbfsim import monte_carlo as mc
from hbfsim import precoding as pc
from hbfsim import scenario as sc

D = 0.5


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

def trace_oracle(F: np.ndarray, m: int, d: float, angles) -> np.ndarray:
    """Gain from explicit matrices: rank-one covariances and raw traces."""
    n_ue = len(angles)
    covs = [np.outer(ch.steering_vector(m, d, th),
                     ch.steering_vector(m, d, th).conj()) for th in angles]
    traces = [float(np.trace(F.conj().T @ Kj @ F).real) for Kj in covs]
    out = []
    for k in range(n_ue):
        loss = 0.0
        for j in range(n_ue):
            if j == k:
                continue
            loss += float(np.trace(F.conj().T @ covs[k] @ F
                                   @ F.conj().T @ covs[j] @ F).real) / traces[j]
        out.append(traces[k] - (loss / (n_ue - 1) if n_ue > 1 else 0.0))
    return np.array(out)


def two_ue_specializations(m: int, l_bs: int, d: float, beta: float):
    """K = 2 gains written directly in terms of the kernels."""
    m_p = m // l_bs
    z = cf.dirichlet(m, d, beta)
    zp = cf.dirichlet(m_p, d, beta)
    g_f = (m ** 2 - z ** 2) ** 2 / (m * (m ** 2 + z ** 2))
    g_p = ((m_p ** 2 + zp ** 2) ** 2
           - 4 * m_p ** 2 * zp ** 2 * math.cos(math.pi * d * m_p * beta) ** 2) \
        / (m_p * (m_p ** 2 + zp ** 2))
    return g_f, g_p


def common_gap_oracle(m: int, l_bs: int, d: float, n_ues: int, kappa: float):
    """Literal transcription of the gain sums with every pair gap = kappa/m."""
    beta = kappa / m
    m_p = m // l_bs
    z = cf.dirichlet(m, d, beta)
    zp = cf.dirichlet(m_p, d, beta)
    g_f = ((m ** 2 + (n_ues - 1) * z ** 2) / m
           - (2 * m * z + (n_ues - 2) * z ** 2) ** 2
           / (m * (m ** 2 + (n_ues - 1) * z ** 2)))
    e = np.exp(2j * np.pi * d * np.arange(n_ues) * m_p * beta)
    g_p = np.empty(n_ues)
    for k in range(n_ues):
        loss = 0.0
        for j in range(n_ues):
            if j == k:
                continue
            s = m_p * zp * (e[k] + e[j]) + zp ** 2 * (e.sum() - e[k] - e[j])
            loss += abs(s) ** 2 / (m_p * (m_p ** 2 + (n_ues - 1) * zp ** 2))
        g_p[k] = (m_p ** 2 + (n_ues - 1) * zp ** 2) / m_p - loss / (n_ues - 1)
    return g_f, g_p


def random_angles(rng, n_ue, min_gap=2e-3):
    while True:
        cosines = np.sort(rng.uniform(-0.9, 0.9, n_ue))[::-1]
        if n_ue == 1 or np.min(np.abs(np.diff(cosines))) > min_gap:
            return np.arccos(cosines)


# ---------------------------------------------------------------------------
# dirichlet kernel
# ---------------------------------------------------------------------------

def test_dirichlet_limit_at_zero():
    for m in (1, 2, 7, 32):
        assert cf.dirichlet(m, D, 0.0) == pytest.approx(m)


def test_dirichlet_two_element_identity():
    for x in np.linspace(-3, 3, 61):
        assert cf.dirichlet(2, D, x) == pytest.approx(
            2 * math.cos(math.pi * D * x), abs=1e-12)


def test_dirichlet_matches_geometric_sum():
    m, x = 8, 0.37
    total = sum(np.exp(2j * np.pi * D * n * x) for n in range(m))
    val = cf.dirichlet(m, D, x)
    assert abs(val) == pytest.approx(abs(total), rel=1e-12)
    assert val ** 2 == pytest.approx(abs(total) ** 2, rel=1e-12)


def test_dirichlet_bounded_and_periodic_magnitude():
    xs = np.linspace(-5, 5, 2001)
    for m in (3, 4, 9, 16):
        vals = cf.dirichlet(m, D, xs)
        assert np.max(np.abs(vals)) <= m * (1 + 1e-12)
        shifted = cf.dirichlet(m, D, xs + 1.0 / D)
        assert np.max(np.abs(np.abs(shifted) - np.abs(vals))) < 1e-9


def test_dirichlet_removable_singularities():
    # at x = n/d both sines vanish; limit is +/- m
    for m in (4, 5):
        for n in (1, 2, 3):
            val = cf.dirichlet(m, D, n / D)
            assert abs(val) == pytest.approx(m, rel=1e-12)
            nearby = cf.dirichlet(m, D, n / D + 1e-9)
            assert val == pytest.approx(nearby, rel=1e-6)


def test_dirichlet_vectorized_shape():
    xs = np.array([[0.0, 1.0], [2.0, 3.0]])
    out = cf.dirichlet(4, D, xs)
    assert out.shape == xs.shape


# ---------------------------------------------------------------------------
# exact gains
# ---------------------------------------------------------------------------

def test_g_full_single_ue_is_m():
    assert cf.g_full(16, D, [1.1])[0] == pytest.approx(16.0)


def test_g_partial_single_ue_is_m_p():
    assert cf.g_partial(16, 4, D, [1.1])[0] == pytest.approx(4.0)


def test_two_ue_gains_match_specializations():
    rng = np.random.default_rng(21)
    for _ in range(25):
        l_bs = int(rng.integers(1, 5))
        m = l_bs * int(rng.integers(1, 17))
        beta = float(rng.uniform(0.01, 1.5))
        ref = sc.centered_reference_angle(beta * m, 2, m)
        angles = sc.angles_from_kappa(beta * m, 2, m, ref)
        g_f_expect, g_p_expect = two_ue_specializations(m, l_bs, D, beta)
        assert cf.g_full(m, D, angles)[0] == pytest.approx(g_f_expect, rel=1e-10)
        assert cf.g_partial(m, l_bs, D, angles)[0] == pytest.approx(
            g_p_expect, rel=1e-10)


def test_gains_match_trace_oracle_three_ues():
    rng = np.random.default_rng(3)
    angles = random_angles(rng, 3)
    m, l_bs = 48, 3
    cfg = sc.ScenarioConfig(M=m, l_bs=l_bs, K=3, ue_angles=tuple(angles))
    full = trace_oracle(pc.analog_full(cfg).matrix, m, D, angles)
    part = trace_oracle(pc.analog_partial(cfg).matrix, m, D, angles)
    assert np.allclose(cf.g_full(m, D, angles), full, rtol=1e-10)
    assert np.allclose(cf.g_partial(m, l_bs, D, angles), part, rtol=1e-10)


def test_gains_permutation_behavior():
    # Full-structure gains only see pairwise cosine gaps, so relabeling UEs
    # permutes them.  Partial-structure gains also depend on which subarray
    # each UE label selects; only the two-UE swap leaves them unchanged.
    rng = np.random.default_rng(17)
    angles = random_angles(rng, 4)
    perm = rng.permutation(4)
    assert np.allclose(cf.g_full(32, D, angles)[perm],
                       cf.g_full(32, D, angles[perm]), rtol=1e-11)
    pair = random_angles(rng, 2)
    swapped = pair[::-1]
    assert np.allclose(cf.g_partial(32, 2, D, pair)[::-1],
                       cf.g_partial(32, 2, D, swapped), rtol=1e-11)
    assert np.allclose(trace_oracle(
        pc.analog_partial(sc.ScenarioConfig(
            M=32, l_bs=4, K=4, ue_angles=tuple(angles[perm]))).matrix,
        32, D, angles[perm]),
        cf.g_partial(32, 4, D, angles[perm]), rtol=1e-9)


def test_g_partial_requires_divisible_m():
    with pytest.raises(ValueError, match="divisible"):
        cf.g_partial(10, 4, D, [1.0, 2.0])


def test_ratio_exact_toy_identity_spot():
    for beta in (0.3, 0.7, 1.2):
        ref = sc.centered_reference_angle(2 * beta, 2, 2)
        angles = sc.angles_from_kappa(2 * beta, 2, 2, ref)
        ratio = cf.ratio_exact(2, 2, D, angles)
        expected = (1 - math.cos(math.pi * D * beta) ** 2) \
            / (1 + math.cos(math.pi * D * beta) ** 2)
        assert ratio[0] == pytest.approx(expected, abs=1e-12)
        assert ratio[1] == pytest.approx(expected, abs=1e-12)


def test_ratio_exact_toy_crossing_at_quarter_period():
    # pi d beta = pi/2 makes the cosine vanish and the ratio equal 1
    beta = 1.0
    ref = sc.centered_reference_angle(2 * beta, 2, 2)
    angles = sc.angles_from_kappa(2 * beta, 2, 2, ref)
    assert cf.ratio_exact(2, 2, D, angles)[0] == pytest.approx(1.0, abs=1e-12)


def test_ratio_exact_large_m_approaches_chain_count():
    angles = sc.angles_from_kappa(8.0, 2, 32)
    ratio = cf.ratio_exact(32, 2, D, angles)
    assert ratio[0] == pytest.approx(2.0, rel=1e-9)


def test_ratio_exact_flags_vanishing_partial_gain():
    beta = 1e-8
    ref = sc.centered_reference_angle(2 * beta, 2, 2)
    angles = sc.angles_from_kappa(2 * beta, 2, 2, ref)
    with pytest.raises(ValueError, match="ratio undefined"):
        cf.ratio_exact(2, 2, D, angles)


# ---------------------------------------------------------------------------
# proximity-regime (common-gap) forms
# ---------------------------------------------------------------------------

def test_common_gap_matches_two_ue_exact():
    for kappa in (0.5, 1.6, 3.0, 8.0):
        for m, l_bs in ((32, 2), (64, 4)):
            ref = sc.centered_reference_angle(kappa, 2, m)
            angles = sc.angles_from_kappa(kappa, 2, m, ref)
            assert cf.g_full_common_gap(m, D, 2, kappa) == pytest.approx(
                cf.g_full(m, D, angles)[0], rel=1e-10)
            assert np.allclose(cf.g_partial_common_gap(m, l_bs, D, 2, kappa),
                               cf.g_partial(m, l_bs, D, angles), rtol=1e-10)


def test_common_gap_matches_literal_transcription():
    for n_ues, l_bs in ((3, 4), (8, 8), (6, 16)):
        m = 16 * l_bs
        for kappa in (0.4, 1.6, 2.8):
            g_f_expect, g_p_expect = common_gap_oracle(m, l_bs, D, n_ues, kappa)
            assert cf.g_full_common_gap(m, D, n_ues, kappa) == pytest.approx(
                g_f_expect, rel=1e-10)
            assert np.allclose(
                cf.g_partial_common_gap(m, l_bs, D, n_ues, kappa),
                g_p_expect, rtol=1e-10)


def test_common_gap_needs_two_ues():
    with pytest.raises(ValueError, match="2 UEs"):
        cf.g_full_common_gap(16, D, 1, 1.0)
    with pytest.raises(ValueError, match="2 UEs"):
        cf.g_partial_common_gap(16, 4, D, 1, 1.0)


# ---------------------------------------------------------------------------
# sinc factors and approximations
# ---------------------------------------------------------------------------

def test_eta_f_values():
    assert cf.eta_f(0.0, D) == pytest.approx(1.0)
    assert cf.eta_f(1.6, D) == pytest.approx(0.23387232094715982, abs=1e-14)
    assert abs(cf.eta_f(2.0, D)) < 1e-15    # sin(pi) = 0


def test_eta_p_values():
    assert cf.eta_p(0.0, D, 16) == pytest.approx(1.0)
    assert cf.eta_p(1.6, D, 16) == pytest.approx(1.0, rel=5e-3)
    assert cf.eta_p(1.3, D, 1) == pytest.approx(cf.eta_f(1.3, D), abs=1e-15)


def test_invert_eta_f_round_trip():
    for eta in (-0.2, -0.05, 0.1, 1 / 3, 0.9):
        kappa = cf.invert_eta_f(eta, D)
        assert cf.eta_f(kappa, D) == pytest.approx(eta, abs=1e-12)
    with pytest.raises(ValueError, match="attainable"):
        cf.invert_eta_f(-0.3, D)
    with pytest.raises(ValueError, match="attainable"):
        cf.invert_eta_f(1.0, D)


def test_eta_f_third_crossing_location():
    assert cf.invert_eta_f(1 / 3, D) == pytest.approx(1.45, abs=0.01)


def test_ratio_approx_full_multiplexing_at_eta_zero():
    # kappa = 2 with d = 1/2 zeroes the sinc, and the ratio collapses to 1
    vals = cf.ratio_approx(2.0, D, 4, 4, "full_multiplexing")
    assert np.allclose(vals, 1.0, atol=1e-12)
    assert cf.full_multiplexing_ratio(0.0, 16) == pytest.approx(1.0)


def test_ratio_approx_general_k_at_integer_kappa():
    rho = 0.5
    val = cf.ratio_approx(2.0, D, 8, 16, "general_K")[0]
    expected = 1.0 / (rho * (1 - math.sin(math.pi * rho) ** 2
                             / (math.pi * rho) ** 2))
    assert val == pytest.approx(expected, rel=1e-12)
    assert val >= 1.0 / rho - 1e-9


def test_ratio_approx_simplified_tracks_exact():
    for l_bs in (8, 16):
        m = 16 * l_bs
        for kappa in np.arange(1.2, 2.2001, 0.1):
            exact = cf.ratio_exact_common_gap(m, l_bs, D, l_bs, float(kappa))[0]
            approx = cf.ratio_approx(float(kappa), D, l_bs, l_bs, "simplified")[0]
            assert approx == pytest.approx(exact, rel=0.06)


def test_ratio_approx_general_close_to_exact_for_small_beta():
    # the only step dropped is the first-order kernel Taylor in beta = kappa/M
    exact = cf.ratio_exact_common_gap(128, 8, D, 8, 1.6)
    approx = cf.ratio_approx(1.6, D, 8, 8, "general")
    assert np.max(np.abs(approx - exact) / exact) < 1e-3


def test_ratio_approx_zero_separation_errors():
    for variant in ("general", "simplified", "full_multiplexing", "general_K"):
        with pytest.raises(ValueError, match="zero separation"):
            cf.ratio_approx(0.0, D, 4, 4, variant)


def test_ratio_approx_validates_variant_and_shape():
    with pytest.raises(ValueError, match="variant"):
        cf.ratio_approx(1.0, D, 4, 4, "bogus")
    with pytest.raises(ValueError, match="K = l_bs"):
        cf.ratio_approx(1.0, D, 2, 4, "full_multiplexing")
    assert cf.ratio_approx(1.0, D, 3, 4, "general").shape == (3,)


def test_ratio_approx_simplified_warns_near_singular_bracket():
    with pytest.warns(RuntimeWarning, match="bracket"):
        cf.ratio_approx(1e-5, D, 4, 4, "simplified")


def test_a_quantity_full_multiplexing_reduction():
    for eta in (0.05, 0.2, 0.32):
        kappa = cf.invert_eta_f(eta, D)
        a_val = cf.a_quantity(kappa, D, 1.0, cf.eta_f(kappa, D))
        assert a_val == pytest.approx((1 + eta) / (1 - eta), rel=1e-10)
    # rho = 1, eta = 0 at kappa = 2
    assert cf.a_quantity(2.0, D, 1.0, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_a_quantity_direct_evaluation():
    eta = cf.eta_f(1.6, D)
    expected = 0.5 * (1 - np.sinc(D * 0.5 * 1.6) ** 2) / (1 - eta) ** 2
    assert cf.a_quantity(1.6, D, 0.5, eta) == pytest.approx(expected, rel=1e-12)
    assert cf.a_quantity(1.6, D, 0.5, eta) == pytest.approx(
        0.363925481942143, abs=1e-12)


def test_a_quantity_rejects_unit_eta():
    with pytest.raises(ValueError, match="eta_f = 1"):
        cf.a_quantity(0.0, D, 1.0, 1.0)


def test_omega_boundary_values():
    assert cf.omega(1.0, 2.5) == pytest.approx(0.0, abs=1e-12)
    assert cf.omega(1.0, 3.0) == pytest.approx(0.0, abs=1e-12)


def test_omega_nonnegative_above_two():
    etas = np.arange(-0.22, 1.0001, 0.02)
    for a in (2.05, 2.5, 3.0, 5.0, 9.5):
        vals = [cf.omega(float(e), a) for e in etas]
        assert min(vals) >= -1e-12


# ---------------------------------------------------------------------------
# propositions
# ---------------------------------------------------------------------------

def test_proposition1_threshold_remark_values():
    res = cf.proposition1(10, 0.23)
    assert res.threshold == pytest.approx(9.935483870967742, rel=1e-12)
    assert res.verdict == "full_wins"          # 10 > 9.94
    assert cf.proposition1(9, 0.23).verdict == "partial_wins_or_ties"


def test_proposition1_large_eta_always_partial():
    for l_bs in (2, 16, 1024):
        res = cf.proposition1(l_bs, 0.4)
        assert res.verdict == "partial_wins_or_ties"
        assert res.threshold is None


def test_proposition1_boundary():
    res = cf.proposition1(8, 0.0)
    assert res.verdict == "boundary"
    assert res.threshold is None


def test_proposition1_negative_eta():
    res = cf.proposition1(4, -0.2)
    assert res.threshold == pytest.approx(4 * 1.2 / 1.6, rel=1e-12)
    assert res.verdict == "full_wins"


def test_proposition2_integer_kappa_any_chains():
    res = cf.proposition2(2, 0.5, 2.0, D)
    assert res.verdict == "full_wins"
    assert res.threshold is None


def test_proposition2_reduces_to_proposition1():
    for eta in np.arange(0.02, 0.33, 0.03):
        kappa = cf.invert_eta_f(float(eta), D)
        ef = float(cf.eta_f(kappa, D))
        t1 = cf.proposition1(4, ef).threshold
        t2 = cf.proposition2(4, 1.0, kappa, D).threshold
        assert t2 == pytest.approx(t1, rel=1e-9)


def test_proposition2_infeasible_above_two():
    # kappa = 1 at rho = 1 gives eta ~ 0.64 and A = (1+eta)/(1-eta) > 2
    res = cf.proposition2(1024, 1.0, 1.0, D)
    assert res.a_value > 2
    assert res.verdict == "partial_wins_or_ties"
    assert res.threshold is None
    assert cf.omega(res.eta_f, res.a_value) >= -1e-12


def test_proposition2_matches_ratio_sign_sample():
    rng = np.random.default_rng(9)
    checked = 0
    while checked < 100:
        kappa = float(rng.uniform(0.05, 6.0))
        l_bs = int(rng.integers(1, 65))
        k_ues = int(rng.integers(1, l_bs + 1))
        rho = k_ues / l_bs
        res = cf.proposition2(l_bs, rho, kappa, D)
        if res.a_value is not None and abs(res.a_value - 2.0) <= 0.05:
            continue
        ratio = cf.ratio_approx(kappa, D, max(k_ues, 2), l_bs, "general_K")[0] \
            if k_ues >= 2 else None
        if ratio is None:
            checked += 1
            continue
        if abs(ratio - 1.0) > 1e-9:
            assert (res.verdict == "full_wins") == (ratio > 1.0)
        checked += 1


# ---------------------------------------------------------------------------
# report and upper bound
# ---------------------------------------------------------------------------

def test_closed_form_report_fields():
    cfg = sc.scenario_from_kappa(32, 2, 2, 1.6)
    rep = cf.closed_form_report(cfg)
    assert rep.kappa == pytest.approx(1.6, rel=1e-12)
    assert rep.rho == 1.0
    assert rep.eta_f == pytest.approx(0.23387232094715982, abs=1e-12)
    assert np.allclose(rep.ratio_exact, rep.g_full / rep.g_partial)
    assert rep.prop1_ok is False            # threshold ~ 10.3 > 2 chains
    assert rep.prop2_ok is False
    assert rep.l_bs_threshold == pytest.approx(10.270391860725288, rel=1e-9)


def test_closed_form_report_partial_multiplexing():
    cfg = sc.scenario_from_kappa(64, 4, 2, 2.4)
    rep = cf.closed_form_report(cfg)
    assert rep.prop1_ok is None
    assert rep.rho == 0.5
    assert rep.ratio_approx.shape == (2,)


def test_closed_form_report_rejects_ragged_spacing():
    cfg = sc.ScenarioConfig(M=32, l_bs=4, K=3,
                            ue_angles=(1.2, 1.5, 2.4))
    with pytest.raises(ValueError, match="equally spaced"):
        cf.closed_form_report(cfg)
    single = sc.ScenarioConfig(M=32, l_bs=4, K=1, ue_angles=(1.2,))
    with pytest.raises(ValueError, match="2 UEs"):
        cf.closed_form_report(single)


def test_upper_bound_reduces_to_closed_forms_at_zero_spread():
    cfg = sc.scenario_from_kappa(32, 2, 2, 6.0)
    ub_full = cf.sum_rate_upper_bound(cfg, "full")
    ub_part = cf.sum_rate_upper_bound(cfg, "partial")
    assert np.allclose(ub_full.g, cf.g_full(32, D, cfg.ue_angles), rtol=1e-9)
    assert np.allclose(ub_part.g,
                       cf.g_partial(32, 2, D, cfg.ue_angles), rtol=1e-9)
    assert ub_full.total == pytest.approx(ub_full.per_ue_rate.sum())


def test_upper_bound_single_ue_oracle():
    cfg = sc.ScenarioConfig(M=16, l_bs=2, K=1, ue_angles=(1.0,),
                            spreads=(0.05,), P_t=2.0, noise_var=0.25,
                            pathloss=(1.5,))
    ub = cf.sum_rate_upper_bound(cfg, "full")
    F = pc.analog_full(cfg).matrix
    K1 = ch.covariance(16, D, 1.0, 0.05)
    g = float(np.trace(F.conj().T @ K1 @ F).real)
    assert ub.g[0] == pytest.approx(g, rel=1e-12)
    assert ub.total == pytest.approx(math.log2(1 + g * 2.0 / (1.5 * 0.25)))


def test_upper_bound_rejects_unknown_structure():
    cfg = sc.scenario_from_kappa(16, 2, 2, 2.0)
    with pytest.raises(ValueError, match="structure"):
        cf.sum_rate_upper_bound(cfg, "hybrid")


def test_upper_bound_dominates_monte_carlo_mean():
    cfg = sc.scenario_from_kappa(32, 2, 2, 8.0, spread=0.02, paths=8,
                                 noise_var=0.1)
    plan = mc.SimulationPlan(config=cfg, structure="both",
                             n_realizations=4000, seed=314,
                             channel_mode="approx")
    summaries = mc.run(plan)
    for structure in ("full", "partial"):
        bound = cf.sum_rate_upper_bound(cfg, structure).total
        s = summaries[structure]
        assert bound >= s.mean_sum_rate + 3 * s.stderr_sum_rate
