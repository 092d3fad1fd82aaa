"""Closed-form precoded channel gains and the regime-decision algebra.

Everything here is deterministic: Dirichlet kernels, the per-UE gains of the
full- and partial-connection structures built from them, their proximity
regime (all UE pairs separated by the same cosine gap) specializations, the
sinc-based approximation chain, and the two operating-region propositions
that decide which analog structure wins.

Conventions: angles in radians, `d` in wavelengths, `kappa` is the
normalized angle separation (adjacent-UE cosine gap times the array size M),
rates in bits via log2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .channel import covariance
from .scenario import ScenarioConfig, validate

__all__ = [
    "dirichlet",
    "eta_f",
    "eta_p",
    "invert_eta_f",
    "g_full",
    "g_partial",
    "ratio_exact",
    "g_full_common_gap",
    "g_partial_common_gap",
    "ratio_exact_common_gap",
    "ratio_approx",
    "full_multiplexing_ratio",
    "a_quantity",
    "omega",
    "proposition1",
    "proposition2",
    "PropositionResult",
    "ClosedFormReport",
    "closed_form_report",
    "UpperBoundReport",
    "sum_rate_upper_bound",
    "SINC_MIN_ARG",
    "ETA_F_MIN",
]

# Location and value of the global minimum of sin(pi t)/(pi t) over t > 0;
# eta_f ranges over (ETA_F_MIN, 1] on the first monotone branch.
SINC_MIN_ARG = 1.4302966531242027
ETA_F_MIN = -0.21723362821122165

_RATIO_FLOOR = 1e-12       # partial gain below this makes the ratio undefined
_BOUNDARY_TOL = 1e-12      # |eta_f| below this counts as the ratio = 1 boundary


def dirichlet(m: int, d: float, x) -> float | np.ndarray:
    """Dirichlet kernel Z_m(x) = sin(pi d m x) / sin(pi d x).

    Removable singularities (every x with sin(pi d x) = 0) are evaluated by
    their limits: Z_m(0) = m and Z_m(n/d) = m * (-1)^(n (m - 1)).  Reducing
    t = d x to its nearest-integer offset keeps the evaluation exact and
    singularity-free everywhere.
    """
    t = d * np.asarray(x, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    n = np.round(t)
    t0 = t - n
    sign = np.where((n.astype(np.int64) * (m - 1)) % 2 == 0, 1.0, -1.0)
    out = sign * m * np.sinc(m * t0) / np.sinc(t0)
    return float(out[0]) if scalar else out.reshape(np.shape(np.asarray(x)))


def eta_f(kappa, d: float):
    """Full-structure beam-pattern factor sin(pi d kappa) / (pi d kappa)."""
    return np.sinc(d * np.asarray(kappa, dtype=float))[()]


def eta_p(kappa, d: float, l_bs: int):
    """Partial-structure factor l_bs sin(pi d kappa / l_bs) / (pi d kappa)."""
    return np.sinc(d * np.asarray(kappa, dtype=float) / l_bs)[()]


def invert_eta_f(target: float, d: float) -> float:
    """Kappa on the first monotone branch with eta_f(kappa, d) = target.

    The branch covers d * kappa in (0, 1.43030) where the sinc decreases
    from 1 to its global minimum -0.21723; targets outside that open range
    are rejected.
    """
    if not ETA_F_MIN < target < 1.0:
        raise ValueError(
            f"eta_f target {target} outside the attainable range "
            f"({ETA_F_MIN:.5f}, 1) of the monotone branch")
    t = brentq(lambda u: np.sinc(u) - target, 1e-12, SINC_MIN_ARG,
               xtol=1e-15, rtol=1e-15)
    return t / d


def _pairwise_kernels(m: int, d: float, ue_angles) -> tuple[np.ndarray, np.ndarray]:
    cosines = np.cos(np.asarray(ue_angles, dtype=float))
    gaps = cosines[:, None] - cosines[None, :]      # gaps[i, j] = cos_i - cos_j
    return cosines, dirichlet(m, d, gaps)


def g_full(m: int, d: float, ue_angles) -> np.ndarray:
    """Per-UE gain of the full-connection structure from the central angles.

    Direct term (1/m) sum_i Z_m(beta_ik)^2 minus the averaged zero-forcing
    loss sum over interfering UEs j of
    |sum_i Z_m(beta_ki) Z_m(beta_ij)|^2 / (m sum_i Z_m(beta_ij)^2).
    """
    _, Z = _pairwise_kernels(m, d, ue_angles)
    n_ue = Z.shape[0]
    direct = (Z ** 2).sum(axis=0) / m
    if n_ue == 1:
        return direct
    out = np.empty(n_ue)
    for k in range(n_ue):
        loss = 0.0
        for j in range(n_ue):
            if j == k:
                continue
            s = float(Z[k, :] @ Z[:, j])
            loss += s * s / (m * float((Z[:, j] ** 2).sum()))
        out[k] = direct[k] - loss / (n_ue - 1)
    return out


def g_partial(m: int, l_bs: int, d: float, ue_angles) -> np.ndarray:
    """Per-UE gain of the partial-connection structure.

    Same shape as g_full but with M_P = m / l_bs kernels, and the cross sum
    keeps the per-subarray phase offsets exp(j 2 pi d i M_P (cos_k - cos_j))
    inside the squared magnitude.
    """
    if m % l_bs != 0:
        raise ValueError(f"M not divisible by l_bs (M={m}, l_bs={l_bs})")
    m_p = m // l_bs
    cosines, Z = _pairwise_kernels(m_p, d, ue_angles)
    n_ue = Z.shape[0]
    direct = (Z ** 2).sum(axis=0) / m_p
    if n_ue == 1:
        return direct
    idx = np.arange(n_ue)
    out = np.empty(n_ue)
    for k in range(n_ue):
        loss = 0.0
        for j in range(n_ue):
            if j == k:
                continue
            phases = np.exp(2j * np.pi * d * idx * m_p * (cosines[k] - cosines[j]))
            s = abs(np.sum(phases * Z[k, :] * Z[:, j])) ** 2
            loss += s / (m_p * float((Z[:, j] ** 2).sum()))
        out[k] = direct[k] - loss / (n_ue - 1)
    return out


def ratio_exact(m: int, l_bs: int, d: float, ue_angles) -> np.ndarray:
    """Per-UE gain ratio full / partial from the central angles."""
    gp = g_partial(m, l_bs, d, ue_angles)
    if np.any(gp < _RATIO_FLOOR):
        k = int(np.argmin(gp)) + 1
        raise ValueError(
            f"partial-connection gain of UE {k} is below {_RATIO_FLOOR:g}; "
            f"ratio undefined")
    return g_full(m, d, ue_angles) / gp


def g_full_common_gap(m: int, d: float, n_ues: int, kappa: float) -> float:
    """Full-structure gain in the proximity regime.

    Idealizes every UE pair as separated by the same cosine gap
    beta = kappa / m, under which the general expression collapses to
    (m - z)^2 [(2K - 3) z^2 + 2 m z + m^2] / (m [m^2 + (K - 1) z^2])
    with the exact kernel z = Z_m(beta).  UE-independent.
    """
    if n_ues < 2:
        raise ValueError("common-gap forms need at least 2 UEs")
    z = dirichlet(m, d, kappa / m)
    return float((m - z) ** 2 * ((2 * n_ues - 3) * z ** 2 + 2 * m * z + m ** 2)
                 / (m * (m ** 2 + (n_ues - 1) * z ** 2)))


def _f_interference(x: float, d: float, n_ues: int, eta: float) -> np.ndarray:
    """Per-UE phase-alignment factor of the partial cross terms.

    f_k = sum over j != k of
    |e_k + e_j + eta * sum_{i != j,k} e_i|^2 with e_i = exp(j 2 pi d i x).
    """
    e = np.exp(2j * np.pi * d * x * np.arange(n_ues))
    total = e.sum()
    out = np.empty(n_ues)
    for k in range(n_ues):
        acc = 0.0
        for j in range(n_ues):
            if j == k:
                continue
            acc += abs(e[k] + e[j] + eta * (total - e[k] - e[j])) ** 2
        out[k] = acc
    return out


def g_partial_common_gap(m: int, l_bs: int, d: float, n_ues: int,
                         kappa: float) -> np.ndarray:
    """Partial-structure gain in the proximity regime (common cosine gap).

    Uses the exact subarray kernel through eta_hat = Z_{M_P}(kappa/m) / M_P:
    g_k = M_P [1 + (K-1) eta_hat^2]
          - M_P eta_hat^2 f_k(kappa/l_bs) / ((K-1) [1 + (K-1) eta_hat^2]).
    Per-UE because the phase-alignment factor f_k depends on the UE index.
    """
    if n_ues < 2:
        raise ValueError("common-gap forms need at least 2 UEs")
    if m % l_bs != 0:
        raise ValueError(f"M not divisible by l_bs (M={m}, l_bs={l_bs})")
    m_p = m // l_bs
    eta_hat = dirichlet(m_p, d, kappa / m) / m_p
    f = _f_interference(kappa / l_bs, d, n_ues, eta_hat)
    base = 1.0 + (n_ues - 1) * eta_hat ** 2
    return m_p * base - (m_p * eta_hat ** 2 / (n_ues - 1)) * f / base


def ratio_exact_common_gap(m: int, l_bs: int, d: float, n_ues: int,
                           kappa: float) -> np.ndarray:
    """Per-UE full / partial ratio in the proximity regime."""
    gp = g_partial_common_gap(m, l_bs, d, n_ues, kappa)
    if np.any(gp < _RATIO_FLOOR):
        raise ValueError("partial-connection gain vanished; ratio undefined")
    return g_full_common_gap(m, d, n_ues, kappa) / gp


def full_multiplexing_ratio(eta_f_value: float, l_bs: int) -> float:
    """K = l_bs approximate ratio parameterized by eta_f directly.

    (eta - 1)^2 [(2 l_bs - 3) eta^2 + 2 eta + 1] / ([1 + (l_bs - 1) eta^2] (1 - eta^2)),
    which equals 1 at eta_f = 0 and is undefined at |eta_f| = 1.
    """
    ef = eta_f_value
    if abs(abs(ef) - 1.0) < 1e-15:
        raise ValueError("full-multiplexing ratio undefined at |eta_f| = 1")
    return ((ef - 1.0) ** 2 * ((2 * l_bs - 3) * ef ** 2 + 2 * ef + 1.0)
            / ((1.0 + (l_bs - 1) * ef ** 2) * (1.0 - ef ** 2)))


def ratio_approx(kappa: float, d: float, n_ues: int, l_bs: int,
                 variant: str) -> np.ndarray:
    """Approximate full / partial gain ratio, selectable by derivation stage.

    variant:
      "general"           eta-based numerator over the exact-phase-sum
                          denominator (keeps the per-UE factor f_k);
      "simplified"        f_k replaced by its geometric-sum limit;
      "full_multiplexing" the K = l_bs reduction of "simplified";
      "general_K"         the loading-ratio form in rho = K / l_bs.

    All variants are undefined at kappa = 0 (coinciding UEs).
    Returns one value per UE (identical across UEs except for "general").
    """
    if n_ues < 2:
        raise ValueError("ratio_approx needs at least 2 UEs")
    if kappa == 0:
        raise ValueError("undefined at zero separation")
    ef = float(eta_f(kappa, d))
    numerator = (ef - 1.0) ** 2 * ((2 * n_ues - 3) * ef ** 2 + 2 * ef + 1.0)
    shared = 1.0 + (n_ues - 1) * ef ** 2

    if variant == "general":
        ep = float(eta_p(kappa, d, l_bs))
        f = _f_interference(kappa / l_bs, d, n_ues, ep)
        base = 1.0 + (n_ues - 1) * ep ** 2
        denom = shared * (base - ep ** 2 * f / ((n_ues - 1) * base))
        return l_bs * numerator / denom
    if variant == "simplified":
        bracket = n_ues - l_bs ** 2 * math.sin(
            math.pi * d * n_ues * kappa / l_bs) ** 2 / (n_ues * (math.pi * d * kappa) ** 2)
        if abs(bracket) < 1e-9:
            warnings.warn(
                f"simplified-ratio denominator bracket {bracket:.3g} is below "
                f"1e-9; value unreliable", RuntimeWarning, stacklevel=2)
        return np.full(n_ues, l_bs * numerator / (shared * bracket))
    if variant == "full_multiplexing":
        if n_ues != l_bs:
            raise ValueError(
                f"full_multiplexing variant needs K = l_bs, got K={n_ues}, "
                f"l_bs={l_bs}")
        return np.full(n_ues, full_multiplexing_ratio(ef, l_bs))
    if variant == "general_K":
        rho = n_ues / l_bs
        s = float(np.sinc(d * rho * kappa))
        return np.full(n_ues, numerator / (rho * shared * (1.0 - s ** 2)))
    raise ValueError(f"unknown ratio_approx variant {variant!r}")


def a_quantity(kappa: float, d: float, rho: float, eta_f_value: float) -> float:
    """Composite regime quantity rho (1 - sinc(d rho kappa)^2) / (1 - eta_f)^2."""
    if abs(1.0 - eta_f_value) < 1e-15:
        raise ValueError("a_quantity undefined at eta_f = 1 (zero separation)")
    s = float(np.sinc(d * rho * kappa))
    return rho * (1.0 - s ** 2) / (1.0 - eta_f_value) ** 2


def omega(eta_f_value: float, a_value: float) -> float:
    """Feasibility polynomial (3 - A) eta^2 - 2 eta - 1 + A.

    Non-negative over the attainable eta_f range whenever A > 2, which makes
    the full-connection operating condition infeasible there.
    """
    return (3.0 - a_value) * eta_f_value ** 2 - 2.0 * eta_f_value - 1.0 + a_value


@dataclass(frozen=True)
class PropositionResult:
    """Outcome of an operating-region decision.

    verdict is one of "full_wins", "partial_wins_or_ties", "boundary"
    (the boundary verdict means the approximate ratio equals 1 exactly).
    threshold is the minimum RF-chain count that favors the full structure,
    or None when no RF-chain count does.
    """

    verdict: str
    threshold: float | None
    eta_f: float
    rho: float
    a_value: float | None = None


def proposition1(l_bs: int, eta_f_value: float) -> PropositionResult:
    """Full-multiplexing decision (K = l_bs).

    The full-connection structure wins iff eta_f < 1/3, eta_f != 0, and
    l_bs strictly exceeds 4 (1 - eta_f) / (1 - 3 eta_f).  At eta_f = 0 the
    ratio equals 1 for every l_bs (boundary); for eta_f >= 1/3 the partial
    structure wins or ties regardless of l_bs.
    """
    if abs(eta_f_value) < _BOUNDARY_TOL:
        return PropositionResult("boundary", None, eta_f_value, 1.0)
    if eta_f_value >= 1.0 / 3.0:
        return PropositionResult("partial_wins_or_ties", None, eta_f_value, 1.0)
    threshold = 4.0 * (1.0 - eta_f_value) / (1.0 - 3.0 * eta_f_value)
    verdict = "full_wins" if l_bs > threshold else "partial_wins_or_ties"
    return PropositionResult(verdict, threshold, eta_f_value, 1.0)


def proposition2(l_bs: int, rho: float, kappa: float, d: float) -> PropositionResult:
    """General decision for K <= l_bs via the loading ratio rho = K / l_bs.

    At kappa = n/d (positive integer n, i.e. eta_f = 0) the full structure
    wins for any l_bs.  Otherwise, with A < 2 it wins iff l_bs >= omega /
    (eta_f^2 rho (2 - A)); with A >= 2 no RF-chain count makes it win.
    """
    ef = float(eta_f(kappa, d))
    t = d * kappa
    if abs(t - round(t)) < 1e-12 and round(t) >= 1:
        a_val = a_quantity(kappa, d, rho, ef)
        return PropositionResult("full_wins", None, ef, rho, a_val)
    a_val = a_quantity(kappa, d, rho, ef)
    if a_val < 2.0:
        threshold = omega(ef, a_val) / (ef ** 2 * rho * (2.0 - a_val))
        verdict = "full_wins" if l_bs >= threshold else "partial_wins_or_ties"
        return PropositionResult(verdict, threshold, ef, rho, a_val)
    return PropositionResult("partial_wins_or_ties", None, ef, rho, a_val)


@dataclass(frozen=True)
class ClosedFormReport:
    """All closed-form quantities for one equally-spaced scenario."""

    g_full: np.ndarray
    g_partial: np.ndarray
    ratio_exact: np.ndarray
    ratio_approx: np.ndarray
    kappa: float
    eta_f: float
    eta_p: float
    a_value: float
    rho: float
    prop1_ok: bool | None        # None when K != l_bs (not in full multiplexing)
    prop2_ok: bool
    l_bs_threshold: float | None


def closed_form_report(config: ScenarioConfig) -> ClosedFormReport:
    """Evaluate gains, ratios, and proposition verdicts for a scenario.

    Requires K >= 2 UEs with equally spaced cosines (kappa is their common
    adjacent gap times M).  The approximate ratio uses the full-multiplexing
    form when K = l_bs and the loading-ratio form otherwise.
    """
    derived = validate(config)
    if config.K < 2:
        raise ValueError("closed_form_report needs at least 2 UEs")
    cosines = np.cos(np.asarray(config.ue_angles))
    gaps = -np.diff(cosines)
    if np.max(np.abs(gaps - gaps.mean())) > 1e-9 * max(abs(gaps.mean()), 1e-9):
        raise ValueError("UE cosines are not equally spaced; kappa undefined")
    kappa = abs(float(gaps.mean())) * config.M

    gf = g_full(config.M, config.d, config.ue_angles)
    gp = g_partial(config.M, config.l_bs, config.d, config.ue_angles)
    rex = ratio_exact(config.M, config.l_bs, config.d, config.ue_angles)
    variant = "full_multiplexing" if config.K == config.l_bs else "general_K"
    rap = ratio_approx(kappa, config.d, config.K, config.l_bs, variant)

    ef = float(eta_f(kappa, config.d))
    ep = float(eta_p(kappa, config.d, config.l_bs))
    p2 = proposition2(config.l_bs, derived.rho, kappa, config.d)
    p1_ok = None
    if config.K == config.l_bs:
        p1_ok = proposition1(config.l_bs, ef).verdict == "full_wins"
    return ClosedFormReport(
        g_full=gf, g_partial=gp, ratio_exact=rex, ratio_approx=rap,
        kappa=kappa, eta_f=ef, eta_p=ep, a_value=p2.a_value, rho=derived.rho,
        prop1_ok=p1_ok, prop2_ok=p2.verdict == "full_wins",
        l_bs_threshold=p2.threshold,
    )


@dataclass(frozen=True)
class UpperBoundReport:
    """Average sum-rate upper bound from the covariance trace expressions."""

    structure: str
    g: np.ndarray               # per-UE trace-form gains
    per_ue_rate: np.ndarray     # log2(1 + g_k p / (alpha_k noise_var))
    total: float                # sum of per-UE terms
    power_scale: float          # deterministic p = P_t / K used in the bound


def sum_rate_upper_bound(config: ScenarioConfig, structure: str) -> UpperBoundReport:
    """Upper bound on the average zero-forcing sum rate for one structure.

    Builds the full spatial covariance of every UE (valid for any angular
    spread, not only the rank-one limit) and evaluates
    g_k = tr(F^H K_k F) - (1/(K-1)) sum_{j != k} tr(F^H K_k F F^H K_j F) / tr(F^H K_j F).

    The power scale is fixed at p = P_t / K: the digital columns are unit
    norm and the partial analog precoder has orthonormal columns, so
    ||F_a F_d||_F^2 = K exactly there and approximately for the full one.
    """
    from .precoding import analog_full, analog_partial

    validate(config)
    if structure == "full":
        F = analog_full(config).matrix
    elif structure == "partial":
        F = analog_partial(config).matrix
    else:
        raise ValueError(f"structure must be 'full' or 'partial', got {structure!r}")

    covs = [covariance(config.M, config.d, th, sp)
            for th, sp in zip(config.ue_angles, config.spreads)]
    projected = [F.conj().T @ Kj @ F for Kj in covs]
    traces = np.array([float(np.trace(P).real) for P in projected])

    g = np.empty(config.K)
    for k in range(config.K):
        loss = 0.0
        for j in range(config.K):
            if j == k:
                continue
            loss += float(np.trace(projected[k] @ projected[j]).real) / traces[j]
        g[k] = traces[k] - (loss / (config.K - 1) if config.K > 1 else 0.0)

    power_scale = config.P_t / config.K
    alpha = np.asarray(config.pathloss)
    per_ue = np.log2(1.0 + g * power_scale / (alpha * config.noise_var))
    return UpperBoundReport(structure=structure, g=g, per_ue_rate=per_ue,
                            total=float(per_ue.sum()), power_scale=power_scale)
