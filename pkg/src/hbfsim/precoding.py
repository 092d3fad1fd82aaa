"""Analog precoders, zero-forcing digital precoding, and effective gains.

The analog stage points one beam per scheduled UE: either full-connection
(each column is a normalized M-element steering vector) or partial-connection
(each column is a normalized M_P-element steering vector confined to that
UE's subarray).  Both are stored as M x K matrices; with K < l_bs the unused
RF chains would contribute all-zero columns and are dropped, which leaves
effective channels, Frobenius norms, and gains unchanged.

The digital stage is zero-forcing: UE i's column is the normalized projection
of its effective channel onto the orthogonal complement of the other UEs'
effective channels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, steering_vector
from .scenario import ScenarioConfig, validate

__all__ = [
    "AnalogPrecoder",
    "DigitalPrecoder",
    "GainReport",
    "RankDeficiencyError",
    "analog_full",
    "analog_partial",
    "effective_channel",
    "zf_precoder",
    "gains_and_rate",
]

# Smallest-singular-value ratio below which ZF is declared undefined
# (coinciding UE angles make the effective channels collinear).
RANK_TOL = 1e-10


class RankDeficiencyError(ValueError):
    """Zero-forcing is undefined: effective channels are numerically dependent."""


@dataclass(frozen=True)
class AnalogPrecoder:
    matrix: np.ndarray    # (M, K) complex, unit-norm columns
    structure: str        # "full" or "partial"


@dataclass(frozen=True)
class DigitalPrecoder:
    matrix: np.ndarray    # (K, K) complex, unit-norm zero-forcing columns


@dataclass(frozen=True)
class GainReport:
    gains: np.ndarray     # (K,) per-UE effective gains |hbar_i^H f_i|^2
    power_scale: float    # p = P_t / ||F_a F_d||_F^2
    sum_rate: float       # sum_k log2(1 + gains_k p / noise_var), bits/s/Hz


def analog_full(config: ScenarioConfig) -> AnalogPrecoder:
    """Full-connection analog precoder: column k = b_M(theta_k) / sqrt(M)."""
    validate(config)
    cols = [steering_vector(config.M, config.d, th) / np.sqrt(config.M)
            for th in config.ue_angles]
    return AnalogPrecoder(matrix=np.column_stack(cols), structure="full")


def analog_partial(config: ScenarioConfig) -> AnalogPrecoder:
    """Partial-connection analog precoder.

    Column k is zero except on subarray k's rows, where it equals
    b_{M_P}(theta_k) / sqrt(M_P).  With K < l_bs the last l_bs - K subarrays
    drive no UE and their antennas stay unused.
    """
    derived = validate(config)
    m_p = derived.m_p
    F = np.zeros((config.M, config.K), dtype=complex)
    for k, th in enumerate(config.ue_angles):
        F[k * m_p:(k + 1) * m_p, k] = steering_vector(m_p, config.d, th) / np.sqrt(m_p)
    return AnalogPrecoder(matrix=F, structure="partial")


def effective_channel(f_a: AnalogPrecoder, channel: ChannelRealization) -> np.ndarray:
    """Analog-precoded effective channels, one column per UE: F_a^H h_i."""
    F = f_a.matrix
    h = channel.vectors
    if F.shape[0] != h.shape[0]:
        raise ValueError(
            f"precoder has {F.shape[0]} rows but channel has {h.shape[0]}")
    return F.conj().T @ h


def zf_precoder(hbar: np.ndarray) -> DigitalPrecoder:
    """Zero-forcing digital precoder from the stacked effective channels.

    `hbar` is (K, K) with column i = UE i's effective channel.  Column i of
    the result is the unit-norm projection of hbar[:, i] onto the null space
    of the other columns, computed through an orthonormal basis of their
    span rather than the explicit Gram inverse.

    Raises RankDeficiencyError when the other UEs' effective channels are
    rank deficient, or when UE i's effective channel lies in their span
    (both happen with coinciding UE angles).
    """
    dim, n_ue = hbar.shape
    F = np.empty((dim, n_ue), dtype=complex)
    for i in range(n_ue):
        others = np.delete(hbar, i, axis=1)
        v = hbar[:, i].astype(complex)
        if others.shape[1] == 1:
            # a single interferer spans a line; no SVD needed
            scale = np.linalg.norm(others[:, 0])
            if scale == 0.0:
                raise RankDeficiencyError(
                    f"effective channel of the UE paired with UE {i + 1} "
                    f"is zero; zero-forcing undefined")
            basis = others / scale
            v = v - basis[:, 0] * np.vdot(basis[:, 0], v)
        elif others.shape[1] > 1:
            basis, sv, _ = np.linalg.svd(others, full_matrices=False)
            if sv[-1] < RANK_TOL * sv[0]:
                raise RankDeficiencyError(
                    f"effective channels of UEs other than UE {i + 1} are rank "
                    f"deficient (singular value ratio {sv[-1] / sv[0]:.3g})")
            v = v - basis @ (basis.conj().T @ v)
        norm = np.linalg.norm(v)
        if norm < RANK_TOL * np.linalg.norm(hbar[:, i]):
            raise RankDeficiencyError(
                f"effective channel of UE {i + 1} lies in the span of the "
                f"other UEs' effective channels")
        F[:, i] = v / norm
    return DigitalPrecoder(matrix=F)


def gains_and_rate(f_a: AnalogPrecoder, f_d: DigitalPrecoder,
                   hbar: np.ndarray, config: ScenarioConfig) -> GainReport:
    """Per-UE effective gains, power scale, and zero-forcing sum rate.

    gains_i = |hbar_i^H f_{d,i}|^2, p = P_t / ||F_a F_d||_F^2, and the sum
    rate counts log2(1 + gains_k p / noise_var) over UEs (interference is
    nulled exactly by construction).
    """
    Fd = f_d.matrix
    if hbar.shape != Fd.shape:
        raise ValueError(f"hbar {hbar.shape} and F_d {Fd.shape} shapes differ")
    gains = np.abs(np.einsum("ki,ki->i", hbar.conj(), Fd)) ** 2
    power_scale = config.P_t / np.linalg.norm(f_a.matrix @ Fd, "fro") ** 2
    sum_rate = float(np.sum(np.log2(1.0 + gains * power_scale / config.noise_var)))
    return GainReport(gains=gains, power_scale=float(power_scale), sum_rate=sum_rate)
