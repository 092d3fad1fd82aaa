"""One-ring mmWave channel model for a uniform linear array.

Provides the ULA steering vector, random path draws (uniform AOD offsets
around each UE's central angle, equal-power complex Gaussian path gains),
exact and small-spread-approximated channel synthesis, and the closed-form
spatial covariance of the approximated steering vector.

Channel matrices are stored with one column per UE, shape (M, K), so that
an analog precoder F (M x K) acts as F.conj().T @ h.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import ScenarioConfig, validate

__all__ = [
    "SteeringVector",
    "PathSet",
    "ChannelRealization",
    "steering_vector",
    "path_rng",
    "draw_paths",
    "synthesize_exact",
    "synthesize_approx",
    "covariance",
]

SteeringVector = np.ndarray  # length-M complex vector, unit-modulus entries


@dataclass(frozen=True)
class PathSet:
    """Random propagation paths for one UE: AOD offsets and complex gains."""

    aod_offsets: np.ndarray   # L offsets, uniform on [-spread, spread]
    gains: np.ndarray         # L circularly-symmetric gains, variance 1/L


@dataclass(frozen=True)
class ChannelRealization:
    """Per-UE channel vectors for one draw; `mode` records the synthesis used."""

    vectors: np.ndarray       # (M, K) complex, column i is UE i's channel
    mode: str                 # "exact" or "approx"


def steering_vector(m: int, d: float, theta: float) -> np.ndarray:
    """ULA array response toward angle theta.

    Entry n (0-based) is exp(-j 2 pi n d cos(theta)); the first entry is 1
    and every entry has unit modulus.
    """
    if m < 1:
        raise ValueError(f"array size must be >= 1, got {m}")
    return np.exp(-2j * np.pi * np.arange(m) * d * np.cos(theta))


def path_rng(seed: int, realization: int, ue: int) -> np.random.Generator:
    """Child random stream for one (realization, UE) pair.

    Streams are derived from the master seed alone, so draws are bitwise
    reproducible no matter how realizations are distributed over workers.
    """
    return np.random.Generator(np.random.PCG64(
        np.random.SeedSequence((seed, realization, ue))))


def draw_paths(spread: float, n_paths: int, rng: np.random.Generator) -> PathSet:
    """Draw one UE's path set.

    Offsets are uniform on [-spread, spread].  Gains are CN(0, 1/L): two
    independent real Gaussians per path, each with variance 1/(2L).  Offsets
    are drawn before gains; keep that order for stream compatibility.
    """
    if n_paths < 1:
        raise ValueError(f"n_paths must be >= 1, got {n_paths}")
    if spread < 0:
        raise ValueError(f"spread must be >= 0, got {spread}")
    offsets = rng.uniform(-spread, spread, n_paths)
    re = rng.standard_normal(n_paths)
    im = rng.standard_normal(n_paths)
    gains = (re + 1j * im) * np.sqrt(0.5 / n_paths)
    return PathSet(aod_offsets=offsets, gains=gains)


def _synthesize(config: ScenarioConfig, paths, mode: str) -> ChannelRealization:
    validate(config)
    if len(paths) != config.K:
        raise ValueError(f"expected {config.K} path sets, got {len(paths)}")
    idx = np.arange(config.M)[:, None]
    h = np.empty((config.M, config.K), dtype=complex)
    for i, ps in enumerate(paths):
        theta = config.ue_angles[i]
        if mode == "exact":
            cosines = np.cos(theta + ps.aod_offsets)
        else:
            cosines = np.cos(theta) - np.sin(theta) * ps.aod_offsets
        phases = np.exp(-2j * np.pi * idx * config.d * cosines[None, :])
        h[:, i] = (phases @ ps.gains) / np.sqrt(config.pathloss[i])
    return ChannelRealization(vectors=h, mode=mode)


def synthesize_exact(config: ScenarioConfig, paths) -> ChannelRealization:
    """Sum the path contributions with the exact per-path AODs.

    h_i(n) = (1/sqrt(alpha_i)) sum_l a_il exp(-j 2 pi n d cos(theta_i + offset_il)).
    """
    return _synthesize(config, paths, "exact")


def synthesize_approx(config: ScenarioConfig, paths) -> ChannelRealization:
    """Small-spread synthesis: cos(theta + offset) ~ cos(theta) - sin(theta) offset.

    Coincides with synthesize_exact when every offset is zero.
    """
    return _synthesize(config, paths, "approx")


def covariance(m: int, d: float, theta: float, spread: float) -> np.ndarray:
    """Spatial covariance of the small-spread steering vector.

    Entry (p, q) equals exp(j 2 pi (q - p) d cos(theta)) weighted by the
    sinc factor sin(x)/x with x = 2 pi d (p - q) sin(theta) spread; the
    diagonal is exactly 1 via the sinc limit.  Hermitian PSD by construction.
    """
    if m < 1:
        raise ValueError(f"array size must be >= 1, got {m}")
    idx = np.arange(m)
    diff = idx[None, :] - idx[:, None]          # q - p
    phase = np.exp(2j * np.pi * d * diff * np.cos(theta))
    # np.sinc(x) = sin(pi x)/(pi x), so feed it 2 d (p - q) sin(theta) spread
    damp = np.sinc(2.0 * d * (-diff) * np.sin(theta) * spread)
    return phase * damp
