"""Experiment configuration: value types, validation, and UE angle placement.

A scenario pins down everything the channel, precoding, closed-form and
Monte Carlo layers need: array geometry, RF chains, the scheduled UEs with
their central angles-of-departure, angular spreads, path counts, large-scale
losses, and the power/noise budget.  All types are immutable and safe to
share across workers.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

__all__ = [
    "ScenarioConfig",
    "DerivedScenario",
    "validate",
    "angles_from_kappa",
    "centered_reference_angle",
    "scenario_from_kappa",
    "config_digest",
]


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one downlink experiment.

    Angles are radians, powers are linear (not dB), spacing is in wavelengths.
    Per-UE lists (`ue_angles`, `spreads`, `num_paths`, `pathloss`) must all
    have length K; `spreads`, `num_paths`, and `pathloss` default to 0, 1,
    and 1 for every UE.
    """

    M: int                      # BS antenna elements
    l_bs: int                   # RF chains
    K: int                      # scheduled single-antenna UEs
    ue_angles: tuple            # central AODs theta_k, strictly inside (0, pi)
    d: float = 0.5              # antenna spacing in wavelengths
    P_t: float = 1.0            # total transmit power
    noise_var: float = 1.0      # receiver noise variance
    spreads: tuple = ()         # angular spreads Delta_k >= 0
    num_paths: tuple = ()       # path counts L_k >= 1
    pathloss: tuple = ()        # large-scale losses alpha_k > 0

    def __post_init__(self):
        object.__setattr__(self, "ue_angles", tuple(float(a) for a in self.ue_angles))
        spreads = self.spreads if len(self.spreads) else (0.0,) * self.K
        paths = self.num_paths if len(self.num_paths) else (1,) * self.K
        loss = self.pathloss if len(self.pathloss) else (1.0,) * self.K
        object.__setattr__(self, "spreads", tuple(float(s) for s in spreads))
        object.__setattr__(self, "num_paths", tuple(int(n) for n in paths))
        object.__setattr__(self, "pathloss", tuple(float(a) for a in loss))


@dataclass(frozen=True)
class DerivedScenario:
    """Quantities derived from a valid ScenarioConfig."""

    m_p: int        # antennas per subarray, M / l_bs
    rho: float      # loading ratio K / l_bs, in [1/l_bs, 1]


def validate(config: ScenarioConfig) -> DerivedScenario:
    """Check every scenario invariant and return the derived quantities.

    Raises ValueError naming the offending field on the first violation.
    Pure and idempotent; safe to call repeatedly.
    """
    c = config
    for name, value in (("M", c.M), ("l_bs", c.l_bs), ("K", c.K)):
        if not isinstance(value, (int, np.integer)) or value < 1:
            raise ValueError(f"{name} must be a positive integer, got {value!r}")
    for name, value in (("d", c.d), ("P_t", c.P_t), ("noise_var", c.noise_var)):
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value!r}")
    if c.K > c.l_bs:
        raise ValueError(f"K={c.K} exceeds l_bs={c.l_bs}; at most one UE per RF chain")
    if c.M % c.l_bs != 0:
        raise ValueError(f"M not divisible by l_bs (M={c.M}, l_bs={c.l_bs})")
    for name, seq in (
        ("ue_angles", c.ue_angles),
        ("spreads", c.spreads),
        ("num_paths", c.num_paths),
        ("pathloss", c.pathloss),
    ):
        if len(seq) != c.K:
            raise ValueError(f"{name} has length {len(seq)}, expected K={c.K}")
    for k, theta in enumerate(c.ue_angles, start=1):
        if not 0.0 < theta < math.pi:
            raise ValueError(
                f"ue_angles[{k}] = {theta!r} must lie strictly inside (0, pi)"
            )
    for k, spread in enumerate(c.spreads, start=1):
        if spread < 0:
            raise ValueError(f"spreads[{k}] = {spread!r} must be non-negative")
    for k, n in enumerate(c.num_paths, start=1):
        if n < 1:
            raise ValueError(f"num_paths[{k}] = {n!r} must be a positive integer")
    for k, alpha in enumerate(c.pathloss, start=1):
        if not alpha > 0:
            raise ValueError(f"pathloss[{k}] = {alpha!r} must be positive")
    return DerivedScenario(m_p=c.M // c.l_bs, rho=c.K / c.l_bs)


def angles_from_kappa(kappa: float, K: int, M: int,
                      theta_ref: float = math.pi / 2) -> np.ndarray:
    """Place K central angles with equal cosine-domain spacing kappa / M.

    cos(theta_k) = cos(theta_ref) - (k - 1) * kappa / M for k = 1..K, so
    adjacent UEs are separated by the normalized angle separation kappa
    (cosine gap scaled by the array size M).
    """
    cosines = math.cos(theta_ref) - np.arange(K) * (kappa / M)
    for k, cval in enumerate(cosines, start=1):
        if not -1.0 <= cval <= 1.0:
            raise ValueError(
                f"cos(theta_{k}) = {cval:.6g} falls outside [-1, 1] "
                f"(kappa={kappa}, M={M})"
            )
    return np.arccos(cosines)


def centered_reference_angle(kappa: float, K: int, M: int) -> float:
    """Reference angle that centers the K UE cosines around zero.

    With theta_ref = arccos((K - 1) * kappa / (2 M)) the cosine ladder from
    angles_from_kappa spans [-(K-1)kappa/2M, +(K-1)kappa/2M], which keeps
    wide sweeps inside the valid cosine range when the pi/2 anchor cannot.
    """
    c0 = (K - 1) * kappa / (2.0 * M)
    if not 0.0 <= c0 <= 1.0:
        raise ValueError(
            f"cannot center {K} UEs with kappa={kappa} on an M={M} array: "
            f"required edge cosine {c0:.6g} exceeds 1"
        )
    return math.acos(c0)


def scenario_from_kappa(M: int, l_bs: int, K: int, kappa: float, *,
                        d: float = 0.5, P_t: float = 1.0, noise_var: float = 1.0,
                        spread: float = 0.0, paths: int = 1, pathloss: float = 1.0,
                        theta_ref: float | None = None) -> ScenarioConfig:
    """Convenience builder: equally spaced UEs and uniform per-UE parameters."""
    if theta_ref is None:
        theta_ref = math.pi / 2
    angles = angles_from_kappa(kappa, K, M, theta_ref)
    return ScenarioConfig(
        M=M, l_bs=l_bs, K=K, ue_angles=tuple(angles), d=d, P_t=P_t,
        noise_var=noise_var, spreads=(spread,) * K, num_paths=(paths,) * K,
        pathloss=(pathloss,) * K,
    )


def config_digest(config: ScenarioConfig) -> str:
    """Short stable hash of a scenario, used in reproducibility metadata."""
    parts = [
        f"M={config.M}", f"l_bs={config.l_bs}", f"K={config.K}",
        f"d={config.d!r}", f"P_t={config.P_t!r}", f"noise_var={config.noise_var!r}",
        "angles=" + ",".join(repr(a) for a in config.ue_angles),
        "spreads=" + ",".join(repr(s) for s in config.spreads),
        "paths=" + ",".join(repr(n) for n in config.num_paths),
        "loss=" + ",".join(repr(a) for a in config.pathloss),
    ]
    return hashlib.sha256(";".join(parts).encode()).hexdigest()[:12]
