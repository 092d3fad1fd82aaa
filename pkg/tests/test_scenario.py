import math

import numpy as np
import pytest

from hbfsim import scenario as sc


def make_config(**overrides):
    base = dict(M=32, l_bs=2, K=2,
                ue_angles=(math.pi / 2, math.acos(-0.25)))
    base.update(overrides)
    return sc.ScenarioConfig(**base)


def test_validate_basic_division():
    derived = sc.validate(make_config())
    assert derived.m_p == 16
    assert derived.rho == 1.0


def test_validate_partial_multiplexing_shape():
    angles = tuple(sc.angles_from_kappa(1.6, 8, 256))
    cfg = make_config(M=256, l_bs=16, K=8, ue_angles=angles)
    derived = sc.validate(cfg)
    assert derived.m_p == 16
    assert derived.rho == 0.5


def test_validate_rejects_nondivisible_m():
    with pytest.raises(ValueError, match="not divisible"):
        sc.validate(make_config(M=33))


def test_validate_rejects_too_many_ues():
    with pytest.raises(ValueError, match="K=3 exceeds l_bs=2"):
        sc.validate(make_config(K=3, ue_angles=(1.0, 1.1, 1.2)))


@pytest.mark.parametrize("bad", [0.0, math.pi, -0.2, 3.5])
def test_validate_rejects_axis_angles(bad):
    with pytest.raises(ValueError, match="ue_angles"):
        sc.validate(make_config(ue_angles=(1.0, bad)))


@pytest.mark.parametrize("field,value", [
    ("spreads", (0.0, 0.1, 0.1)),
    ("num_paths", (1,)),
    ("pathloss", (1.0, 1.0, 1.0, 1.0)),
    ("ue_angles", (1.0,)),
])
def test_validate_rejects_length_mismatch(field, value):
    with pytest.raises(ValueError, match=field):
        sc.validate(make_config(**{field: value}))


@pytest.mark.parametrize("field,value", [
    ("M", 0), ("l_bs", -1), ("K", 0), ("d", 0.0), ("P_t", -2.0),
    ("noise_var", 0.0),
])
def test_validate_rejects_nonpositive_scalars(field, value):
    with pytest.raises(ValueError, match=field):
        sc.validate(make_config(**{field: value}))


def test_validate_rejects_bad_per_ue_values():
    with pytest.raises(ValueError, match="spreads"):
        sc.validate(make_config(spreads=(0.0, -0.1)))
    with pytest.raises(ValueError, match="num_paths"):
        sc.validate(make_config(num_paths=(1, 0)))
    with pytest.raises(ValueError, match="pathloss"):
        sc.validate(make_config(pathloss=(1.0, 0.0)))


def test_validate_is_idempotent():
    cfg = make_config()
    assert sc.validate(cfg) == sc.validate(cfg)


def test_angles_zero_separation():
    angles = sc.angles_from_kappa(0.0, 2, 8)
    assert np.allclose(angles, [math.pi / 2, math.pi / 2])


def test_angles_cosine_recurrence():
    angles = sc.angles_from_kappa(1.6, 2, 16)
    assert angles[0] == pytest.approx(math.pi / 2)
    # cos(theta_2) = -1.6/16 = -0.1
    assert angles[1] == pytest.approx(1.6709637479564565, abs=1e-14)


def test_angles_out_of_range_names_index():
    with pytest.raises(ValueError, match="theta_2"):
        sc.angles_from_kappa(40.0, 2, 16)


def test_adjacent_cosine_gap_property():
    rng = np.random.default_rng(11)
    for _ in range(50):
        m = int(rng.integers(4, 257))
        k = int(rng.integers(2, 9))
        kappa = float(rng.uniform(0.0, m / (k - 1) * 0.9))
        ref = sc.centered_reference_angle(kappa, k, m)
        angles = sc.angles_from_kappa(kappa, k, m, ref)
        gaps = -np.diff(np.cos(angles))
        assert np.max(np.abs(gaps - kappa / m)) <= 1e-12


def test_centered_reference_angle_symmetry():
    ref = sc.centered_reference_angle(8.0, 2, 32)
    cosines = np.cos(sc.angles_from_kappa(8.0, 2, 32, ref))
    assert cosines[0] == pytest.approx(-cosines[1], abs=1e-15)
    with pytest.raises(ValueError, match="exceeds 1"):
        sc.centered_reference_angle(40.0, 3, 16)


def test_scenario_from_kappa_and_digest():
    cfg = sc.scenario_from_kappa(32, 2, 2, 8.0, spread=0.02, paths=4)
    assert cfg.spreads == (0.02, 0.02)
    assert cfg.num_paths == (4, 4)
    assert sc.config_digest(cfg) == sc.config_digest(cfg)
    other = sc.scenario_from_kappa(32, 2, 2, 8.1, spread=0.02, paths=4)
    assert sc.config_digest(cfg) != sc.config_digest(other)
