import numpy as np
import pytest

from dipolecone import ConfigError, Preset, SimConfig, SpinChain, make_preset


def test_high_energy_preset():
    chain = make_preset(Preset.HIGH_ENERGY, 213)
    assert chain.n_sites == 213
    assert chain.perturbed_site == 107
    # distance from the first site, in units of a, is 106
    assert chain.positions[chain.perturbed_site - 1] - chain.positions[0] == 106
    np.testing.assert_array_equal(chain.spins[106], [1, 0, 0])
    others = np.delete(chain.spins, 106, axis=0)
    assert np.all(others == [0, 1, 0])


def test_ground_state_preset():
    chain = make_preset("GROUND_STATE", 257)
    assert chain.perturbed_site == 129
    np.testing.assert_array_equal(chain.spins[128], [0, 0, 1])
    assert np.all(np.delete(chain.spins, 128, axis=0) == [0, 1, 0])
    np.testing.assert_array_equal(chain.bulk, [0, 1, 0])


def test_supp_preset():
    chain = make_preset(Preset.SUPP, 1024)
    assert chain.perturbed_site == 512
    np.testing.assert_array_equal(chain.spins[511], [0, 0, 1])
    assert np.all(np.delete(chain.spins, 511, axis=0) == [1, 0, 0])


@pytest.mark.parametrize("preset", ["HIGH_ENERGY", "GROUND_STATE"])
def test_centered_presets_reject_even_length(preset):
    with pytest.raises(ConfigError, match="odd"):
        make_preset(preset, 212)


@pytest.mark.parametrize("preset,n", [("HIGH_ENERGY", 213), ("GROUND_STATE", 257), ("SUPP", 1024),
                                      ("SUPP", 7), ("HIGH_ENERGY", 1)])
def test_presets_have_one_perturbed_site(preset, n):
    chain = make_preset(preset, n)
    differs = np.any(chain.spins != chain.bulk, axis=1)
    assert differs.sum() == 1
    assert np.nonzero(differs)[0][0] + 1 == chain.perturbed_site
    np.testing.assert_allclose(np.linalg.norm(chain.spins, axis=1), 1.0, atol=1e-12)


@pytest.mark.parametrize("preset,n", [("HIGH_ENERGY", 213), ("GROUND_STATE", 31)])
def test_centered_presets_are_mirror_symmetric(preset, n):
    chain = make_preset(preset, n)
    np.testing.assert_array_equal(chain.spins, chain.spins[::-1])


def test_chain_rejects_non_unit_spins():
    with pytest.raises(ValueError, match="site 2"):
        SpinChain(np.array([[1.0, 0, 0], [1.0, 1.0, 0]]))


def test_config_defaults():
    cfg = SimConfig(preset="HIGH_ENERGY", n_sites=213)
    assert cfg.alpha == 3.0 and cfg.c_m == 1.0
    assert cfg.contour_level == 1e-8
    assert cfg.linear_window == (0.15, cfg.t_end)
    assert cfg.n_steps == 800


@pytest.mark.parametrize("changes,key", [
    (dict(alpha=1.5), "alpha"),
    (dict(c_m=0.0), "c_m"),
    (dict(dt=-1.0), "dt"),
    (dict(snapshot_stride=0), "snapshot_stride"),
    (dict(field_sign=2), "field_sign"),
    (dict(fit_window_early=(0.2, 0.1)), "fit_window_early"),
    (dict(fit_window_early=(0.0, 0.3), fit_window_linear=(0.2, None)), "disjoint"),
    (dict(fine_start_dt=1.0), "fine_start_dt"),
])
def test_config_errors_name_the_key(changes, key):
    with pytest.raises(ConfigError, match=key):
        SimConfig(preset="HIGH_ENERGY", n_sites=11, **changes)
