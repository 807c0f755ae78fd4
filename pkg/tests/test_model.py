import json

import numpy as np
import pytest
from pydantic import ValidationError

from src.errors import ModelError
from src.lattice import Boundary, Geometry, build_lattice
from src.model import (
    ModelParams,
    PinningPattern,
    TunnelingProfile,
    coulomb_over_hopping,
    dimensionless_regime,
    fit_tunneling_profile,
    load_orientation_profiles,
    pinning_field,
    site_potentials,
    stark_shifted_g,
    tunneling_profile,
    zeeman_energy,
)


def test_default_regime_ratio():
    report = dimensionless_regime(ModelParams())
    assert report.gS_over_t == pytest.approx(3.2e-5, rel=1e-2)
    assert "gS/t = 3.2e-05" in report.summary()


def test_regime_hint_and_sign():
    p = ModelParams(t=7.5, g=0.48, h_z=-0.24e-3, h_x=-0.24e-5)
    report = dimensionless_regime(p)
    assert report.detuning_ok
    assert report.neel_window_hint
    assert report.ordering_sign_ok
    assert not dimensionless_regime(p.model_copy(update={"h_z": 0.24e-3})).ordering_sign_ok


def test_regime_rejects_strong_transverse_field():
    report = dimensionless_regime(ModelParams(h_z=1e-4, h_x=1e-4))
    assert not report.detuning_ok
    assert not report.neel_window_hint


def test_regime_reports_tesla():
    report = dimensionless_regime(ModelParams(h_z=7.128e-5), gyromagnetic_mev_per_tesla=7.128e-5)
    assert report.h_z_tesla == pytest.approx(1.0)
    assert zeeman_energy(2.0, 7.128e-5) == pytest.approx(1.4256e-4)


@pytest.mark.parametrize("S", [0.5, 1.0, 4.5])
def test_allowed_spins(S):
    assert ModelParams(S=S).spin_dim == int(2 * S) + 1


@pytest.mark.parametrize("kwargs", [{"S": 0.7}, {"S": 5.0}, {"t": 0.0}, {"beta": -1.0}, {"filling": 1.0}, {"bogus": 1}])
def test_invalid_params(kwargs):
    with pytest.raises(ValidationError):
        ModelParams(**kwargs)


def test_units_and_zero_temperature():
    p = ModelParams(g=0.48)
    assert p.g_mev == pytest.approx(4.8e-4)
    assert p.zero_temperature
    assert not ModelParams(beta=10.0).zero_temperature


def test_stark_shift():
    assert stark_shifted_g(0.48, 0.0) == 0.48
    assert stark_shifted_g(0.48, 10.0) == pytest.approx(0.48 * 1.28)


def test_tunneling_profile_decays():
    profile = TunnelingProfile()
    assert tunneling_profile(4.7, profile) == pytest.approx(7.5)
    assert tunneling_profile(4.7 + 2.5, profile) == pytest.approx(7.5 / np.e)
    with pytest.raises(ModelError):
        tunneling_profile(4.7, TunnelingProfile(xi=0.0))


def test_fit_tunneling_profile_interpolates():
    profile = fit_tunneling_profile((4.0, 10.0), (6.0, 2.0))
    assert tunneling_profile(4.0, profile) == pytest.approx(10.0)
    assert tunneling_profile(6.0, profile) == pytest.approx(2.0)
    with pytest.raises(ModelError):
        fit_tunneling_profile((4.0, 2.0), (6.0, 10.0))


def test_load_orientation_profiles(tmp_path):
    path = tmp_path / "profiles.json"
    path.write_text(json.dumps({"100": {"t_ref": 7.5, "a_ref": 4.7, "xi": 2.0}, "110": {"t_ref": 5.0, "a_ref": 4.7, "xi": 3.0}}))
    profiles = load_orientation_profiles(path)
    assert set(profiles) == {"100", "110"}
    assert profiles["110"].orientation == "110"
    assert tunneling_profile(4.7, profiles["110"]) == pytest.approx(5.0)


def test_coulomb_over_hopping():
    assert coulomb_over_hopping(123.0, 4.7, 7.5) == pytest.approx(3.489, rel=1e-3)


def test_pinning_field_domain_walls():
    eps = pinning_field(10, PinningPattern(first_site=3, d=4, epsilon=1.0))
    assert eps.tolist() == [-1, 1, -1, -1, 1, -1, 1, 1, -1, 1]
    walls = [k for k in range(9) if eps[k] == eps[k + 1]]
    assert walls == [2, 6]


def test_pinning_field_zero_length_is_plain_stagger():
    eps = pinning_field(6, PinningPattern(first_site=2, d=0, epsilon=0.5))
    np.testing.assert_allclose(eps, 0.5 * np.array([-1, 1, -1, 1, -1, 1]))


def test_pinning_field_rejects_overhang():
    with pytest.raises(ModelError):
        pinning_field(6, PinningPattern(first_site=4, d=3, epsilon=1.0))


def test_site_potentials(chain4_open):
    p = ModelParams(mu=0.3, V0=10.0, neutral_background=True)
    pots = site_potentials(p, chain4_open)
    V = 10.0 / (4.7 * np.array([[1, 1, 2, 3], [1, 1, 1, 2], [2, 1, 1, 1], [3, 2, 1, 1]]))
    np.fill_diagonal(V, 0.0)
    np.testing.assert_allclose(pots.mu, 0.3 + 0.5 * V.sum(axis=1))
    np.testing.assert_array_equal(pots.epsilon, 0.0)

    override = site_potentials(ModelParams(mu_site=(0.1, 0.2, 0.3, 0.4), V0=0.0), chain4_open)
    np.testing.assert_allclose(override.mu, [0.1, 0.2, 0.3, 0.4])
    with pytest.raises(ModelError):
        site_potentials(ModelParams(mu_site=(0.1,)), chain4_open)


def test_pinning_not_defined_on_honeycomb():
    graph = build_lattice(Geometry.HONEYCOMB, 2, 2)
    with pytest.raises(ModelError):
        site_potentials(ModelParams(), graph, PinningPattern(0, 2, 0.1))
