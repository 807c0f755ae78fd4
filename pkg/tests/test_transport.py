import numpy as np
import pytest
from pydantic import ValidationError

from src.ed import addition_energies, diagonalize
from src.errors import SpectrumError
from src.model import ModelParams
from src.transport import (
    BOLTZMANN_MEV_PER_K,
    ConductanceCurve,
    ProbeSetup,
    conductance_curve,
    conductance_sweep,
    default_mu_grid,
    extract_peaks,
    harmonic_rates,
    linear_conductance,
    mk_to_beta,
    peak_half_widths,
    probe_from_columns,
    stationary_weights,
    tunneling_rates,
)

PAIR = ModelParams(t=1.0, g=0.0, h_z=0.3, V0=0.0)
COUPLED = ModelParams(t=1.0, g=200.0, h_z=-0.1, h_x=0.02, V0=4.7)


@pytest.fixture
def pair_spectrum(chain2_open):
    return diagonalize(chain2_open, PAIR, edge_sites=[0, 1])


@pytest.fixture
def pair_probe():
    return ProbeSetup(left_sites=[0], right_sites=[1])


def test_probe_setup_validation():
    probe = ProbeSetup(left_sites=[2, 0], right_sites=[1])
    assert probe.sites == [0, 1, 2]
    assert probe.swapped().left_sites == [1]
    with pytest.raises(ValidationError):
        ProbeSetup(left_sites=[0, 1], right_sites=[1])
    with pytest.raises(ValidationError):
        ProbeSetup(left_sites=[], right_sites=[1])
    with pytest.raises(ValidationError):
        ProbeSetup(left_sites=[-1], right_sites=[1])
    with pytest.raises(ValidationError):
        ProbeSetup(left_sites=[0], right_sites=[1], gamma=0.0)


def test_probe_from_columns(square2_open):
    probe = probe_from_columns(square2_open, gamma=0.5, reservoir_temperature_mk=30.0)
    left, right = square2_open.columns()
    assert probe.left_sites == left and probe.right_sites == right
    assert probe.gamma == 0.5
    assert probe.reservoir_temperature_mk == 30.0


def test_mk_to_beta():
    assert BOLTZMANN_MEV_PER_K == pytest.approx(8.617333e-2, rel=1e-6)
    assert mk_to_beta(1000.0) == pytest.approx(1 / 8.617333e-2, rel=1e-6)
    with pytest.raises(SpectrumError):
        mk_to_beta(0.0)


def test_harmonic_rates_of_equal_couplings():
    gamma = 0.8
    gl = np.array([[gamma, 0.0], [gamma, 0.0]])
    Q = harmonic_rates({1: (gl, gl.copy())})[1]
    np.testing.assert_allclose(Q, [[gamma / 2, 0.0], [gamma / 2, 0.0]])


def test_harmonic_rates_vanish_with_one_probe():
    gl = np.array([[1.0, 2.0]])
    Q = harmonic_rates({1: (gl, np.zeros_like(gl))})[1]
    np.testing.assert_array_equal(Q, 0.0)


def test_pair_rates_are_half_gamma(pair_spectrum, pair_probe):
    rates = tunneling_rates(pair_spectrum, pair_probe)
    assert sorted(rates) == [1, 2]
    gl, gr = rates[1]
    assert gl.shape == (8, 4)
    # bonding and antibonding orbitals put weight 1/2 on each end site
    np.testing.assert_allclose(gl.sum(axis=1), 0.5)
    np.testing.assert_allclose(gr.sum(axis=1), 0.5)


def test_stationary_weights_normalized(pair_spectrum):
    weights = stationary_weights(pair_spectrum, beta_island=3.0, mu=0.2)
    assert sum(w.sum() for w in weights.values()) == pytest.approx(1.0)
    with pytest.raises(SpectrumError):
        stationary_weights(pair_spectrum, None, 0.0)


def test_coulomb_blockade_between_resonances(pair_spectrum, pair_probe):
    assert addition_energies(pair_spectrum) == pytest.approx({1: -1.0, 2: 1.0})
    on_peak = linear_conductance(pair_spectrum, pair_probe, -1.0 + 1e-5)
    blockaded = linear_conductance(pair_spectrum, pair_probe, 0.0)
    assert linear_conductance(pair_spectrum, pair_probe, -1.5) / on_peak < 1e-4
    assert on_peak > 0
    assert blockaded / on_peak < 1e-4


def test_conductance_scales_with_gamma(pair_spectrum, pair_probe):
    mu = -1.0 + 2e-4
    single = linear_conductance(pair_spectrum, pair_probe, mu)
    doubled = linear_conductance(pair_spectrum, pair_probe.model_copy(update={"gamma": 2.0}), mu)
    assert doubled == pytest.approx(2 * single, rel=1e-12)


def test_left_right_swap_symmetry(square2_open):
    probe = probe_from_columns(square2_open, reservoir_temperature_mk=100.0)
    spectrum = diagonalize(square2_open, COUPLED, edge_sites=probe.sites)
    grid = default_mu_grid(spectrum, probe, points=201)
    forward = conductance_curve(spectrum, probe, grid)
    backward = conductance_curve(spectrum, probe.swapped(), grid)
    np.testing.assert_allclose(forward.g_raw, backward.g_raw, rtol=1e-12, atol=0)
    assert forward.peaks == backward.peaks
    assert max(forward.g_raw) > 0


def test_default_grid_covers_addition_energies(pair_spectrum, pair_probe):
    grid = default_mu_grid(pair_spectrum, pair_probe, points=101)
    assert len(grid) == 202
    assert grid[0] < -1.0 and grid[-1] > 1.0
    assert np.any(np.abs(grid + 1.0) < 0.01) and np.any(np.abs(grid - 1.0) < 0.01)


def test_extract_peaks_and_half_widths():
    mu = np.linspace(-1.0, 1.0, 2001)
    width = 0.02

    def lorentzian(x0, height):
        return height * width ** 2 / ((mu - x0) ** 2 + width ** 2)

    G = lorentzian(-0.5, 1.0) + lorentzian(0.4, 0.5) + lorentzian(0.0, 0.004)
    peaks = extract_peaks(mu, G)
    np.testing.assert_allclose(mu[peaks], [-0.5, 0.4], atol=1e-9)
    np.testing.assert_allclose(peak_half_widths(mu, G, peaks), [width, width], rtol=1e-2)


def test_extract_peaks_edge_cases():
    assert extract_peaks([0.0, 1.0], [1.0, 2.0]) == []
    assert extract_peaks([0.0, 1.0, 2.0], [0.0, 0.0, 0.0]) == []
    assert extract_peaks(np.arange(5.0), np.arange(5.0)) == []


def test_half_width_one_sided_and_missing():
    mu = [0.0, 1.0, 2.0, 3.0]
    assert peak_half_widths(mu, [0.9, 1.0, 0.6, 0.2], [1]) == pytest.approx([1.25])
    assert np.isnan(peak_half_widths(mu, [0.9, 1.0, 0.8, 0.7], [1])[0])


def test_conductance_curve_model():
    curve = ConductanceCurve(mu=[0.0, 1.0, 2.0], g_raw=[0.1, 0.4, 0.2], peaks=[1], metadata={"h_z": -0.1})
    assert curve.g_normalized == pytest.approx([0.25, 1.0, 0.5])
    assert curve.peak_positions == [1.0]
    rows = curve.to_rows()
    assert [r["peak"] for r in rows] == [False, True, False]
    assert rows[0]["h_z"] == -0.1
    with pytest.raises(ValidationError):
        ConductanceCurve(mu=[0.0], g_raw=[-1.0])
    with pytest.raises(ValidationError):
        ConductanceCurve(mu=[0.0, 1.0], g_raw=[1.0])


def test_peaks_stay_put_while_widths_grow_with_reservoir_temperature(pair_spectrum):
    # even point count keeps the resonance at -1 off the grid
    grid = np.linspace(-1.05, -0.95, 1000)
    curves = [
        conductance_curve(pair_spectrum, ProbeSetup(left_sites=[0], right_sites=[1], reservoir_temperature_mk=T), grid)
        for T in (10.0, 30.0, 100.0)
    ]
    positions = [c.peak_positions for c in curves]
    assert all(len(p) == 1 for p in positions)
    spacing = grid[1] - grid[0]
    assert max(p[0] for p in positions) - min(p[0] for p in positions) <= spacing + 1e-12
    widths = [c.half_widths[0] for c in curves]
    assert widths[0] < widths[1] < widths[2]


def test_sweep_over_no_fields_is_empty(chain2_open, pair_probe):
    assert conductance_sweep(chain2_open, PAIR, pair_probe, None, []) == []


def test_sweep_one_curve_per_field(chain2_open, pair_probe):
    grid = np.linspace(-1.505, 1.495, 301)
    curves = conductance_sweep(chain2_open, PAIR, pair_probe, grid, [0.1, 0.3])
    assert [c.metadata["h_z"] for c in curves] == [0.1, 0.3]
    assert all(len(c.peaks) == 2 for c in curves)
