import numpy as np
import pytest
import scipy.linalg
import scipy.sparse as sp

from src.ed import (
    DEFAULT_DIMENSION_CAP,
    ManyBodyBasis,
    addition_energies,
    boltzmann_weights,
    build_hamiltonian,
    build_sector_hamiltonian,
    diagonalize,
    fermion_operators,
    ground_state,
    hopping_operator,
    load_spectrum,
    number_operator,
    one_body_density,
    save_spectrum,
    sector_dimension,
    site_density_operator,
    spin_correlations,
    spin_operators,
    spin_profile,
    spin_z_operator,
    spin_zz_operator,
    thermal_expectation,
    total_charge_profile,
)
from src.ed.basis import embed_site
from src.ed.oracle import full_fock_hamiltonian, full_number_operator, full_trace_expectation
from src.errors import DimensionCapExceeded, MissingMatrixElements, SpectrumError
from src.lattice import Boundary, Geometry, build_lattice
from src.model import ModelParams, PinningPattern
from src.transport import probe_rates

COUPLED = ModelParams(t=1.0, g=200.0, h_z=-0.1, h_x=0.05, mu=0.2, V0=4.7)


@pytest.mark.parametrize("n_sites", [1, 2, 3])
def test_fermion_anticommutators(n_sites):
    c = fermion_operators(n_sites)
    eye = np.eye(1 << n_sites)
    for i in range(n_sites):
        for j in range(n_sites):
            anti = (c[i] @ c[j].T + c[j].T @ c[i]).toarray()
            np.testing.assert_allclose(anti, eye if i == j else 0.0, atol=1e-12)
            np.testing.assert_allclose((c[i] @ c[j] + c[j] @ c[i]).toarray(), 0.0, atol=1e-12)


@pytest.mark.parametrize("S", [0.5, 1.0, 1.5])
def test_spin_algebra(S):
    Ix, Iy, Iz = spin_operators(S)
    np.testing.assert_allclose(Ix @ Iy - Iy @ Ix, 1j * Iz, atol=1e-12)
    casimir = Ix @ Ix + Iy @ Iy + Iz @ Iz
    np.testing.assert_allclose(casimir, S * (S + 1) * np.eye(int(2 * S) + 1), atol=1e-12)


def test_basis_index_decode():
    basis = ManyBodyBasis(n_sites=3, spin_dim=2, n=2)
    assert basis.dim == 3 * 8
    for index in range(basis.dim):
        assert basis.index(*basis.decode(index)) == index
    with pytest.raises(KeyError):
        basis.index(0b001, (0, 0, 0))


def test_sector_dimension_and_cap(chain4_open):
    assert sector_dimension(4, 2, 2) == 6 * 16
    with pytest.raises(DimensionCapExceeded):
        build_sector_hamiltonian(chain4_open, ModelParams(), 2, cap=50)
    with pytest.raises(SpectrumError):
        build_sector_hamiltonian(chain4_open, ModelParams(), 5)


def test_sector_blocks_match_full_fock_spectrum():
    graph = build_lattice(Geometry.CHAIN, 3, boundary=Boundary.OPEN)
    pinning = PinningPattern(first_site=1, d=1, epsilon=0.07)
    blocks = build_hamiltonian(graph, COUPLED, pinning)
    for H in blocks.values():
        np.testing.assert_allclose(H.toarray(), H.toarray().conj().T, atol=1e-12)
    sector_levels = np.sort(np.concatenate([scipy.linalg.eigvalsh(H.toarray()) for H in blocks.values()]))
    full_levels = scipy.linalg.eigvalsh(full_fock_hamiltonian(graph, COUPLED, pinning))
    np.testing.assert_allclose(sector_levels, full_levels, atol=1e-10)


def _full_ops(n_sites: int, spin_dim: int):
    c = fermion_operators(n_sites)
    _, _, Iz = spin_operators((spin_dim - 1) / 2)
    f_eye = sp.identity(1 << n_sites)
    s_eye = sp.identity(spin_dim ** n_sites)
    density = [sp.kron(ci.T @ ci, s_eye).toarray() for ci in c]
    hop01 = sp.kron(c[0].T @ c[1], s_eye).toarray()
    sz = [sp.kron(f_eye, embed_site(Iz, i, n_sites)).toarray() for i in range(n_sites)]
    return density, hop01, sz


@pytest.mark.parametrize("beta,mu", [(2.0, 0.3), (0.5, -0.4), (10.0, 0.2)])
def test_thermal_expectations_match_full_trace(chain2_open, beta, mu):
    spectrum = diagonalize(chain2_open, COUPLED)
    density, hop01, sz = _full_ops(2, 2)
    oracle = lambda op: full_trace_expectation(chain2_open, COUPLED, beta, mu, op)

    assert thermal_expectation(spectrum, beta, mu, number_operator(spectrum)) == pytest.approx(
        oracle(full_number_operator(2, 2)), abs=1e-10
    )
    for i in range(2):
        assert thermal_expectation(spectrum, beta, mu, site_density_operator(spectrum, i)) == pytest.approx(
            oracle(density[i]), abs=1e-10
        )
        assert thermal_expectation(spectrum, beta, mu, spin_z_operator(spectrum, i)) == pytest.approx(
            oracle(sz[i]), abs=1e-10
        )
    assert thermal_expectation(spectrum, beta, mu, spin_zz_operator(spectrum, 0, 1)) == pytest.approx(
        oracle(sz[0] @ sz[1]), abs=1e-10
    )
    assert thermal_expectation(spectrum, beta, mu, hopping_operator(spectrum, 0, 1)) == pytest.approx(
        oracle(hop01), abs=1e-10
    )


def test_weights_normalize_and_reject_bad_beta(chain2_open):
    spectrum = diagonalize(chain2_open, COUPLED)
    for beta in (0.1, 3.0, 300.0, None):
        weights = boltzmann_weights(spectrum, beta, 0.0)
        assert sum(w.sum() for w in weights.values()) == pytest.approx(1.0, abs=1e-12)
        assert all(np.all(w >= 0) for w in weights.values())
    with pytest.raises(SpectrumError):
        boltzmann_weights(spectrum, 0.0)


def test_ground_state_degeneracy_of_free_spins(chain2_open, free_params):
    spectrum = diagonalize(chain2_open, free_params)
    ground = ground_state(spectrum)
    assert ground.energy == pytest.approx(-1.0)
    assert ground.degenerate
    assert len(ground.states) == 4
    assert {n for n, _ in ground.states} == {1}
    assert addition_energies(spectrum) == pytest.approx({1: -1.0, 2: 1.0})


def test_one_body_density_properties(chain4_open):
    p = ModelParams(t=1.0, g=100.0, h_z=-0.05, V0=2.0)
    spectrum = diagonalize(chain4_open, p)
    rho = one_body_density(spectrum, 4.0, 0.5)
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)
    eig = np.linalg.eigvalsh(rho)
    assert eig.min() > -1e-10 and eig.max() < 1 + 1e-10
    total = thermal_expectation(spectrum, 4.0, 0.5, number_operator(spectrum))
    assert np.trace(rho).real == pytest.approx(total, abs=1e-10)


def test_zero_temperature_spin_profile_is_bounded(chain4_open):
    p = ModelParams(t=1.0, g=200.0, h_z=-0.1, h_x=0.001, V0=0.0)
    spectrum = diagonalize(chain4_open, p)
    mz, mx = spin_profile(spectrum, None)
    assert np.all(np.abs(mz) <= 0.5 + 1e-12)
    assert np.all(np.abs(mx) <= 0.5 + 1e-12)
    corr = spin_correlations(spectrum, None, None, 0)
    assert corr[0] == pytest.approx(0.25)


def test_two_site_creation_rates_are_one_half(chain2_open):
    p = ModelParams(t=1.0, g=0.0, h_z=0.3, V0=0.0)
    spectrum = diagonalize(chain2_open, p, PinningPattern(0, 0, 0.1), edge_sites=[0, 1])
    rates = probe_rates(spectrum, [1], 1.0, 1)
    assert rates.shape == (8, 4)
    nonzero = rates[rates > 1e-12]
    assert len(nonzero) == 8
    np.testing.assert_allclose(nonzero, 0.5, atol=1e-12)
    np.testing.assert_allclose(rates.sum(axis=1), 0.5, atol=1e-12)


def test_missing_creation_elements(chain2_open, free_params):
    spectrum = diagonalize(chain2_open, free_params, edge_sites=[0])
    spectrum.creation_elements(0, 1)
    with pytest.raises(MissingMatrixElements):
        spectrum.creation_elements(1, 1)


def test_lanczos_sectors_match_dense(chain4_open):
    p = ModelParams(t=1.0, g=100.0, h_z=-0.05, h_x=0.01, V0=2.0)
    dense = diagonalize(chain4_open, p, sectors=[2])
    sparse = diagonalize(chain4_open, p, sectors=[2], dense_cutoff=10, n_eigs=6)
    assert dense.complete[2] and not sparse.complete[2]
    np.testing.assert_allclose(sparse.energies[2], dense.energies[2][:6], atol=1e-8)


def test_spectrum_save_load(tmp_path, chain2_open):
    spectrum = diagonalize(chain2_open, COUPLED, edge_sites=[0, 1])
    path = save_spectrum(spectrum, tmp_path / "spec")
    loaded = load_spectrum(path)
    assert loaded.sectors == spectrum.sectors
    assert loaded.mu_ref == spectrum.mu_ref
    np.testing.assert_allclose(loaded.energies[1], spectrum.energies[1])
    np.testing.assert_allclose(loaded.creation_elements(1, 2), spectrum.creation_elements(1, 2))


def test_grand_energies_shift_with_mu(chain2_open):
    spectrum = diagonalize(chain2_open, COUPLED)
    np.testing.assert_allclose(spectrum.bare_energies(2), spectrum.energies[2] + 2 * COUPLED.mu)
    np.testing.assert_allclose(spectrum.grand_energies(2, 1.0), spectrum.bare_energies(2) - 2.0)


def test_charge_profile_increases_with_mu(chain2_open):
    frame = total_charge_profile(
        chain2_open, ModelParams(t=1.0, V0=0.0), 5.0, [-3.0, 0.0, 3.0], [(100.0, -0.05), (0.0, 0.0)]
    )
    assert list(frame.columns) == ["g", "h_z", "mu", "n", "n_z"]
    assert len(frame) == 6
    for _, group in frame.groupby("g"):
        assert np.all(np.diff(group["n"].to_numpy()) >= -1e-12)
        assert group["n"].between(0, 2).all()
    with pytest.raises(SpectrumError):
        total_charge_profile(chain2_open, ModelParams(), 5.0, [], [(0.0, 0.0)])


def test_default_cap_value():
    assert DEFAULT_DIMENSION_CAP == 200_000
