"""Dense and sectored diagonalization, thermal weights, expectations."""

import numpy as np
import pytest

from dimerspin import (ChainSpec, exchange_hamiltonian, build_hamiltonian,
                       decompose, decompose_sectored, build_sector_table,
                       gibbs_weights, ground_state_weights, thermal_weights,
                       thermal_expectation, magnetization_expectation,
                       ground_state_magnetization, NumericalInvariantError)
from dimerspin.hilbert import magnetization_diagonal
from _oracles import dense_hamiltonian, dense_thermal_state

RNG = np.random.default_rng(7)


def random_symmetric(dim):
    a = RNG.standard_normal((dim, dim))
    return a + a.T


def test_decompose_reconstructs():
    h = random_symmetric(40)
    dec = decompose(h)
    rebuilt = (dec.eigenvectors * dec.eigenvalues) @ dec.eigenvectors.T
    assert np.abs(rebuilt - h).max() <= 1e-10 * np.abs(h).max()
    gram = dec.eigenvectors.T @ dec.eigenvectors
    assert np.abs(gram - np.eye(40)).max() <= 1e-10
    assert np.all(np.diff(dec.eigenvalues) >= 0)
    assert dec.sector_labels is None


def test_decompose_rejects_bad_input():
    with pytest.raises(ValueError):
        decompose(np.zeros((3, 4)))
    bad = random_symmetric(8)
    bad[0, 7] += 1e-6
    with pytest.raises(NumericalInvariantError):
        decompose(bad)


def test_vector_rows_layout():
    dec = decompose(random_symmetric(12))
    assert dec.vector_rows.flags["C_CONTIGUOUS"]
    assert np.array_equal(dec.vector_rows, dec.eigenvectors.T)


def test_sectored_matches_full_spectrum():
    spec = ChainSpec(n_sites=6, delta=0.3)
    h = exchange_hamiltonian(spec)
    full = decompose(h)
    sect = decompose_sectored(h, build_sector_table(6))
    assert np.abs(full.eigenvalues - sect.eigenvalues).max() < 1e-10
    rebuilt = (sect.eigenvectors * sect.eigenvalues) @ sect.eigenvectors.T
    assert np.abs(rebuilt - h).max() <= 1e-10 * np.abs(h).max()
    m_diag = magnetization_diagonal(6)
    for n in range(sect.dim):
        v = sect.eigenvectors[:, n]
        assert m_diag @ (v * v) == pytest.approx(sect.sector_labels[n],
                                                 abs=1e-10)


def test_sectored_rejects_cross_sector_coupling():
    spec = ChainSpec(n_sites=4, delta=0.2, b=1.0, theta=np.pi / 4)
    h = build_hamiltonian(spec)
    with pytest.raises(NumericalInvariantError):
        decompose_sectored(h, build_sector_table(4))


def test_sectored_rejects_size_mismatch():
    h = exchange_hamiltonian(ChainSpec(n_sites=4))
    with pytest.raises(ValueError):
        decompose_sectored(h, build_sector_table(6))


def test_energies_at_shifts_by_sector():
    spec = ChainSpec(n_sites=4, delta=0.5)
    sect = decompose_sectored(exchange_hamiltonian(spec),
                              build_sector_table(4))
    want = sect.eigenvalues + 1.3 * sect.sector_labels
    assert np.array_equal(sect.energies_at(1.3), want)
    full = decompose(exchange_hamiltonian(spec))
    with pytest.raises(ValueError):
        full.energies_at(1.3)


def test_gibbs_weights_match_softmax():
    dec = decompose(random_symmetric(10))
    for kbt in (0.05, 0.5, 3.0):
        gw = gibbs_weights(dec, kbt)
        direct = np.exp(-dec.eigenvalues / kbt)
        direct /= direct.sum()
        assert np.abs(gw.weights - direct).max() < 1e-14
        assert gw.kbt == kbt
        assert gw.e_min == dec.eigenvalues.min()


def test_gibbs_weights_survive_extreme_temperatures():
    dec = decompose(np.diag(np.array([0.0, 1.0, 2.0, 3.0])))
    w = gibbs_weights(dec, 1e-6).weights
    assert w[0] == pytest.approx(1.0)
    w = gibbs_weights(dec, 1e6).weights
    assert np.abs(w - 0.25).max() < 1e-5


def test_gibbs_weights_reject_nonpositive_kbt():
    dec = decompose(random_symmetric(4))
    with pytest.raises(ValueError):
        gibbs_weights(dec, 0.0)
    with pytest.raises(ValueError):
        gibbs_weights(dec, -0.1)


def test_ground_state_weights_split_degeneracy():
    dec = decompose(np.diag(np.array([0.0, 5e-10, 1.0, 2.0])))
    w = ground_state_weights(dec).weights
    assert np.array_equal(w, [0.5, 0.5, 0.0, 0.0])
    w = ground_state_weights(dec, degeneracy_tol=1e-12).weights
    assert np.array_equal(w, [1.0, 0.0, 0.0, 0.0])


def test_thermal_weights_dispatch():
    dec = decompose(random_symmetric(6))
    assert thermal_weights(dec, 0.0).kbt == 0.0
    assert thermal_weights(dec, 0.7).kbt == 0.7
    with pytest.raises(ValueError):
        thermal_weights(dec, -1.0)


def test_thermal_expectation_matches_dense_trace():
    spec = ChainSpec(n_sites=4, delta=0.4, b=0.8)
    h = build_hamiltonian(spec)
    dec = decompose(h)
    rho = dense_thermal_state(dense_hamiltonian(4, delta=0.4, b=0.8), 0.3)
    w = gibbs_weights(dec, 0.3)
    diag_obs = RNG.standard_normal(16)
    want = float(np.trace(rho @ np.diag(diag_obs)).real)
    assert thermal_expectation(dec, w, diag_obs) == pytest.approx(want,
                                                                  abs=1e-12)
    full_obs = random_symmetric(16)
    want = float(np.trace(rho @ full_obs).real)
    assert thermal_expectation(dec, w, full_obs) == pytest.approx(want,
                                                                  abs=1e-12)
    with pytest.raises(ValueError):
        thermal_expectation(dec, w, np.zeros(5))
    with pytest.raises(ValueError):
        thermal_expectation(dec, w, np.zeros((5, 5)))


def test_magnetization_expectation_routes_agree():
    spec = ChainSpec(n_sites=6, delta=0.2)
    h = exchange_hamiltonian(spec)
    sect = decompose_sectored(h, build_sector_table(6))
    full = decompose(h)
    for kbt in (0.1, 1.0):
        a = magnetization_expectation(sect, gibbs_weights(sect, kbt), 6)
        b = magnetization_expectation(full, gibbs_weights(full, kbt), 6)
        assert a == pytest.approx(b, abs=1e-10)


def test_sector_shift_equals_rebuilt_field():
    """Shifting sector energies by b*m is the axial-field Hamiltonian."""
    b = 1.1
    spec = ChainSpec(n_sites=6, delta=0.2, b=b)
    sect = decompose_sectored(exchange_hamiltonian(spec),
                              build_sector_table(6))
    full = decompose(build_hamiltonian(spec))
    for kbt in (0.05, 0.4):
        ws = gibbs_weights(sect, kbt, b=b, use_sector_shift=True)
        wf = gibbs_weights(full, kbt)
        ms = magnetization_expectation(sect, ws, 6)
        mf = thermal_expectation(full, wf, magnetization_diagonal(6))
        assert ms == pytest.approx(mf, abs=1e-10)


def test_ground_state_magnetization_tracks_dense_ground_state():
    spec = ChainSpec(n_sites=4, delta=0.2)
    sect = decompose_sectored(exchange_hamiltonian(spec),
                              build_sector_table(4))
    b_values = np.array([0.0, 0.3, 1.7, 2.9, 5.0])
    labels = ground_state_magnetization(sect, b_values)
    m_diag = magnetization_diagonal(4)
    for b, label in zip(b_values, labels):
        h = dense_hamiltonian(4, delta=0.2, b=b)
        energies, vectors = np.linalg.eigh(h)
        v = vectors[:, 0]
        assert float(np.real(np.conj(v) * m_diag @ v)) == pytest.approx(
            label, abs=1e-8)
    full = decompose(exchange_hamiltonian(spec))
    with pytest.raises(ValueError):
        ground_state_magnetization(full, b_values)
