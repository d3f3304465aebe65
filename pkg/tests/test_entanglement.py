"""Reduced pair states and Wootters concurrence against dense references."""

import numpy as np
import pytest

from dimerspin import (ChainSpec, pair_for, build_hamiltonian,
                       exchange_hamiltonian, decompose, decompose_sectored,
                       build_sector_table, thermal_weights, gibbs_weights,
                       TwoQubitState, concurrence, reduce_to_pair,
                       pair_density_tensor, pair_concurrence,
                       NumericalInvariantError)
from dimerspin.entanglement import WEIGHT_CUTOFF
from _oracles import (dense_hamiltonian, dense_thermal_state,
                      dense_partial_trace, dense_concurrence,
                      two_spin_concurrence)

RNG = np.random.default_rng(11)

SINGLET = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)


def test_concurrence_of_singlet_is_one():
    val = concurrence(TwoQubitState(rho=np.outer(SINGLET, SINGLET)))
    assert val.c == pytest.approx(1.0, abs=1e-14)
    assert val.lambdas.shape == (4,)
    assert np.all(np.diff(val.lambdas) <= 0)


def test_concurrence_of_product_state_is_zero():
    rho = np.zeros((4, 4))
    rho[0, 0] = 1.0
    assert concurrence(TwoQubitState(rho=rho)).c == 0.0


@pytest.mark.parametrize("p", [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0])
def test_concurrence_of_werner_states(p):
    rho = p * np.outer(SINGLET, SINGLET) + (1.0 - p) * np.eye(4) / 4.0
    want = max(0.0, (3.0 * p - 1.0) / 2.0)
    assert concurrence(TwoQubitState(rho=rho)).c == pytest.approx(want,
                                                                  abs=1e-14)


def test_concurrence_matches_conjugation_form_on_random_mixtures():
    for _ in range(25):
        probs = RNG.dirichlet(np.ones(4))
        basis = np.linalg.qr(RNG.standard_normal((4, 4)))[0]
        rho = (basis * probs) @ basis.T
        mine = concurrence(TwoQubitState(rho=rho)).c
        want = dense_concurrence(rho.astype(complex))
        assert mine == pytest.approx(want, abs=1e-9)


def test_concurrence_clamps_roundoff_negative_population():
    t0 = np.array([0.0, 1.0, 1.0, 0.0]) / np.sqrt(2.0)
    eps = 5e-11
    rho = (1.0 + eps) * np.outer(SINGLET, SINGLET) - eps * np.outer(t0, t0)
    val = concurrence(TwoQubitState(rho=rho))
    assert val.c == pytest.approx(1.0, abs=1e-9)
    eps = 1e-9
    rho = (1.0 + eps) * np.outer(SINGLET, SINGLET) - eps * np.outer(t0, t0)
    with pytest.raises(NumericalInvariantError):
        concurrence(TwoQubitState(rho=rho))


def test_concurrence_rejects_unphysical_states():
    with pytest.raises(ValueError):
        concurrence(TwoQubitState(rho=np.eye(3)))
    with pytest.raises(NumericalInvariantError):
        concurrence(TwoQubitState(rho=np.eye(4)))  # trace 4
    bad = np.eye(4) / 4.0
    bad[0, 1] = 0.2  # asymmetric
    with pytest.raises(NumericalInvariantError):
        concurrence(TwoQubitState(rho=bad))
    neg = np.diag([0.6, 0.5, -0.1, 0.0])
    with pytest.raises(NumericalInvariantError):
        concurrence(TwoQubitState(rho=neg))


def test_reduce_to_pair_matches_dense_partial_trace():
    for _ in range(10):
        n = int(RNG.integers(3, 7))
        delta = float(RNG.uniform(0.0, 1.0))
        b = float(RNG.uniform(0.0, 4.0))
        kbt = float(RNG.uniform(0.05, 1.0))
        boundary = "open" if n % 2 else "closed"
        spec = ChainSpec(n_sites=n, delta=delta, b=b, boundary=boundary)
        pair_index = int(RNG.integers(1, spec.n_bonds + 1))
        pair = pair_for(spec, pair_index)
        dec = decompose(build_hamiltonian(spec))
        state = reduce_to_pair(dec, gibbs_weights(dec, kbt), pair, n)
        rho_full = dense_thermal_state(
            dense_hamiltonian(n, delta=delta, b=b, boundary=boundary), kbt)
        want = dense_partial_trace(rho_full, n, *pair.ordered_sites)
        assert np.abs(want.imag).max() < 1e-12
        assert np.abs(state.rho - want.real).max() < 1e-12


def test_reduce_to_pair_pure_product_state():
    """Weight 1 on a product eigenvector returns its pair projector."""
    spec = ChainSpec(n_sites=4, delta=0.2, b=50.0)
    dec = decompose(build_hamiltonian(spec))
    w = thermal_weights(dec, 0.0)
    assert w.weights.max() == 1.0
    state = reduce_to_pair(dec, w, pair_for(spec, 1), 4)
    want = np.zeros((4, 4))
    want[3, 3] = 1.0  # fully polarized: both pair spins down
    assert np.abs(state.rho - want).max() < 1e-10


def test_reduce_to_pair_infinite_temperature_is_maximally_mixed():
    spec = ChainSpec(n_sites=5, delta=0.6, boundary="open")
    dec = decompose(exchange_hamiltonian(spec))
    state = reduce_to_pair(dec, gibbs_weights(dec, 1e12), pair_for(spec, 2),
                           5)
    assert np.abs(state.rho - np.eye(4) / 4.0).max() < 1e-10


def test_reduce_to_pair_validations():
    spec = ChainSpec(n_sites=4, delta=0.2)
    dec = decompose(exchange_hamiltonian(spec))
    w = gibbs_weights(dec, 0.5)
    pair = pair_for(spec, 1)
    with pytest.raises(ValueError):
        reduce_to_pair(dec, w, pair, 6)
    bad = gibbs_weights(dec, 0.5)
    object.__setattr__(bad, "weights", bad.weights[:8])
    with pytest.raises(ValueError):
        reduce_to_pair(dec, bad, pair, 4)
    worse = gibbs_weights(dec, 0.5)
    object.__setattr__(worse, "weights", worse.weights * 2.0)
    with pytest.raises(ValueError):
        reduce_to_pair(dec, worse, pair, 4)


def test_pair_density_tensor_reconstructs_reduction():
    spec = ChainSpec(n_sites=6, delta=0.2)
    dec = decompose_sectored(exchange_hamiltonian(spec),
                             build_sector_table(6))
    pair = pair_for(spec, 1)
    tensor = pair_density_tensor(dec, pair)
    assert tensor.shape == (64, 4, 4)
    w = gibbs_weights(dec, 0.3)
    via_tensor = np.einsum("n,nab->ab", w.weights, tensor)
    direct = reduce_to_pair(dec, w, pair, 6).rho
    assert np.abs(via_tensor - direct).max() < 1e-13
    traces = np.einsum("naa->n", tensor)
    assert np.abs(traces - 1.0).max() < 1e-12


def test_weight_cutoff_drops_only_underflow_tail():
    """Sub-cutoff weights sit at the underflow floor and carry no mass.

    The sqrt amplification through the concurrence lambdas turns dropped
    mass eps into errors ~sqrt(eps), so the budget is checked there.
    """
    spec = ChainSpec(n_sites=6, delta=0.2, b=1.0)
    dec = decompose(build_hamiltonian(spec))
    w = gibbs_weights(dec, 0.02)
    assert (w.weights < WEIGHT_CUTOFF).any()
    dropped = w.weights[w.weights < WEIGHT_CUTOFF].sum()
    assert np.sqrt(dropped) < 1e-148


def test_pair_concurrence_sectored_equals_full():
    spec = ChainSpec(n_sites=8, delta=0.2, b=1.5)
    pair = pair_for(spec, 1)
    for kbt in (0.0, 0.1, 0.5):
        fast = pair_concurrence(spec, kbt, pair)
        slow = pair_concurrence(spec, kbt, pair, use_sectors=False)
        assert fast.c == pytest.approx(slow.c, abs=1e-8)


def test_pair_concurrence_rejects_sectored_tilted():
    spec = ChainSpec(n_sites=4, delta=0.2, b=1.0, theta=np.pi / 4)
    with pytest.raises(ValueError):
        pair_concurrence(spec, 0.1, pair_for(spec, 1), use_sectors=True)


def test_pair_concurrence_matches_dense_reference():
    cases = [
        dict(n=6, delta=0.2, b=0.7, theta=0.0, boundary="closed",
             model="xxx", kbt=0.3, pair=1),
        dict(n=6, delta=0.2, b=0.7, theta=0.0, boundary="closed",
             model="xxx", kbt=0.3, pair=6),
        dict(n=4, delta=0.5, b=1.3, theta=np.pi / 3, boundary="open",
             model="xx", kbt=0.15, pair=2),
        dict(n=5, delta=0.8, b=2.0, theta=np.pi / 2, boundary="open",
             model="xxx", kbt=0.5, pair=3),
    ]
    for c in cases:
        spec = ChainSpec(n_sites=c["n"], delta=c["delta"], b=c["b"],
                         theta=c["theta"], boundary=c["boundary"],
                         model=c["model"])
        pair = pair_for(spec, c["pair"])
        mine = pair_concurrence(spec, c["kbt"], pair).c
        want = dense_concurrence(dense_partial_trace(
            dense_thermal_state(
                dense_hamiltonian(c["n"], delta=c["delta"], b=c["b"],
                                  theta=c["theta"], boundary=c["boundary"],
                                  model=c["model"]), c["kbt"]),
            c["n"], *pair.ordered_sites))
        assert mine == pytest.approx(want, abs=1e-9)


def test_two_site_chain_matches_closed_form():
    spec = ChainSpec(n_sites=2, delta=0.2, boundary="open")
    pair = pair_for(spec, 1)
    for b in (0.0, 0.5, 2.0, 4.4):
        for kbt in (0.0, 0.05, 0.3, 1.0):
            probe = ChainSpec(n_sites=2, delta=0.2, b=b, boundary="open")
            mine = pair_concurrence(probe, kbt, pair).c
            want = two_spin_concurrence(1.2, b, kbt)
            assert mine == pytest.approx(want, abs=1e-12)
