"""Chain parameter validation and Hamiltonian assembly against dense kron."""

import numpy as np
import pytest

from dimerspin import (ChainSpec, Pair, pair_for, bond_strength,
                       exchange_hamiltonian, build_hamiltonian)
from dimerspin.hilbert import magnetization_diagonal
from _oracles import dense_hamiltonian


def test_chain_spec_defaults():
    spec = ChainSpec(n_sites=8)
    assert spec.j == 1.0 and spec.delta == 0.2 and spec.b == 0.0
    assert spec.boundary == "closed" and spec.model == "xxx"
    assert spec.n_bonds == 8


def test_chain_spec_open_bond_count():
    assert ChainSpec(n_sites=7, boundary="open").n_bonds == 6


@pytest.mark.parametrize("kwargs", [
    dict(n_sites=0),
    dict(n_sites=16),
    dict(n_sites=5, boundary="closed"),
    dict(n_sites=4, delta=-0.1),
    dict(n_sites=4, delta=1.1),
    dict(n_sites=4, b=-0.5),
    dict(n_sites=4, theta=-0.1),
    dict(n_sites=4, theta=2.0),
    dict(n_sites=4, boundary="ring"),
    dict(n_sites=4, model="xyz"),
])
def test_chain_spec_rejects_bad_parameters(kwargs):
    with pytest.raises(ValueError):
        ChainSpec(**kwargs)


def test_pair_sites_and_kind():
    p1 = Pair(index=1, n_sites=6)
    assert p1.sites == (1, 2) and p1.kind == "strong"
    p2 = Pair(index=2, n_sites=6)
    assert p2.sites == (2, 3) and p2.kind == "weak"
    wrap = Pair(index=6, n_sites=6)
    assert wrap.sites == (6, 1)
    assert wrap.ordered_sites == (1, 6)
    assert wrap.kind == "weak"


def test_pair_for_respects_bond_count():
    spec = ChainSpec(n_sites=6, boundary="open")
    assert pair_for(spec, 5).sites == (5, 6)
    with pytest.raises(ValueError):
        pair_for(spec, 6)
    with pytest.raises(ValueError):
        pair_for(spec, 0)


def test_bond_strength_alternation():
    spec = ChainSpec(n_sites=6, j=2.0, delta=0.25)
    assert bond_strength(spec, pair_for(spec, 1)) == pytest.approx(2.5)
    assert bond_strength(spec, pair_for(spec, 2)) == pytest.approx(1.5)
    assert bond_strength(spec, pair_for(spec, 3)) == pytest.approx(2.5)
    open_spec = ChainSpec(n_sites=6, boundary="open")
    with pytest.raises(ValueError):
        bond_strength(open_spec, Pair(index=6, n_sites=6))


@pytest.mark.parametrize("n,delta,boundary,model", [
    (2, 0.2, "open", "xxx"),
    (4, 0.0, "closed", "xxx"),
    (4, 1.0, "closed", "xx"),
    (5, 0.7, "open", "xx"),
    (6, 0.2, "closed", "xxx"),
])
def test_exchange_matches_dense(n, delta, boundary, model):
    spec = ChainSpec(n_sites=n, delta=delta, boundary=boundary, model=model)
    mine = exchange_hamiltonian(spec)
    want = dense_hamiltonian(n, delta=delta, boundary=boundary, model=model)
    assert np.abs(want.imag).max() < 1e-15
    assert np.abs(mine - want.real).max() < 1e-12
    assert np.array_equal(mine, mine.T)


@pytest.mark.parametrize("b,theta", [(0.0, 0.0), (1.3, 0.0), (0.9, np.pi / 4),
                                     (2.0, np.pi / 2)])
def test_build_matches_dense_with_field(b, theta):
    spec = ChainSpec(n_sites=5, delta=0.6, b=b, theta=theta, boundary="open")
    mine = build_hamiltonian(spec)
    want = dense_hamiltonian(5, delta=0.6, b=b, theta=theta, boundary="open")
    assert np.abs(mine - want.real).max() < 1e-12
    assert np.array_equal(mine, mine.T)


def test_axial_field_is_a_diagonal_shift():
    spec = ChainSpec(n_sites=6, delta=0.2, b=1.7)
    base = exchange_hamiltonian(spec)
    shifted = base + 1.7 * np.diag(magnetization_diagonal(6))
    assert np.array_equal(build_hamiltonian(spec), shifted)
