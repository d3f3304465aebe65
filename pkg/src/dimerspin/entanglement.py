"""Reduced two-qubit thermal states and Wootters concurrence.

The reduction never materializes the full 2^N x 2^N density matrix: each
eigenvector contributes a 4x4 pair projector, accumulated with its Gibbs
weight.  All density matrices here are real, so the spin-flipped state
is rho~ = Y rho Y with the real matrix Y = sigma^y (x) sigma^y, and the
concurrence comes from the symmetric product sqrt(rho) Y rho Y sqrt(rho).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .errors import NumericalInvariantError
from .hamiltonian import build_hamiltonian, exchange_hamiltonian, pair_for
from .hilbert import build_sector_table, pair_permutation
from .spectral import decompose, decompose_sectored, thermal_weights

# Dropped Gibbs weight enters the concurrence through sqrt(w_i w_j) cross
# terms, so discarding mass eps can move a lambda by ~sqrt(eps).  The cutoff
# therefore sits at the exp underflow floor: it only skips weights that
# cannot shift any lambda by more than ~1e-150, not merely the trace.
WEIGHT_CUTOFF = 1e-300

# sigma^y (x) sigma^y in the basis |00>,|01>,|10>,|11> (real).
_Y = np.zeros((4, 4))
_Y[0, 3] = _Y[3, 0] = -1.0
_Y[1, 2] = _Y[2, 1] = 1.0


@dataclass(frozen=True)
class TwoQubitState:
    """4x4 real density matrix in the basis |00>,|01>,|10>,|11>.

    The first slot is the lower-numbered site of the pair.
    """

    rho: np.ndarray


@dataclass(frozen=True)
class ConcurrenceValue:
    """Concurrence c with the four descending lambda values behind it."""

    c: float
    lambdas: np.ndarray


def pair_density_tensor(decomp, pair):
    """Per-eigenvector 4x4 pair projectors, shape (dim, 4, 4).

    Entry n is the partial trace of |v_n><v_n| onto the pair; a thermal
    reduced state is then just a weighted sum over the first axis.  Sweeps
    compute this once per decomposition and reuse it for every (B, kT).
    """
    a, b = pair.ordered_sites
    if decomp.dim != 1 << pair.n_sites:
        raise ValueError("decomposition size does not match the pair's chain")
    perm = pair_permutation(pair.n_sites, a, b)
    return _kernels.pair_density(decomp.vector_rows, perm)


def reduce_to_pair(decomp, weights, pair, n_sites):
    """Thermal reduced density matrix of one site pair.

    Accumulates w_n * (pair projector of v_n) over eigenvectors with
    w_n >= WEIGHT_CUTOFF, which skips only weights at the exp underflow
    floor; see the cutoff's definition for why trace-level tolerance is
    not enough here.
    """
    if pair.n_sites != n_sites or decomp.dim != 1 << n_sites:
        raise ValueError("pair, n_sites and decomposition disagree")
    a, b = pair.ordered_sites
    if not (1 <= a < b <= n_sites):
        raise ValueError(f"invalid pair sites {pair.sites}")
    w = weights.weights
    if w.shape[0] != decomp.dim:
        raise ValueError("weights do not match decomposition size")
    total = w.sum()
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"weights are not normalized (sum {total!r})")
    sel = np.nonzero(w >= WEIGHT_CUTOFF)[0]
    perm = pair_permutation(n_sites, a, b)
    projectors = _kernels.pair_density(
        np.ascontiguousarray(decomp.vector_rows[sel]), perm)
    rho = np.einsum("n,nab->ab", w[sel], projectors)
    return TwoQubitState(rho=rho)


def _check_state(rho):
    if rho.shape != (4, 4):
        raise ValueError(f"two-qubit state must be 4x4, got {rho.shape}")
    trace = rho.trace()
    if abs(trace - 1.0) > 1e-10:
        raise NumericalInvariantError(f"state trace {trace!r} is not 1")
    asym = np.abs(rho - rho.T).max()
    if asym > 1e-10:
        raise NumericalInvariantError(f"state asymmetry {asym:.3e}")


def concurrence(state):
    """Wootters concurrence of a real two-qubit density matrix.

    Diagonalizes rho = U D U^T, clamps roundoff-negative populations, and
    takes the eigenvalues of the symmetric matrix
    sqrt(D) U^T Y U sqrt(D), whose absolute values are the descending
    lambda_i; c = max(0, l1 - l2 - l3 - l4).
    """
    rho = state.rho
    _check_state(rho)
    d, u = np.linalg.eigh(rho)
    if d.min() < -1e-10:
        raise NumericalInvariantError(
            f"state has negative eigenvalue {d.min():.3e}")
    d = np.where(d < 0.0, 0.0, d)
    sq = np.sqrt(d)
    a = (sq[:, None] * (u.T @ _Y @ u)) * sq[None, :]
    lambdas = np.sort(np.abs(np.linalg.eigvalsh(a)))[::-1]
    c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]
    c = min(max(c, 0.0), 1.0)
    return ConcurrenceValue(c=float(c), lambdas=lambdas)


def pair_concurrence(spec, kbt, pair, use_sectors=None):
    """Thermal concurrence of one bond pair of the chain.

    Axial-field chains (theta = 0) use the magnetization-sector fast path
    by default; ``use_sectors=False`` forces a fresh full diagonalization,
    which is the slow reference route.
    """
    pair = pair_for(spec, pair.index)
    if use_sectors is None:
        use_sectors = spec.theta == 0.0
    if use_sectors:
        if spec.theta != 0.0:
            raise ValueError("sectored path requires theta = 0")
        base = replace(spec, b=0.0)
        decomp = decompose_sectored(exchange_hamiltonian(base),
                                    build_sector_table(spec.n_sites))
        weights = thermal_weights(decomp, kbt, b=spec.b,
                                  use_sector_shift=True)
    else:
        decomp = decompose(build_hamiltonian(spec))
        weights = thermal_weights(decomp, kbt)
    state = reduce_to_pair(decomp, weights, pair, spec.n_sites)
    return concurrence(state)
