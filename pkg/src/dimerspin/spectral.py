"""Dense symmetric eigendecomposition and stabilized Gibbs weights.

The magnetization-sector fast path (``decompose_sectored``) exploits that
the field-free exchange Hamiltonian commutes with total sigma^z: each
sector block is diagonalized independently, and an axial field b only
shifts eigenvalues by b*m without changing eigenvectors, so a whole field
sweep reuses one decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NumericalInvariantError
from .hilbert import N_MAX, magnetization_diagonal

_DIM_MAX = 1 << N_MAX
_CHUNK = 512


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) with orthonormal eigenvector columns.

    ``sector_labels`` holds the magnetization m of each eigenvector when
    the sectored path produced the decomposition, else None.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sector_labels: np.ndarray | None = None

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    @cached_property
    def vector_rows(self):
        """Eigenvectors as C-contiguous rows (row n = eigenvector n)."""
        return np.ascontiguousarray(self.eigenvectors.T)

    def energies_at(self, b):
        """Eigenvalues shifted by the axial field term b*m per eigenvector."""
        if self.sector_labels is None:
            raise ValueError("field shift requires sector labels "
                             "(use the sectored decomposition path)")
        return self.eigenvalues + b * self.sector_labels


@dataclass(frozen=True)
class GibbsWeights:
    """Normalized Boltzmann weights with their stabilization record."""

    weights: np.ndarray
    kbt: float
    e_min: float


def _check_square(h):
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if h.shape[0] > _DIM_MAX:
        raise ValueError(
            f"dimension {h.shape[0]} exceeds dense limit {_DIM_MAX}")


def _max_abs(h):
    scale = 0.0
    for r0 in range(0, h.shape[0], _CHUNK):
        scale = max(scale, np.abs(h[r0:r0 + _CHUNK]).max())
    return scale


def decompose(h):
    """Full eigensystem of a real symmetric matrix.

    Checks symmetry to 1e-12 relative before handing the matrix to the
    dense symmetric solver; eigenvalues come back ascending with
    orthonormal eigenvector columns.
    """
    _check_square(h)
    scale = _max_abs(h)
    viol = 0.0
    for r0 in range(0, h.shape[0], _CHUNK):
        r1 = min(r0 + _CHUNK, h.shape[0])
        viol = max(viol, np.abs(h[r0:r1, :] - h[:, r0:r1].T).max())
    if viol > 1e-12 * max(1.0, scale):
        raise NumericalInvariantError(
            f"matrix is not symmetric: max asymmetry {viol:.3e} "
            f"exceeds 1e-12 * {max(1.0, scale):.3e}")
    eigenvalues, eigenvectors = np.linalg.eigh(h)
    return SpectralDecomposition(eigenvalues=eigenvalues,
                                 eigenvectors=eigenvectors)


def decompose_sectored(h_exchange, table):
    """Blockwise eigensystem of an exchange Hamiltonian that conserves m.

    Verifies that every cross-sector matrix element vanishes (to 1e-12
    relative), diagonalizes each magnetization block densely, and merges
    the blocks into one ascending-ordered decomposition carrying
    ``sector_labels``.
    """
    _check_square(h_exchange)
    dim = h_exchange.shape[0]
    if dim != 1 << table.n_sites:
        raise ValueError(f"matrix dimension {dim} does not match the "
                         f"{table.n_sites}-site sector table")
    m_state = table.m_of_state
    scale = _max_abs(h_exchange)
    viol = 0.0
    for r0 in range(0, dim, _CHUNK):
        r1 = min(r0 + _CHUNK, dim)
        off = m_state[r0:r1, None] != m_state[None, :]
        viol = max(viol, np.abs(h_exchange[r0:r1] * off).max())
    if viol > 1e-12 * max(1.0, scale):
        raise NumericalInvariantError(
            f"matrix couples different magnetization sectors: "
            f"max cross element {viol:.3e}")

    energies = np.empty(dim)
    labels = np.empty(dim, dtype=np.int64)
    vectors = np.zeros((dim, dim), order="F")
    pos = 0
    for m, idx in table.sectors:
        k = idx.shape[0]
        block = h_exchange[np.ix_(idx, idx)]
        w, v = np.linalg.eigh(block)
        energies[pos:pos + k] = w
        labels[pos:pos + k] = m
        vectors[np.ix_(idx, np.arange(pos, pos + k))] = v
        pos += k
    order = np.argsort(energies, kind="stable")
    return SpectralDecomposition(eigenvalues=energies[order],
                                 eigenvectors=vectors[:, order],
                                 sector_labels=labels[order])


def _effective_energies(decomp, b, use_sector_shift):
    if use_sector_shift and b != 0.0:
        return decomp.energies_at(b)
    return decomp.eigenvalues


def gibbs_weights(decomp, kbt, b=0.0, use_sector_shift=False):
    """Stabilized Boltzmann weights at temperature kbt > 0.

    With ``use_sector_shift`` the effective energies are E_n + b*m_n,
    which evaluates the axial-field Hamiltonian without rebuilding it.
    """
    if kbt <= 0.0:
        raise ValueError("kbt must be > 0; use ground_state_weights for "
                         "the zero-temperature limit")
    energies = _effective_energies(decomp, b, use_sector_shift)
    e_min = energies.min()
    with np.errstate(over="ignore"):
        w = np.exp(-(energies - e_min) / kbt)
    w /= w.sum()
    total = w.sum()
    if abs(total - 1.0) > 1e-12:
        raise NumericalInvariantError(
            f"Gibbs weights sum to {total!r}, not 1")
    return GibbsWeights(weights=w, kbt=kbt, e_min=e_min)


def ground_state_weights(decomp, degeneracy_tol=1e-9, b=0.0,
                         use_sector_shift=False):
    """Equal weights on the (possibly degenerate) ground manifold.

    States within ``degeneracy_tol * max(1, |E_min|)`` of the minimum share
    the weight equally; this is the Gibbs state limit kbt -> 0.
    """
    energies = _effective_energies(decomp, b, use_sector_shift)
    e_min = energies.min()
    ground = energies - e_min <= degeneracy_tol * max(1.0, abs(e_min))
    w = np.zeros(energies.shape[0])
    w[ground] = 1.0 / np.count_nonzero(ground)
    return GibbsWeights(weights=w, kbt=0.0, e_min=e_min)


def thermal_weights(decomp, kbt, b=0.0, use_sector_shift=False,
                    degeneracy_tol=1e-9):
    """Gibbs weights for kbt > 0, ground-manifold weights for kbt = 0."""
    if kbt < 0.0:
        raise ValueError(f"kbt must be >= 0, got {kbt}")
    if kbt == 0.0:
        return ground_state_weights(decomp, degeneracy_tol=degeneracy_tol,
                                    b=b, use_sector_shift=use_sector_shift)
    return gibbs_weights(decomp, kbt, b=b, use_sector_shift=use_sector_shift)


def thermal_expectation(decomp, weights, observable):
    """Thermal average sum_n w_n <v_n|O|v_n>.

    ``observable`` may be a full matrix or, for diagonal operators, a 1-D
    array of diagonal entries (much cheaper).
    """
    w = weights.weights
    if w.shape[0] != decomp.dim:
        raise ValueError("weights do not match decomposition size")
    sel = np.nonzero(w > 0.0)[0]
    v = decomp.eigenvectors[:, sel]
    observable = np.asarray(observable)
    if observable.ndim == 1:
        if observable.shape[0] != decomp.dim:
            raise ValueError("observable diagonal has wrong length")
        per_state = (v * v).T @ observable
    elif observable.ndim == 2:
        if observable.shape != (decomp.dim, decomp.dim):
            raise ValueError("observable matrix has wrong shape")
        per_state = np.einsum("sk,sk->k", v, observable @ v)
    else:
        raise ValueError("observable must be 1-D diagonal or 2-D matrix")
    return float(w[sel] @ per_state)


def magnetization_expectation(decomp, weights, n_sites):
    """Thermal average of total sigma^z."""
    if decomp.sector_labels is not None:
        return float(weights.weights @ decomp.sector_labels)
    return thermal_expectation(decomp, weights,
                               magnetization_diagonal(n_sites))


def ground_state_magnetization(decomp, b_values):
    """Magnetization m of the lowest level E_n + b*m_n at each field value.

    At an exact crossing the lower-index level wins, which makes the output
    deterministic on any grid.
    """
    if decomp.sector_labels is None:
        raise ValueError("ground-state magnetization tracking requires "
                         "sector labels")
    b_values = np.asarray(b_values, dtype=float)
    shifted = decomp.eigenvalues[None, :] \
        + b_values[:, None] * decomp.sector_labels[None, :]
    return decomp.sector_labels[np.argmin(shifted, axis=1)].astype(float)
