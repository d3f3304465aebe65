"""Computational-basis bookkeeping for chains of spin-1/2 sites.

Basis convention: sites are numbered 1..n, site 1 occupies the most
significant bit of the basis index, and a cleared bit means spin up
(``sigma^z = +1``).  All operators use the Pauli normalization (eigenvalues
of ``sigma^z`` are +-1, not +-1/2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


N_MAX = 14


def _check_n(n_sites):
    if not 1 <= n_sites <= N_MAX:
        raise ValueError(f"n_sites must be in [1, {N_MAX}], got {n_sites}")


def site_mask(n_sites, site):
    """Bit mask selecting ``site`` (1-based, site 1 is the MSB)."""
    _check_n(n_sites)
    if not 1 <= site <= n_sites:
        raise ValueError(f"site must be in [1, {n_sites}], got {site}")
    return 1 << (n_sites - site)


def single_site_pauli(n_sites, site, axis):
    """Dense matrix of one Pauli operator embedded in the full chain.

    Only ``axis`` 'x' and 'z' are supported; a lone sigma^y is imaginary
    and the package keeps every matrix real (sigma^y only ever appears in
    the real product sigma^y sigma^y, see :func:`two_site_coupling`).
    """
    mask = site_mask(n_sites, site)
    dim = 1 << n_sites
    states = np.arange(dim)
    h = np.zeros((dim, dim))
    if axis == "z":
        h[states, states] = 1.0 - 2.0 * ((states & mask) != 0)
    elif axis == "x":
        h[states ^ mask, states] = 1.0
    elif axis == "y":
        raise ValueError("a standalone sigma^y is imaginary; only the real "
                         "product sigma^y sigma^y is available via "
                         "two_site_coupling")
    else:
        raise ValueError(f"axis must be 'x' or 'z', got {axis!r}")
    return h


def two_site_coupling(n_sites, i, j, axis):
    """Dense matrix of sigma^axis_i sigma^axis_j embedded in the chain.

    Real for all three axes; the 'y' product flips both bits with entry
    ``-z_i z_j`` evaluated on the source state.  Symmetric in (i, j).
    """
    if i == j:
        raise ValueError("sites i and j must differ")
    mask_i = site_mask(n_sites, i)
    mask_j = site_mask(n_sites, j)
    dim = 1 << n_sites
    states = np.arange(dim)
    zi = 1.0 - 2.0 * ((states & mask_i) != 0)
    zj = 1.0 - 2.0 * ((states & mask_j) != 0)
    h = np.zeros((dim, dim))
    if axis == "z":
        h[states, states] = zi * zj
    elif axis == "x":
        h[states ^ (mask_i | mask_j), states] = 1.0
    elif axis == "y":
        h[states ^ (mask_i | mask_j), states] = -zi * zj
    else:
        raise ValueError(f"axis must be 'x', 'y' or 'z', got {axis!r}")
    return h


def magnetization_diagonal(n_sites):
    """Diagonal of the total magnetization sum_i sigma^z_i, length 2**n."""
    _check_n(n_sites)
    states = np.arange(1 << n_sites, dtype=np.uint64)
    popcount = np.bitwise_count(states).astype(np.int64)
    return (n_sites - 2 * popcount).astype(np.float64)


@dataclass(frozen=True)
class SectorTable:
    """Partition of the basis into total-magnetization sectors.

    ``sectors`` lists ``(m, indices)`` pairs with m descending and the basis
    indices ascending inside each sector; ``m_of_state[s]`` gives the sector
    label of basis state s.
    """

    n_sites: int
    sectors: tuple
    m_of_state: np.ndarray


def build_sector_table(n_sites):
    """Group basis states by total magnetization m = n - 2*popcount."""
    _check_n(n_sites)
    m_diag = magnetization_diagonal(n_sites)
    sectors = []
    for k in range(n_sites + 1):
        m = n_sites - 2 * k
        idx = np.nonzero(m_diag == m)[0]
        sectors.append((m, idx))
    return SectorTable(n_sites=n_sites, sectors=tuple(sectors),
                       m_of_state=m_diag.astype(np.int64))


def pair_permutation(n_sites, site_a, site_b):
    """Basis reordering used for tracing out everything but one site pair.

    Returns an int64 array of shape (4, 2**n / 4) with ``perm[p, r] = s``,
    where p encodes the pair pattern (``2*bit_a + bit_b``) and r packs the
    remaining bits in site order.  Requires ``site_a < site_b``.
    """
    if not site_a < site_b:
        raise ValueError("pair_permutation requires site_a < site_b")
    mask_a = site_mask(n_sites, site_a)
    mask_b = site_mask(n_sites, site_b)
    dim = 1 << n_sites
    states = np.arange(dim, dtype=np.int64)
    p = 2 * ((states & mask_a) != 0) + ((states & mask_b) != 0)
    r = np.zeros(dim, dtype=np.int64)
    for site in range(1, n_sites + 1):
        if site == site_a or site == site_b:
            continue
        r = (r << 1) | ((states & site_mask(n_sites, site)) != 0)
    perm = np.empty((4, dim // 4), dtype=np.int64)
    perm[p, r] = states
    return perm
