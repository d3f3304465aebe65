"""Hot inner loops: Hamiltonian assembly and reduced-density accumulation.

Two interchangeable backends:

* ``numba`` (default): the scalar loops below compiled with ``@njit``.
* ``numpy``: vectorized fallback, selected with ``DIMERSPIN_BACKEND=numpy``
  (also used automatically when numba is not importable).

Both backends produce bit-identical Hamiltonians (same per-entry addition
order).  ``pair_density`` may differ between backends at machine epsilon
because the numpy path sums through BLAS.  ``benchmarks/bench_kernels.py``
compares the two.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


_requested = os.environ.get("DIMERSPIN_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(
        f"DIMERSPIN_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )
if _requested == "numba" and not _numba_available():
    raise RuntimeError("DIMERSPIN_BACKEND=numba but numba is not importable")

USE_NUMBA = _requested != "numpy" and _numba_available()


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# scalar-loop implementations (compiled under numba, also runnable as-is)
# ---------------------------------------------------------------------------

def _exchange_fill_loop(h, mask_i, mask_j, jxy, jz):
    # h: (dim, dim) accumulator. Bond b couples the two bit positions given
    # by mask_i[b], mask_j[b] with xy strength jxy[b] and z strength jz[b].
    # Off-diagonal flip-flop entries are written from both members of each
    # index pair, so h stays exactly symmetric.
    dim = h.shape[0]
    n_bonds = mask_i.shape[0]
    for s in range(dim):
        acc = 0.0
        for b in range(n_bonds):
            zi = -1.0 if s & mask_i[b] else 1.0
            zj = -1.0 if s & mask_j[b] else 1.0
            acc += jz[b] * (zi * zj)
            if zi != zj:
                t = s ^ (mask_i[b] | mask_j[b])
                h[t, s] += 2.0 * jxy[b]
        h[s, s] += acc


def _transverse_fill_loop(h, site_masks, coef):
    # Adds coef * sigma^x on every listed site (single bit flip per site).
    dim = h.shape[0]
    n_sites = site_masks.shape[0]
    for s in range(dim):
        for k in range(n_sites):
            h[s ^ site_masks[k], s] += coef


def _pair_density_loop(vt, perm):
    # vt: (n_vec, dim) eigenvectors as rows; perm: (4, dim/4) basis indices
    # grouped by the pair pattern |00>,|01>,|10>,|11>.  Returns (n_vec, 4, 4)
    # with out[n] = the pair-reduced projector of eigenvector n.
    n_vec = vt.shape[0]
    rest = perm.shape[1]
    out = np.empty((n_vec, 4, 4))
    for n in range(n_vec):
        for p in range(4):
            for q in range(p, 4):
                acc = 0.0
                for r in range(rest):
                    acc += vt[n, perm[p, r]] * vt[n, perm[q, r]]
                out[n, p, q] = acc
                out[n, q, p] = acc
    return out


# ---------------------------------------------------------------------------
# vectorized numpy fallbacks
# ---------------------------------------------------------------------------

def exchange_fill_numpy(h, mask_i, mask_j, jxy, jz):
    dim = h.shape[0]
    states = np.arange(dim, dtype=np.int64)
    diag = np.zeros(dim)
    for b in range(mask_i.shape[0]):
        zi = 1.0 - 2.0 * ((states & mask_i[b]) != 0)
        zj = 1.0 - 2.0 * ((states & mask_j[b]) != 0)
        diag += jz[b] * (zi * zj)
        flip = np.nonzero(zi != zj)[0]
        h[flip ^ (mask_i[b] | mask_j[b]), flip] += 2.0 * jxy[b]
    h[states, states] += diag


def transverse_fill_numpy(h, site_masks, coef):
    dim = h.shape[0]
    states = np.arange(dim, dtype=np.int64)
    for m in site_masks:
        h[states ^ m, states] += coef


def pair_density_numpy(vt, perm, block=256):
    n_vec = vt.shape[0]
    cols = perm.reshape(-1)
    out = np.empty((n_vec, 4, 4))
    for s in range(0, n_vec, block):
        e = min(s + block, n_vec)
        g = vt[s:e, cols].reshape(e - s, 4, perm.shape[1])
        out[s:e] = g @ g.transpose(0, 2, 1)
    return out


# ---------------------------------------------------------------------------
# backend dispatch
# ---------------------------------------------------------------------------

if _numba_available():
    from numba import njit

    exchange_fill_numba = njit(cache=True)(_exchange_fill_loop)
    transverse_fill_numba = njit(cache=True)(_transverse_fill_loop)
    pair_density_numba = njit(cache=True)(_pair_density_loop)
else:  # pragma: no cover - exercised only in numba-less installs
    exchange_fill_numba = None
    transverse_fill_numba = None
    pair_density_numba = None

if USE_NUMBA:
    exchange_fill = exchange_fill_numba
    transverse_fill = transverse_fill_numba
    pair_density = pair_density_numba
else:
    exchange_fill = exchange_fill_numpy
    transverse_fill = transverse_fill_numpy
    pair_density = pair_density_numpy
