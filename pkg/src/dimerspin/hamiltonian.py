"""Dimerized Heisenberg chain Hamiltonians.

The chain Hamiltonian is

    H = B cos(theta) sum_i sigma^z_i + B sin(theta) sum_i sigma^x_i
        + sum_bonds J [1 + (-1)^(i+1) delta] (sx sx + sy sy + [xxx] sz sz)

with bond i joining sites (i, i+1), wrapping around for closed chains.
Odd bonds are strong, J(1+delta); even bonds are weak, J(1-delta).
Energies and fields are quoted in Pauli units (sigma, not S = sigma/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .hilbert import N_MAX, magnetization_diagonal, site_mask

BOUNDARIES = ("closed", "open")
MODELS = ("xxx", "xx")


@dataclass(frozen=True)
class ChainSpec:
    """Full physical description of one chain instance.

    ``j`` sets the exchange scale (the antiferromagnetic case j > 0 is the
    studied regime; j < 0 is accepted but untested), ``delta`` the bond
    alternation in [0, 1], ``b`` the field magnitude (non-negative; the
    negative-field physics follows from the global spin-flip symmetry) and
    ``theta`` the field tilt from the z-axis in [0, pi/2].
    """

    n_sites: int
    j: float = 1.0
    delta: float = 0.2
    b: float = 0.0
    theta: float = 0.0
    boundary: str = "closed"
    model: str = "xxx"

    def __post_init__(self):
        if not 2 <= self.n_sites <= N_MAX:
            raise ValueError(
                f"n_sites must be in [2, {N_MAX}], got {self.n_sites}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, "
                             f"got {self.boundary!r}")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, "
                             f"got {self.model!r}")
        if self.boundary == "closed" and self.n_sites % 2:
            raise ValueError("closed chains require even n_sites so the "
                             "strong/weak bond alternation is consistent "
                             "around the ring")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must be in [0, 1], got {self.delta}")
        if self.b < 0.0:
            raise ValueError(f"b must be >= 0, got {self.b}")
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError(
                f"theta must be in [0, pi/2], got {self.theta}")

    @property
    def n_bonds(self):
        return self.n_sites if self.boundary == "closed" else self.n_sites - 1


@dataclass(frozen=True)
class Pair:
    """One bond of the chain, identified by its 1-based bond index.

    Bond i joins sites (i, i mod N + 1); odd bonds are the strong pairs.
    ``ordered_sites`` puts the lower site number first, which fixes the
    basis order of reduced two-qubit states (the wrap bond (N, 1) reduces
    in the order (1, N)).
    """

    index: int
    n_sites: int

    @property
    def sites(self):
        return (self.index, self.index % self.n_sites + 1)

    @property
    def ordered_sites(self):
        a, b = self.sites
        return (a, b) if a < b else (b, a)

    @property
    def kind(self):
        return "strong" if self.index % 2 else "weak"


def pair_for(spec, index):
    """Validated Pair for bond ``index`` of ``spec``'s chain."""
    if not 1 <= index <= spec.n_bonds:
        raise ValueError(
            f"bond index must be in [1, {spec.n_bonds}] for a "
            f"{spec.boundary} chain of {spec.n_sites} sites, got {index}")
    return Pair(index=index, n_sites=spec.n_sites)


def bond_strength(spec, pair):
    """Coupling J*(1+delta) on odd bonds, J*(1-delta) on even bonds."""
    if not 1 <= pair.index <= spec.n_bonds:
        raise ValueError(f"bond {pair.index} out of range for spec")
    sign = 1.0 if pair.index % 2 else -1.0
    return spec.j * (1.0 + sign * spec.delta)


def _bond_arrays(spec):
    n = spec.n_sites
    masks_i = np.empty(spec.n_bonds, dtype=np.int64)
    masks_j = np.empty(spec.n_bonds, dtype=np.int64)
    jxy = np.empty(spec.n_bonds)
    for b in range(spec.n_bonds):
        idx = b + 1
        masks_i[b] = site_mask(n, idx)
        masks_j[b] = site_mask(n, idx % n + 1)
        sign = 1.0 if idx % 2 else -1.0
        jxy[b] = spec.j * (1.0 + sign * spec.delta)
    jz = jxy.copy() if spec.model == "xxx" else np.zeros_like(jxy)
    return masks_i, masks_j, jxy, jz


def exchange_hamiltonian(spec):
    """Field-free exchange part of the Hamiltonian (dense, real symmetric).

    This is the piece that commutes with total sigma^z, so it is the input
    to the magnetization-sector fast path.
    """
    dim = 1 << spec.n_sites
    h = np.zeros((dim, dim))
    masks_i, masks_j, jxy, jz = _bond_arrays(spec)
    _kernels.exchange_fill(h, masks_i, masks_j, jxy, jz)
    return h


def build_hamiltonian(spec):
    """Full Hamiltonian including Zeeman and transverse field terms.

    At theta = 0 the result is entrywise identical to the exchange part
    plus the axial Zeeman diagonal (no transverse term is ever added).
    """
    h = exchange_hamiltonian(spec)
    bz = spec.b * math.cos(spec.theta)
    bx = spec.b * math.sin(spec.theta)
    if bz != 0.0:
        dim = h.shape[0]
        idx = np.arange(dim)
        h[idx, idx] += bz * magnetization_diagonal(spec.n_sites)
    if bx != 0.0:
        masks = np.array(
            [site_mask(spec.n_sites, s) for s in range(1, spec.n_sites + 1)],
            dtype=np.int64)
        _kernels.transverse_fill(h, masks, bx)
    return h
