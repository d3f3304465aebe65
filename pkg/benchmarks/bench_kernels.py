"""Time the numba kernels against the numpy fallbacks.

Run:

    python3 benchmarks/bench_kernels.py [--n 12] [--vectors 512] [--repeat 5]

Reports per-kernel best-of-``repeat`` wall times for both backends and
checks that they agree.  The first numba call is excluded (JIT warmup).
"""

import argparse
import time

import numpy as np

from dimerspin import _kernels
from dimerspin.hamiltonian import ChainSpec, _bond_arrays
from dimerspin.hilbert import pair_permutation, site_mask


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=12, help="chain length")
    ap.add_argument("--vectors", type=int, default=512,
                    help="eigenvector count for the density kernel")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if _kernels.exchange_fill_numba is None:
        raise SystemExit("numba is not importable; nothing to compare")

    n = args.n
    dim = 1 << n
    spec = ChainSpec(n_sites=n, delta=0.2)
    mask_i, mask_j, jxy, jz = _bond_arrays(spec)
    site_masks = np.array([site_mask(n, s) for s in range(1, n + 1)],
                          dtype=np.int64)
    rng = np.random.default_rng(0)
    vt = rng.standard_normal((args.vectors, dim))
    vt /= np.linalg.norm(vt, axis=1, keepdims=True)
    perm = pair_permutation(n, 1, 2)

    # warm up the JIT outside the timed region
    h = np.zeros((dim, dim))
    _kernels.exchange_fill_numba(h, mask_i, mask_j, jxy, jz)
    _kernels.transverse_fill_numba(np.zeros((dim, dim)), site_masks, 0.3)
    _kernels.pair_density_numba(vt[:2], perm)

    print(f"n={n} (dim {dim}), vectors={args.vectors}, "
          f"best of {args.repeat}")
    header = f"{'kernel':<16} {'numba [ms]':>12} {'numpy [ms]':>12} " \
             f"{'speedup':>9}"
    print(header)
    print("-" * len(header))

    cases = [
        ("exchange_fill",
         lambda: _kernels.exchange_fill_numba(
             np.zeros((dim, dim)), mask_i, mask_j, jxy, jz),
         lambda: _kernels.exchange_fill_numpy(
             np.zeros((dim, dim)), mask_i, mask_j, jxy, jz)),
        ("transverse_fill",
         lambda: _kernels.transverse_fill_numba(
             np.zeros((dim, dim)), site_masks, 0.3),
         lambda: _kernels.transverse_fill_numpy(
             np.zeros((dim, dim)), site_masks, 0.3)),
        ("pair_density",
         lambda: _kernels.pair_density_numba(vt, perm),
         lambda: _kernels.pair_density_numpy(vt, perm)),
    ]
    for name, f_numba, f_numpy in cases:
        t_numba = best_of(f_numba, args.repeat)
        t_numpy = best_of(f_numpy, args.repeat)
        print(f"{name:<16} {1e3 * t_numba:>12.2f} {1e3 * t_numpy:>12.2f} "
              f"{t_numpy / t_numba:>8.2f}x")

    h_a = np.zeros((dim, dim))
    h_b = np.zeros((dim, dim))
    _kernels.exchange_fill_numba(h_a, mask_i, mask_j, jxy, jz)
    _kernels.exchange_fill_numpy(h_b, mask_i, mask_j, jxy, jz)
    assert np.array_equal(h_a, h_b), "exchange backends disagree"
    d_a = _kernels.pair_density_numba(vt, perm)
    d_b = _kernels.pair_density_numpy(vt, perm)
    worst = np.abs(d_a - d_b).max()
    assert worst < 1e-13, f"pair density backends disagree by {worst}"
    print(f"agreement: exchange identical, pair density within {worst:.1e}")


if __name__ == "__main__":
    main()
