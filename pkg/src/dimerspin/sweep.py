"""Parameter-grid sweeps, plateau detection, critical-field extraction.

``run_sweep`` fills a concurrence grid over up to two of {b, kbt, delta,
theta}.  Axial-field points (theta = 0) sharing one delta reuse a single
sectored decomposition for every (b, kbt) on the grid; tilted points need
one full diagonalization per field value.  Grid slots are written by index,
so the output is bit-identical for any thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .entanglement import (WEIGHT_CUTOFF, TwoQubitState, concurrence,
                           pair_density_tensor)
from .hamiltonian import (build_hamiltonian, exchange_hamiltonian, pair_for)
from .hilbert import build_sector_table
from .spectral import (decompose, decompose_sectored,
                       ground_state_magnetization, thermal_weights)

AXIS_NAMES = ("b", "kbt", "delta", "theta")


@dataclass(frozen=True)
class Axis:
    """One varying parameter with its strictly ascending grid values."""

    name: str
    values: np.ndarray

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"axis name must be one of {AXIS_NAMES}, "
                             f"got {self.name!r}")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("axis values must be a non-empty 1-D array")
        if values.size > 1 and not np.all(np.diff(values) > 0.0):
            raise ValueError(f"axis {self.name} values must be strictly "
                             "ascending")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class GridRequest:
    """Sweep specification: template chain, axes, tracked pairs, threads."""

    template: object
    kbt: float
    axes: tuple
    pairs: tuple
    threads: int = 0


@dataclass(frozen=True)
class SweepGrid:
    """Concurrence values on an axis grid, one slice per tracked pair.

    ``values`` has shape (len(axis1), [len(axis2),] len(pairs)).
    """

    template: object
    kbt: float
    axes: tuple
    pairs: tuple
    values: np.ndarray

    def series(self, pair_index):
        """1-D concurrence series of one tracked pair (1-D grids only)."""
        if len(self.axes) != 1:
            raise ValueError("series() requires a 1-D sweep")
        for k, pair in enumerate(self.pairs):
            if pair.index == pair_index:
                return self.values[:, k]
        raise ValueError(f"pair {pair_index} is not tracked by this grid")


def resolve_threads(threads):
    """0 means auto: DIMERSPIN_THREADS if set, else the CPU count."""
    if threads < 0:
        raise ValueError(f"threads must be >= 0, got {threads}")
    if threads:
        return threads
    env = os.environ.get("DIMERSPIN_THREADS", "").strip()
    if env:
        value = int(env)
        if value <= 0:
            raise ValueError(
                f"DIMERSPIN_THREADS must be a positive integer, got {env!r}")
        return value
    return os.cpu_count() or 1


def point_parameters(template, kbt, axes):
    """(flat index, b, kbt, delta, theta) for every grid point, in order.

    Axis values override the template's fixed fields; the flat index runs
    axis1-major, matching the layout of SweepGrid.values.
    """
    fixed = {"b": template.b, "kbt": kbt,
             "delta": template.delta, "theta": template.theta}
    grids = [a.values for a in axes]
    names = [a.name for a in axes]
    points = []
    flat = 0
    if len(axes) == 1:
        for v1 in grids[0]:
            p = dict(fixed)
            p[names[0]] = float(v1)
            points.append((flat, p["b"], p["kbt"], p["delta"], p["theta"]))
            flat += 1
    else:
        for v1 in grids[0]:
            for v2 in grids[1]:
                p = dict(fixed)
                p[names[0]] = float(v1)
                p[names[1]] = float(v2)
                points.append((flat, p["b"], p["kbt"], p["delta"],
                               p["theta"]))
                flat += 1
    return points


def _chunks(seq, n):
    size = (len(seq) + n - 1) // n
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def run_sweep(request):
    """Evaluate pair concurrence over the requested grid.

    Points are grouped by the decomposition they can share: one sectored
    decomposition per delta for axial points, one full decomposition per
    (delta, theta, b) for tilted points.  Each group computes its pair
    projectors once; every grid point is then a weight vector contraction.
    """
    template = request.template
    axes = tuple(request.axes)
    if not 1 <= len(axes) <= 2:
        raise ValueError(f"a sweep needs 1 or 2 axes, got {len(axes)}")
    if len({a.name for a in axes}) != len(axes):
        raise ValueError("axis names must be distinct")
    if not request.pairs:
        raise ValueError("at least one pair is required")
    pairs = tuple(pair_for(template, idx) for idx in request.pairs)
    points = point_parameters(template, request.kbt, axes)
    for _, b, kbt, delta, theta in points:
        # Field, temperature and angle domains match the ChainSpec rules.
        if b < 0.0:
            raise ValueError(f"b must be >= 0, got {b}")
        if kbt < 0.0:
            raise ValueError(f"kbt must be >= 0, got {kbt}")
        replace(template, b=b, delta=delta, theta=theta)

    shape = tuple(len(a) for a in axes) + (len(pairs),)
    values = np.empty(shape)
    flat_values = values.reshape(-1, len(pairs))

    groups = {}
    for flat, b, kbt, delta, theta in points:
        if theta == 0.0:
            key = ("sector", delta)
        else:
            key = ("full", delta, theta, b)
        groups.setdefault(key, []).append((flat, b, kbt))

    def eval_group(key, pts, pool=None, n_chunks=1):
        if key[0] == "sector":
            spec = replace(template, b=0.0, theta=0.0, delta=key[1])
            decomp = decompose_sectored(exchange_hamiltonian(spec),
                                        build_sector_table(spec.n_sites))
            shift = True
        else:
            _, delta, theta, b = key
            spec = replace(template, b=b, theta=theta, delta=delta)
            decomp = decompose(build_hamiltonian(spec))
            shift = False
        projectors = [pair_density_tensor(decomp, p) for p in pairs]

        def eval_points(chunk):
            for flat, b, kbt in chunk:
                w = thermal_weights(decomp, kbt, b=b,
                                    use_sector_shift=shift).weights
                w = np.where(w >= WEIGHT_CUTOFF, w, 0.0)
                for col, tensor in enumerate(projectors):
                    rho = np.einsum("n,nab->ab", w, tensor)
                    flat_values[flat, col] = concurrence(
                        TwoQubitState(rho=rho)).c

        if pool is None:
            eval_points(pts)
        else:
            list(pool.map(eval_points, _chunks(pts, n_chunks)))

    n_threads = resolve_threads(request.threads)
    group_items = list(groups.items())
    if n_threads == 1 or len(points) == 1:
        for key, pts in group_items:
            eval_group(key, pts)
    elif len(group_items) == 1:
        key, pts = group_items[0]
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            eval_group(key, pts, pool=pool, n_chunks=n_threads)
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            list(pool.map(lambda item: eval_group(*item), group_items))

    return SweepGrid(template=template, kbt=request.kbt, axes=axes,
                     pairs=pairs, values=values)


@dataclass(frozen=True)
class Plateau:
    """Maximal flat run: B-interval, mean level, worst in-run deviation."""

    b_start: float
    b_end: float
    mean: float
    max_dev: float


@dataclass(frozen=True)
class Step:
    """Transition between consecutive plateaus, located at the gap middle."""

    b: float
    delta_c: float
    sign: int


@dataclass(frozen=True)
class PlateauReport:
    plateaus: tuple
    steps: tuple


def detect_plateaus(b_values, series, plateau_tol=1e-3, min_width=3):
    """Greedy segmentation of a B-series into flat plateaus and steps.

    A plateau is a maximal run of at least ``min_width`` consecutive points
    whose spread stays within ``plateau_tol``; each gap between consecutive
    plateaus is reported as one step with the difference of plateau means.
    Mean differences within ``plateau_tol`` are not steps: the tolerance
    cannot distinguish such runs, they are fragments of one flat level
    (slow drift can split a long plateau into consecutive runs).
    """
    b_values = np.asarray(b_values, dtype=float)
    series = np.asarray(series, dtype=float)
    if b_values.shape != series.shape or series.ndim != 1:
        raise ValueError("b_values and series must be matching 1-D arrays")
    if plateau_tol <= 0.0:
        raise ValueError(f"plateau_tol must be > 0, got {plateau_tol}")
    if min_width < 2:
        raise ValueError(f"min_width must be >= 2, got {min_width}")
    n = series.size
    if n < min_width:
        raise ValueError(f"series of {n} points is shorter than "
                         f"min_width {min_width}")
    runs = []
    i = 0
    while i < n:
        lo = hi = series[i]
        j = i
        while j + 1 < n:
            lo2 = min(lo, series[j + 1])
            hi2 = max(hi, series[j + 1])
            if hi2 - lo2 > plateau_tol:
                break
            lo, hi = lo2, hi2
            j += 1
        if j - i + 1 >= min_width:
            runs.append((i, j))
            i = j + 1
        else:
            i += 1
    plateaus = []
    for i, j in runs:
        seg = series[i:j + 1]
        mean = float(seg.mean())
        plateaus.append(Plateau(b_start=float(b_values[i]),
                                b_end=float(b_values[j]),
                                mean=mean,
                                max_dev=float(np.abs(seg - mean).max())))
    steps = []
    for k in range(1, len(runs)):
        prev_end = runs[k - 1][1]
        next_start = runs[k][0]
        delta_c = plateaus[k].mean - plateaus[k - 1].mean
        if abs(delta_c) <= plateau_tol:
            continue
        steps.append(Step(
            b=float(0.5 * (b_values[prev_end] + b_values[next_start])),
            delta_c=float(delta_c),
            sign=int(np.sign(delta_c))))
    return PlateauReport(plateaus=tuple(plateaus), steps=tuple(steps))


def critical_field(b_values, series, zero_tol=1e-6):
    """Field beyond which the series stays at numerical zero.

    Interpolates the ``zero_tol`` crossing between the last point above the
    threshold and its successor.  The sweep must actually reach zero;
    otherwise the range was too small and this raises instead of guessing.
    """
    b_values = np.asarray(b_values, dtype=float)
    series = np.asarray(series, dtype=float)
    above = np.nonzero(series > zero_tol)[0]
    if above.size == 0:
        return float(b_values[0])
    k = above[-1]
    if k == series.size - 1:
        raise ValueError("series never settles below zero_tol; extend the "
                         "B range")
    frac = (series[k] - zero_tol) / (series[k] - series[k + 1])
    return float(b_values[k] + frac * (b_values[k + 1] - b_values[k]))


def entanglement_onset(b_values, series, zero_tol=1e-6):
    """First field value where an initially-zero series turns on.

    Returns None when the series is already above ``zero_tol`` at the start
    (nothing to switch on) or never rises.
    """
    b_values = np.asarray(b_values, dtype=float)
    series = np.asarray(series, dtype=float)
    if series[0] > zero_tol:
        return None
    above = np.nonzero(series > zero_tol)[0]
    if above.size == 0:
        return None
    return float(b_values[above[0]])


def magnetization_jump_fields(b_values, m_ground):
    """Midpoints of grid intervals where ground-state magnetization jumps."""
    b_values = np.asarray(b_values, dtype=float)
    m_ground = np.asarray(m_ground, dtype=float)
    change = np.nonzero(np.diff(m_ground) != 0.0)[0]
    return 0.5 * (b_values[change] + b_values[change + 1])


def annotate_steps(report, jump_fields):
    """Nearest magnetization-jump field for each detected step.

    Returns a list of (step, nearest jump B or None, |distance| or None);
    the correlation between concurrence steps and ground-state level
    crossings is reported, not asserted.
    """
    jump_fields = np.asarray(jump_fields, dtype=float)
    annotated = []
    for step in report.steps:
        if jump_fields.size == 0:
            annotated.append((step, None, None))
            continue
        k = int(np.argmin(np.abs(jump_fields - step.b)))
        annotated.append((step, float(jump_fields[k]),
                          float(abs(jump_fields[k] - step.b))))
    return annotated


@dataclass(frozen=True)
class TiltSummary:
    """Strong-pair sweep at one tilt angle with its post-dip maximum."""

    theta: float
    grid: SweepGrid
    dip_b: float
    dip_c: float
    post_dip_max: float


def xx_tilt_comparison(template, thetas, b_values, kbt, threads=0):
    """Strong-pair B-sweeps of the XX chain at several tilt angles.

    Each summary records where the concurrence falls to its minimum over
    the scanned range and the maximum it rebuilds to from there; the
    rebuild grows with the tilt.  An axial sweep bottoms out in the dead
    tail past the critical field, so its rebuild is zero by construction.
    """
    if template.model != "xx":
        raise ValueError("tilt comparison is defined for the xx model")
    axis = Axis(name="b", values=np.asarray(b_values, dtype=float))
    summaries = []
    for theta in thetas:
        spec = replace(template, theta=float(theta))
        grid = run_sweep(GridRequest(template=spec, kbt=kbt, axes=(axis,),
                                     pairs=(1,), threads=threads))
        series = grid.values[:, 0]
        dip = int(np.argmin(series))
        summaries.append(TiltSummary(
            theta=float(theta), grid=grid,
            dip_b=float(axis.values[dip]),
            dip_c=float(series[dip]),
            post_dip_max=float(series[dip:].max())))
    return tuple(summaries)


def open_chain_profile(template, kbt, b_values, threads=0):
    """B-sweep of every bond of an open chain in one shared decomposition."""
    if template.boundary != "open":
        raise ValueError("profile requires an open-boundary template")
    axis = Axis(name="b", values=np.asarray(b_values, dtype=float))
    pairs = tuple(range(1, template.n_sites))
    return run_sweep(GridRequest(template=template, kbt=kbt, axes=(axis,),
                                 pairs=pairs, threads=threads))


def staircase_report(template, kbt, b_values, pair_index, plateau_tol=1e-3,
                     min_width=3, zero_tol=1e-6, threads=0):
    """One-call staircase analysis of a single pair.

    Returns (grid, report, annotated steps, critical field or None, onset
    or None).  The magnetization annotation uses the same sectored
    decomposition as the sweep; tilted templates get no annotation.
    """
    axis = Axis(name="b", values=np.asarray(b_values, dtype=float))
    grid = run_sweep(GridRequest(template=template, kbt=kbt, axes=(axis,),
                                 pairs=(pair_index,), threads=threads))
    series = grid.values[:, 0]
    report = detect_plateaus(axis.values, series, plateau_tol=plateau_tol,
                             min_width=min_width)
    if template.theta == 0.0:
        base = replace(template, b=0.0)
        decomp = decompose_sectored(exchange_hamiltonian(base),
                                    build_sector_table(template.n_sites))
        m_ground = ground_state_magnetization(decomp, axis.values)
        annotated = annotate_steps(
            report, magnetization_jump_fields(axis.values, m_ground))
    else:
        annotated = annotate_steps(report, np.empty(0))
    try:
        b_c = critical_field(axis.values, series, zero_tol=zero_tol)
    except ValueError:
        b_c = None
    onset = entanglement_onset(axis.values, series, zero_tol=zero_tol)
    return grid, report, annotated, b_c, onset
