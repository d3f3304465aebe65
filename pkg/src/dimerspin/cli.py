"""Command-line driver: points, sweeps, staircase reports, spectra, figures.

Output schema (CSV/TSV, one row per grid point per tracked pair):

    n,boundary,model,delta,theta,j,kbt,b,pair_index,site_a,site_b,pair_kind,concurrence

Floats are printed with 12 significant digits and rows are ordered by
(axis1 index, axis2 index, pair list order), so files are byte-identical
across runs and thread counts.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from .entanglement import pair_concurrence  # noqa: F401  (public CLI alias)
from .errors import DimerspinError, NumericalInvariantError
from .hamiltonian import ChainSpec, build_hamiltonian, exchange_hamiltonian
from .hilbert import build_sector_table
from .spectral import decompose, decompose_sectored
from .sweep import (Axis, GridRequest, point_parameters, run_sweep,
                    staircase_report)

CSV_HEADER = ("n,boundary,model,delta,theta,j,kbt,b,"
              "pair_index,site_a,site_b,pair_kind,concurrence")

AXIS_NAMES = ("b", "kbt", "delta", "theta")

# (lo, hi, steps) used for a varying axis when the flags leave gaps.
AXIS_DEFAULTS = {
    "b": (0.0, 4.0, 400),
    "kbt": (0.02, 1.0, 50),
    "delta": (0.0, 1.0, 41),
    "theta": (0.0, math.pi / 2, 25),
}

SPEC_DEFAULTS = {"n": 12, "j": 1.0, "delta": 0.2, "theta": 0.0, "b": 0.0,
                 "kbt": 0.1, "boundary": "closed", "model": "xxx"}

AXIS_COLUMN = {"delta": 4, "theta": 5, "kbt": 7, "b": 8}
AXIS_LABEL = {"b": "B", "kbt": "k_BT", "delta": "delta", "theta": "theta"}

FIGURES = ("fig1", "fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig5",
           "fig6a", "fig6b", "fig6c", "fig7", "fig8")


@dataclass(frozen=True)
class AxisSpec:
    """Flag-level description of one varying axis."""

    name: str
    lo: float
    hi: float
    steps: int

    def to_axis(self):
        if self.steps < 1:
            raise ValueError(f"--{self.name}-steps must be >= 1")
        if self.steps > 1 and not self.lo < self.hi:
            raise ValueError(f"--{self.name}-min must be below "
                             f"--{self.name}-max")
        return Axis(name=self.name,
                    values=np.linspace(self.lo, self.hi, self.steps))


@dataclass(frozen=True)
class RunConfig:
    """Validated command-line request.

    Fixed parameters covered by a varying axis are stored as None.
    """

    subcommand: str
    n: int | None = None
    j: float = 1.0
    delta: float | None = 0.2
    theta: float | None = 0.0
    b: float | None = 0.0
    kbt: float | None = 0.1
    boundary: str = "closed"
    model: str = "xxx"
    axes: tuple = ()
    pairs: tuple = (1,)
    out: str | None = None
    fmt: str = "csv"
    emit_plot: bool = False
    threads: int = 0
    seed: int | None = None
    plateau_tol: float = 1e-3
    min_width: int = 3
    zero_tol: float = 1e-6
    which: str | None = None
    out_dir: str | None = None
    b_steps: int | None = None
    kbt_steps: int | None = None
    delta_steps: int | None = None


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _add_spec_flags(sp):
    sp.add_argument("--n", type=int, default=None,
                    help="number of sites (default 12)")
    sp.add_argument("--j", type=float, default=None,
                    help="exchange scale J (default 1)")
    sp.add_argument("--delta", type=float, default=None,
                    help="dimer strength in [0,1] (default 0.2)")
    sp.add_argument("--theta", type=float, default=None,
                    help="field tilt from z in [0,pi/2] (default 0)")
    sp.add_argument("--boundary", choices=("closed", "open"), default=None,
                    help="chain boundary (default closed)")
    sp.add_argument("--model", type=str.lower, choices=("xxx", "xx"),
                    default=None, help="coupling model (default xxx)")
    sp.add_argument("--b", type=float, default=None,
                    help="field magnitude >= 0 (default 0)")
    sp.add_argument("--kbt", type=float, default=None,
                    help="temperature k_B T >= 0 (default 0.1)")


def _add_axis_flags(sp, names):
    for name in names:
        lo, hi, steps = AXIS_DEFAULTS[name]
        sp.add_argument(f"--{name}-min", type=float, default=None,
                        help=f"{name} axis start (default {lo:g})")
        sp.add_argument(f"--{name}-max", type=float, default=None,
                        help=f"{name} axis end (default {hi:g})")
        sp.add_argument(f"--{name}-steps", type=int, default=None,
                        help=f"{name} axis point count (default {steps})")


def _add_io_flags(sp, pairs=True):
    if pairs:
        sp.add_argument("--pair", type=int, action="append", default=None,
                        help="bond index to track (repeatable, default 1)")
    sp.add_argument("--out", default=None, help="output file (default stdout)")
    sp.add_argument("--format", dest="fmt", choices=("csv", "tsv"),
                    default=None, help="output format (default csv)")
    if pairs:
        sp.add_argument("--emit-plot", action="store_true",
                        help="write a gnuplot script next to --out")
    sp.add_argument("--threads", type=int, default=None,
                    help="worker threads, 0 = auto (DIMERSPIN_THREADS or "
                         "CPU count)")
    sp.add_argument("--seed", type=int, default=None,
                    help="seed for randomized utilities")
    sp.add_argument("--config", default=None,
                    help="key=value file supplying defaults for these flags")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="dimerspin",
        description="Thermal pair concurrence in dimerized spin-1/2 "
                    "Heisenberg chains")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    point = sub.add_parser("point", help="single (B, kT) evaluation")
    _add_spec_flags(point)
    _add_io_flags(point)

    sweep = sub.add_parser("sweep", help="1-D or 2-D parameter sweep")
    _add_spec_flags(sweep)
    _add_axis_flags(sweep, AXIS_NAMES)
    _add_io_flags(sweep)

    plateaus = sub.add_parser(
        "plateaus", help="B-sweep with staircase/critical-field report")
    _add_spec_flags(plateaus)
    _add_axis_flags(plateaus, ("b",))
    _add_io_flags(plateaus)
    plateaus.add_argument("--plateau-tol", type=float, default=None,
                          help="max spread inside a plateau (default 1e-3)")
    plateaus.add_argument("--min-width", type=int, default=None,
                          help="min points per plateau (default 3)")
    plateaus.add_argument("--zero-tol", type=float, default=None,
                          help="concurrence zero threshold (default 1e-6)")

    spectrum = sub.add_parser("spectrum", help="eigenvalue listing")
    _add_spec_flags(spectrum)
    _add_io_flags(spectrum, pairs=False)

    figures = sub.add_parser(
        "figures", help="named figure replicas (CSV + gnuplot script)")
    figures.add_argument("which", choices=FIGURES)
    figures.add_argument("--out-dir", default=None,
                         help="output root (default figures)")
    figures.add_argument("--n", type=int, default=None,
                         help="override the chain size (default 12)")
    figures.add_argument("--b-steps", type=int, default=None,
                         help="override the figure's B axis resolution")
    figures.add_argument("--kbt-steps", type=int, default=None,
                         help="override the figure's kT axis resolution")
    figures.add_argument("--delta-steps", type=int, default=None,
                         help="override the figure's delta axis resolution")
    figures.add_argument("--format", dest="fmt", choices=("csv", "tsv"),
                         default=None)
    figures.add_argument("--threads", type=int, default=None)
    figures.add_argument("--config", default=None,
                         help="key=value file supplying defaults")
    return parser


def _read_config_file(path):
    """Flag list from a newline-separated key=value file."""
    args = []
    with open(path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(
                    f"{path}:{ln}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            key = key.strip().replace("_", "-")
            value = value.strip()
            if key == "config":
                raise ValueError(f"{path}:{ln}: config files cannot nest")
            if key == "emit-plot":
                if value.lower() in ("1", "true", "yes"):
                    args.append("--emit-plot")
                elif value.lower() not in ("0", "false", "no"):
                    raise ValueError(
                        f"{path}:{ln}: emit-plot must be a boolean")
                continue
            args.extend([f"--{key}", value])
    return args


def _extract_config_path(argv):
    out = []
    path = None
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--config":
            if i + 1 >= len(argv):
                raise ValueError("--config requires a file path")
            path = argv[i + 1]
            i += 2
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            i += 1
        else:
            out.append(tok)
            i += 1
    return out, path


def parse_config(argv):
    """Parse an argv list (without the program name) into a RunConfig.

    A ``--config file`` contributes key=value defaults with identical keys
    to the flags; explicit flags win, and any --pair flag replaces the
    file's whole pair list.
    """
    argv, config_path = _extract_config_path(list(argv))
    if config_path is not None:
        if not argv:
            raise ValueError("a subcommand is required before --config")
        file_args = _read_config_file(config_path)
        if any(a == "--pair" or a.startswith("--pair=") for a in argv[1:]):
            trimmed = []
            skip = False
            for a in file_args:
                if skip:
                    skip = False
                    continue
                if a == "--pair":
                    skip = True
                    continue
                trimmed.append(a)
            file_args = trimmed
        argv = [argv[0]] + file_args + argv[1:]
    ns = _build_parser().parse_args(argv)
    return _namespace_to_config(ns)


def _resolve_threads_flag(value):
    if value is not None:
        if value < 0:
            raise ValueError(f"--threads must be >= 0, got {value}")
        return value
    env = os.environ.get("DIMERSPIN_THREADS", "").strip()
    if env:
        try:
            parsed = int(env)
        except ValueError:
            raise ValueError(
                f"DIMERSPIN_THREADS must be an integer, got {env!r}")
        if parsed <= 0:
            raise ValueError(
                f"DIMERSPIN_THREADS must be positive, got {env!r}")
        return parsed
    return 0


def _active_axes(ns, names):
    axes = []
    for name in names:
        lo = getattr(ns, f"{name}_min")
        hi = getattr(ns, f"{name}_max")
        steps = getattr(ns, f"{name}_steps")
        if lo is None and hi is None and steps is None:
            continue
        dlo, dhi, dsteps = AXIS_DEFAULTS[name]
        axes.append(AxisSpec(name=name,
                             lo=dlo if lo is None else lo,
                             hi=dhi if hi is None else hi,
                             steps=dsteps if steps is None else steps))
    return axes


def _namespace_to_config(ns):
    if ns.subcommand == "figures":
        return RunConfig(
            subcommand="figures", which=ns.which, out_dir=ns.out_dir,
            n=ns.n, b_steps=ns.b_steps, kbt_steps=ns.kbt_steps,
            delta_steps=ns.delta_steps,
            fmt=ns.fmt if ns.fmt is not None else "csv",
            threads=_resolve_threads_flag(ns.threads))

    if ns.subcommand == "sweep":
        axes = _active_axes(ns, AXIS_NAMES)
        if len(axes) > 2:
            raise ValueError(
                f"at most 2 varying axes are supported, got "
                f"{[a.name for a in axes]}")
        if not axes:
            axes = [AxisSpec("b", *AXIS_DEFAULTS["b"])]
    elif ns.subcommand == "plateaus":
        axes = _active_axes(ns, ("b",))
        if not axes:
            axes = [AxisSpec("b", *AXIS_DEFAULTS["b"])]
    else:
        axes = []
    axis_names = {a.name for a in axes}
    for name in axis_names:
        if getattr(ns, name) is not None:
            raise ValueError(
                f"--{name} conflicts with the --{name}-min/max/steps axis")

    fixed = {}
    for name in ("b", "kbt", "delta", "theta"):
        if name in axis_names:
            fixed[name] = None
        else:
            flag = getattr(ns, name)
            fixed[name] = SPEC_DEFAULTS[name] if flag is None else flag

    pairs = tuple(getattr(ns, "pair", None) or (1,))
    if any(p < 1 for p in pairs):
        raise ValueError(f"pair indices must be >= 1, got {pairs}")

    def resolved(attr, default):
        value = getattr(ns, attr, None)
        return default if value is None else value

    return RunConfig(
        subcommand=ns.subcommand,
        n=resolved("n", SPEC_DEFAULTS["n"]),
        j=resolved("j", SPEC_DEFAULTS["j"]),
        delta=fixed["delta"], theta=fixed["theta"], b=fixed["b"],
        kbt=fixed["kbt"],
        boundary=resolved("boundary", SPEC_DEFAULTS["boundary"]),
        model=resolved("model", SPEC_DEFAULTS["model"]),
        axes=tuple(axes), pairs=pairs,
        out=ns.out, fmt=resolved("fmt", "csv"),
        emit_plot=getattr(ns, "emit_plot", False),
        threads=_resolve_threads_flag(ns.threads),
        seed=ns.seed,
        plateau_tol=resolved("plateau_tol", 1e-3),
        min_width=resolved("min_width", 3),
        zero_tol=resolved("zero_tol", 1e-6))


def render_argv(config):
    """Flag list that parses back to exactly this RunConfig."""
    if config.subcommand == "figures":
        argv = ["figures", config.which]
        if config.out_dir is not None:
            argv += ["--out-dir", config.out_dir]
        if config.n is not None:
            argv += ["--n", str(config.n)]
        for attr, flag in (("b_steps", "--b-steps"),
                           ("kbt_steps", "--kbt-steps"),
                           ("delta_steps", "--delta-steps")):
            value = getattr(config, attr)
            if value is not None:
                argv += [flag, str(value)]
        argv += ["--format", config.fmt, "--threads", str(config.threads)]
        return argv

    argv = [config.subcommand,
            "--n", str(config.n), "--j", repr(config.j),
            "--boundary", config.boundary, "--model", config.model]
    for name in ("b", "kbt", "delta", "theta"):
        value = getattr(config, name)
        if value is not None:
            argv += [f"--{name}", repr(value)]
    for axis in config.axes:
        argv += [f"--{axis.name}-min", repr(axis.lo),
                 f"--{axis.name}-max", repr(axis.hi),
                 f"--{axis.name}-steps", str(axis.steps)]
    if config.subcommand != "spectrum":
        for p in config.pairs:
            argv += ["--pair", str(p)]
        if config.emit_plot:
            argv.append("--emit-plot")
    if config.out is not None:
        argv += ["--out", config.out]
    argv += ["--format", config.fmt, "--threads", str(config.threads)]
    if config.seed is not None:
        argv += ["--seed", str(config.seed)]
    if config.subcommand == "plateaus":
        argv += ["--plateau-tol", repr(config.plateau_tol),
                 "--min-width", str(config.min_width),
                 "--zero-tol", repr(config.zero_tol)]
    return argv


# ---------------------------------------------------------------------------
# output rendering
# ---------------------------------------------------------------------------

def _g12(x):
    return f"{x:.12g}"


def _render_csv(grid, sep):
    template = grid.template
    lines = [CSV_HEADER.replace(",", sep)]
    flat_values = grid.values.reshape(-1, len(grid.pairs))
    for flat, b, kbt, delta, theta in point_parameters(template, grid.kbt,
                                                       grid.axes):
        for col, pair in enumerate(grid.pairs):
            site_a, site_b = pair.ordered_sites
            row = (str(template.n_sites), template.boundary, template.model,
                   _g12(delta), _g12(theta), _g12(template.j), _g12(kbt),
                   _g12(b), str(pair.index), str(site_a), str(site_b),
                   pair.kind, _g12(flat_values[flat, col]))
            lines.append(sep.join(row))
    return "\n".join(lines) + "\n"


def _sep_for(fmt):
    return "\t" if fmt == "tsv" else ","


def emit_csv(grid, config, out):
    """Write the grid in the fixed CSV/TSV schema; returns the path."""
    text = _render_csv(grid, _sep_for(config.fmt))
    if hasattr(out, "write"):
        out.write(text)
        return out
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return out


def _render_plot(grid, csv_name, fmt):
    varying = [a for a in grid.axes if len(a) > 1]
    if not varying:
        raise ValueError("nothing to plot: no varying axis")
    sep = "\\t" if fmt == "tsv" else ","
    png = os.path.splitext(csv_name)[0] + ".png"
    lines = [
        "set terminal pngcairo size 960,640",
        f"set output '{png}'",
        f'set datafile separator "{sep}"',
    ]
    if len(varying) == 1:
        axis = varying[0]
        xcol = AXIS_COLUMN[axis.name]
        lines += [f"set xlabel '{AXIS_LABEL[axis.name]}'",
                  "set ylabel 'C'",
                  "set key top right"]
        clauses = []
        for pair in grid.pairs:
            clauses.append(
                f"'{csv_name}' skip 1 using {xcol}:($9=={pair.index}?$13:1/0)"
                f" with lines title 'pair {pair.index} ({pair.kind})'")
        lines.append("plot " + ", \\\n     ".join(clauses))
    else:
        ax1, ax2 = varying[0], varying[1]
        lines += [f"set xlabel '{AXIS_LABEL[ax1.name]}'",
                  f"set ylabel '{AXIS_LABEL[ax2.name]}'",
                  "set zlabel 'C'",
                  f"set dgrid3d {len(ax2)},{len(ax1)}",
                  "set hidden3d"]
        clauses = []
        for pair in grid.pairs:
            clauses.append(
                f"'{csv_name}' skip 1 using "
                f"{AXIS_COLUMN[ax1.name]}:{AXIS_COLUMN[ax2.name]}:"
                f"($9=={pair.index}?$13:1/0)"
                f" with lines title 'pair {pair.index} ({pair.kind})'")
        lines.append("splot " + ", \\\n      ".join(clauses))
    return "\n".join(lines) + "\n"


def emit_plot_script(grid, config, out):
    """Write a gnuplot script referencing the CSV; returns the path."""
    csv_name = os.path.basename(config.out) if config.out else "sweep.csv"
    text = _render_plot(grid, csv_name, config.fmt)
    if hasattr(out, "write"):
        out.write(text)
        return out
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return out


def _write_grid_outputs(grid, config):
    if config.out is None:
        if config.emit_plot:
            raise ValueError("--emit-plot requires --out")
        emit_csv(grid, config, sys.stdout)
        return
    emit_csv(grid, config, config.out)
    if config.emit_plot:
        emit_plot_script(grid, config,
                         os.path.splitext(config.out)[0] + ".gp")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _template_spec(config):
    return ChainSpec(
        n_sites=config.n, j=config.j,
        delta=SPEC_DEFAULTS["delta"] if config.delta is None else config.delta,
        b=0.0 if config.b is None else config.b,
        theta=0.0 if config.theta is None else config.theta,
        boundary=config.boundary, model=config.model)


def _request_kbt(config):
    return SPEC_DEFAULTS["kbt"] if config.kbt is None else config.kbt


def _cmd_point(config):
    spec = _template_spec(config)
    axes = (Axis(name="b", values=np.array([spec.b])),)
    grid = run_sweep(GridRequest(template=spec, kbt=_request_kbt(config),
                                 axes=axes, pairs=config.pairs,
                                 threads=config.threads))
    _write_grid_outputs(grid, config)
    return 0


def _cmd_sweep(config):
    spec = _template_spec(config)
    axes = tuple(a.to_axis() for a in config.axes)
    grid = run_sweep(GridRequest(template=spec, kbt=_request_kbt(config),
                                 axes=axes, pairs=config.pairs,
                                 threads=config.threads))
    _write_grid_outputs(grid, config)
    return 0


def _cmd_plateaus(config):
    spec = _template_spec(config)
    axis = config.axes[0].to_axis()
    pair_index = config.pairs[0]
    grid, report, annotated, b_c, onset = staircase_report(
        spec, _request_kbt(config), axis.values, pair_index,
        plateau_tol=config.plateau_tol, min_width=config.min_width,
        zero_tol=config.zero_tol, threads=config.threads)
    pair = grid.pairs[0]
    out = sys.stdout
    out.write(f"staircase analysis: n={spec.n_sites} "
              f"boundary={spec.boundary} model={spec.model} "
              f"delta={_g12(spec.delta)} theta={_g12(spec.theta)} "
              f"j={_g12(spec.j)} kbt={_g12(_request_kbt(config))} "
              f"pair={pair.index} ({pair.kind})\n")
    out.write(f"plateaus (plateau_tol={_g12(config.plateau_tol)}, "
              f"min_width={config.min_width}): {len(report.plateaus)}\n")
    for p in report.plateaus:
        out.write(f"  B in [{_g12(p.b_start)}, {_g12(p.b_end)}]  "
                  f"mean C={_g12(p.mean)}  max_dev={p.max_dev:.3e}\n")
    out.write(f"steps: {len(report.steps)}\n")
    for step, jump, dist in annotated:
        note = ("no magnetization jump tracked" if jump is None else
                f"nearest magnetization jump B={_g12(jump)} "
                f"(|dB|={dist:.3e})")
        out.write(f"  B={_g12(step.b)}  dC={_g12(step.delta_c)}  {note}\n")
    if b_c is None:
        out.write("critical field: not reached in this B range\n")
    else:
        out.write(f"critical field B_c={_g12(b_c)} "
                  f"(zero_tol={_g12(config.zero_tol)})\n")
    if onset is None:
        out.write("onset: none\n")
    else:
        out.write(f"onset B*={_g12(onset)} "
                  f"(zero_tol={_g12(config.zero_tol)})\n")
    if config.out is not None:
        emit_csv(grid, config, config.out)
        if config.emit_plot:
            emit_plot_script(grid, config,
                             os.path.splitext(config.out)[0] + ".gp")
    elif config.emit_plot:
        raise ValueError("--emit-plot requires --out")
    return 0


def _cmd_spectrum(config):
    spec = _template_spec(config)
    sep = _sep_for(config.fmt)
    if spec.theta == 0.0:
        base = replace(spec, b=0.0)
        decomp = decompose_sectored(exchange_hamiltonian(base),
                                    build_sector_table(spec.n_sites))
        energies = decomp.eigenvalues + spec.b * decomp.sector_labels
        order = np.argsort(energies, kind="stable")
        rows = [(k, energies[i], str(decomp.sector_labels[i]))
                for k, i in enumerate(order)]
    else:
        decomp = decompose(build_hamiltonian(spec))
        rows = [(k, e, "") for k, e in enumerate(decomp.eigenvalues)]
    lines = [sep.join(("index", "energy", "m"))]
    lines += [sep.join((str(k), _g12(e), m)) for k, e, m in rows]
    text = "\n".join(lines) + "\n"
    if config.out is None:
        sys.stdout.write(text)
    else:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


# Parameter sets of the named figure replicas: model, boundary, delta,
# theta, pair, and the axes (axis name -> (lo, hi, steps)); kbt is the
# fixed temperature when no kbt axis is present.
FIGURE_TABLE = {
    "fig1": dict(model="xxx", boundary="closed", delta=0.2, theta=0.0,
                 pair=1, kbt=0.1,
                 axes=(("b", (0.0, 4.0, 81)), ("kbt", (0.02, 1.0, 50)))),
    "fig2": dict(model="xxx", boundary="closed", delta=0.2, theta=0.0,
                 pair=2, kbt=0.1,
                 axes=(("b", (0.0, 4.0, 81)), ("kbt", (0.02, 1.0, 50)))),
    "fig3a": dict(model="xxx", boundary="closed", delta=0.2, theta=0.0,
                  pair=1, kbt=0.1, axes=(("b", (0.0, 4.0, 400)),)),
    "fig3b": dict(model="xxx", boundary="closed", delta=0.8, theta=0.0,
                  pair=1, kbt=0.1, axes=(("b", (0.0, 4.0, 400)),)),
    "fig4a": dict(model="xxx", boundary="closed", delta=0.2, theta=0.0,
                  pair=2, kbt=0.1, axes=(("b", (0.0, 4.0, 400)),)),
    "fig4b": dict(model="xxx", boundary="closed", delta=0.8, theta=0.0,
                  pair=2, kbt=0.1, axes=(("b", (0.0, 4.0, 400)),)),
    "fig5": dict(model="xxx", boundary="closed", delta=0.2, theta=0.0,
                 pair=1, kbt=0.1,
                 axes=(("b", (0.0, 4.0, 81)), ("delta", (0.0, 1.0, 41)))),
    "fig6a": dict(model="xx", boundary="closed", delta=0.2, theta=0.0,
                  pair=1, kbt=0.1,
                  axes=(("b", (0.0, 4.0, 33)), ("kbt", (0.02, 1.0, 21)))),
    "fig6b": dict(model="xx", boundary="closed", delta=0.2,
                  theta=math.pi / 4, pair=1, kbt=0.1,
                  axes=(("b", (0.0, 4.0, 33)), ("kbt", (0.02, 1.0, 21)))),
    "fig6c": dict(model="xx", boundary="closed", delta=0.2,
                  theta=math.pi / 2, pair=1, kbt=0.1,
                  axes=(("b", (0.0, 4.0, 33)), ("kbt", (0.02, 1.0, 21)))),
    "fig7": dict(model="xxx", boundary="open", delta=0.2, theta=0.0,
                 pair=1, kbt=0.1, axes=(("b", (0.0, 5.0, 400)),)),
    "fig8": dict(model="xxx", boundary="open", delta=0.2, theta=0.0,
                 pair=5, kbt=0.1, axes=(("b", (0.0, 5.0, 400)),)),
}


def figures_command(which, out_dir="figures", n=None, threads=0, fmt="csv",
                    b_steps=None, kbt_steps=None, delta_steps=None):
    """Run one named figure replica; writes <out_dir>/<which>/<which>.csv
    and an adjacent gnuplot script.  Returns (csv path, script path).

    ``n`` and the per-axis step counts override the figure's defaults
    (N=12 and the tabulated resolutions) for quick desk-scale runs.
    """
    if which not in FIGURE_TABLE:
        raise ValueError(f"unknown figure {which!r}; choose from {FIGURES}")
    entry = FIGURE_TABLE[which]
    steps_override = {"b": b_steps, "kbt": kbt_steps, "delta": delta_steps}
    axes = []
    for name, (lo, hi, steps) in entry["axes"]:
        if steps_override.get(name):
            steps = steps_override[name]
        axes.append(Axis(name=name, values=np.linspace(lo, hi, steps)))
    template = ChainSpec(
        n_sites=12 if n is None else n, j=1.0, delta=entry["delta"],
        b=0.0, theta=entry["theta"], boundary=entry["boundary"],
        model=entry["model"])
    grid = run_sweep(GridRequest(template=template, kbt=entry["kbt"],
                                 axes=tuple(axes), pairs=(entry["pair"],),
                                 threads=threads))
    target = os.path.join(out_dir, which)
    os.makedirs(target, exist_ok=True)
    ext = "tsv" if fmt == "tsv" else "csv"
    csv_path = os.path.join(target, f"{which}.{ext}")
    gp_path = os.path.join(target, f"{which}.gp")
    sep = _sep_for(fmt)
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_render_csv(grid, sep))
    with open(gp_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_render_plot(grid, os.path.basename(csv_path), fmt))
    return csv_path, gp_path


def _cmd_figures(config):
    csv_path, gp_path = figures_command(
        config.which, out_dir=config.out_dir or "figures",
        n=config.n, threads=config.threads, fmt=config.fmt,
        b_steps=config.b_steps, kbt_steps=config.kbt_steps,
        delta_steps=config.delta_steps)
    print(csv_path)
    print(gp_path)
    return 0


_DISPATCH = {
    "point": _cmd_point,
    "sweep": _cmd_sweep,
    "plateaus": _cmd_plateaus,
    "spectrum": _cmd_spectrum,
    "figures": _cmd_figures,
}


def main(argv=None):
    """Entry point; returns the process exit code.

    0 success, 2 usage error, 3 numerical-invariant violation, 4 I/O error.
    """
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
        return _DISPATCH[config.subcommand](config)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except NumericalInvariantError as exc:
        print(f"dimerspin: numerical invariant violated: {exc}",
              file=sys.stderr)
        return 3
    except DimerspinError as exc:
        print(f"dimerspin: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"dimerspin: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"dimerspin: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
