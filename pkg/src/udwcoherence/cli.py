"""Command-line front end: parameter sweeps, figure tables, verification.

Every sweep writes one row per grid point in a fixed order, with a ``status``
column that is ``ok`` or names the error raised at that point. Output is
byte-identical for a repeated request, whatever the ``--jobs`` setting.

Exit status: 0 success, 1 a computation or verification failed, 2 bad usage or
configuration.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import catalysis, harvest, motion
from .figures import DURATION_RANGE, ENERGY_RANGE, FIGURES, figure_ids
from .harvest import EvaluationPath
from .model import ConfigError, FieldConfig, PerturbativeWarning, SwitchingProfile, parse_config
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .verify import GROUPS, run_verify

__all__ = ["main", "build_parser", "parse_grid", "default_config_text", "STATIC_COLUMNS",
           "MOVING_COLUMNS", "CATALYSIS_COLUMNS", "COMMUTATOR_COLUMNS", "VERIFY_COLUMNS"]

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2

STATIC_COLUMNS = ("energy", "duration", "radius", "coherence", "delta_e_coh", "delta_e_vac",
                  "commutator_term", "status")
MOVING_COLUMNS = ("energy", "duration", "velocity", "coherence_static", "coherence_moving",
                  "swelling_ratio", "status")
CATALYSIS_COLUMNS = ("energy", "velocity", "coherence", "energy_cost", "status")
SERIES_COLUMNS = ("energy", "velocity", "harvest", "coherence", "energy_cost", "status")
COMMUTATOR_COLUMNS = ("duration", "dimension", "commutator_term", "status")
VERIFY_COLUMNS = ("group", "check", "status", "discrepancy", "tolerance", "detail")
ESTIMATE_COLUMNS = ("coupling", "omega_hz", "time_per_unit_coherence_s")

CATALYSIS_VELOCITIES = (0.0, 0.6, 0.8)


class UsageError(ValueError):
    pass


def default_config_text() -> str:
    return resources.files("udwcoherence").joinpath("data/default.cfg").read_text()


def parse_grid(text: str, name: str = "value") -> List[float]:
    """Expand ``x``, ``x1,x2,...`` or ``start:stop:count`` into a list of floats."""
    text = str(text).strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise UsageError(f"{name}: grid must be start:stop:count, got {text!r}")
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise UsageError(f"{name}: grid count must be >= 1")
            if start > stop:
                raise UsageError(f"{name}: grid start must not exceed stop")
            if count == 1:
                return [start]
            return [float(x) for x in np.linspace(start, stop, count)]
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"{name}: cannot parse {text!r}") from None


# ---------------------------------------------------------------------------
# row workers (module level so that process pools can pickle them)

def _error_row(prefix: tuple, width: int, exc: Exception) -> tuple:
    return prefix + (math.nan,) * width + (f"error: {type(exc).__name__}: {exc}",)


def _static_row(task) -> tuple:
    n, r, E, T, R, path, spec, lam = task
    prefix = (E, T, R)
    try:
        res = harvest.harvest(n, FieldConfig(E, r), SwitchingProfile.from_duration(T), R, path, spec)
        return prefix + (res.coherence * lam, res.delta_e_coh * lam * lam, res.delta_e_vac * lam * lam,
                         res.commutator_term * lam * lam, "ok")
    except Exception as exc:
        return _error_row(prefix, 4, exc)


def _moving_row(task) -> tuple:
    n, r, E, T, R, v, path, spec, lam = task
    prefix = (E, T, v)
    try:
        field, sw = FieldConfig(E, r), SwitchingProfile.from_duration(T)
        static = harvest.coherence_static(n, field, sw, R, path, spec)
        if EvaluationPath(path) is EvaluationPath.CLOSED_FORM:
            moving = motion.coherence_moving(n, field, sw, R, v, spec)
        else:
            moving = motion.coherence_moving_mixture(n, field, sw, R, v, spec)
        ratio = moving / static if static > 0 else math.nan
        return prefix + (static * lam, moving * lam, ratio, "ok")
    except Exception as exc:
        return _error_row(prefix, 3, exc)


def _catalysis_row(task) -> tuple:
    n, E, v, lam = task
    prefix = (E, v)
    try:
        C = catalysis.catalytic_coherence(n, E, v)
        cost = catalysis.catalysis_energy_cost(n, E, v)
        if not cost > 0:
            raise ArithmeticError("non-positive energy cost")
        return prefix + (C * lam, cost * lam * lam, "ok")
    except Exception as exc:
        return _error_row(prefix, 2, exc)


def _commutator_row(task) -> tuple:
    n, T, R, path, spec, lam = task
    prefix = (T, n)
    try:
        return prefix + (harvest.commutator_term(n, SwitchingProfile.from_duration(T), R, path, spec)
                         * lam * lam, "ok")
    except Exception as exc:
        return _error_row(prefix, 1, exc)


def _run_rows(worker, tasks: Sequence, jobs: int) -> List[tuple]:
    if jobs <= 1 or len(tasks) < 2:
        return [worker(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks, chunksize=chunk))


# ---------------------------------------------------------------------------
# output

def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _json_cell(value):
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def render(columns: Sequence[str], rows: Sequence[Sequence], fmt: str) -> str:
    if fmt == "json":
        records = [{c: _json_cell(v) for c, v in zip(columns, row)} for row in rows]
        return json.dumps(records, indent=1, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(v) for v in row])
    return buf.getvalue()


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def gnuplot_script(data_path: str, columns: Sequence[str], plot: str, ycols: Sequence[str],
                   title: str = "") -> str:
    """A gnuplot script drawing the table written to ``data_path``."""
    idx = {c: i + 1 for i, c in enumerate(columns)}
    lines = ['set datafile separator ","', "set key autotitle columnhead"]
    if title:
        lines.append(f'set title "{title}"')
    if plot == "surface":
        lines += ['set xlabel "E/Omega"', 'set ylabel "Omega T"', "set pm3d map",
                  f'splot "{data_path}" using {idx["energy"]}:{idx["duration"]}:{idx[ycols[0]]} with pm3d']
    else:
        x = idx[columns[0]]
        lines.append(f'set xlabel "{columns[0]}"')
        parts = [f'"{data_path}" using {x}:{idx[c]} with lines' for c in ycols]
        lines.append("plot " + ", ".join(parts))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument handling

def _add_common(p: argparse.ArgumentParser, sweep: bool = True) -> None:
    p.add_argument("--config", help="key = value configuration file (flags override it)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="write to this file instead of standard output")
    if not sweep:
        return
    p.add_argument("--dimension", type=int, choices=(1, 3))
    p.add_argument("--phase", type=int, choices=(0, 1), help="phase pi*r/2 of the coherent amplitude")
    p.add_argument("--energy", help="E/Omega: value, list a,b,c or start:stop:count")
    p.add_argument("--duration", help="Omega*T; 0 selects instantaneous coupling")
    p.add_argument("--radius", help="Omega*R")
    p.add_argument("--velocity", help="speed as a fraction of c")
    p.add_argument("--coupling", type=float, help="dimensionless coupling (default 1e-3)")
    p.add_argument("--reattach-coupling", action="store_true",
                   help="multiply coherences by the coupling and energies by its square")
    p.add_argument("--path", choices=[e.value for e in EvaluationPath], default="closed-form",
                   help="closed forms or direct quadrature")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (row order is unaffected)")
    p.add_argument("--tolerance-abs", type=float, help="quadrature absolute tolerance")
    p.add_argument("--tolerance-rel", type=float, help="quadrature relative tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="udwcoherence",
                                     description="Coherence harvesting by a derivatively coupled detector.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("static", help="static detector: coherence and energy costs over (E, T)")
    _add_common(p)
    p = sub.add_parser("moving", help="static vs moving detector over (E, T, v)")
    _add_common(p)
    p = sub.add_parser("catalysis", help="instantaneous coupling at R = 1/Omega over (E, v)")
    _add_common(p)
    p.add_argument("--series", type=int, metavar="M", help="also list the first M repeated harvests")
    p = sub.add_parser("figure", help="data behind one figure panel")
    p.add_argument("figure_id", choices=figure_ids(), metavar="FIGURE",
                   help="one of " + ", ".join(figure_ids()))
    _add_common(p)
    p.add_argument("--resolution", type=int, default=101, help="points per swept axis (default 101)")
    p.add_argument("--gnuplot", metavar="PATH", help="write a gnuplot script for the table")
    p.add_argument("--png", metavar="PATH", help="render the panel with matplotlib")
    p = sub.add_parser("verify", help="run the closed-form/oracle cross-checks")
    _add_common(p, sweep=False)
    p.add_argument("--only", action="append", help=f"restrict to groups: {', '.join(GROUPS)}")
    p.add_argument("--check-tolerance", type=float, help="replace every check's tolerance")
    p.add_argument("--tolerance-abs", type=float)
    p.add_argument("--tolerance-rel", type=float)
    p = sub.add_parser("estimate-time", help="time to collect one unit of coherence")
    _add_common(p, sweep=False)
    p.add_argument("--coupling", type=float, default=1e-3)
    p.add_argument("--omega-hz", type=float, default=1e15, help="detector gap frequency in Hz")
    return parser


def _settings(args) -> Dict:
    """Merge the shipped defaults, an optional config file and explicit flags."""
    values = parse_config(default_config_text())
    explicit = set()
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from None
        user = parse_config(text)
        values.update(user)
        explicit.update(user)
    flags = {"dimension": "dimension", "phase": "phase_r", "energy": "energy", "duration": "duration",
             "radius": "radius", "velocity": "velocity", "coupling": "coupling"}
    for attr, key in flags.items():
        value = getattr(args, attr, None)
        if value is not None:
            values[key] = value
            explicit.add(key)
    values["_explicit"] = explicit
    return values


def _spec(args) -> QuadratureSpec:
    abs_tol = args.tolerance_abs if getattr(args, "tolerance_abs", None) is not None else DEFAULT_SPEC.abs_tol
    rel_tol = args.tolerance_rel if getattr(args, "tolerance_rel", None) is not None else DEFAULT_SPEC.rel_tol
    try:
        return QuadratureSpec(abs_tol=abs_tol, rel_tol=rel_tol,
                              max_subdivisions=DEFAULT_SPEC.max_subdivisions,
                              tail_cutoff_threshold=DEFAULT_SPEC.tail_cutoff_threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _durations(values: Dict) -> List[float]:
    if values.get("switching_kind") == "delta":
        return [0.0]
    durations = parse_grid(values["duration"], "duration")
    if any(T < 0 for T in durations):
        raise UsageError("duration must be non-negative")
    return durations


def _grids(values: Dict):
    energies = parse_grid(values["energy"], "energy")
    radii = parse_grid(values["radius"], "radius")
    velocities = parse_grid(values["velocity"], "velocity")
    if any(E < 0 for E in energies):
        raise UsageError("energy must be non-negative")
    if any(R < 0 for R in radii):
        raise UsageError("radius must be non-negative")
    if any(not 0 <= v <= motion.VELOCITY_GUARD for v in velocities):
        raise UsageError(f"velocity must lie in [0, {motion.VELOCITY_GUARD}]")
    return energies, _durations(values), radii, velocities


def _coupling_factor(args, values) -> float:
    lam = float(values["coupling"])
    if lam > 0.1:
        warnings.warn(f"coupling {lam} is outside the perturbative regime", PerturbativeWarning)
    return lam if getattr(args, "reattach_coupling", False) else 1.0


def _single(values: List[float], name: str) -> float:
    if len(values) != 1:
        raise UsageError(f"{name} must be a single value for this command")
    return values[0]


def _static_table(args, values, spec):
    n, r = int(values["dimension"]), int(values["phase_r"])
    energies, durations, radii, _ = _grids(values)
    lam = _coupling_factor(args, values)
    tasks = [(n, r, E, T, R, args.path, spec, lam) for E, T, R in itertools.product(energies, durations, radii)]
    return STATIC_COLUMNS, _run_rows(_static_row, tasks, args.jobs)


def _moving_table(args, values, spec):
    n, r = int(values["dimension"]), int(values["phase_r"])
    energies, durations, radii, velocities = _grids(values)
    R = _single(radii, "radius")
    lam = _coupling_factor(args, values)
    tasks = [(n, r, E, T, R, v, args.path, spec, lam)
             for E, T, v in itertools.product(energies, durations, velocities)]
    return MOVING_COLUMNS, _run_rows(_moving_row, tasks, args.jobs)


def _catalysis_table(args, values, spec):
    n = int(values["dimension"])
    energies, _, radii, velocities = _grids(values)
    if radii != [catalysis.RADIUS]:
        raise UsageError("catalysis closed forms assume radius = 1")
    if "velocity" not in values["_explicit"]:
        velocities = list(CATALYSIS_VELOCITIES)
    lam = _coupling_factor(args, values)
    tasks = [(n, E, v, lam) for E, v in itertools.product(energies, velocities)]
    rows = _run_rows(_catalysis_row, tasks, args.jobs)
    series = getattr(args, "series", None)
    if series is None:
        return CATALYSIS_COLUMNS, rows
    if series < 1:
        raise UsageError("--series needs M >= 1")
    out = []
    for E, v, C, cost, status in rows:
        # instantaneous coupling: the commutator term vanishes
        values_m = (catalysis.repeated_harvest_series(C, 0.0, float(values["coupling"]), series)
                    if status == "ok" else [math.nan] * series)
        out.extend((E, v, m + 1, Cm, cost, status) for m, Cm in enumerate(values_m))
    return SERIES_COLUMNS, out


def _figure_table(args, values, spec):
    fig = FIGURES[args.figure_id]
    res = args.resolution
    if res < 2:
        raise UsageError("--resolution must be at least 2")
    energies = [float(x) for x in np.linspace(*ENERGY_RANGE, res)]
    durations = [float(x) for x in np.linspace(*DURATION_RANGE, res)]
    lam = _coupling_factor(args, values)
    path = args.path
    R = 1.0
    if fig.kind == "static":
        tasks = [(fig.dimension, fig.phase_r, E, T, R, path, spec, lam)
                 for E, T in itertools.product(energies, durations)]
        return fig, STATIC_COLUMNS, _run_rows(_static_row, tasks, args.jobs)
    if fig.kind == "moving":
        grid_e = [fig.energy] if fig.energy is not None else energies
        tasks = [(fig.dimension, fig.phase_r, E, T, R, fig.velocity[0], path, spec, lam)
                 for E, T in itertools.product(grid_e, durations)]
        columns, rows = MOVING_COLUMNS, _run_rows(_moving_row, tasks, args.jobs)
        if fig.plot == "curve":
            # duration is the abscissa of a fixed-energy panel
            order = (1, 0, 2, 3, 4, 5, 6)
            columns = tuple(columns[i] for i in order)
            rows = [tuple(row[i] for i in order) for row in rows]
        return fig, columns, rows
    if fig.kind == "commutator":
        tasks = [(n, T, R, path, spec, lam) for n in (1, 3) for T in durations]
        return fig, COMMUTATOR_COLUMNS, _run_rows(_commutator_row, tasks, args.jobs)
    tasks = [(fig.dimension, E, fig.velocity[0], lam) for E in energies]
    return fig, CATALYSIS_COLUMNS, _run_rows(_catalysis_row, tasks, args.jobs)


def _failed(rows) -> bool:
    return any(row[-1] != "ok" for row in rows)


def _cmd_sweep(args) -> int:
    values = _settings(args)
    spec = _spec(args)
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    table = {"static": _static_table, "moving": _moving_table, "catalysis": _catalysis_table}[args.command]
    columns, rows = table(args, values, spec)
    _emit(render(columns, rows, args.format), args.output)
    return EXIT_FAILURE if _failed(rows) else EXIT_OK


def _cmd_figure(args) -> int:
    values = _settings(args)
    spec = _spec(args)
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    fig, columns, rows = _figure_table(args, values, spec)
    _emit(render(columns, rows, args.format), args.output)
    if args.gnuplot:
        data = args.output or f"{args.figure_id}.csv"
        with open(args.gnuplot, "w", newline="\n") as fh:
            fh.write(gnuplot_script(data, columns, fig.plot, fig.columns, fig.title))
    if args.png:
        from .plotting import render_table
        render_table(args.png, columns, rows, fig.plot, fig.columns, fig.title)
    return EXIT_FAILURE if _failed(rows) else EXIT_OK


def _cmd_verify(args) -> int:
    config_values = parse_config(default_config_text())
    if args.config:
        try:
            config_values.update(parse_config(Path(args.config).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from None
    only = None
    if args.only:
        only = [g.strip() for item in args.only for g in item.split(",") if g.strip()]
        unknown = set(only) - set(GROUPS)
        if unknown:
            raise UsageError(f"unknown check group(s): {', '.join(sorted(unknown))}")
    point = {}
    for key in ("dimension", "phase_r", "switching_kind"):
        point[key] = config_values[key]
    for key in ("energy", "duration", "radius"):
        point[key] = parse_grid(config_values[key], key)[0]
    report = run_verify(only=only, tolerance=args.check_tolerance, spec=_spec(args), config_point=point)
    rows = [(r.group, r.name, "PASS" if r.passed else "FAIL", r.discrepancy, r.tolerance, r.detail)
            for r in report.results]
    _emit(render(VERIFY_COLUMNS, rows, args.format), args.output)
    return EXIT_OK if report.passed else EXIT_FAILURE


def _cmd_estimate(args) -> int:
    if args.config:
        parse_config(Path(args.config).read_text())
    seconds = catalysis.harvest_time_estimate(args.coupling, args.omega_hz)
    _emit(render(ESTIMATE_COLUMNS, [(args.coupling, args.omega_hz, seconds)], args.format), args.output)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"static": _cmd_sweep, "moving": _cmd_sweep, "catalysis": _cmd_sweep,
                "figure": _cmd_figure, "verify": _cmd_verify, "estimate-time": _cmd_estimate}
    try:
        return handlers[args.command](args)
    except (UsageError, ConfigError) as exc:
        print(f"udwcoherence {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"udwcoherence {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
