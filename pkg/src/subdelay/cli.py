"""Command line harness: TOML-configured runs written as deterministic files.

Subcommands
    solve           march one configuration and dump the nodal field
    temporal-study  error/rate table under step-count doubling
    spatial-study   error/rate table under mesh halving
    oracle          dump the semi-analytic single-mode reference field
    probe           derivative blow-up probe of a reference trajectory
    weights         dump the quadrature coefficient families
    stability       march one configuration and evaluate the a-priori bound

Each subcommand reads one TOML file (``--config``) and writes its
artifacts into a directory (``--out``, falling back to the config's
``output.directory``, then the working directory).  Outputs carry no
timestamps and use fixed float formatting, so identical configs produce
byte-identical files.  Exit status: 0 on success, 1 on a runtime
failure, 2 on a configuration problem, 3 when the stability bound is
violated.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - python < 3.11
    import tomli as tomllib  # type: ignore[no-redef]

import numpy as np

from .fem import uniform_mesh
from .oracle import QuadSettings, oracle_solution, singularity_probe
from .problems import BuiltinProblem, get_problem, single_mode_problem
from .quadrature import build_kernel
from .solver import SolutionHistory, TimeGrid, run, stability_bound_check
from .studies import ReferenceLike, emit_table, spatial_study, temporal_study

__all__ = ["ConfigError", "main"]


class ConfigError(Exception):
    """Configuration rejected; the message names the key and constraint."""


_MISSING = object()


def _load_config(path: Path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        # the decoder message carries the line and column
        raise ConfigError(f"{path}: {exc}") from None


def _section(cfg: dict, name: str, required: bool = True) -> dict:
    if name not in cfg:
        if required:
            raise ConfigError(f"missing required section [{name}]")
        return {}
    value = cfg[name]
    if not isinstance(value, dict):
        raise ConfigError(f"{name} must be a section, not a value")
    return value


def _check_sections(cfg: dict, allowed: Sequence[str]) -> None:
    for key in cfg:
        if key not in allowed:
            raise ConfigError(f"unknown key {key}")


def _check_keys(table: dict, allowed: Sequence[str], path: str) -> None:
    for key in table:
        if key not in allowed:
            raise ConfigError(f"unknown key {path}.{key}")


def _get(table: dict, key: str, path: str, default: Any = _MISSING) -> Any:
    if key in table:
        return table[key]
    if default is _MISSING:
        raise ConfigError(f"missing required key {path}.{key}")
    return default


def _get_float(table: dict, key: str, path: str, default: Any = _MISSING) -> float:
    value = _get(table, key, path, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key} must be a number, got {value!r}")
    return float(value)


def _get_int(table: dict, key: str, path: str, default: Any = _MISSING) -> int:
    value = _get(table, key, path, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key} must be an integer, got {value!r}")
    return value


def _get_str(table: dict, key: str, path: str, default: Any = _MISSING) -> str:
    value = _get(table, key, path, default)
    if not isinstance(value, str):
        raise ConfigError(f"{path}.{key} must be a string, got {value!r}")
    return value


def _choice(
    table: dict, key: str, path: str, options: Sequence[str], default: str
) -> str:
    value = _get_str(table, key, path, default)
    if value not in options:
        raise ConfigError(
            f"{path}.{key} must be one of {', '.join(options)}, got {value!r}"
        )
    return value


def _number_list(table: dict, key: str, path: str) -> list[float]:
    value = _get(table, key, path)
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{path}.{key} must be a nonempty list of numbers")
    out = []
    for i, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ConfigError(f"{path}.{key}[{i}] must be a number, got {item!r}")
        out.append(float(item))
    return out


def _int_list(table: dict, key: str, path: str) -> list[int]:
    value = _get(table, key, path)
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{path}.{key} must be a nonempty list of integers")
    out = []
    for i, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, int):
            raise ConfigError(f"{path}.{key}[{i}] must be an integer, got {item!r}")
        out.append(item)
    return out


def _term_list(table: dict, key: str, path: str) -> list[list[float]]:
    if key not in table:
        return []
    value = table[key]
    if not isinstance(value, list):
        raise ConfigError(f"{path}.{key} must be a list of [coeff, shift, power] terms")
    terms = []
    for i, item in enumerate(value):
        ok = (
            isinstance(item, list)
            and len(item) == 3
            and all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in item
            )
        )
        if not ok:
            raise ConfigError(f"{path}.{key}[{i}] must be [coeff, shift, power]")
        terms.append([float(v) for v in item])
    return terms


_NAMED_PROBLEM_KEYS = ("name", "alpha", "K")
_INLINE_PROBLEM_KEYS = ("alpha", "tau", "K", "p", "a", "b", "L", "mode", "history", "source")


def _problem_from(cfg: dict) -> BuiltinProblem:
    table = _section(cfg, "problem")
    alpha = _get_float(table, "alpha", "problem")
    K = _get_int(table, "K", "problem", 3)
    try:
        if "name" in table:
            _check_keys(table, _NAMED_PROBLEM_KEYS, "problem")
            return get_problem(_get_str(table, "name", "problem"), alpha, K)
        _check_keys(table, _INLINE_PROBLEM_KEYS, "problem")
        return single_mode_problem(
            alpha=alpha,
            tau=_get_float(table, "tau", "problem", 1.0),
            K=K,
            p=_get_float(table, "p", "problem", 1.0),
            a=_get_float(table, "a", "problem", 0.0),
            b=_get_float(table, "b", "problem", 1.0),
            L=_get_float(table, "L", "problem", 1.0),
            mode=_get_int(table, "mode", "problem", 1),
            history=_term_list(table, "history", "problem"),
            source=_term_list(table, "source", "problem"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _mesh_cells(table: dict, L: float, path: str = "discretization") -> int:
    if ("h" in table) == ("cells" in table):
        raise ConfigError(f"give exactly one of {path}.h and {path}.cells")
    if "cells" in table:
        cells = _get_int(table, "cells", path)
        if cells < 2:
            raise ConfigError(f"{path}.cells must be at least 2, got {cells}")
        return cells
    h = _get_float(table, "h", path)
    if h <= 0.0:
        raise ConfigError(f"{path}.h must be positive, got {h!r}")
    cells = round(L / h)
    if cells < 2 or abs(cells * h - L) > 1e-9 * L:
        raise ConfigError(f"{path}.h = {h:g} does not tile the interval length {L:g}")
    return cells


def _steps(table: dict, path: str = "discretization") -> int:
    N = _get_int(table, "N", path)
    if N < 2:
        raise ConfigError(f"{path}.N must be at least 2, got {N}")
    return N


_OUTPUT_KEYS = {
    "solve": ("directory", "stride"),
    "oracle": ("directory", "stride"),
    "temporal-study": ("directory", "formats"),
    "spatial-study": ("directory", "formats"),
    "probe": ("directory",),
    "weights": ("directory",),
    "stability": ("directory",),
}


def _output_block(cfg: dict, command: str) -> dict:
    table = _section(cfg, "output", required=False)
    _check_keys(table, _OUTPUT_KEYS[command], "output")
    formats = _get(table, "formats", "output", ["csv", "markdown"])
    if not isinstance(formats, list) or not formats:
        raise ConfigError("output.formats must be a nonempty list")
    for fmt in formats:
        if fmt not in ("csv", "markdown"):
            raise ConfigError(f"output.formats entries must be csv or markdown, got {fmt!r}")
    stride = _get_int(table, "stride", "output", 1)
    if stride < 1:
        raise ConfigError(f"output.stride must be at least 1, got {stride}")
    directory = table.get("directory")
    if directory is not None and not isinstance(directory, str):
        raise ConfigError("output.directory must be a string")
    return {"directory": directory, "formats": tuple(formats), "stride": stride}


def _out_dir(args: argparse.Namespace, output: dict) -> Path:
    if args.out is not None:
        directory = Path(args.out)
    elif output["directory"] is not None:
        directory = Path(output["directory"])
    else:
        directory = Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _write(path: Path, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)
    print(f"wrote {path}")


def _meta_lines(pairs: Sequence[tuple[str, str]]) -> str:
    return "".join(f"# {key}: {value}\n" for key, value in pairs)


def _field_csv(
    meta: Sequence[tuple[str, str]],
    xs: np.ndarray,
    times: np.ndarray,
    field: np.ndarray,
) -> str:
    lines = [_meta_lines(meta) + "x,t,u"]
    for i, t in enumerate(times):
        for j, x in enumerate(xs):
            lines.append(f"{x:.17g},{t:.17g},{field[i, j]:.17g}")
    return "\n".join(lines) + "\n"


def _sample_steps(total: int, stride: int) -> np.ndarray:
    steps = np.arange(0, total + 1, stride)
    if steps[-1] != total:
        steps = np.append(steps, total)
    return steps


def _cmd_solve(cfg: dict, args: argparse.Namespace) -> int:
    _check_sections(cfg, ("problem", "discretization", "output"))
    problem = _problem_from(cfg)
    disc = _section(cfg, "discretization")
    _check_keys(disc, ("N", "h", "cells"), "discretization")
    spec = problem.spec
    mesh = uniform_mesh(spec.L, _mesh_cells(disc, spec.L))
    grid = TimeGrid(spec.tau, spec.K, _steps(disc))
    output = _output_block(cfg, "solve")
    out = _out_dir(args, output)

    history = run(spec, mesh, grid)
    steps = _sample_steps(grid.total_steps, output["stride"])
    field = np.zeros((steps.shape[0], mesh.node_coords.shape[0]))
    for i, n in enumerate(steps):
        field[i, 1:-1] = history.row(int(n))
    meta = [
        ("problem", problem.name),
        ("alpha", f"{spec.alpha:g}"),
        ("tau", f"{spec.tau:g}"),
        ("K", f"{spec.K}"),
        ("cells", f"{mesh.node_coords.shape[0] - 1}"),
        ("N", f"{grid.N}"),
        ("stride", f"{output['stride']}"),
    ]
    _write(out / "solution.csv", _field_csv(meta, mesh.node_coords, grid.time(steps), field))
    return 0


_STUDY_COMMON_KEYS = ("name", "kind", "windows", "reference", "ftilde", "caputo_form")


def _study_common(cfg: dict, args: argparse.Namespace, command: str) -> dict:
    table = _section(cfg, "study")
    name = _get_str(table, "name", "study", Path(args.config).stem)
    if not re.fullmatch(r"[A-Za-z0-9._-]+", name):
        raise ConfigError(f"study.name must be a plain file stem, got {name!r}")
    windows = _int_list(table, "windows", "study") if "windows" in table else None
    return {
        "name": name,
        "windows": windows,
        "reference": _choice(
            table, "reference", "study", ("default", "exact", "cascade", "fine"), "default"
        ),
        "ftilde": _choice(
            table, "ftilde", "study", ("auto", "quadrature", "analytic"), "auto"
        ),
        "caputo_form": _choice(table, "caputo_form", "study", ("a", "g"), "a"),
        "output": _output_block(cfg, command),
    }


def _reference_arg(
    problem: BuiltinProblem, mode: str, fine: Optional[SolutionHistory]
) -> ReferenceLike:
    if mode == "default":
        return None
    if mode == "cascade":
        return "cascade"
    if mode == "fine":
        return fine
    try:
        return problem.exact_solution()
    except ValueError as exc:
        raise ConfigError(f"study.reference = 'exact': {exc}") from None


def _emit_study(report, common: dict, out: Path) -> None:
    formats = common["output"]["formats"]
    if "csv" in formats:
        _write(out / f"study_{common['name']}.csv", emit_table(report, "csv"))
    if "markdown" in formats:
        _write(out / f"study_{common['name']}.md", emit_table(report, "markdown"))


def _cmd_temporal_study(cfg: dict, args: argparse.Namespace) -> int:
    _check_sections(cfg, ("problem", "discretization", "study", "output"))
    problem = _problem_from(cfg)
    spec = problem.spec
    disc = _section(cfg, "discretization")
    _check_keys(disc, ("h", "cells"), "discretization")
    cells = _mesh_cells(disc, spec.L)
    table = _section(cfg, "study")
    _check_keys(table, _STUDY_COMMON_KEYS + ("N_list", "reference_N"), "study")
    common = _study_common(cfg, args, "temporal-study")
    kind = _choice(
        table, "kind", "study", ("temporal-window", "temporal-endpoint"), "temporal-window"
    )
    step_counts = _int_list(table, "N_list", "study")

    fine = None
    if common["reference"] == "fine":
        n_ref = _get_int(table, "reference_N", "study")
        fine = run(
            spec,
            uniform_mesh(spec.L, cells),
            TimeGrid(spec.tau, spec.K, n_ref),
            common["ftilde"],
            common["caputo_form"],
        )
    elif "reference_N" in table:
        raise ConfigError("study.reference_N is only meaningful with reference = 'fine'")

    report = temporal_study(
        spec,
        spec.L / cells,
        step_counts,
        windows=common["windows"],
        reference=_reference_arg(problem, common["reference"], fine),
        metric=kind.split("-", 1)[1],
        ftilde_mode=common["ftilde"],
        caputo_form=common["caputo_form"],
        metadata={"problem": problem.name},
        jobs=args.jobs,
    )
    _emit_study(report, common, _out_dir(args, common["output"]))
    return 0


def _cmd_spatial_study(cfg: dict, args: argparse.Namespace) -> int:
    _check_sections(cfg, ("problem", "discretization", "study", "output"))
    problem = _problem_from(cfg)
    spec = problem.spec
    disc = _section(cfg, "discretization")
    _check_keys(disc, ("N",), "discretization")
    N = _steps(disc)
    table = _section(cfg, "study")
    _check_keys(table, _STUDY_COMMON_KEYS + ("h_list", "reference_cells"), "study")
    common = _study_common(cfg, args, "spatial-study")
    _choice(table, "kind", "study", ("spatial",), "spatial")
    widths = _number_list(table, "h_list", "study")

    fine = None
    if common["reference"] == "fine":
        m_ref = _get_int(table, "reference_cells", "study")
        fine = run(
            spec,
            uniform_mesh(spec.L, m_ref),
            TimeGrid(spec.tau, spec.K, N),
            common["ftilde"],
            common["caputo_form"],
        )
    elif "reference_cells" in table:
        raise ConfigError("study.reference_cells is only meaningful with reference = 'fine'")

    report = spatial_study(
        spec,
        spec.tau / N,
        widths,
        windows=common["windows"],
        reference=_reference_arg(problem, common["reference"], fine),
        ftilde_mode=common["ftilde"],
        caputo_form=common["caputo_form"],
        metadata={"problem": problem.name},
        jobs=args.jobs,
    )
    _emit_study(report, common, _out_dir(args, common["output"]))
    return 0


_ORACLE_KEYS = (
    "panels",
    "gauss_order",
    "table_size",
    "tol",
    "grading",
    "table_grading",
    "kernel_table",
)


def _quad_settings(cfg: dict) -> Optional[QuadSettings]:
    table = _section(cfg, "oracle", required=False)
    _check_keys(table, _ORACLE_KEYS, "oracle")
    if not table:
        return None
    defaults = QuadSettings()
    try:
        return QuadSettings(
            panels=_get_int(table, "panels", "oracle", defaults.panels),
            gauss_order=_get_int(table, "gauss_order", "oracle", defaults.gauss_order),
            table_size=_get_int(table, "table_size", "oracle", defaults.table_size),
            tol=_get_float(table, "tol", "oracle", defaults.tol),
            grading=_get_float(table, "grading", "oracle", defaults.grading),
            table_grading=_get_float(
                table, "table_grading", "oracle", defaults.table_grading
            ),
            kernel_table=_get_int(table, "kernel_table", "oracle", defaults.kernel_table),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _cmd_oracle(cfg: dict, args: argparse.Namespace) -> int:
    _check_sections(cfg, ("problem", "discretization", "oracle", "output"))
    problem = _problem_from(cfg)
    spec = problem.spec
    disc = _section(cfg, "discretization")
    _check_keys(disc, ("N", "h", "cells"), "discretization")
    mesh = uniform_mesh(spec.L, _mesh_cells(disc, spec.L))
    grid = TimeGrid(spec.tau, spec.K, _steps(disc))
    output = _output_block(cfg, "oracle")
    out = _out_dir(args, output)

    solution = oracle_solution(problem, _quad_settings(cfg))
    steps = _sample_steps(grid.total_steps, output["stride"])
    times = grid.time(steps)
    field = np.outer(solution.modal.values(times), solution.mode.shape(mesh.node_coords))
    meta = [
        ("problem", problem.name),
        ("alpha", f"{spec.alpha:g}"),
        ("tau", f"{spec.tau:g}"),
        ("K", f"{spec.K}"),
        ("cells", f"{mesh.node_coords.shape[0] - 1}"),
        ("N", f"{grid.N}"),
        ("stride", f"{output['stride']}"),
    ]
    _write(out / "oracle.csv", _field_csv(meta, mesh.node_coords, times, field))
    return 0


def _probe_range(table: dict, key: str, default: tuple) -> tuple:
    if key not in table:
        return default
    values = _number_list(table, key, "probe")
    if len(values) != 3:
        raise ConfigError(f"probe.{key} must be [low, high, count]")
    count = table[key][2]
    if isinstance(count, bool) or not isinstance(count, int):
        raise ConfigError(f"probe.{key}[2] must be an integer count")
    return (values[0], values[1], count)


def _cmd_probe(cfg: dict, args: argparse.Namespace) -> int:
    _check_sections(cfg, ("problem", "probe", "oracle", "output"))
    problem = _problem_from(cfg)
    spec = problem.spec
    table = _section(cfg, "probe", required=False)
    _check_keys(table, ("target", "first_range", "second_range"), "probe")
    target = _choice(table, "target", "probe", ("auto", "exact", "oracle"), "auto")
    first_range = _probe_range(table, "first_range", (1e-4, 1e-2, 9))
    second_range = _probe_range(table, "second_range", (3e-3, 3e-2, 7))
    output = _output_block(cfg, "probe")
    out = _out_dir(args, output)

    if target == "auto":
        target = "exact" if problem.exact_coeff is not None else "oracle"
    if target == "exact":
        if problem.exact_coeff is None:
            raise ConfigError(
                f"probe.target = 'exact': {problem.name} has no closed-form solution"
            )
        coeff = problem.exact_coeff
        fn: Callable[[float], float] = lambda t: float(coeff(t))
    else:
        if spec.K < 2:
            raise ConfigError("probing past the first window needs problem.K >= 2")
        modal = oracle_solution(problem, _quad_settings(cfg)).modal
        fn = lambda t: modal.evaluate(t, exact_feedback=True)

    report = singularity_probe(fn, spec.tau, first_range, second_range)
    meta = [
        ("problem", problem.name),
        ("alpha", f"{spec.alpha:g}"),
        ("target", target),
        ("first_slope", f"{report.first_slope:.17g}"),
        ("second_slope", f"{report.second_slope:.17g}"),
    ]
    _write(out / "probe.csv", _meta_lines(meta) + report.to_csv())
    print(
        f"slope of |du/dt| near 0: {report.first_slope:.4f}; "
        f"slope of |d2u/dt2| near the delay: {report.second_slope:.4f}"
    )
    return 0


def _cmd_weights(cfg: dict, args: argparse.Namespace) -> int:
    _check_sections(cfg, ("weights", "output"))
    table = _section(cfg, "weights")
    _check_keys(table, ("alpha", "rho", "n_max"), "weights")
    alpha = _get_float(table, "alpha", "weights")
    rho = _get_float(table, "rho", "weights")
    n_max = _get_int(table, "n_max", "weights")
    if n_max < 0:
        raise ConfigError(f"weights.n_max must be nonnegative, got {n_max}")
    output = _output_block(cfg, "weights")
    out = _out_dir(args, output)

    try:
        kernel = build_kernel(alpha, rho, n_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    lines = ["k,g_alpha,g_alpha_minus_1,A,P"]
    for k in range(n_max + 1):
        lines.append(
            f"{k},{kernel.g_alpha[k]:.17g},{kernel.g_alpha_minus_1[k]:.17g},"
            f"{kernel.A[k]:.17g},{kernel.P[k]:.17g}"
        )
    _write(out / "weights.csv", "\n".join(lines) + "\n")
    return 0


def _cmd_stability(cfg: dict, args: argparse.Namespace) -> int:
    _check_sections(cfg, ("problem", "discretization", "output"))
    problem = _problem_from(cfg)
    spec = problem.spec
    disc = _section(cfg, "discretization")
    _check_keys(disc, ("N", "h", "cells"), "discretization")
    mesh = uniform_mesh(spec.L, _mesh_cells(disc, spec.L))
    grid = TimeGrid(spec.tau, spec.K, _steps(disc))
    output = _output_block(cfg, "stability")
    out = _out_dir(args, output)

    history = run(spec, mesh, grid)
    report = stability_bound_check(history, spec)
    live = report.norms > 0.0
    margin = float(np.min(report.bounds[live] / report.norms[live])) if live.any() else np.inf
    meta = [
        ("problem", problem.name),
        ("alpha", f"{spec.alpha:g}"),
        ("cells", f"{mesh.node_coords.shape[0] - 1}"),
        ("N", f"{grid.N}"),
        ("satisfied", "true" if report.satisfied else "false"),
        ("min_bound_over_norm", f"{margin:.17g}"),
    ]
    _write(out / "stability.csv", _meta_lines(meta) + report.to_csv())
    if not report.satisfied:
        worst = int(np.sum(report.norms > report.bounds * (1.0 + 1e-12)))
        print(f"stability bound violated at {worst} of {report.ns.shape[0]} steps")
        return 3
    print(f"stability bound satisfied, min bound/norm = {margin:.3g}")
    return 0


_HANDLERS: dict[str, Callable[[dict, argparse.Namespace], int]] = {
    "solve": _cmd_solve,
    "temporal-study": _cmd_temporal_study,
    "spatial-study": _cmd_spatial_study,
    "oracle": _cmd_oracle,
    "probe": _cmd_probe,
    "weights": _cmd_weights,
    "stability": _cmd_stability,
}

_HELP = {
    "solve": "march one configuration and dump the nodal field",
    "temporal-study": "error/rate table under step-count doubling",
    "spatial-study": "error/rate table under mesh halving",
    "oracle": "dump the semi-analytic single-mode reference field",
    "probe": "derivative blow-up probe of a reference trajectory",
    "weights": "dump the quadrature coefficient families",
    "stability": "march one configuration and evaluate the a-priori bound",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subdelay",
        description="Delay-subdiffusion solver harness driven by TOML configs.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, blurb in _HELP.items():
        cmd = sub.add_parser(name, help=blurb)
        cmd.add_argument("--config", required=True, type=Path, help="TOML config file")
        cmd.add_argument("--out", type=Path, default=None, help="output directory")
        cmd.add_argument("--jobs", type=int, default=1, help="worker threads for study runs")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    try:
        cfg = _load_config(args.config)
        return _HANDLERS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
