"""Windowed convergence studies over step and cell counts.

A study runs the marching scheme at a ladder of resolutions, measures
errors window by window against a chosen reference, and tabulates them
with observed halving rates.  Temporal studies refine the step count at a
fixed mesh and record either the worst error inside each delay window or
the error at each window endpoint; spatial studies refine the mesh at a
fixed step size and record window-endpoint errors.  The reference can be
an exact solution callable, a precomputed fine run, the string "cascade"
(each row measured against the run at doubled resolution), or None for a
default fine run at four times the finest resolution.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .fem import Mesh1D, assemble_mass, uniform_mesh
from .solver import ProblemSpec, SolutionHistory, TimeGrid, run

__all__ = [
    "ConvergenceReport",
    "emit_table",
    "endpoint_error",
    "parse_table",
    "spatial_study",
    "tabulate",
    "temporal_study",
    "window_error",
]

ExactFn = Callable[[np.ndarray, float], np.ndarray]
ReferenceLike = Union[ExactFn, SolutionHistory, str, None]


def _mass_norms(mesh: Mesh1D, rows: np.ndarray) -> np.ndarray:
    """Mass-matrix norm of each row of interior nodal values."""
    M = assemble_mass(mesh)
    rows = np.atleast_2d(rows)
    q = np.einsum("ij,ij->i", rows, M.diag * rows)
    q += 2.0 * np.einsum("ij,ij->i", rows[:, :-1], M.upper * rows[:, 1:])
    return np.sqrt(np.maximum(q, 0.0))


def _restriction_step(coarse: SolutionHistory, fine: SolutionHistory) -> tuple[int, int]:
    """Index ratios (time, space) embedding the coarse run in the fine one."""
    if abs(coarse.mesh.L - fine.mesh.L) > 1e-12 * coarse.mesh.L:
        raise ValueError("runs live on different intervals")
    if abs(coarse.grid.tau - fine.grid.tau) > 1e-12 * coarse.grid.tau:
        raise ValueError("runs disagree on the delay")
    if coarse.grid.K != fine.grid.K:
        raise ValueError("runs disagree on the horizon")
    if fine.grid.N % coarse.grid.N != 0:
        raise ValueError(
            f"reference step count {fine.grid.N} does not nest the run's {coarse.grid.N}"
        )
    mc = coarse.mesh.n_interior + 1
    mf = fine.mesh.n_interior + 1
    if mf % mc != 0:
        raise ValueError(f"reference mesh with {mf} cells does not nest {mc} cells")
    return fine.grid.N // coarse.grid.N, mf // mc


def _window_steps(grid: TimeGrid, k: int, endpoint_only: bool) -> np.ndarray:
    if not (1 <= k <= grid.K):
        raise ValueError(f"window {k} outside 1..{grid.K}")
    if endpoint_only:
        return np.array([k * grid.N])
    return np.arange((k - 1) * grid.N + 1, k * grid.N + 1)


def _difference_rows(
    history: SolutionHistory, reference: ReferenceLike, steps: np.ndarray
) -> np.ndarray:
    rows = history.data[steps + history.grid.N]
    if isinstance(reference, SolutionHistory):
        rt, rs = _restriction_step(history, reference)
        fine_rows = reference.data[steps * rt + reference.grid.N]
        idx = (np.arange(history.mesh.n_interior) + 1) * rs - 1
        return rows - fine_rows[:, idx]
    if callable(reference):
        x = history.mesh.interior_coords
        ref = np.array(
            [np.asarray(reference(x, float(history.grid.time(int(n)))), dtype=float) for n in steps]
        )
        return rows - ref
    raise TypeError("reference must be an exact callable or a finer run")


def window_error(history: SolutionHistory, reference: ReferenceLike, k: int) -> float:
    """Worst mass-norm deviation over the k-th delay window.

    The window covers steps (k-1)*N+1 ... k*N; its left edge belongs to
    the previous window.
    """
    steps = _window_steps(history.grid, k, endpoint_only=False)
    diff = _difference_rows(history, reference, steps)
    return float(_mass_norms(history.mesh, diff).max())


def endpoint_error(history: SolutionHistory, reference: ReferenceLike, k: int) -> float:
    """Mass-norm deviation at the k-th window endpoint t = k*tau."""
    steps = _window_steps(history.grid, k, endpoint_only=True)
    diff = _difference_rows(history, reference, steps)
    return float(_mass_norms(history.mesh, diff)[0])


@dataclass(frozen=True)
class ConvergenceReport:
    """Error table of a refinement ladder.

    errors[i, j] is the error of resolution i in window j; rates[i, j]
    compares row i against the coarser row above it (NaN on the first
    row and wherever a ratio is undefined).
    """

    kind: str
    resolution_label: str
    resolutions: tuple[int, ...]
    windows: tuple[int, ...]
    errors: np.ndarray
    rates: np.ndarray
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        shape = (len(self.resolutions), len(self.windows))
        if self.errors.shape != shape or self.rates.shape != shape:
            raise ValueError(f"tables must have shape {shape}")


def tabulate(
    kind: str,
    resolution_label: str,
    resolutions: Sequence[int],
    windows: Sequence[int],
    errors: np.ndarray,
    metadata: Optional[dict[str, str]] = None,
) -> ConvergenceReport:
    """Attach halving rates to an error table; each rate sits on the finer
    row of the pair it compares."""
    errors = np.asarray(errors, dtype=float)
    rates = np.full_like(errors, np.nan)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = errors[:-1] / errors[1:]
        rates[1:] = np.where(ratio > 0.0, np.log2(ratio), np.nan)
    return ConvergenceReport(
        kind=kind,
        resolution_label=resolution_label,
        resolutions=tuple(int(r) for r in resolutions),
        windows=tuple(int(w) for w in windows),
        errors=errors,
        rates=rates,
        metadata=dict(metadata or {}),
    )


def _fmt_error(v: float) -> str:
    return "" if not math.isfinite(v) else f"{v:.4e}"


def _fmt_rate(v: float) -> str:
    return "" if not math.isfinite(v) else f"{v:.5g}"


def emit_table(report: ConvergenceReport, fmt: str = "csv") -> str:
    """Render a report with 5 significant digits as CSV or Markdown."""
    heads = [report.resolution_label]
    for w in report.windows:
        heads += [f"w{w}_error", f"w{w}_rate"]
    if fmt == "csv":
        lines = [f"# kind: {report.kind}"]
        for key, val in report.metadata.items():
            lines.append(f"# {key}: {val}")
        lines.append(",".join(heads))
        for i, res in enumerate(report.resolutions):
            cells = [str(res)]
            for j in range(len(report.windows)):
                cells += [_fmt_error(report.errors[i, j]), _fmt_rate(report.rates[i, j])]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = [
            "| " + " | ".join(heads) + " |",
            "|" + "---|" * len(heads),
        ]
        for i, res in enumerate(report.resolutions):
            cells = [str(res)]
            for j in range(len(report.windows)):
                cells += [
                    _fmt_error(report.errors[i, j]) or "-",
                    _fmt_rate(report.rates[i, j]) or "-",
                ]
            lines.append("| " + " | ".join(cells) + " |")
        if report.metadata:
            lines.append("")
            for key, val in report.metadata.items():
                lines.append(f"- {key}: {val}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"fmt must be 'csv' or 'markdown', got {fmt!r}")


def parse_table(text: str) -> ConvergenceReport:
    """Read back a CSV table produced by emit_table."""
    metadata: dict[str, str] = {}
    kind = ""
    header: list[str] = []
    resolutions: list[int] = []
    errors: list[list[float]] = []
    rates: list[list[float]] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition(":")
            key, val = key.strip(), val.strip()
            if key == "kind":
                kind = val
            else:
                metadata[key] = val
            continue
        cells = line.split(",")
        if not header:
            header = cells
            continue
        resolutions.append(int(cells[0]))
        errors.append([float(c) if c else math.nan for c in cells[1::2]])
        rates.append([float(c) if c else math.nan for c in cells[2::2]])
    if not header or not resolutions:
        raise ValueError("no table found in text")
    windows = tuple(int(h.removeprefix("w").removesuffix("_error")) for h in header[1::2])
    return ConvergenceReport(
        kind=kind,
        resolution_label=header[0],
        resolutions=tuple(resolutions),
        windows=windows,
        errors=np.array(errors),
        rates=np.array(rates),
        metadata=metadata,
    )


def _check_ladder(values: Sequence[int], what: str) -> None:
    if len(values) < 1:
        raise ValueError(f"{what} must not be empty")
    for a, b in zip(values[:-1], values[1:]):
        if b != 2 * a:
            raise ValueError(f"{what} must double at every rung, got {a} -> {b}")


def _cells_from_width(L: float, h: float) -> int:
    m = round(L / h)
    if m < 2 or abs(m * h - L) > 1e-9 * L:
        raise ValueError(f"cell width {h!r} does not tile (0, {L})")
    return m


def _windows_arg(windows: Optional[Sequence[int]], K: int) -> tuple[int, ...]:
    if windows is None:
        return tuple(range(1, K + 1))
    out = tuple(int(w) for w in windows)
    if not out or list(out) != sorted(set(out)) or out[0] < 1 or out[-1] > K:
        raise ValueError(f"windows must be strictly increasing within 1..{K}")
    return out


def _solve_all(
    solve: Callable[[int], SolutionHistory], sizes: Sequence[int], jobs: int
) -> dict[int, SolutionHistory]:
    """Run the ladder, optionally across worker threads; assembly stays
    keyed by size so the result is identical either way."""
    if jobs > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=min(jobs, len(sizes))) as pool:
            results = list(pool.map(solve, sizes))
        return dict(zip(sizes, results))
    return {size: solve(size) for size in sizes}


def temporal_study(
    spec: ProblemSpec,
    h: float,
    step_counts: Sequence[int],
    windows: Optional[Sequence[int]] = None,
    reference: ReferenceLike = None,
    metric: str = "window",
    ftilde_mode: str = "auto",
    caputo_form: str = "a",
    metadata: Optional[dict[str, str]] = None,
    jobs: int = 1,
) -> ConvergenceReport:
    """Errors under step doubling at a fixed mesh.

    metric "window" takes the worst error inside each delay window,
    metric "endpoint" the error at each window's final time.
    """
    if metric not in ("window", "endpoint"):
        raise ValueError(f"metric must be 'window' or 'endpoint', got {metric!r}")
    measure = window_error if metric == "window" else endpoint_error
    _check_ladder(list(step_counts), "step counts")
    wins = _windows_arg(windows, spec.K)
    mesh = uniform_mesh(spec.L, _cells_from_width(spec.L, h))

    def solve(N: int) -> SolutionHistory:
        return run(spec, mesh, TimeGrid(spec.tau, spec.K, N), ftilde_mode, caputo_form)

    to_run = list(step_counts)
    meta = {
        "alpha": f"{spec.alpha:g}",
        "h": f"{h:g}",
        "ftilde_mode": ftilde_mode,
        "error": "window max" if metric == "window" else "window endpoint",
    }
    ref: ReferenceLike = None
    ref_size: Optional[int] = None
    if reference is None:
        ref_size = 4 * max(step_counts)
        to_run.append(ref_size)
        meta["reference"] = f"fine run, N = {ref_size}, same mesh (default convention)"
    elif isinstance(reference, str):
        if reference != "cascade":
            raise ValueError(f"unknown reference mode {reference!r}")
        to_run.append(2 * max(step_counts))
        ref = None
        meta["reference"] = "cascade against the doubled step count"
    elif isinstance(reference, SolutionHistory):
        ref = reference
        meta["reference"] = f"fine run, N = {reference.grid.N}"
    else:
        ref = reference
        meta["reference"] = "exact solution"
    meta.update(metadata or {})
    runs = _solve_all(solve, to_run, jobs)
    if ref_size is not None:
        ref = runs[ref_size]

    errors = np.empty((len(step_counts), len(wins)))
    for i, N in enumerate(step_counts):
        target = runs[2 * N] if ref is None else ref
        for j, k in enumerate(wins):
            errors[i, j] = measure(runs[N], target, k)
    return tabulate(f"temporal-{metric}", "N", list(step_counts), wins, errors, meta)


def spatial_study(
    spec: ProblemSpec,
    rho: float,
    widths: Sequence[float],
    windows: Optional[Sequence[int]] = None,
    reference: ReferenceLike = None,
    ftilde_mode: str = "auto",
    caputo_form: str = "a",
    metadata: Optional[dict[str, str]] = None,
    jobs: int = 1,
) -> ConvergenceReport:
    """Endpoint errors under mesh halving at a fixed step size."""
    N = round(spec.tau / rho)
    if N < 2 or abs(N * rho - spec.tau) > 1e-9 * spec.tau:
        raise ValueError(f"step size {rho!r} does not divide the delay")
    cells = [_cells_from_width(spec.L, h) for h in widths]
    _check_ladder(cells, "cell counts")
    wins = _windows_arg(windows, spec.K)
    grid = TimeGrid(spec.tau, spec.K, N)

    def solve(m: int) -> SolutionHistory:
        return run(spec, uniform_mesh(spec.L, m), grid, ftilde_mode, caputo_form)

    to_run = list(cells)
    meta = {
        "alpha": f"{spec.alpha:g}",
        "rho": f"{rho:g}",
        "ftilde_mode": ftilde_mode,
        "error": "window endpoint",
    }
    ref: ReferenceLike = None
    ref_size: Optional[int] = None
    if reference is None:
        ref_size = 4 * max(cells)
        to_run.append(ref_size)
        meta["reference"] = f"fine run, {ref_size} cells, same steps (default convention)"
    elif isinstance(reference, str):
        if reference != "cascade":
            raise ValueError(f"unknown reference mode {reference!r}")
        to_run.append(2 * max(cells))
        ref = None
        meta["reference"] = "cascade against the doubled cell count"
    elif isinstance(reference, SolutionHistory):
        ref = reference
        meta["reference"] = f"fine run, {reference.mesh.n_interior + 1} cells"
    else:
        ref = reference
        meta["reference"] = "exact solution"
    meta.update(metadata or {})
    runs = _solve_all(solve, to_run, jobs)
    if ref_size is not None:
        ref = runs[ref_size]

    errors = np.empty((len(cells), len(wins)))
    for i, m in enumerate(cells):
        target = runs[2 * m] if ref is None else ref
        for j, k in enumerate(wins):
            errors[i, j] = endpoint_error(runs[m], target, k)
    return tabulate("spatial", "m", cells, wins, errors, meta)
