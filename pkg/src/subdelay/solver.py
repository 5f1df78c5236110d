"""Time stepping for a subdiffusion equation with a constant time delay.

The continuous model on (0, L) is

    du/dt = d^(1-a)/dt^(1-a) [p u_xx + a u] + b u(x, t - tau) + f(x, t)

with homogeneous Dirichlet walls and prescribed history u = phi on
[-tau, 0].  Applying a fractional integral of order 1-alpha converts it to a
form with a Caputo derivative of order alpha on the left, a delayed
fractional integral of the unknown, explicit correction terms built from
phi(-tau) and the history's initial slope, and data ftilde = I^(1-alpha) f.
This module discretizes that form: convolution-quadrature weights in time
(one delay window = N steps), P1 elements in space, one tridiagonal solve
per step.

The per-step system is

    (A_0 M + p S - a M) U^n = M [ caputo history part
                                  + b * (delayed integral of past values)
                                  + b * H^n + F^n ]

where H^n collects the delayed-integral contribution of the prescribed
history ramp and F^n the data term with its own history corrections.  Both
reduce to time-dependent scalar coefficients multiplying two fixed spatial
profiles: phi(., -tau) and the initial history slope d/dt phi(., 0).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .fem import (
    FEFunction,
    Mesh1D,
    assemble_mass,
    assemble_stiffness,
    l2_norm,
)
from .quadrature import GLKernel, build_kernel, gl_weights
from .special import MLConvergenceError, MLParams, mittag_leffler

__all__ = [
    "Forcing",
    "ProblemSpec",
    "SolutionHistory",
    "StabilityReport",
    "StepMatrices",
    "TimeGrid",
    "build_step_matrices",
    "delayed_integral_J",
    "forcing_term_F",
    "history_term_H",
    "init_history",
    "run",
    "stability_bound_check",
    "step",
]

SpaceTimeFn = Callable[[np.ndarray, float], np.ndarray]
SpaceFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Forcing:
    """Source data.  Provide the raw source f, its fractional integral
    ftilde = I^(1-alpha) f, or both.

    f and ftilde take (x_array, t) and return an array.  f_avg0 optionally
    supplies the exact cell average of f over [0, rho]; quadrature mode uses
    it in place of the t = 0 sample so that sources with an integrable
    singularity at t = 0 keep their mass (the plain sample would be infinite
    or badly wrong there).
    """

    f: Optional[SpaceTimeFn] = None
    ftilde: Optional[SpaceTimeFn] = None
    f_avg0: Optional[Callable[[np.ndarray, float], np.ndarray]] = None

    def __post_init__(self) -> None:
        if self.f is None and self.ftilde is None:
            raise ValueError("forcing needs f, ftilde, or both")


def zero_forcing() -> Forcing:
    return Forcing(f=lambda x, t: np.zeros_like(x))


@dataclass(frozen=True)
class ProblemSpec:
    """Model data and coefficients.

    alpha: fractional order in (0, 1).  tau: delay.  K: number of delay
    windows to march (final time K*tau).  p, a, b: diffusion, reaction, and
    delay-coupling coefficients.  phi(x, t): history on [-tau, 0];
    dt_phi0(x) its time slope at t = 0; phi_minus_tau(x) its value at
    t = -tau (both appear as standalone spatial profiles in H^n and F^n).
    """

    alpha: float
    tau: float
    K: int
    p: float
    a: float
    b: float
    L: float
    phi: SpaceTimeFn
    dt_phi0: SpaceFn
    phi_minus_tau: SpaceFn
    forcing: Forcing

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise ValueError(f"tau must be positive, got {self.tau!r}")
        if not (isinstance(self.K, int) and self.K >= 1):
            raise ValueError(f"K must be an integer >= 1, got {self.K!r}")
        if not (math.isfinite(self.p) and self.p > 0.0):
            raise ValueError(f"need p > 0 for a coercive per-step system, got {self.p!r}")
        if not (math.isfinite(self.a) and self.a <= 0.0):
            raise ValueError(f"coefficient constraint a ≤ 0 violated: got {self.a!r}")
        if not (math.isfinite(self.b) and self.b != 0.0):
            raise ValueError(f"b must be nonzero, got {self.b!r}")
        if not (math.isfinite(self.L) and self.L > 0.0):
            raise ValueError(f"L must be positive, got {self.L!r}")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform steps with the delay an exact multiple: rho = tau/N.

    Times are computed as (n/N)*tau so that t_N == tau holds exactly in
    floating point, which the index shift n -> n-N of the delayed terms
    relies on.
    """

    tau: float
    K: int
    N: int

    def __post_init__(self) -> None:
        if not (isinstance(self.N, int) and self.N >= 2):
            raise ValueError(f"N must be an integer >= 2, got {self.N!r}")
        if not (isinstance(self.K, int) and self.K >= 1):
            raise ValueError(f"K must be an integer >= 1, got {self.K!r}")
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise ValueError(f"tau must be positive, got {self.tau!r}")

    @property
    def rho(self) -> float:
        return self.tau / self.N

    @property
    def total_steps(self) -> int:
        return self.K * self.N

    def time(self, n) -> float | np.ndarray:
        # exact at n = N by construction
        return (np.asarray(n, dtype=float) / self.N) * self.tau if np.ndim(n) else (n / self.N) * self.tau


class SolutionHistory:
    """Nodal vectors u_h^j for j = -N ... K*N, stored as rows j + N."""

    def __init__(self, mesh: Mesh1D, grid: TimeGrid) -> None:
        self.mesh = mesh
        self.grid = grid
        self.data = np.zeros((grid.total_steps + grid.N + 1, mesh.n_interior))
        self.populated_through = -grid.N - 1

    def row(self, j: int) -> np.ndarray:
        if j < -self.grid.N or j > self.grid.total_steps:
            raise IndexError(f"time index {j} outside [-N, K*N]")
        if j > self.populated_through:
            raise ValueError(f"history at index {j} is not populated yet")
        return self.data[j + self.grid.N]

    def set_row(self, j: int, values: np.ndarray) -> None:
        if j != self.populated_through + 1:
            raise ValueError(
                f"rows must be populated in order; next is {self.populated_through + 1}, got {j}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError(f"non-finite solution values at index {j}")
        self.data[j + self.grid.N] = values
        self.populated_through = j

    def norms(self) -> np.ndarray:
        """Mass-matrix norm of every populated row."""
        M = assemble_mass(self.mesh)
        rows = self.data[: self.populated_through + self.grid.N + 1]
        q = np.einsum("ij,ij->i", rows, (M.diag * rows))
        q += 2.0 * np.einsum("ij,ij->i", rows[:, :-1], M.upper * rows[:, 1:])
        return np.sqrt(np.maximum(q, 0.0))


def init_history(spec: ProblemSpec, mesh: Mesh1D, grid: TimeGrid) -> SolutionHistory:
    """Fill rows -N ... 0 with the interpolated history phi(., t_j)."""
    if abs(grid.tau - spec.tau) > 1e-14 * spec.tau:
        raise ValueError("grid and problem disagree on tau")
    if grid.K != spec.K:
        raise ValueError("grid and problem disagree on K")
    hist = SolutionHistory(mesh, grid)
    x = mesh.interior_coords
    ends = np.array([0.0, mesh.L])
    worst_boundary = 0.0
    scale = 1.0
    for j in range(-grid.N, 1):
        t_j = float(grid.time(j))
        vals = np.asarray(spec.phi(x, t_j), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"history is not finite at t = {t_j}")
        hist.set_row(j, vals)
        if j in (-grid.N, -grid.N // 2, 0):
            worst_boundary = max(worst_boundary, float(np.abs(spec.phi(ends, t_j)).max()))
            scale = max(scale, float(np.abs(vals).max()) if vals.size else 1.0)
    if worst_boundary > 1e-12 * scale:
        warnings.warn(
            "history does not vanish at the walls; its boundary part is dropped",
            stacklevel=2,
        )
    return hist


def _weights_alpha_minus_1(kernel: GLKernel) -> np.ndarray:
    # pure weights of order alpha-1 (the unscaled form of A)
    return gl_weights(kernel.alpha - 1.0, kernel.n_max)


def _h_coefficients(spec: ProblemSpec, grid: TimeGrid, kernel: GLKernel) -> tuple[np.ndarray, np.ndarray]:
    """Scalar factors (c1, c2) of H^n for n = 0 ... K*N.

    H^n = c1(n) * dt_phi0 + c2(n) * phi_minus_tau with
    c1(n) = rho^(1-alpha) sum_{k=N}^{n} g_{n-k}^(alpha-1) (t_k - tau)
    c2(n) = -rho^(1-alpha) sum_{k=0}^{n} g_{n-k}^(alpha-1).
    Both reduce to cumulative sums of the order-(alpha-1) weights.
    """
    rho = grid.rho
    g = _weights_alpha_minus_1(kernel)[: grid.total_steps + 1]
    s0 = np.cumsum(g)
    s1 = np.cumsum(np.arange(g.shape[0]) * g)
    c2 = -(rho ** (1.0 - spec.alpha)) * s0
    c1 = np.zeros_like(c2)
    n = np.arange(grid.total_steps + 1)
    m = n - grid.N
    valid = m >= 0
    mv = m[valid]
    c1[valid] = rho ** (2.0 - spec.alpha) * (mv * s0[mv] - s1[mv])
    return c1, c2


def _f_coefficients(spec: ProblemSpec, grid: TimeGrid) -> tuple[np.ndarray, np.ndarray]:
    """Scalar factors (on dt_phi0 and phi_minus_tau) of the data term F^n.

    For t_n <= tau:  F^n = ftilde^n + b t_n^(1-alpha)/Gamma(2-alpha) * phi(-tau).
    For t_n > tau:   F^n = ftilde^n - b (t_n-tau)^(2-alpha)/Gamma(3-alpha) * dt_phi0
                                  + b t_n^(1-alpha)/Gamma(2-alpha) * phi(-tau).
    The two branches agree at t_N = tau, where the extra factor vanishes.
    """
    n = np.arange(grid.total_steps + 1)
    t = grid.time(n)
    cf_mtau = spec.b * t ** (1.0 - spec.alpha) / math.gamma(2.0 - spec.alpha)
    cf_dt0 = np.zeros_like(cf_mtau)
    late = n > grid.N
    dt = t[late] - spec.tau
    cf_dt0[late] = -spec.b * dt ** (2.0 - spec.alpha) / math.gamma(3.0 - spec.alpha)
    return cf_dt0, cf_mtau


class StepMatrices:
    """Per-run workspace: assembled matrices, the factored left-hand side,
    and precomputed scalar coefficient tables for H^n and F^n."""

    def __init__(
        self,
        spec: ProblemSpec,
        mesh: Mesh1D,
        grid: TimeGrid,
        kernel: GLKernel,
        ftilde_mode: str = "auto",
    ) -> None:
        if kernel.n_max < grid.total_steps:
            raise ValueError("kernel table shorter than the number of time steps")
        if abs(kernel.rho - grid.rho) > 1e-14 * grid.rho or kernel.alpha != spec.alpha:
            raise ValueError("kernel was built for a different (alpha, rho)")
        if ftilde_mode not in ("auto", "quadrature", "analytic"):
            raise ValueError(f"unknown ftilde_mode {ftilde_mode!r}")
        if ftilde_mode == "auto":
            ftilde_mode = "quadrature" if spec.forcing.f is not None else "analytic"
        if ftilde_mode == "quadrature" and spec.forcing.f is None:
            raise ValueError("quadrature ftilde mode needs forcing.f")
        if ftilde_mode == "analytic" and spec.forcing.ftilde is None:
            raise ValueError("analytic ftilde mode needs forcing.ftilde")

        self.spec = spec
        self.mesh = mesh
        self.grid = grid
        self.kernel = kernel
        self.ftilde_mode = ftilde_mode
        self.mass = assemble_mass(mesh)
        self.stiffness = assemble_stiffness(mesh)
        # (A_0 - a) M + p S; symmetric positive definite for p > 0, a <= 0
        self.lhs = self.mass.scaled_add(float(kernel.A[0]) - spec.a, self.stiffness, spec.p)
        ab = np.zeros((2, self.lhs.n))
        ab[0, 1:] = self.lhs.upper
        ab[1, :] = self.lhs.diag
        self.cho = scipy.linalg.cholesky_banded(ab)
        # memory-weight differences A_i - A_{i+1} > 0
        self.a_diffs = kernel.A[: grid.total_steps] - kernel.A[1 : grid.total_steps + 1]
        c1, c2 = _h_coefficients(spec, grid, kernel)
        cf_dt0, cf_mtau = _f_coefficients(spec, grid)
        # data enters as b*H^n + F^n; fold into two per-step scalars
        self.coeff_dt0 = spec.b * c1 + cf_dt0
        self.coeff_mtau = spec.b * c2 + cf_mtau
        self.h_c1 = c1
        self.h_c2 = c2
        self.f_dt0 = cf_dt0
        self.f_mtau = cf_mtau
        x = mesh.interior_coords
        self.v_dt0 = np.asarray(spec.dt_phi0(x), dtype=float)
        self.v_mtau = np.asarray(spec.phi_minus_tau(x), dtype=float)
        if ftilde_mode == "quadrature":
            samples = np.empty((grid.total_steps + 1, mesh.n_interior))
            forcing = spec.forcing
            if forcing.f_avg0 is not None:
                samples[0] = np.asarray(forcing.f_avg0(x, grid.rho), dtype=float)
            else:
                samples[0] = np.asarray(forcing.f(x, 0.0), dtype=float)
            for n in range(1, grid.total_steps + 1):
                samples[n] = np.asarray(forcing.f(x, float(grid.time(n))), dtype=float)
            if not np.all(np.isfinite(samples)):
                raise ValueError(
                    "source samples are not finite; supply f_avg0 or an analytic ftilde "
                    "for sources singular at t = 0"
                )
            self.f_samples = samples
        else:
            self.f_samples = None

    def ftilde_vector(self, n: int) -> np.ndarray:
        """Nodal values of ftilde at t_n (analytic or quadrature route)."""
        if self.ftilde_mode == "analytic":
            return np.asarray(
                self.spec.forcing.ftilde(self.mesh.interior_coords, float(self.grid.time(n))),
                dtype=float,
            )
        w = self.grid.rho * self.kernel.A[: n + 1][::-1]
        return w @ self.f_samples[: n + 1]

    def data_vector(self, n: int) -> np.ndarray:
        """Nodal values of b*H^n + F^n."""
        return (
            self.ftilde_vector(n)
            + self.coeff_dt0[n] * self.v_dt0
            + self.coeff_mtau[n] * self.v_mtau
        )


def build_step_matrices(
    spec: ProblemSpec,
    mesh: Mesh1D,
    grid: TimeGrid,
    kernel: GLKernel,
    ftilde_mode: str = "auto",
) -> StepMatrices:
    return StepMatrices(spec, mesh, grid, kernel, ftilde_mode)


def history_term_H(
    spec: ProblemSpec, mesh: Mesh1D, grid: TimeGrid, kernel: GLKernel, n: int
) -> FEFunction:
    """Interpolant of c1(n)*dt_phi0 + c2(n)*phi_minus_tau (see _h_coefficients)."""
    if not (1 <= n <= grid.total_steps):
        raise ValueError(f"n must lie in [1, {grid.total_steps}], got {n!r}")
    c1, c2 = _h_coefficients(spec, grid, kernel)
    x = mesh.interior_coords
    vals = c1[n] * np.asarray(spec.dt_phi0(x), dtype=float) + c2[n] * np.asarray(
        spec.phi_minus_tau(x), dtype=float
    )
    return FEFunction(mesh=mesh, values=vals)


def forcing_term_F(
    spec: ProblemSpec,
    mesh: Mesh1D,
    grid: TimeGrid,
    kernel: GLKernel,
    n: int,
    ftilde_mode: str = "auto",
) -> FEFunction:
    """Interpolant of the branch-correct data term F^n."""
    if not (1 <= n <= grid.total_steps):
        raise ValueError(f"n must lie in [1, {grid.total_steps}], got {n!r}")
    mats = StepMatrices(spec, mesh, grid, kernel, ftilde_mode)
    vals = (
        mats.ftilde_vector(n)
        + mats.f_dt0[n] * mats.v_dt0
        + mats.f_mtau[n] * mats.v_mtau
    )
    return FEFunction(mesh=mesh, values=vals)


def delayed_integral_J(history: SolutionHistory, kernel: GLKernel, n: int) -> np.ndarray:
    """rho * sum_{k=0}^{n} A_k u_h^{n-N-k}: fractional integral of the
    delayed trajectory, reaching N steps back into the prescribed history."""
    grid = history.grid
    if not (1 <= n <= grid.total_steps):
        raise ValueError(f"n must lie in [1, {grid.total_steps}], got {n!r}")
    if history.populated_through < n - grid.N:
        raise ValueError(f"history not populated up to index {n - grid.N}")
    # rows r = 0 ... n hold u_h^{r-N}; weight on row r is A_{n-r}
    w = grid.rho * kernel.A[: n + 1][::-1]
    return w @ history.data[: n + 1]


def step(
    history: SolutionHistory,
    spec: ProblemSpec,
    mesh: Mesh1D,
    grid: TimeGrid,
    kernel: GLKernel,
    matrices: StepMatrices,
    n: int,
    caputo_form: str = "a",
) -> np.ndarray:
    """Advance one step: assemble the right-hand side from all past values,
    solve the factored system, store and return U^n."""
    if not (1 <= n <= grid.total_steps):
        raise ValueError(f"n must lie in [1, {grid.total_steps}], got {n!r}")
    if history.populated_through != n - 1:
        raise ValueError(f"history populated through {history.populated_through}, cannot step to {n}")
    N = grid.N
    rows = n + N
    w = np.zeros(rows)
    # delayed integral: weight b*rho*A_{n-r} on row r = 0 ... n
    w[: n + 1] = spec.b * grid.rho * kernel.A[: n + 1][::-1]
    if caputo_form == "a":
        # memory part of the discrete Caputo derivative, expanded in
        # difference weights: sum_{k=1}^{n-1} (A_{k-1}-A_k) u^{n-k} + A_{n-1} u^0
        w[N] += kernel.A[n - 1]
        if n >= 2:
            w[N + 1 : N + n] += matrices.a_diffs[n - 2 :: -1]
    elif caputo_form == "g":
        # same quantity via the order-alpha weights:
        # rho^(-alpha) [ (sum_{k=0}^{n-1} g_k) u^0 - sum_{k=1}^{n-1} g_k u^{n-k} ]
        scale = grid.rho ** (-spec.alpha)
        g = kernel.g_alpha
        if n >= 2:
            w[N + 1 : N + n] -= scale * g[n - 1 : 0 : -1]
        w[N] += scale * float(np.sum(g[:n]))
    else:
        raise ValueError(f"unknown caputo_form {caputo_form!r}")
    core = w @ history.data[:rows]
    rhs = matrices.mass.matvec(core + matrices.data_vector(n))
    u = scipy.linalg.cho_solve_banded((matrices.cho, False), rhs)
    history.set_row(n, u)
    return u


def run(
    spec: ProblemSpec,
    mesh: Mesh1D,
    grid: TimeGrid,
    ftilde_mode: str = "auto",
    caputo_form: str = "a",
    data_override: Optional[Callable[[int], np.ndarray]] = None,
    kernel: Optional[GLKernel] = None,
) -> SolutionHistory:
    """March the scheme over all K*N steps.

    data_override(n), when given, replaces the per-step data vector
    b*H^n + F^n; it exists for manufactured-forcing studies where the data
    is constructed so a prescribed discrete trajectory satisfies the scheme
    identically.
    """
    if kernel is None:
        kernel = build_kernel(spec.alpha, grid.rho, grid.total_steps)
    history = init_history(spec, mesh, grid)
    matrices = StepMatrices(spec, mesh, grid, kernel, ftilde_mode)
    if data_override is not None:
        matrices.data_vector = lambda n: np.asarray(data_override(n), dtype=float)
    for n in range(1, grid.total_steps + 1):
        try:
            step(history, spec, mesh, grid, kernel, matrices, n, caputo_form)
        except Exception as exc:
            raise RuntimeError(f"time step n = {n} failed: {exc}") from exc
    return history


@dataclass(frozen=True)
class StabilityReport:
    """Per-step comparison of the solution norm against its a-priori bound."""

    ns: np.ndarray
    times: np.ndarray
    norms: np.ndarray
    bounds: np.ndarray
    satisfied: bool

    def to_csv(self) -> str:
        lines = ["n,t,l2_norm,bound"]
        for n, t, v, bd in zip(self.ns, self.times, self.norms, self.bounds):
            lines.append(f"{int(n)},{t:.17g},{v:.17g},{bd:.17g}")
        return "\n".join(lines) + "\n"


def _ml_or_inf(alpha: float, z: float) -> float:
    if z > 0.0 and z ** (1.0 / alpha) > 690.0:
        return math.inf
    try:
        return mittag_leffler(MLParams(mu=alpha), z)
    except MLConvergenceError:
        return math.inf


def stability_bound_check(
    history: SolutionHistory,
    spec: ProblemSpec,
    kernel: Optional[GLKernel] = None,
    ftilde_mode: str = "auto",
) -> StabilityReport:
    """Evaluate the a-priori norm bound at every step of a completed run.

    The bound is 2 E_alpha(2^(alpha+1) Lam t_n^alpha) (||u^0|| +
    (2^alpha t_n^alpha / Gamma(1+alpha)) max_k y^k), with Lam = 0 and
    y^k built from F alone while t_n <= tau, and with Lam and y^k picking up
    the delayed-feedback terms beyond the first window.
    """
    grid = history.grid
    if history.populated_through < grid.total_steps:
        raise ValueError("stability check needs a fully populated run")
    if kernel is None:
        kernel = build_kernel(spec.alpha, grid.rho, grid.total_steps)
    mats = StepMatrices(spec, history.mesh, grid, kernel, ftilde_mode)
    alpha, b, rho, tau = spec.alpha, spec.b, grid.rho, spec.tau
    N, total = grid.N, grid.total_steps
    norms = history.norms()  # rows -N ... K*N
    c = float(norms[: N + 1].max())
    u0 = float(norms[N])
    norm_mtau = l2_norm(FEFunction(history.mesh, mats.v_mtau))

    ks = np.arange(1, total + 1)
    t_k = grid.time(ks)
    # ||F^k|| and ||H^k|| for every k
    f_norms = np.empty(total)
    h_norms = np.empty(total)
    M = mats.mass
    for i, k in enumerate(ks):
        fv = mats.ftilde_vector(int(k)) + mats.f_dt0[k] * mats.v_dt0 + mats.f_mtau[k] * mats.v_mtau
        hv = mats.h_c1[k] * mats.v_dt0 + mats.h_c2[k] * mats.v_mtau
        f_norms[i] = math.sqrt(max(float(np.dot(fv, M.matvec(fv))), 0.0))
        h_norms[i] = math.sqrt(max(float(np.dot(hv, M.matvec(hv))), 0.0))

    gamma2 = math.gamma(2.0 - alpha)
    y = np.empty(total)
    early = ks <= N
    y[early] = (
        abs(b)
        * (rho ** (1.0 - alpha) + t_k[early] ** (1.0 - alpha) / gamma2)
        * (c + norm_mtau)
        + f_norms[early]
    )
    late = ~early
    if np.any(late):
        # rho * sum_{j=0}^{N} A_{k-j} for each late k
        a_csum = np.concatenate(([0.0], np.cumsum(kernel.A[: total + 1])))
        k_late = ks[late]
        tail = rho * (a_csum[k_late + 1] - a_csum[k_late - N])
        y[late] = c * abs(b) * tail + abs(b) * h_norms[late] + f_norms[late]

    y_running_max = np.maximum.accumulate(y)
    lam_late = abs(b) * (rho ** (1.0 - alpha) + (spec.K * tau) ** (1.0 - alpha) / gamma2)
    growth = 2.0**alpha * t_k**alpha / math.gamma(1.0 + alpha)
    bounds = np.empty(total)
    for i, k in enumerate(ks):
        lam = 0.0 if k <= N else lam_late
        ml = _ml_or_inf(alpha, 2.0 ** (alpha + 1.0) * lam * float(t_k[i]) ** alpha)
        bounds[i] = 2.0 * ml * (u0 + growth[i] * y_running_max[i])
    sol_norms = norms[N + 1 :]
    satisfied = bool(np.all(sol_norms <= bounds * (1.0 + 1e-12)))
    return StabilityReport(ns=ks, times=t_k, norms=sol_norms, bounds=bounds, satisfied=satisfied)
