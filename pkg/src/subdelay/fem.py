"""Piecewise-linear Galerkin building blocks on an interval.

Meshes carry homogeneous Dirichlet conditions implicitly: degrees of freedom
are the interior nodes only, and every assembled matrix is the interior
block.  Matrices are tridiagonal because hat functions on neighbouring nodes
are the only overlapping pairs in one dimension.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

__all__ = [
    "FEFunction",
    "Mesh1D",
    "TridiagonalMatrix",
    "assemble_mass",
    "assemble_stiffness",
    "interpolate",
    "l2_norm",
    "solve_tridiagonal",
    "uniform_mesh",
]

# largest allowed max/min element-length ratio
_QUASI_UNIFORM_LIMIT = 10.0


@dataclass(frozen=True)
class Mesh1D:
    """Partition of (0, L) into intervals with nodes 0 = x_0 < ... < x_m = L."""

    L: float
    node_coords: np.ndarray

    def __post_init__(self) -> None:
        if not (np.isfinite(self.L) and self.L > 0.0):
            raise ValueError(f"L must be positive, got {self.L!r}")
        nodes = np.asarray(self.node_coords, dtype=float)
        if nodes.ndim != 1 or nodes.shape[0] < 3:
            raise ValueError("need at least 3 nodes (one interior degree of freedom)")
        if nodes[0] != 0.0 or nodes[-1] != self.L:
            raise ValueError("node_coords must start at 0 and end at L")
        lengths = np.diff(nodes)
        if np.any(lengths <= 0.0):
            raise ValueError("node_coords must be strictly increasing")
        ratio = float(lengths.max() / lengths.min())
        if ratio > _QUASI_UNIFORM_LIMIT:
            raise ValueError(
                f"mesh is not quasi-uniform: max/min element ratio {ratio:.3g} "
                f"exceeds {_QUASI_UNIFORM_LIMIT}"
            )
        nodes.setflags(write=False)
        object.__setattr__(self, "node_coords", nodes)

    @property
    def element_lengths(self) -> np.ndarray:
        return np.diff(self.node_coords)

    @property
    def h_max(self) -> float:
        return float(self.element_lengths.max())

    @property
    def n_interior(self) -> int:
        return self.node_coords.shape[0] - 2

    @property
    def interior_coords(self) -> np.ndarray:
        return self.node_coords[1:-1]


def uniform_mesh(L: float, n_cells: int) -> Mesh1D:
    """Equispaced mesh with n_cells elements on (0, L)."""
    if n_cells < 2:
        raise ValueError(f"need at least 2 cells, got {n_cells!r}")
    return Mesh1D(L=float(L), node_coords=np.linspace(0.0, float(L), n_cells + 1))


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Interior block of an assembled operator, stored by diagonals."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower, dtype=float)
        diag = np.asarray(self.diag, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        n = diag.shape[0]
        if n < 1:
            raise ValueError("empty matrix")
        if lower.shape != (max(n - 1, 0),) or upper.shape != (max(n - 1, 0),):
            raise ValueError("off-diagonals must have length n-1")
        for arr in (lower, diag, upper):
            arr.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "upper", upper)

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n,):
            raise ValueError(f"vector length {v.shape} does not match matrix size {self.n}")
        out = self.diag * v
        out[:-1] += self.upper * v[1:]
        out[1:] += self.lower * v[:-1]
        return out

    def to_banded(self) -> np.ndarray:
        """(1,1)-banded storage accepted by scipy.linalg.solve_banded."""
        ab = np.zeros((3, self.n))
        ab[0, 1:] = self.upper
        ab[1, :] = self.diag
        ab[2, :-1] = self.lower
        return ab

    def scaled_add(self, c_self: float, other: "TridiagonalMatrix", c_other: float) -> "TridiagonalMatrix":
        if other.n != self.n:
            raise ValueError("size mismatch")
        return TridiagonalMatrix(
            lower=c_self * self.lower + c_other * other.lower,
            diag=c_self * self.diag + c_other * other.diag,
            upper=c_self * self.upper + c_other * other.upper,
        )


@dataclass(frozen=True)
class FEFunction:
    """Continuous piecewise-linear function vanishing at both endpoints."""

    mesh: Mesh1D
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.mesh.n_interior,):
            raise ValueError(
                f"expected {self.mesh.n_interior} interior values, got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("nodal values must be finite")
        object.__setattr__(self, "values", values)


def assemble_mass(mesh: Mesh1D) -> TridiagonalMatrix:
    """Interior P1 mass matrix; uniform-mesh row is (h/6)*[1, 4, 1]."""
    h = mesh.element_lengths
    diag = (h[:-1] + h[1:]) / 3.0
    off = h[1:-1] / 6.0
    return TridiagonalMatrix(lower=off.copy(), diag=diag, upper=off)


def assemble_stiffness(mesh: Mesh1D) -> TridiagonalMatrix:
    """Interior P1 stiffness matrix; uniform-mesh row is (1/h)*[-1, 2, -1]."""
    inv = 1.0 / mesh.element_lengths
    diag = inv[:-1] + inv[1:]
    off = -inv[1:-1]
    return TridiagonalMatrix(lower=off.copy(), diag=diag, upper=off)


def interpolate(g: Callable[[float], float], mesh: Mesh1D) -> FEFunction:
    """Nodal interpolant of g at the interior nodes.

    g is expected to vanish at both endpoints (homogeneous Dirichlet); a
    nonzero boundary value is clipped from the representation, so it only
    triggers a warning.
    """
    samples = np.array([g(float(x)) for x in mesh.interior_coords], dtype=float)
    if not np.all(np.isfinite(samples)):
        bad = mesh.interior_coords[~np.isfinite(samples)][0]
        raise ValueError(f"g is not finite at x = {bad}")
    scale = max(1.0, float(np.abs(samples).max()) if samples.size else 1.0)
    boundary = max(abs(float(g(0.0))), abs(float(g(mesh.L))))
    if boundary > 1e-12 * scale:
        warnings.warn(
            "interpolating a function with nonzero boundary values; "
            "the boundary part is dropped",
            stacklevel=2,
        )
    return FEFunction(mesh=mesh, values=samples)


def l2_norm(v: FEFunction) -> float:
    """Exact L2 norm of the piecewise-linear function, via the mass matrix."""
    M = assemble_mass(v.mesh)
    q = float(np.dot(v.values, M.matvec(v.values)))
    # the quadratic form can round to a tiny negative near zero
    return float(np.sqrt(q)) if q > 0.0 else 0.0


def solve_tridiagonal(A: TridiagonalMatrix, rhs: np.ndarray) -> np.ndarray:
    """Direct banded solve of A x = rhs."""
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (A.n,):
        raise ValueError(f"rhs length {rhs.shape} does not match matrix size {A.n}")
    try:
        return scipy.linalg.solve_banded((1, 1), A.to_banded(), rhs)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"singular tridiagonal system: {exc}") from exc
