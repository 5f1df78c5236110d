"""Signed-binomial weight families for fractional-order convolution quadrature.

Everything here lives on a uniform time grid with step ``rho``.  The module
owns three coefficient families and the two discrete operators built from
them:

* ``gl_weights``: the signed binomial weights g_k = (-1)^k C(beta, k) of the
  first-order backward quadrature for a fractional operator of order -beta.
* ``a_coeffs``: the positive, strictly decreasing coefficients
  A_k = rho^(-alpha) Gamma(k+1-alpha) / (Gamma(1-alpha) Gamma(k+1)), the
  step-scaled form of g_k^(alpha-1) in which the discrete Caputo derivative
  becomes sum_k A_{n-k} (u^k - u^{k-1}).
* ``p_coeffs``: the complementary kernel P_j defined by P_0 = 1/A_0 and a
  convolution recurrence; it inverts the A-family in the sense
  sum_j P_{n-j} A_{j-k} = 1 and drives discrete Gronwall bounds.

A ``GLKernel`` bundles the families for one (alpha, rho, n_max) so solvers
can share a single read-only table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GLKernel",
    "KBetaHelper",
    "a_coeffs",
    "build_kernel",
    "caputo_gl",
    "caputo_gl_gform",
    "frac_integral_gl",
    "frac_integral_gl_gform",
    "gl_weights",
    "p_coeffs",
]


def gl_weights(beta: float, n: int) -> np.ndarray:
    """Weights g_k = (-1)^k C(beta, k) for k = 0..n.

    Computed by the stable recurrence g_0 = 1, g_k = (1 - (beta+1)/k) g_{k-1}.
    """
    if not (-1.0 < beta < 1.0):
        raise ValueError(f"beta must lie in (-1, 1), got {beta!r}")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n!r}")
    k = np.arange(1, n + 1, dtype=float)
    out = np.empty(n + 1)
    out[0] = 1.0
    if n:
        np.cumprod(1.0 - (beta + 1.0) / k, out=out[1:])
    return out


def a_coeffs(alpha: float, rho: float, n: int) -> np.ndarray:
    """Coefficients A_k = rho^(-alpha) Gamma(k+1-alpha)/(Gamma(1-alpha) Gamma(k+1)).

    The Gamma ratio is accumulated as a running product of the one-step
    ratios (k - alpha)/k.  That never overflows (each factor is below 1) and
    keeps the relative drift near sqrt(k)*eps, whereas subtracting log-Gamma
    values of size ~k*log(k) loses ~1e-11 of the 1e-16 budget by k ~ 1e4.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    if not (math.isfinite(rho) and rho > 0.0):
        raise ValueError(f"rho must be positive, got {rho!r}")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n!r}")
    return rho ** (-alpha) * gl_weights(alpha - 1.0, n)


def p_coeffs(A: np.ndarray, n: int) -> np.ndarray:
    """Complementary kernel P_j, j = 0..n, for a decreasing positive A family.

    P_0 = 1/A_0 and P_m = (1/A_0) sum_{j<m} P_j (A_{m-j-1} - A_{m-j}).  Each
    convolution is accumulated with exact (fsum) summation; the cost is
    O(n^2), so large tables should be requested only when actually needed.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 1 or A.shape[0] < n + 1:
        raise ValueError(f"need at least {n + 1} A coefficients, got {A.shape}")
    if np.any(A[: n + 1] <= 0.0) or np.any(np.diff(A[: n + 1]) >= 0.0):
        raise ValueError("A must be strictly decreasing and positive")
    D = (A[:n] - A[1 : n + 1]).tolist()
    inv_a0 = 1.0 / float(A[0])
    P = [inv_a0]
    for m in range(1, n + 1):
        P.append(inv_a0 * math.fsum(P[j] * D[m - 1 - j] for j in range(m)))
    return np.array(P)


@dataclass(frozen=True)
class KBetaHelper:
    """Closed-form constant used by the weighted tail bound on P sums.

    value = 1 + (1 - n^(1-beta))/(beta - 1) for beta != 1, and 1 + ln(n)
    at beta = 1 (the limit of the first branch).
    """

    beta: float
    n: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.beta) and self.beta >= 0.0):
            raise ValueError(f"beta must be nonnegative, got {self.beta!r}")
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n!r}")

    @property
    def value(self) -> float:
        if self.beta == 1.0:
            return 1.0 + math.log(self.n)
        return 1.0 + (1.0 - self.n ** (1.0 - self.beta)) / (self.beta - 1.0)


class GLKernel:
    """Immutable coefficient table for one (alpha, rho, n_max).

    Fields: ``g_alpha`` (weights of order alpha), ``g_alpha_minus_1``
    (weights of order alpha-1), ``A`` (step-scaled form of the latter), and
    ``P`` (complementary kernel, computed lazily on first access because of
    its O(n_max^2) cost).  ``g_alpha`` is stored literally as
    rho^alpha * (A_k - A_{k-1}) so that identity is exact in the table.
    """

    __slots__ = ("alpha", "rho", "n_max", "g_alpha", "g_alpha_minus_1", "A", "_P")

    def __init__(self, alpha: float, rho: float, n_max: int) -> None:
        if n_max < 1:
            raise ValueError(f"n_max must be at least 1, got {n_max!r}")
        A = a_coeffs(alpha, rho, n_max)
        scale = rho**alpha
        g_alpha = np.empty(n_max + 1)
        g_alpha[0] = 1.0
        g_alpha[1:] = scale * np.diff(A)
        g_alpha_minus_1 = scale * A
        for arr in (A, g_alpha, g_alpha_minus_1):
            arr.setflags(write=False)
        self.alpha = alpha
        self.rho = rho
        self.n_max = n_max
        self.g_alpha = g_alpha
        self.g_alpha_minus_1 = g_alpha_minus_1
        self.A = A
        self._P = None

    @property
    def P(self) -> np.ndarray:
        if self._P is None:
            P = p_coeffs(self.A, self.n_max)
            P.setflags(write=False)
            self._P = P
        return self._P


def build_kernel(alpha: float, rho: float, n_max: int) -> GLKernel:
    """Construct the shared coefficient table; arrays are read-only."""
    return GLKernel(alpha, rho, n_max)


def _check_window(kernel: GLKernel, samples: np.ndarray, n: int, n_min: int) -> np.ndarray:
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1:
        raise ValueError("samples must be a one-dimensional sequence")
    if n < n_min or n > kernel.n_max:
        raise ValueError(f"n must lie in [{n_min}, {kernel.n_max}], got {n!r}")
    if samples.shape[0] < n + 1:
        raise ValueError(f"need samples u^0..u^{n}, got only {samples.shape[0]}")
    return samples


def caputo_gl(kernel: GLKernel, samples: np.ndarray, n: int) -> float:
    """Discrete Caputo derivative sum_{k=1}^{n} A_{n-k} (u^k - u^{k-1})."""
    samples = _check_window(kernel, samples, n, 1)
    return float(np.dot(kernel.A[:n][::-1], np.diff(samples[: n + 1])))


def caputo_gl_gform(kernel: GLKernel, samples: np.ndarray, n: int) -> float:
    """Cross-check form rho^(-alpha) sum_{k=0}^{n} g_k^(alpha) (u^{n-k} - u^0).

    Algebraically equal to ``caputo_gl``; kept as an independent summation
    order for verifying the rearrangement.
    """
    samples = _check_window(kernel, samples, n, 1)
    shifted = samples[n::-1] - samples[0]
    return float(kernel.rho ** (-kernel.alpha) * np.dot(kernel.g_alpha[: n + 1], shifted))


def frac_integral_gl(kernel: GLKernel, samples: np.ndarray, n: int) -> float:
    """Discrete fractional integral of order 1-alpha: rho sum_k A_k w^{n-k}."""
    samples = _check_window(kernel, samples, n, 0)
    return float(kernel.rho * np.dot(kernel.A[: n + 1], samples[n::-1]))


def frac_integral_gl_gform(kernel: GLKernel, samples: np.ndarray, n: int) -> float:
    """Equivalent form rho^(1-alpha) sum_{k=0}^{n} g_{n-k}^(alpha-1) w^k."""
    samples = _check_window(kernel, samples, n, 0)
    weights = kernel.g_alpha_minus_1[: n + 1][::-1]
    return float(kernel.rho ** (1.0 - kernel.alpha) * np.dot(weights, samples[: n + 1]))
