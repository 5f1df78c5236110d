"""Gamma-function helpers and the two-parameter Mittag-Leffler function.

The Mittag-Leffler evaluator is the scalar kernel of the spectral reference
solver: relaxation of an eigenmode is E_mu(-rate * t^mu), so accuracy on the
negative half-axis matters most.  Three expansions cover it:

* the defining power series with compensated (Neumaier) summation, used
  inside ``series_radius`` while cancellation is mild;
* the algebraic large-argument expansion, truncated at its smallest term,
  used beyond the radius while that term is negligibly small;
* a monotone real-integral representation (the Hankel contour collapsed
  onto the branch cut), which has no cancellation at all and backstops the
  band where neither expansion can reach full double precision.

For z < 0 the series peak grows like exp(|z|^(1/mu)), and every digit of
the peak is lost to cancellation; no summation trick recovers digits that
term formation already destroyed.  The evaluator measures the loss per call
and reroutes instead of returning quietly degraded values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MLConvergenceError",
    "MLParams",
    "log_gamma",
    "mittag_leffler",
    "mittag_leffler_array",
    "reciprocal_gamma",
]

# Largest exponent exp() can take without overflowing a float64.
_EXP_MAX = 700.0
# Series cancellation ratio (peak term over result) above which the result
# has lost enough digits that the integral route is used instead.
_CANCEL_LIMIT = 1e3
# Estimated relative truncation error above which the asymptotic branch
# defers to the integral route.
_ASYM_LIMIT = 1e-11

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(16)


class MLConvergenceError(ArithmeticError):
    """The Mittag-Leffler series did not converge within its term budget."""

    def __init__(self, message: str, *, terms_used: int) -> None:
        super().__init__(message)
        self.terms_used = terms_used


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"log_gamma requires a finite x > 0, got {x!r}")
    return math.lgamma(x)


def _sin_pi(x: float) -> float:
    """sin(pi*x) with argument reduction, accurate for large |x|."""
    y = math.fmod(x, 2.0)
    if y > 1.0:
        y -= 2.0
    elif y < -1.0:
        y += 2.0
    return math.sin(math.pi * y)


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x) for any real x; zero at the poles x = 0, -1, -2, ..."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"reciprocal_gamma requires finite x, got {x!r}")
    if x > 0.0:
        return math.exp(-math.lgamma(x))
    if x == math.floor(x):
        return 0.0
    sign, log_abs = _rgamma_sign_logabs(x)
    if log_abs > _EXP_MAX:
        return math.copysign(math.inf, sign)
    return sign * math.exp(log_abs)


def _rgamma_sign_logabs(x: float) -> tuple[float, float]:
    """Sign and log-magnitude of 1/Gamma(x); sign 0 at the poles."""
    if x > 0.0:
        return 1.0, -math.lgamma(x)
    if x == math.floor(x):
        return 0.0, -math.inf
    sp = _sin_pi(x)
    # reflection: 1/Gamma(x) = Gamma(1-x) * sin(pi x) / pi
    return math.copysign(1.0, sp), math.log(abs(sp) / math.pi) + math.lgamma(1.0 - x)


@dataclass(frozen=True)
class MLParams:
    """Evaluation controls for the two-parameter Mittag-Leffler function.

    mu, nu: the function parameters (mu > 0).
    series_radius: |z| below which the power series is attempted first.
    series_tol: relative term size at which the series is declared converged.
    max_series_terms / asymptotic_terms: budgets for the two expansions.
    """

    mu: float
    nu: float = 1.0
    series_radius: float = 10.0
    series_tol: float = 1e-14
    max_series_terms: int = 20000
    asymptotic_terms: int = 50

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and self.mu > 0.0):
            raise ValueError(f"mu must be finite and positive, got {self.mu!r}")
        if not math.isfinite(self.nu):
            raise ValueError(f"nu must be finite, got {self.nu!r}")
        if not (math.isfinite(self.series_radius) and self.series_radius > 0.0):
            raise ValueError(f"series_radius must be positive, got {self.series_radius!r}")
        if not (0.0 < self.series_tol < 1e-8):
            raise ValueError(f"series_tol must lie in (0, 1e-8), got {self.series_tol!r}")
        if self.max_series_terms < 1 or self.asymptotic_terms < 1:
            raise ValueError("term budgets must be at least 1")


def mittag_leffler(params: MLParams, z: float) -> float:
    """E_{mu,nu}(z) for real z."""
    z = float(z)
    if not math.isfinite(z):
        raise ValueError(f"mittag_leffler requires finite z, got {z!r}")
    if z < -params.series_radius:
        if params.mu < 1.0:
            value, est = _asymptotic(params, z)
            if est <= _ASYM_LIMIT:
                return value
            return _integral_negative(params, z)
        value, _ = _asymptotic(params, z)
        return value
    value, cancel_ratio, status, terms = _series(params, z)
    if status == "overflow":
        if z < 0.0 and params.mu < 1.0:
            # the peak term overflowed but the result is moderate: the loss
            # is pure cancellation, which the integral route does not suffer
            return _integral_negative(params, z)
        raise OverflowError(f"Mittag-Leffler series term exceeds float range at z={z!r}")
    if status == "budget":
        if z < 0.0 and params.mu < 1.0:
            return _integral_negative(params, z)
        raise MLConvergenceError(
            f"series did not converge within {terms} terms at z={z!r}",
            terms_used=terms,
        )
    if z < 0.0 and params.mu < 1.0 and cancel_ratio > _CANCEL_LIMIT:
        return _integral_negative(params, z)
    return value


def _series(params: MLParams, z: float) -> tuple[float, float, str, int]:
    """Power-series evaluation; returns (value, cancel_ratio, status, terms)."""
    if z == 0.0:
        return reciprocal_gamma(params.nu), 1.0, "ok", 1
    tol = params.series_tol
    ln_abs_z = math.log(abs(z))
    sign_z = -1.0 if z < 0.0 else 1.0
    total = 0.0
    comp = 0.0
    peak = 0.0
    prev_abs = math.inf
    prev_small = False
    sgn = 1.0
    status = "budget"
    j = 0
    for j in range(params.max_series_terms):
        x = params.mu * j + params.nu
        if x > 0.0:
            log_term = j * ln_abs_z - math.lgamma(x)
            if log_term > _EXP_MAX:
                status = "overflow"
                break
            term = sgn * math.exp(log_term)
        else:
            # only reachable for nu <= 0 and small j; |z|**j stays modest
            term = sgn * abs(z) ** j * reciprocal_gamma(x)
        # Neumaier-compensated accumulation
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        a = abs(term)
        if a > peak:
            peak = a
        estimate = abs(total + comp)
        small = j > 0 and a <= prev_abs and a <= tol * max(estimate, 1e-300)
        if small and prev_small:
            status = "ok"
            break
        prev_small = small
        if a > 0.0:
            prev_abs = a
        sgn *= sign_z
    value = total + comp
    cancel_ratio = peak / max(abs(value), 1e-300)
    return value, cancel_ratio, status, j + 1


def _asymptotic(params: MLParams, z: float) -> tuple[float, float]:
    """Large-argument expansion for z < 0, truncated at its smallest term.

    Returns (value, estimated relative truncation error).  The expansion is
    E(z) ~ -sum_k z^-k / Gamma(nu - mu k).  Term magnitudes are modulated by
    sin(pi x) through the reflection formula and dip spuriously near the
    poles of Gamma, so the truncation point and the error estimate both use
    the sin-free envelope Gamma(1 - x) / pi, which bounds |1/Gamma(x)| from
    above and varies smoothly in k.
    """
    if z >= 0.0:
        raise ValueError("asymptotic branch requires z < 0")
    ln_abs_z = math.log(-z)
    ln_pi = math.log(math.pi)
    terms: list[float] = []
    envs: list[float] = []
    for k in range(1, params.asymptotic_terms + 1):
        x = params.nu - params.mu * k
        if x > 0.0:
            log_env = -math.lgamma(x)
        else:
            log_env = math.lgamma(1.0 - x) - ln_pi
        log_env -= k * ln_abs_z
        if log_env > _EXP_MAX:
            break
        envs.append(math.exp(log_env))
        sign_rg, log_rg = _rgamma_sign_logabs(x)
        if sign_rg == 0.0:
            terms.append(0.0)
            continue
        sign_zk = -1.0 if k % 2 else 1.0  # sign of z^-k for z < 0
        terms.append(-sign_zk * sign_rg * math.exp(log_rg - k * ln_abs_z))
    if not envs:
        return 0.0, math.inf
    cut = int(np.argmin(envs))
    total = 0.0
    comp = 0.0
    for i in range(cut + 1):
        term = terms[i]
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
    value = total + comp
    omitted = envs[cut + 1] if cut + 1 < len(envs) else envs[cut]
    est = omitted / max(abs(value), 1e-300)
    return value, est


def _integral_panels(mu: float, x_lo: float, x_hi: float) -> np.ndarray:
    """Geometric panel edges resolving the cut integrand for x in [x_lo, x_hi]."""
    u_min = min(1e-8, 1e-8 * x_lo)
    u_max = max(45.0, 2.0 * x_hi)
    count = int(math.ceil(math.log(u_max / u_min) / math.log(1.3)))
    edges = u_min * (u_max / u_min) ** (np.arange(count + 1) / count)
    edges[0] = 0.0
    sin_mu = abs(_sin_pi(mu))
    cos_mu = math.cos(math.pi * mu)
    if sin_mu < 0.5 and cos_mu < 0.0:
        # near mu = 1 the denominator dips sharply around u = x |cos(pi mu)|;
        # refine that neighbourhood for every x in the bucket
        lo = 0.5 * x_lo * abs(cos_mu)
        hi = 1.6 * x_hi * abs(cos_mu)
        edges = np.union1d(edges, np.linspace(lo, hi, 49))
    return edges


def _integral_negative_batch(params: MLParams, z: np.ndarray) -> np.ndarray:
    """Cut-integral evaluation of E_{mu,nu} for an array of z < 0.

    Collapsing the inversion contour onto the negative axis gives, for
    0 < mu < 1, nu < 1 + mu, and x = -z > 0, after substituting u = r^mu:

      E(-x) = 1/(pi mu) * int_0^inf exp(-u^(1/mu)) u^((1-nu)/mu)
              * [x sin(pi(mu-nu+1)) + u sin(pi(1-nu))]
              / (u^2 + 2 x u cos(pi mu) + x^2) du.

    Composite Gauss rules on geometric panels resolve the integrand to near
    machine precision.  nu > 1 is reduced first via
    E_{mu,nu}(z) = (E_{mu,nu-mu}(z) - 1/Gamma(nu-mu)) / z, which keeps the
    u^((1-nu)/mu) factor bounded at u = 0.
    """
    mu = params.mu
    if not mu < 1.0:
        raise ValueError("integral branch requires mu < 1")
    x = -np.asarray(z, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("integral branch requires z < 0")
    nu = params.nu
    shifts = 0
    while nu > 1.0 + 1e-12:
        nu -= mu
        shifts += 1
    s1 = _sin_pi(mu - nu + 1.0)
    s2 = _sin_pi(1.0 - nu)
    c = math.cos(math.pi * mu)
    p = (1.0 - nu) / mu
    edges = _integral_panels(mu, float(x.min()), float(x.max()))
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    u = (mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]).ravel()
    w = (half[:, None] * _GAUSS_WEIGHTS[None, :]).ravel()
    base = w * np.exp(-u ** (1.0 / mu)) * u**p
    xcol = x[:, None]
    den = u[None, :] * (u[None, :] + (2.0 * c) * xcol) + xcol**2
    num = s1 * xcol + s2 * u[None, :]
    vals = (base[None, :] * num / den).sum(axis=1) / (math.pi * mu)
    for _ in range(shifts):
        # walk nu back up: E_{mu,nu+mu}(z) = (E_{mu,nu}(z) - 1/Gamma(nu)) / z
        vals = (vals - reciprocal_gamma(nu)) / (-x)
        nu += mu
    return vals


def _integral_negative(params: MLParams, z: float) -> float:
    return float(_integral_negative_batch(params, np.array([z]))[0])


def mittag_leffler_array(params: MLParams, z: np.ndarray) -> np.ndarray:
    """Vectorised E_{mu,nu} over a real array; matches the scalar evaluator."""
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise ValueError("mittag_leffler_array requires finite entries")
    flat = z.ravel()
    out = np.full(flat.shape, np.nan)
    integral_idx: list[int] = []
    inner = flat >= -params.series_radius
    if np.any(inner):
        idx = np.nonzero(inner)[0]
        vals, reroute = _series_vector(params, flat[idx])
        out[idx] = vals
        integral_idx.extend(idx[np.nonzero(reroute)[0]].tolist())
    for i in np.nonzero(~inner)[0]:
        zi = float(flat[i])
        if params.mu < 1.0:
            value, est = _asymptotic(params, zi)
            if est <= _ASYM_LIMIT:
                out[i] = value
            else:
                integral_idx.append(i)
        else:
            out[i], _ = _asymptotic(params, zi)
    if integral_idx:
        pts = np.array(integral_idx)
        xs = -flat[pts]
        # bucket by octave so one panel layout serves each scale range
        octav = np.floor(np.log2(xs)).astype(int)
        for o in np.unique(octav):
            sel = pts[octav == o]
            out[sel] = _integral_negative_batch(params, flat[sel])
    return out.reshape(z.shape)


def _series_vector(params: MLParams, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched power series; returns (values, needs_integral_reroute)."""
    n = z.shape[0]
    total = np.zeros(n)
    comp = np.zeros(n)
    peak = np.zeros(n)
    prev_abs = np.full(n, np.inf)
    prev_small = np.zeros(n, dtype=bool)
    done = np.zeros(n, dtype=bool)
    overflowed = np.zeros(n, dtype=bool)
    tol = params.series_tol
    nonzero = z != 0.0
    ln_abs_z = np.where(nonzero, np.log(np.abs(np.where(nonzero, z, 1.0))), -np.inf)
    sign_z = np.where(z < 0.0, -1.0, 1.0)
    sgn = np.ones(n)
    terms = 0
    for j in range(params.max_series_terms):
        terms = j + 1
        x = params.mu * j + params.nu
        active = ~(done | overflowed)
        if not np.any(active):
            break
        if j == 0:
            # z**0 == 1 for every entry, including z == 0
            term = np.where(active, reciprocal_gamma(params.nu), 0.0)
        elif x > 0.0:
            log_term = j * ln_abs_z - math.lgamma(x)
            over = active & (log_term > _EXP_MAX)
            if np.any(over):
                overflowed |= over
                active &= ~over
            term = np.where(active, sgn * np.exp(np.where(active, log_term, 0.0)), 0.0)
        else:
            rg = reciprocal_gamma(x)
            term = np.where(active, sgn * np.abs(z) ** j * rg, 0.0)
        t = total + term
        big = np.abs(total) >= np.abs(term)
        comp += np.where(big, (total - t) + term, (term - t) + total)
        total = t
        a = np.abs(term)
        np.maximum(peak, a, out=peak)
        estimate = np.abs(total + comp)
        small = active & (a <= prev_abs) & (a <= tol * np.maximum(estimate, 1e-300))
        if j > 0:
            done |= small & prev_small
        prev_small = small
        prev_abs = np.where(a > 0.0, a, prev_abs)
        sgn = sgn * sign_z
        if np.all(done | overflowed):
            break
    pending = ~(done | overflowed)
    value = total + comp
    cancel = peak / np.maximum(np.abs(value), 1e-300)
    bad = overflowed | pending | ((z < 0.0) & (cancel > _CANCEL_LIMIT))
    reroute = bad & (z < 0.0)
    if params.mu >= 1.0:
        reroute[:] = False
    hopeless = bad & ~reroute
    if np.any(hopeless & overflowed):
        raise OverflowError("Mittag-Leffler series term exceeds float range")
    if np.any(hopeless):
        raise MLConvergenceError(
            f"series did not converge within {terms} terms for "
            f"{int(np.count_nonzero(hopeless))} entries",
            terms_used=terms,
        )
    return value, reroute
