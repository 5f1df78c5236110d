"""Builtin problem configurations and the shifted-power algebra behind them.

Both builtin configurations are single-sine-mode problems on (0, 1) with
delay 1: the solution, history, and source all have the form
(time profile) * sin(pi x).  Time profiles are sums of shifted power terms
c (t - s)_+^q, which are closed under the fractional operators the model
couples: that is what lets the source of a manufactured solution, and the
fractional integral of a given source, be written down exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .solver import Forcing, ProblemSpec

__all__ = [
    "BuiltinProblem",
    "PowerSum",
    "ShiftedPower",
    "available_problems",
    "expand_about_zero",
    "get_problem",
    "polynomial_flat_problem",
    "single_mode_problem",
]


@dataclass(frozen=True)
class ShiftedPower:
    """One term c * (t - s)_+^q.

    Evaluation below the shift is 0.  At t = s exactly: q > 0 gives 0,
    q = 0 gives c, and q < 0 (integrable singularity) is clamped to 0
    rather than inf; quadrature callers must handle the mass near the
    singularity themselves (see average, which integrates it exactly).

    The fractional-operator methods act from 0, so they require shift >= 0;
    the one exception is a constant term (q = 0) reaching back before 0,
    which the operators see as a plain constant on [0, inf).  Polynomial
    terms with negative shift must go through expand_about_zero first.
    """

    coeff: float
    shift: float
    power: float

    def __post_init__(self) -> None:
        if self.power <= -1.0:
            raise ValueError(f"power must exceed -1 for integrability, got {self.power!r}")

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        d = t - self.shift
        if self.power == 0.0:
            return np.where(d >= 0.0, self.coeff, 0.0)
        # scalar exponent keeps numpy on its fast power path; integer
        # exponents go through repeated squaring
        q: float | int = self.power
        if float(q).is_integer() and q > 0.0:
            q = int(q)
        live = d > 0.0
        if live.all():
            return self.coeff * d**q
        out = np.zeros(d.shape)
        out[live] = self.coeff * d[live] ** q
        return out

    def _require_algebra_shift(self, op: str) -> float:
        """Shift usable by the from-0 operator rules; see class docstring."""
        if self.shift >= 0.0:
            return self.shift
        if self.power == 0.0:
            return 0.0
        raise ValueError(
            f"{op} needs shift >= 0 (or a constant term); expand_about_zero first"
        )

    def frac_integral(self, order: float) -> "ShiftedPower":
        """Fractional integral from 0 of order > 0: the shifted-power rule
        c (t-s)_+^q -> c Gamma(q+1)/Gamma(q+1+order) (t-s)_+^(q+order)."""
        if order <= 0.0:
            raise ValueError("order must be positive")
        s = self._require_algebra_shift("frac_integral")
        ratio = math.exp(math.lgamma(self.power + 1.0) - math.lgamma(self.power + 1.0 + order))
        return ShiftedPower(self.coeff * ratio, s, self.power + order)

    def caputo(self, order: float) -> Optional["ShiftedPower"]:
        """Caputo derivative from 0 of order in (0, 1); constants drop."""
        if not (0.0 < order < 1.0):
            raise ValueError("order must lie in (0, 1)")
        if self.power == 0.0:
            return None
        if self.power < 0.0:
            raise ValueError("caputo of a negative power is not defined here")
        s = self._require_algebra_shift("caputo")
        ratio = math.exp(math.lgamma(self.power + 1.0) - math.lgamma(self.power + 1.0 - order))
        return ShiftedPower(self.coeff * ratio, s, self.power - order)

    def rl_derivative(self, order: float) -> "ShiftedPower":
        """Riemann-Liouville derivative from 0 of order in (0, 1); unlike
        caputo it acts on constants (their image is a negative power)."""
        if not (0.0 < order < 1.0):
            raise ValueError("order must lie in (0, 1)")
        s = self._require_algebra_shift("rl_derivative")
        ratio = math.exp(math.lgamma(self.power + 1.0) - math.lgamma(self.power + 1.0 - order))
        return ShiftedPower(self.coeff * ratio, s, self.power - order)

    def derivative(self) -> Optional["ShiftedPower"]:
        if self.power == 0.0:
            return None
        return ShiftedPower(self.coeff * self.power, self.shift, self.power - 1.0)

    def average(self, lo: float, hi: float) -> float:
        """Exact mean over [lo, hi]; needed where point samples break down."""
        if hi <= lo:
            raise ValueError("need hi > lo")
        a = max(lo, self.shift)
        if a >= hi:
            return 0.0
        q1 = self.power + 1.0
        return self.coeff * ((hi - self.shift) ** q1 - (a - self.shift) ** q1) / (q1 * (hi - lo))


class PowerSum:
    """Finite sum of shifted power terms, closed under the model's operators."""

    def __init__(self, terms: tuple[ShiftedPower, ...] = ()) -> None:
        self.terms = tuple(terms)

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for term in self.terms:
            out = out + term(t)
        return out

    def map_terms(self, fn) -> "PowerSum":
        mapped = (fn(term) for term in self.terms)
        return PowerSum(tuple(m for m in mapped if m is not None))

    def frac_integral(self, order: float) -> "PowerSum":
        return self.map_terms(lambda s: s.frac_integral(order))

    def caputo(self, order: float) -> "PowerSum":
        return self.map_terms(lambda s: s.caputo(order))

    def rl_derivative(self, order: float) -> "PowerSum":
        return self.map_terms(lambda s: s.rl_derivative(order))

    def derivative(self) -> "PowerSum":
        return self.map_terms(lambda s: s.derivative())

    def shifted(self, delta: float) -> "PowerSum":
        """The profile evaluated at t - delta."""
        return PowerSum(
            tuple(ShiftedPower(s.coeff, s.shift + delta, s.power) for s in self.terms)
        )

    def scaled(self, c: float) -> "PowerSum":
        return PowerSum(tuple(ShiftedPower(c * s.coeff, s.shift, s.power) for s in self.terms))

    def plus(self, other: "PowerSum") -> "PowerSum":
        return PowerSum(self.terms + other.terms)

    def average(self, lo: float, hi: float) -> float:
        return math.fsum(term.average(lo, hi) for term in self.terms)

    @property
    def singular_at_zero(self) -> bool:
        return any(s.power < 0.0 and s.shift <= 0.0 for s in self.terms)


def expand_about_zero(profile: PowerSum) -> PowerSum:
    """Rewrite integer-power terms with negative shift as sums of plain
    powers of t.  The result agrees with the input on t >= 0 only, which is
    all the from-0 operator rules ever look at; evaluation on the history
    interval must keep using the original representation.
    """
    out: list[ShiftedPower] = []
    for term in profile.terms:
        if term.shift >= 0.0:
            out.append(term)
            continue
        q = term.power
        if q != round(q) or q < 0.0:
            raise ValueError(
                f"cannot expand power {q!r} with shift {term.shift!r} about 0"
            )
        qi = int(round(q))
        for k in range(qi + 1):
            c = term.coeff * math.comb(qi, k) * (-term.shift) ** (qi - k)
            out.append(ShiftedPower(c, 0.0, float(k)))
    return PowerSum(tuple(out))


def _sine_profile(mode: int, L: float) -> Callable[[np.ndarray], np.ndarray]:
    def shape(x: np.ndarray) -> np.ndarray:
        return np.sin(mode * math.pi * np.asarray(x, dtype=float) / L)

    return shape


@dataclass(frozen=True)
class BuiltinProblem:
    """A ready-to-run configuration plus the modal data the oracle needs.

    All time profiles here are coefficients of the plain sin(mode*pi*x/L)
    shape (not the normalized eigenfunction).  exact_coeff is None when no
    closed form exists and studies must use a fine-grid reference.
    """

    name: str
    spec: ProblemSpec
    mode: int
    phi_coeff: PowerSum
    f_coeff: PowerSum
    ftilde_coeff: PowerSum
    exact_coeff: Optional[PowerSum]
    dt_phi0_value: float
    phi_mtau_value: float

    @property
    def eigenvalue(self) -> float:
        return self.spec.p * (self.mode * math.pi / self.spec.L) ** 2 - self.spec.a

    def exact_solution(self) -> Callable[[np.ndarray, float], np.ndarray]:
        if self.exact_coeff is None:
            raise ValueError(f"{self.name} has no closed-form solution")
        shape = _sine_profile(self.mode, self.spec.L)
        coeff = self.exact_coeff

        def u(x: np.ndarray, t: float) -> np.ndarray:
            return float(coeff(t)) * shape(x)

        return u


def _make_spec(
    alpha: float,
    K: int,
    p: float,
    a: float,
    b: float,
    mode: int,
    phi_coeff: PowerSum,
    f_coeff: PowerSum,
    ftilde_coeff: PowerSum,
    dt_phi0_value: float,
    phi_mtau_value: float,
    tau: float = 1.0,
    L: float = 1.0,
) -> ProblemSpec:
    shape = _sine_profile(mode, L)

    def phi(x: np.ndarray, t: float) -> np.ndarray:
        return float(phi_coeff(t)) * shape(x)

    def f(x: np.ndarray, t: float) -> np.ndarray:
        return float(f_coeff(t)) * shape(x)

    def ftilde(x: np.ndarray, t: float) -> np.ndarray:
        return float(ftilde_coeff(t)) * shape(x)

    f_avg0 = None
    if f_coeff.singular_at_zero:
        # the t = 0 point sample is infinite; hand the stepper the exact
        # cell mean over the first step instead
        def f_avg0(x: np.ndarray, rho: float) -> np.ndarray:
            return f_coeff.average(0.0, rho) * shape(x)

    return ProblemSpec(
        alpha=alpha,
        tau=tau,
        K=K,
        p=p,
        a=a,
        b=b,
        L=L,
        phi=phi,
        dt_phi0=lambda x: dt_phi0_value * shape(x),
        phi_minus_tau=lambda x: phi_mtau_value * shape(x),
        forcing=Forcing(f=f, ftilde=ftilde, f_avg0=f_avg0),
    )


def _case1(alpha: float, K: int = 3) -> BuiltinProblem:
    """Manufactured configuration with a known solution.

    Solution time profile: w(t) = c0 + t_+^alpha + sum_{j>=1} (t-j)_+^(alpha+j)
    (one extra power of smoothness per delay window), with
    c0 = -Gamma(alpha+1)/pi^2, so the history is the constant c0.
    Coefficients p = 1/5, a = 0, b = 1.  Both source forms are derived from
    the model, so runs can be compared against w directly.
    """
    p, a, b, tau = 0.2, 0.0, 1.0, 1.0
    lam = p * math.pi**2 - a
    c0 = -math.gamma(alpha + 1.0) / math.pi**2
    # the constant term reaches back past -tau so the same profile also
    # serves as the history and as the delayed evaluation below
    w_terms = [ShiftedPower(c0, -2.0 * tau, 0.0), ShiftedPower(1.0, 0.0, alpha)]
    w_terms += [ShiftedPower(1.0, float(j) * tau, alpha + j) for j in range(1, K)]
    w = PowerSum(tuple(w_terms))
    w_delayed = w.shifted(tau)

    # transformed-form data: caputo(w) + lam*w - b*I^(1-alpha)[w(.-tau)]
    ftilde_coeff = (
        w.caputo(alpha)
        .plus(w.scaled(lam))
        .plus(w_delayed.frac_integral(1.0 - alpha).scaled(-b))
    )
    # original-form data: w' + lam*RL^(1-alpha)[w] - b*w(.-tau)
    f_coeff = (
        w.derivative()
        .plus(w.rl_derivative(1.0 - alpha).scaled(lam))
        .plus(w_delayed.scaled(-b))
    )
    spec = _make_spec(
        alpha=alpha,
        K=K,
        p=p,
        a=a,
        b=b,
        mode=1,
        phi_coeff=w,
        f_coeff=f_coeff,
        ftilde_coeff=ftilde_coeff,
        dt_phi0_value=0.0,
        phi_mtau_value=c0,
        tau=tau,
    )
    return BuiltinProblem(
        name="example1_case1",
        spec=spec,
        mode=1,
        phi_coeff=w,
        f_coeff=f_coeff,
        ftilde_coeff=ftilde_coeff,
        exact_coeff=w,
        dt_phi0_value=0.0,
        phi_mtau_value=c0,
    )


def _case2(alpha: float, K: int = 3) -> BuiltinProblem:
    """Configuration with prescribed source and ramped history; no closed
    form.  Source profile t + sum_{j>=1} (t-j)_+^2, history 1 + 0.1 t,
    coefficients p = 1/100, a = -1, b = 1.
    """
    p, a, b, tau = 0.01, -1.0, 1.0, 1.0
    f_terms = [ShiftedPower(1.0, 0.0, 1.0)]
    f_terms += [ShiftedPower(1.0, float(j) * tau, 2.0) for j in range(1, K)]
    f_coeff = PowerSum(tuple(f_terms))
    ftilde_coeff = f_coeff.frac_integral(1.0 - alpha)
    # 1 + 0.1 t rebased about -2 tau so both terms stay one-sided on the
    # history interval: (1 - 0.2 tau) + 0.1 (t + 2 tau)
    phi_coeff = PowerSum(
        (
            ShiftedPower(1.0 - 0.2 * tau, -2.0 * tau, 0.0),
            ShiftedPower(0.1, -2.0 * tau, 1.0),
        )
    )
    spec = _make_spec(
        alpha=alpha,
        K=K,
        p=p,
        a=a,
        b=b,
        mode=1,
        phi_coeff=phi_coeff,
        f_coeff=f_coeff,
        ftilde_coeff=ftilde_coeff,
        dt_phi0_value=0.1,
        phi_mtau_value=1.0 - 0.1 * tau,
        tau=tau,
    )
    return BuiltinProblem(
        name="example1_case2",
        spec=spec,
        mode=1,
        phi_coeff=phi_coeff,
        f_coeff=f_coeff,
        ftilde_coeff=ftilde_coeff,
        exact_coeff=None,
        dt_phi0_value=0.1,
        phi_mtau_value=1.0 - 0.1 * tau,
    )


def polynomial_flat_problem(alpha: float, K: int = 2) -> BuiltinProblem:
    """Manufactured configuration whose solution profile is the plain
    polynomial w(t) = 1 + (t + 2) + (t + 2)^2, smooth across the history
    junction and every seam: derivative probes of it should see flat
    slopes, unlike the weakly singular builtin above.
    """
    p, a, b, tau = 0.2, 0.0, 1.0, 1.0
    lam = p * math.pi**2 - a
    w_eval = PowerSum(
        (
            ShiftedPower(1.0, -2.0 * tau, 0.0),
            ShiftedPower(1.0, -2.0 * tau, 1.0),
            ShiftedPower(1.0, -2.0 * tau, 2.0),
        )
    )
    # operator rules act from 0, so run them on representations expanded
    # about 0 (valid for t >= 0, the only place sources are sampled)
    w0 = expand_about_zero(w_eval)
    wd0 = expand_about_zero(w_eval.shifted(tau))
    ftilde_coeff = (
        w0.caputo(alpha)
        .plus(w0.scaled(lam))
        .plus(wd0.frac_integral(1.0 - alpha).scaled(-b))
    )
    f_coeff = (
        w0.derivative()
        .plus(w0.rl_derivative(1.0 - alpha).scaled(lam))
        .plus(wd0.scaled(-b))
    )
    dt0 = float(w_eval.derivative()(0.0))
    spec = _make_spec(
        alpha=alpha,
        K=K,
        p=p,
        a=a,
        b=b,
        mode=1,
        phi_coeff=w_eval,
        f_coeff=f_coeff,
        ftilde_coeff=ftilde_coeff,
        dt_phi0_value=dt0,
        phi_mtau_value=float(w_eval(-tau)),
        tau=tau,
    )
    return BuiltinProblem(
        name="polynomial_flat",
        spec=spec,
        mode=1,
        phi_coeff=w_eval,
        f_coeff=f_coeff,
        ftilde_coeff=ftilde_coeff,
        exact_coeff=w_eval,
        dt_phi0_value=dt0,
        phi_mtau_value=float(w_eval(-tau)),
    )


def _terms_from(raw: Sequence[Sequence[float]], label: str) -> PowerSum:
    terms = []
    for i, item in enumerate(raw):
        values = tuple(float(v) for v in item)
        if len(values) != 3:
            raise ValueError(
                f"{label} term {i} must be [coeff, shift, power], got {len(values)} entries"
            )
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"{label} term {i} has a non-finite entry")
        try:
            terms.append(ShiftedPower(*values))
        except ValueError as exc:
            raise ValueError(f"{label} term {i}: {exc}") from None
    return PowerSum(tuple(terms))


def single_mode_problem(
    alpha: float,
    tau: float = 1.0,
    K: int = 3,
    p: float = 1.0,
    a: float = 0.0,
    b: float = 1.0,
    L: float = 1.0,
    mode: int = 1,
    history: Sequence[Sequence[float]] = (),
    source: Sequence[Sequence[float]] = (),
) -> BuiltinProblem:
    """Configuration with user-prescribed history and source on one sine mode.

    history and source are lists of [coeff, shift, power] triples naming
    shifted power terms c (t - s)_+^q; each gives the time profile that
    multiplies sin(mode*pi*x/L).  The transformed source is derived from
    the prescribed one exactly, so both stepping routes are available.
    Source terms must start at or after 0 (constants may reach back
    earlier); there is no closed-form solution, so studies need a
    fine-grid reference or the series oracle.
    """
    if not isinstance(mode, int) or isinstance(mode, bool) or mode < 1:
        raise ValueError(f"mode must be a positive integer, got {mode!r}")
    phi_coeff = _terms_from(history, "history")
    f_coeff = _terms_from(source, "source")
    for i, term in enumerate(f_coeff.terms):
        if term.shift < 0.0 and term.power != 0.0:
            raise ValueError(
                f"source term {i} starts before 0; only constant terms may reach back"
            )
    ftilde_coeff = f_coeff.frac_integral(1.0 - alpha)
    # left-sided values at the history end; one-sided terms activating
    # exactly at 0 contribute nothing from below
    dt_phi0 = float(phi_coeff.derivative()(-1e-300))
    spec = _make_spec(
        alpha=alpha,
        K=K,
        p=p,
        a=a,
        b=b,
        mode=mode,
        phi_coeff=phi_coeff,
        f_coeff=f_coeff,
        ftilde_coeff=ftilde_coeff,
        dt_phi0_value=dt_phi0,
        phi_mtau_value=float(phi_coeff(-tau)),
        tau=tau,
        L=L,
    )
    return BuiltinProblem(
        name="single_mode",
        spec=spec,
        mode=mode,
        phi_coeff=phi_coeff,
        f_coeff=f_coeff,
        ftilde_coeff=ftilde_coeff,
        exact_coeff=None,
        dt_phi0_value=dt_phi0,
        phi_mtau_value=float(phi_coeff(-tau)),
    )


_BUILDERS = {
    "example1_case1": _case1,
    "example1_case2": _case2,
}


def available_problems() -> tuple[str, ...]:
    return tuple(sorted(_BUILDERS))


def get_problem(name: str, alpha: float, K: int = 3) -> BuiltinProblem:
    """Instantiate a builtin configuration at the requested order."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(
            f"unknown problem {name!r}; available: {', '.join(available_problems())}"
        ) from None
    return builder(alpha, K)
