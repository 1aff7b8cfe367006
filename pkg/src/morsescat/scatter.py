"""s-wave phase shifts, scattering length and effective range.

All lengths are in units of 1/beta and wavenumbers in units of beta, so
``k`` below always means k/beta and ``a_beta`` means a*beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import zeta as hurwitz_zeta

from .errors import (
    FitInstabilityError,
    NumericalError,
    UnitarityPoleError,
    ZeroScatteringLengthError,
)
from .potential import DimensionlessParams
from .precision import DEFAULT, Precision
from .specfun import EULER_GAMMA, ZETA3, digamma, kummer_m, log_gamma, polygamma2

Condition = Literal["auxiliary", "physical"]
Method = Literal["closed_form", "low_k_fit"]


@dataclass(frozen=True)
class PhaseShiftSample:
    """Phase shift at one wavenumber: principal value in (-pi/2, pi/2] plus
    an integer number of half-turns, ``unwrapped = delta0 + branch * pi``."""

    k_over_beta: float
    delta0: float
    branch: int = 0

    @classmethod
    def from_raw(cls, k: float, raw: float) -> "PhaseShiftSample":
        m = math.floor(raw / math.pi + 0.5)
        principal = raw - m * math.pi
        if principal <= -0.5 * math.pi:
            principal += math.pi
            m -= 1
        return cls(k, principal, m)

    @property
    def unwrapped(self) -> float:
        return self.delta0 + self.branch * math.pi

    def with_branch(self, branch: int) -> "PhaseShiftSample":
        return PhaseShiftSample(self.k_over_beta, self.delta0, branch)


def mod_pi_distance(a: float, b: float) -> float:
    """|a - b| reduced modulo pi to [0, pi/2]."""
    x = math.fmod(a - b, math.pi)
    x = abs(x)
    return min(x, math.pi - x)


def track_branches(samples: Sequence[PhaseShiftSample]) -> list[PhaseShiftSample]:
    """Re-assign branch indices so the unwrapped phase is continuous.

    The first sample keeps branch 0; each later one takes the branch that
    lands closest to its predecessor.
    """
    out: list[PhaseShiftSample] = []
    prev = None
    for s in samples:
        if prev is None:
            cur = s.with_branch(0)
        else:
            m = round((prev - s.delta0) / math.pi)
            cur = s.with_branch(int(m))
        out.append(cur)
        prev = cur.unwrapped
    return out


@dataclass(frozen=True)
class ScatteringObservables:
    a_beta: float
    re_beta: float
    condition: Condition
    method: Method
    resonant: bool = False


@dataclass(frozen=True)
class LowEnergyCoefficients:
    """Coefficients of delta0 = -k eta + k^3 xi + O(k^5); eta in 1/beta, xi in 1/beta^3."""

    eta: float
    xi: float


@dataclass(frozen=True)
class ContinuumNormalization:
    b: float
    nu: float
    c_tilde: float


# --------------------------------------------------------------------------
# auxiliary problem: two routes to delta0
# --------------------------------------------------------------------------


def _xi_cutoff(k: float, c: float, tol: float) -> int:
    # the linear part of the tail is summed exactly; what is left is ~ (2 k^3 c^2 + 31 k^5 / 5) / (4 N^4)
    coef = 2.0 * abs(k**3 * c**2) + 6.2 * k**5
    n = (coef / (4.0 * 0.1 * tol)) ** 0.25
    return int(max(2000, math.ceil(n), math.ceil(4.0 * (abs(c) + k))))


def aux_phase_shift_series(
    dp: DimensionlessParams, k_over_beta: float, precision: Precision = DEFAULT
) -> PhaseShiftSample:
    """Auxiliary-problem phase shift from the arctan series.

    delta0 = -k (gamma + ln 2d + beta r0) + sum_n [k/n - atan(2k/n) + atan(k/(n - d - 1/2))].
    Terms fall off like (d + 1/2) k / n^2; the sum is cut at N. The part of the
    rest linear in k is k [psi(N+1) - psi(N+1-d-1/2)], the k^3 part comes from
    Hurwitz zeta values.
    """
    k = float(k_over_beta)
    if not k > 0:
        raise ValueError("k_over_beta must be positive")
    c = dp.d + 0.5
    N = _xi_cutoff(k, c, precision.series_tail)
    n = np.arange(1, N + 1, dtype=float)
    with np.errstate(divide="ignore"):
        terms = k / n - np.arctan(2.0 * k / n) + np.arctan(k / (n - c))
    linear = k * (digamma(N + 1.0) - digamma(N + 1.0 - c))
    cubic = k**3 * (7.0 / 3.0 * hurwitz_zeta(3.0, N + 1) - c * hurwitz_zeta(4.0, N + 1))
    lead = -k * (EULER_GAMMA + math.log(2.0 * dp.d) + dp.beta_r0)
    raw = math.fsum(np.concatenate(([lead, linear, cubic], terms)))
    return PhaseShiftSample.from_raw(k, raw)


def aux_phase_shift_gamma(dp: DimensionlessParams, k_over_beta: float) -> PhaseShiftSample:
    """Auxiliary-problem phase shift from arg A(k) with A(b) = Gamma(-2ib)/Gamma(1/2 - ib - d).

    delta0 = pi/2 - arg A - k ln(2d) - k beta r0 (mod pi).
    """
    k = float(k_over_beta)
    if not k > 0:
        raise ValueError("k_over_beta must be positive")
    arg_a = log_gamma(complex(0.0, -2.0 * k)).imag - log_gamma(complex(0.5 - dp.d, -k)).imag
    raw = 0.5 * math.pi - arg_a - k * math.log(2.0 * dp.d) - k * dp.beta_r0
    return PhaseShiftSample.from_raw(k, raw)


def amplitude(dp: DimensionlessParams, b: float) -> complex:
    """A(b) = Gamma(-2ib) / Gamma(1/2 - ib - d)."""
    return np.exp(log_gamma(complex(0.0, -2.0 * b)) - log_gamma(complex(0.5 - dp.d, -b)))


def _check_unitarity(d: float, precision: Precision) -> None:
    m = round(d - 0.5)
    if m >= 0 and abs(d - 0.5 - m) < precision.unitarity_guard:
        raise UnitarityPoleError(f"d = {d!r} is at the zero-energy resonance n + 1/2 (n = {m})")


def low_energy_coefficients(
    dp: DimensionlessParams, precision: Precision = DEFAULT
) -> LowEnergyCoefficients:
    _check_unitarity(dp.d, precision)
    x = 0.5 - dp.d
    eta = 2.0 * EULER_GAMMA + math.log(2.0 * dp.d) + dp.beta_r0 + digamma(x)
    xi = polygamma2(x) / 6.0 + 8.0 / 3.0 * ZETA3
    return LowEnergyCoefficients(eta=eta, xi=xi)


def aux_scattering_params(
    dp: DimensionlessParams, precision: Precision = DEFAULT
) -> ScatteringObservables:
    """Closed-form scattering length and effective range of the auxiliary problem."""
    coeffs = low_energy_coefficients(dp, precision)
    a = coeffs.eta
    if abs(a) < precision.zero_length_guard:
        raise ZeroScatteringLengthError(f"a*beta = {a!r} at d = {dp.d!r}")
    psi2 = polygamma2(0.5 - dp.d)
    re = 2.0 / 3.0 * a - (psi2 + 16.0 * ZETA3) / (3.0 * a * a)
    re_alt = 2.0 / 3.0 * coeffs.eta - 2.0 * coeffs.xi / coeffs.eta**2
    if not math.isclose(re, re_alt, rel_tol=1e-9, abs_tol=1e-9):
        raise NumericalError(f"effective-range forms disagree: {re!r} vs {re_alt!r}")
    resonant = abs(a) > precision.resonance_threshold
    return ScatteringObservables(a, re, "auxiliary", "closed_form", resonant)


# --------------------------------------------------------------------------
# continuum normalization
# --------------------------------------------------------------------------


def _log_sinh(x: float) -> float:
    if x > 20.0:
        return x - math.log(2.0) + math.log1p(-math.exp(-2.0 * x))
    return math.log(math.sinh(x))


def log_normalization_constant(
    dp: DimensionlessParams, b: float, cutoff: int | None = None, precision: Precision = DEFAULT
) -> float:
    nu = dp.d - 0.5
    c = nu * nu + b * b
    if cutoff is None:
        bound = (abs(nu) + b + 1.0) ** 5
        cutoff = int(max(1000, math.ceil((bound / (0.1 * precision.series_tail)) ** 0.25)))
    n = np.arange(1, cutoff + 1, dtype=float)
    logs = -0.5 * np.log((1.0 - nu / n) ** 2 + (b / n) ** 2) - nu / n
    # expansion of the log-term in 1/n beyond the cutoff
    s2 = (nu * nu - b * b) / 2.0
    s3 = nu * (nu * nu / 3.0 - b * b)
    s4 = c * c / 4.0 - 2.0 * nu * nu * c + 2.0 * nu**4
    tail = (
        s2 * hurwitz_zeta(2.0, cutoff + 1)
        + s3 * hurwitz_zeta(3.0, cutoff + 1)
        + s4 * hurwitz_zeta(4.0, cutoff + 1)
    )
    head = -math.log(math.pi) + 0.5 * (math.log(b) + _log_sinh(2.0 * math.pi * b) - math.log(c))
    return math.fsum(np.concatenate(([head, EULER_GAMMA * nu, tail], logs)))


def normalization_constant(
    dp: DimensionlessParams, b: float, precision: Precision = DEFAULT
) -> ContinuumNormalization:
    """Energy-normalization factor C_b of the auxiliary continuum states.

    Chosen so that u_b -> sqrt(2/pi) sin(kr + delta0) at large r; computed
    from the infinite product with its logarithmic tail summed analytically.
    """
    if not b > 0:
        raise ValueError("b must be positive")
    log_c = log_normalization_constant(dp, b, precision=precision)
    return ContinuumNormalization(b=b, nu=dp.d - 0.5, c_tilde=math.exp(log_c))


# --------------------------------------------------------------------------
# physical problem
# --------------------------------------------------------------------------


def phys_phase_shift(
    dp: DimensionlessParams, k_over_beta: float, precision: Precision = DEFAULT
) -> PhaseShiftSample:
    """delta0 = -arg M(1/2 - ik - d, 1 - 2ik, z0) for the wall at r = 0."""
    k = float(k_over_beta)
    if not k > 0:
        raise ValueError("k_over_beta must be positive")
    m = kummer_m(complex(0.5 - dp.d, -k), complex(1.0, -2.0 * k), dp.z0, precision)
    return PhaseShiftSample.from_raw(k, -m.arg())


def phase_sweep(
    fn: Callable[[DimensionlessParams, float], PhaseShiftSample],
    dp: DimensionlessParams,
    ks: Iterable[float],
) -> list[PhaseShiftSample]:
    """Evaluate ``fn`` along a k grid with continuous branch tracking."""
    return track_branches([fn(dp, float(k)) for k in ks])


# --------------------------------------------------------------------------
# low-k fit
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _Fit:
    c0: float  # -1/a
    c1: float  # r_e / 2


def _kcot_fit(ks: np.ndarray, deltas: np.ndarray) -> _Fit:
    y = ks / np.tan(deltas)
    kmax = ks.max()
    x = (ks / kmax) ** 2
    coef = np.polynomial.polynomial.polyfit(x, y, 2)
    return _Fit(float(coef[0]), float(coef[1] / kmax**2))


def low_k_fit(
    delta_fn: Callable[[float], float],
    condition: Condition,
    precision: Precision = DEFAULT,
) -> ScatteringObservables:
    """Extract (a, r_e) from k cot delta0 = -1/a + r_e k^2 / 2 + O(k^4).

    The fit runs on a geometric k ladder and is repeated on the ladder scaled
    by 1/2; the two -1/a values must agree to ``fit_rtol`` and the two r_e
    values to ``fit_re_rtol`` (the latter trips near zeros of a, where the
    k^2 expansion has a small radius). On disagreement
    the ladder is moved down a decade (up to three times). A ladder that never
    settles is reported as resonant when |a| is large, otherwise raised.
    """
    kmax, kmin = precision.ladder_k_max, precision.ladder_k_min
    last = None
    best = None  # (r_e spread, fit) over ladders whose -1/a settled
    for _ in range(4):
        ladder = np.geomspace(kmax, kmin, precision.ladder_points)
        full = _kcot_fit(ladder, np.array([delta_fn(k) for k in ladder]))
        half = _kcot_fit(ladder / 2, np.array([delta_fn(k) for k in ladder / 2]))
        last = full
        if full.c0 == 0:
            break
        if abs(full.c0 - half.c0) <= precision.fit_rtol * abs(full.c0):
            spread = abs(full.c1 - half.c1) / abs(full.c1) if full.c1 != 0 else 0.0
            if best is None or spread < best[0]:
                best = (spread, full)
            if spread <= precision.fit_re_rtol:
                break
        kmax, kmin = kmax / 10.0, kmin / 10.0
    if best is not None:
        # beside a zero of a, r_e may never settle: truncation leaks in on high
        # ladders and rounding on low ones, so keep the most consistent ladder
        fit = best[1]
        a = -1.0 / fit.c0
        return ScatteringObservables(
            a, 2.0 * fit.c1, condition, "low_k_fit", bool(abs(a) > precision.resonance_threshold)
        )
    a = -1.0 / last.c0 if last.c0 != 0 else math.inf
    if abs(a) * precision.ladder_k_min > 0.1:
        return ScatteringObservables(a, 2.0 * last.c1, condition, "low_k_fit", True)
    raise FitInstabilityError(f"low-k ladder fit did not settle (last a*beta = {a!r})")


def phys_scattering_params(
    dp: DimensionlessParams, precision: Precision = DEFAULT
) -> ScatteringObservables:
    """Physical-problem (a, r_e) from the k -> 0 limit of k cot delta0."""
    return low_k_fit(lambda k: phys_phase_shift(dp, k, precision).unwrapped, "physical", precision)


def aux_scattering_params_fit(
    dp: DimensionlessParams, precision: Precision = DEFAULT
) -> ScatteringObservables:
    """Auxiliary (a, r_e) from the low-k fit of the series phase shift (cross-check)."""
    return low_k_fit(
        lambda k: aux_phase_shift_series(dp, k, precision).unwrapped, "auxiliary", precision
    )


# --------------------------------------------------------------------------
# loci of the auxiliary scattering length
# --------------------------------------------------------------------------


def unitarity_poles(d_lo: float, d_hi: float) -> list[float]:
    """Depths d = n + 1/2 inside [d_lo, d_hi] where the auxiliary a diverges.

    a -> -inf as d approaches a pole from below and +inf from above.
    """
    first = max(0, math.ceil(d_lo - 0.5))
    return [n + 0.5 for n in range(first, int(math.floor(d_hi - 0.5)) + 1) if d_lo <= n + 0.5 <= d_hi]


def scattering_length_zeros(
    beta_r0: float, d_lo: float, d_hi: float, samples_per_unit: int = 400
) -> list[float]:
    """Depths in [d_lo, d_hi] where the auxiliary a vanishes (r_e diverges there)."""
    def eta(d):
        return 2.0 * EULER_GAMMA + math.log(2.0 * d) + beta_r0 + digamma(0.5 - d)

    edges = [d_lo] + unitarity_poles(d_lo, d_hi) + [d_hi]
    zeros: list[float] = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        lo_in, hi_in = lo + 1e-9, hi - 1e-9
        if hi_in <= lo_in:
            continue
        n = max(8, int((hi_in - lo_in) * samples_per_unit))
        grid = np.linspace(lo_in, hi_in, n + 1)
        vals = [eta(g) for g in grid]
        for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
            if fa == 0:
                zeros.append(float(a))
            elif (fa < 0) != (fb < 0):
                zeros.append(float(brentq(eta, a, b, xtol=1e-14)))
    return zeros
