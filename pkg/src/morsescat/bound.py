"""Bound-state spectra and wavefunctions.

Two boundary conditions are supported: the auxiliary one (r extended to
the whole real line, u -> 0 as r -> -inf), which has closed-form levels
b_n = d - n - 1/2, and the physical one (u(r=0) = 0), whose levels are the
roots of M(1/2 + b - d, 1 + 2b, z0) in b. Energies are in units of
hbar^2 beta^2 / 2 mu, so E = -b^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
from scipy import integrate, optimize

from .errors import KummerConvergenceError, RootRefinementError
from .potential import DimensionlessParams
from .precision import DEFAULT, Precision
from .specfun import kummer_m, kummer_m_batch, kummer_split, laguerre

Condition = Literal["auxiliary", "physical"]


@dataclass(frozen=True)
class BoundState:
    """One bound level.

    ``shift`` is b minus the auxiliary level b_n = d - n - 1/2, kept separately
    so that exponentially small physical corrections survive rounding of b.
    """

    n: int
    b: float
    energy_scaled: float
    condition: Condition
    shift: float = 0.0


@dataclass(frozen=True)
class DeltaE:
    n: int
    value: Optional[float]  # None marks a level with no physical counterpart

    @property
    def missing_physical(self) -> bool:
        return self.value is None


def aux_level_count(d: float) -> int:
    if d <= 0.5:
        return 0
    return math.ceil(d - 0.5)


def aux_spectrum(dp: DimensionlessParams) -> list[BoundState]:
    states = []
    for n in range(aux_level_count(dp.d)):
        b = dp.d - n - 0.5
        if b <= 0:
            break
        states.append(BoundState(n=n, b=b, energy_scaled=-b * b, condition="auxiliary"))
    return states


def aux_wavefunction(s: BoundState, dp: DimensionlessParams, z):
    """Normalized auxiliary eigenfunction u_n(z), in units of sqrt(beta)."""
    if s.condition != "auxiliary":
        raise ValueError("aux_wavefunction needs an auxiliary state")
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=float)
    alpha = 2.0 * s.b
    log_norm = 0.5 * (math.lgamma(s.n + 1) + math.log(alpha) - math.lgamma(alpha + s.n + 1))
    with np.errstate(divide="ignore", under="ignore"):
        envelope = np.exp(log_norm - 0.5 * z + s.b * np.log(z))
    u = envelope * laguerre(s.n, alpha, z)
    return float(u) if scalar else u


# --------------------------------------------------------------------------
# physical boundary condition
# --------------------------------------------------------------------------


def _f_sign(b: float, dp: DimensionlessParams, precision: Precision) -> float:
    m = kummer_m(0.5 + b - dp.d, 1.0 + 2.0 * b, dp.z0, precision)
    return float(np.sign(m.mantissa.real))


def _grid_signs(grid: np.ndarray, dp: DimensionlessParams, precision: Precision) -> list[float]:
    try:
        values = kummer_m_batch(0.5 + grid - dp.d, 1.0 + 2.0 * grid, dp.z0, precision)
        return [float(np.sign(v.mantissa.real)) for v in values]
    except KummerConvergenceError:
        pass
    signs = []
    for b in grid:
        try:
            signs.append(_f_sign(b, dp, precision))
        except KummerConvergenceError:
            # grid point sits on a root to extreme precision; nudge it
            signs.append(_f_sign(b * (1.0 + 1e-7), dp, precision))
    return signs


def _split_residual(n: int, dp: DimensionlessParams, precision: Precision):
    """g(eps) = M / R for b = d - n - 1/2 + eps; same sign as M, R > 0."""
    b_aux = dp.d - n - 0.5

    def g(eps):
        P, R = kummer_split(n, eps, 1.0 + 2.0 * (b_aux + eps), dp.z0, precision)
        return eps + (P / R).real

    return g


def _refine_level(n, b_lo, b_hi, dp, precision) -> float:
    """Bisect, then polish, the offset eps of level n inside [b_lo, b_hi]."""
    b_aux = dp.d - n - 0.5
    g = _split_residual(n, dp, precision)
    lo, hi = b_lo - b_aux, b_hi - b_aux
    g_lo, g_hi = g(lo), g(hi)
    width = max(hi - lo, precision.root_xtol)
    for _ in range(20):
        if g_lo == 0:
            return lo
        if g_hi == 0:
            return hi
        if (g_lo < 0) != (g_hi < 0):
            break
        # the grid saw rounded p; widen until the exact split brackets
        lo -= width
        hi += width
        width *= 2.0
        g_lo, g_hi = g(lo), g(hi)
    else:
        raise RootRefinementError(f"level {n}: sign change in [{b_lo}, {b_hi}] not localised")
    while hi - lo > precision.root_xtol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        g_mid = g(mid)
        if g_mid == 0:
            return mid
        if (g_mid < 0) == (g_lo < 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return optimize.brentq(g, lo, hi, xtol=1e-300, rtol=4.0 * np.finfo(float).eps)


def phys_spectrum(dp: DimensionlessParams, precision: Precision = DEFAULT) -> list[BoundState]:
    """Levels for u(r=0) = 0, ordered by decreasing b.

    Sign changes of f(b) = M(1/2 + b - d, 1 + 2b, z0) are located on a uniform
    grid over (edge, d - 1/2] and refined by bisection to ``root_xtol``. The
    refinement runs on the split form M = P + eps R around the auxiliary
    level b_n = d - n - 1/2, so the offset eps = b - b_n keeps full relative
    precision even when it is ~exp(-z0).
    """
    lo = precision.root_edge
    hi = dp.d - 0.5
    if hi <= lo:
        return []
    npts = max(2, math.ceil((hi - lo) * precision.root_grid_per_unit) + 1)
    grid = np.linspace(hi, lo, npts)
    # M(0, q, z) = 1 at b = d - 1/2; the top root can sit exp(-z0) below it
    signs = [1.0] + _grid_signs(grid[1:], dp, precision)

    states: list[BoundState] = []
    for j in range(npts - 1):
        s_hi, s_lo = signs[j], signs[j + 1]
        if s_lo == s_hi or s_hi == 0:
            continue
        n = len(states)
        shift = _refine_level(n, float(grid[j + 1]), float(grid[j]), dp, precision)
        b = (dp.d - n - 0.5) + shift
        states.append(
            BoundState(n=n, b=b, energy_scaled=-b * b, condition="physical", shift=shift)
        )
    return states


def _phys_log_abs_sign(s: BoundState, dp: DimensionlessParams, z: float, precision):
    P, R = kummer_split(s.n, s.shift, 1.0 + 2.0 * s.b, z, precision)
    m = P + s.shift * R
    if m.is_zero:
        return -math.inf, 0.0
    return -0.5 * z + s.b * math.log(z) + m.log_abs(), math.copysign(1.0, m.mantissa.real)


def phys_wavefunction(
    s: BoundState,
    dp: DimensionlessParams,
    z,
    normalized: bool = False,
    precision: Precision = DEFAULT,
):
    """Physical eigenfunction e^{-z/2} z^b M(1/2 + b - d, 1 + 2b, z).

    Unnormalized by default; with ``normalized=True`` the result is divided by
    the square root of the integral of u^2 over r in [0, inf), in units of
    sqrt(beta).
    """
    if s.condition != "physical":
        raise ValueError("phys_wavefunction needs a physical state")
    scalar = np.ndim(z) == 0
    zs = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.empty_like(zs)
    log_c = -0.5 * math.log(_phys_norm_integral(s, dp, precision)) if normalized else 0.0
    for i, zi in enumerate(zs):
        if zi <= 0:
            out[i] = 0.0
            continue
        la, sign = _phys_log_abs_sign(s, dp, zi, precision)
        out[i] = sign * math.exp(la + log_c) if la + log_c > -745 else 0.0
    return float(out[0]) if scalar else out


def _phys_norm_integral(s: BoundState, dp: DimensionlessParams, precision) -> float:
    def integrand(x):
        la, _ = _phys_log_abs_sign(s, dp, 2.0 * dp.d * math.exp(-(x - dp.beta_r0)), precision)
        return math.exp(2.0 * la) if 2.0 * la > -745 else 0.0

    x_far = dp.beta_r0 + 20.0 + 40.0 / s.b
    left, _ = integrate.quad(integrand, 0.0, dp.beta_r0, limit=200, epsabs=0, epsrel=1e-12)
    right, _ = integrate.quad(integrand, dp.beta_r0, x_far, limit=400, epsabs=0, epsrel=1e-12)
    return left + right


def phys_normalization(s: BoundState, dp: DimensionlessParams, precision: Precision = DEFAULT):
    """Constant C making C * phys_wavefunction unit-normalized on r >= 0."""
    return 1.0 / math.sqrt(_phys_norm_integral(s, dp, precision))


def delta_e(
    dp: DimensionlessParams,
    precision: Precision = DEFAULT,
    phys: Optional[list[BoundState]] = None,
) -> list[DeltaE]:
    """E_aux - E_phys per auxiliary level (None where the physical level is absent).

    Computed as eps (2 b_aux + eps) from the stored offsets, so values far
    below the spacing of b survive; below ~1e-308 they underflow to 0.
    """
    aux = aux_spectrum(dp)
    if phys is None:
        phys = phys_spectrum(dp, precision)
    out = []
    for a in aux:
        if a.n < len(phys):
            eps = phys[a.n].shift
            out.append(DeltaE(a.n, eps * (2.0 * a.b + eps)))
        else:
            out.append(DeltaE(a.n, None))
    return out
