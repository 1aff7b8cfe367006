"""Direct integration of the radial equation, used to check the closed forms.

Everything here works on u'' = (v(x) - eps) u with x = beta r and
v(x) = d^2((1 - exp(-(x - beta r0)))^2 - 1), propagated with the three-point
Numerov scheme. Nothing in this module calls into the special-function code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional

import numpy as np
from scipy import optimize

from .bound import BoundState
from .errors import MatchRegionError, ScaleOverflowError, WindowExhaustedError
from .potential import DimensionlessParams, scaled_potential
from .scatter import PhaseShiftSample

Condition = Literal["auxiliary", "physical"]
Potential = Callable[[np.ndarray], np.ndarray]

DEFAULT_STEP = 0.005
# the three-point recurrence turns oscillatory once h^2 f > 12; start below this
MAX_H2F = 6.0
_RESCALE_AT = 1e150
_MAX_SCALE_LOG = 1e5
_TINY = 1e-200


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid in x = beta r."""

    r_start: float
    r_end: float
    step: float = DEFAULT_STEP

    def __post_init__(self):
        if not self.r_end > self.r_start:
            raise ValueError("r_end must exceed r_start")
        if not self.step > 0:
            raise ValueError("step must be positive")

    @property
    def n_steps(self) -> int:
        return int(round((self.r_end - self.r_start) / self.step))

    def points(self) -> np.ndarray:
        return self.r_start + self.step * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class OracleSolution:
    """Samples of u on ``grid``, scaled so that max |u| = 1.

    The true solution is u * exp(scale_log) for the given starting values.
    """

    u: np.ndarray
    grid: RadialGrid
    energy_scaled: float
    scale_log: float = 0.0
    nodes: int = field(default=0, compare=False)


def free_potential(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def harmonic_potential(x):
    """v = x^2, whose ground state exp(-x^2/2) has eps = 1."""
    x = np.asarray(x, dtype=float)
    return x * x


def _morse(dp: DimensionlessParams) -> Potential:
    return lambda x: scaled_potential(dp, x)


def _propagate(f: np.ndarray, h: float, u0: float, u1: float):
    """Numerov recurrence on precomputed f = v - eps; returns (u list, scale_log).

    Carried in summed-difference form, y = (1 - h^2 f / 12) u with
    y[i+1] - 2 y[i] + y[i-1] = h^2 f[i] u[i], so the small h^2 f is never
    added to 1 and the phase keeps full precision over long runs.
    """
    g = (h * h) * np.asarray(f, dtype=float)
    w = (1.0 - g / 12.0).tolist()
    g = g.tolist()
    u = [u0, u1]
    append = u.append
    scale_log = 0.0
    y = w[1] * u1
    dy = y - w[0] * u0
    b = u1
    n = len(w)
    for i in range(1, n - 1):
        dy += g[i] * b
        y += dy
        b = y / w[i + 1]
        append(b)
        if abs(b) > _RESCALE_AT:
            u = [x / _RESCALE_AT for x in u]
            append = u.append
            y /= _RESCALE_AT
            dy /= _RESCALE_AT
            b = u[-1]
            scale_log += math.log(_RESCALE_AT)
            if scale_log > _MAX_SCALE_LOG:
                raise ScaleOverflowError("Numerov amplitude overflow; energy too deep in forbidden region")
    return u, scale_log


def _count_nodes(u: np.ndarray) -> int:
    s = np.sign(u)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def numerov_propagate(
    dp: Optional[DimensionlessParams],
    energy_scaled: float,
    grid: RadialGrid,
    u0: float,
    u1: float,
    potential: Optional[Potential] = None,
) -> OracleSolution:
    """Propagate u'' = (v - eps) u across ``grid`` from the two starting samples.

    ``potential`` replaces the Morse potential of ``dp`` (used for self-tests).
    """
    if u0 == 0 and u1 == 0:
        raise ValueError("starting values are both zero")
    v = potential if potential is not None else _morse(dp)
    x = grid.points()
    f = v(x) - energy_scaled
    u, scale_log = _propagate(f, grid.step, u0, u1)
    u = np.asarray(u)
    peak = np.max(np.abs(u))
    u = u / peak
    return OracleSolution(u, grid, energy_scaled, scale_log + math.log(peak), _count_nodes(u))


# --------------------------------------------------------------------------
# left boundary
# --------------------------------------------------------------------------


def _admissible_start(v: Potential, eps: float, x_req: float, h: float, x_limit: float) -> float:
    """First grid point at or right of ``x_req`` where h^2 (v - eps) <= MAX_H2F.

    Left of that point the solution only grows, so starting there with
    (0, tiny) matches a start further left up to exponentially small terms.
    """
    x = x_req
    while h * h * (float(v(np.array([x]))[0]) - eps) > MAX_H2F:
        x += h
        if x >= x_limit:
            raise MatchRegionError("no admissible Numerov start left of the well")
    return x


def left_start(dp: DimensionlessParams, condition: Condition, z_start: float = 500.0) -> float:
    """Requested left edge: z = z_start (auxiliary) or x = 0 (physical)."""
    if condition == "physical":
        return 0.0
    return dp.beta_r0 + math.log(2.0 * dp.d / z_start)


# --------------------------------------------------------------------------
# bound states
# --------------------------------------------------------------------------


class _Shooter:
    """Outward/inward shooting on a fixed box for one (dp, condition, step)."""

    def __init__(self, dp, condition, x_left, x_right, step):
        self.dp = dp
        self.h = step
        self.x_left = x_left
        n = int(round((x_right - x_left) / step))
        self.x = x_left + step * np.arange(n + 1)
        self.v = scaled_potential(dp, self.x)
        self.m = int(round((dp.beta_r0 - x_left) / step))
        self.physical = condition == "physical"

    def _start_index(self, eps):
        bad = np.nonzero(self.h * self.h * (self.v - eps) > MAX_H2F)[0]
        bad = bad[bad < self.m]
        return int(bad[-1]) + 1 if bad.size else 0

    def nodes(self, eps):
        i0 = self._start_index(eps)
        u, _ = _propagate(self.v[i0:] - eps, self.h, 0.0, _TINY)
        return _count_nodes(np.asarray(u))

    def mismatch(self, eps):
        """Discrete Wronskian of the left and right solutions at the well minimum."""
        i0 = self._start_index(eps)
        f = self.v - eps
        left, _ = _propagate(f[i0 : self.m + 2], self.h, 0.0, _TINY)
        right, _ = _propagate(f[self.m :][::-1], self.h, 0.0, _TINY)
        L0, L1 = left[-2], left[-1]
        R1, R0 = right[-2], right[-1]
        sl = max(abs(L0), abs(L1))
        sr = max(abs(R0), abs(R1))
        return (L0 / sl) * (R1 / sr) - (L1 / sl) * (R0 / sr)


def _box_right(dp: DimensionlessParams, b: float) -> float:
    return dp.beta_r0 + 10.0 + 20.0 / max(b, 1e-3)


def _bracket_levels(shooter: _Shooter, lo: float, hi: float, count: int, tol: float):
    """Energy intervals [e_lo, e_hi] holding exactly level n, for n < count."""
    n_lo, n_hi = shooter.nodes(lo), shooter.nodes(hi)
    out = []
    for n in range(min(count, n_hi - n_lo)):
        # the node count jumps from n to n + 1 across level n
        a, b = lo, hi
        while b - a > tol:
            mid = 0.5 * (a + b)
            if shooter.nodes(mid) <= n:
                a = mid
            else:
                b = mid
        out.append((a, b))
    return out


def _refine(shooter: _Shooter, e_lo: float, e_hi: float) -> float:
    g_lo, g_hi = shooter.mismatch(e_lo), shooter.mismatch(e_hi)
    if g_lo == 0:
        return e_lo
    if g_hi == 0:
        return e_hi
    if (g_lo < 0) == (g_hi < 0):
        raise WindowExhaustedError(f"mismatch does not change sign on [{e_lo}, {e_hi}]")
    return optimize.brentq(shooter.mismatch, e_lo, e_hi, xtol=1e-14, rtol=1e-15)


def _level_energy(dp, condition, n, e_lo, e_hi, step, x_left):
    b = math.sqrt(max(-0.5 * (e_lo + e_hi), 1e-12))
    shooter = _Shooter(dp, condition, x_left, _box_right(dp, b), step)
    width = max(e_hi - e_lo, 1e-9)
    e_hi = min(e_hi, -1e-14)
    for _ in range(30):
        # exactly one level between the ends: node counts n and n + 1
        if shooter.nodes(e_lo) == n and shooter.nodes(e_hi) == n + 1:
            return _refine(shooter, e_lo, e_hi)
        e_lo -= width
        e_hi = min(e_hi + width, -1e-14)
        width *= 2.0
    raise WindowExhaustedError(f"level {n} lost while refining the box")


def oracle_bound_energies(
    dp: DimensionlessParams,
    condition: Condition,
    count_max: int = 50,
    step: float = DEFAULT_STEP,
    richardson: bool = True,
    x_left: Optional[float] = None,
) -> list[BoundState]:
    """Bound levels by shooting, in order of node count.

    Levels are bracketed by Sturm node counting on a generous box, located
    as zeros of the left/right Wronskian at the well minimum, and (by default)
    combined across steps h and h/2 to cancel the O(h^4) Numerov error.
    """
    if condition not in ("auxiliary", "physical"):
        raise ValueError(f"unknown condition {condition!r}")
    x_req = left_start(dp, condition) if x_left is None else x_left
    e_floor = -dp.d * dp.d
    e_top = -1e-10
    coarse = _Shooter(dp, condition, x_req, dp.beta_r0 + 80.0, step)
    brackets = _bracket_levels(coarse, e_floor, e_top, count_max, 1e-4 * max(1.0, dp.d))
    states = []
    for n, (a, b) in enumerate(brackets):
        e_h = _level_energy(dp, condition, n, a, b, step, x_req)
        if richardson:
            pad = 1e-6 * max(1.0, abs(e_h))
            e_h2 = _level_energy(dp, condition, n, e_h - pad, e_h + pad, 0.5 * step, x_req)
            eps = (16.0 * e_h2 - e_h) / 15.0
        else:
            eps = e_h
        if eps >= 0:
            break
        states.append(BoundState(n=n, b=math.sqrt(-eps), energy_scaled=eps, condition=condition))
    return states


def oracle_node_count(
    dp: DimensionlessParams, state: BoundState, step: float = DEFAULT_STEP
) -> int:
    """Nodes of the shooting solution at a level's energy, on r > 0 (or the real line)."""
    x_req = left_start(dp, state.condition)
    shooter = _Shooter(dp, state.condition, x_req, _box_right(dp, state.b), step)
    i0 = shooter._start_index(state.energy_scaled)
    f = shooter.v - state.energy_scaled
    left, _ = _propagate(f[i0 : shooter.m + 1], step, 0.0, _TINY)
    right, _ = _propagate(f[shooter.m :][::-1], step, 0.0, _TINY)
    return _count_nodes(np.asarray(left)) + _count_nodes(np.asarray(right))


# --------------------------------------------------------------------------
# phase shifts
# --------------------------------------------------------------------------


def match_point(dp: DimensionlessParams, k: float, factor: float = 1e-12) -> float:
    """Smallest x >= beta r0 + 25 with |v(x)| <= factor * k^2."""
    # |v| <= 2 d^2 e^{-(x - x0)} once the well is behind us
    x = dp.beta_r0 + math.log(2.0 * dp.d * dp.d / (factor * k * k))
    return max(x, dp.beta_r0 + 25.0)


def oracle_phase_shift(
    dp: DimensionlessParams,
    condition: Condition,
    k_over_beta: float,
    step: float = DEFAULT_STEP,
    x_match: Optional[float] = None,
    x_left: Optional[float] = None,
    x_max: float = 1e5,
) -> PhaseShiftSample:
    """Phase shift from the asymptotic form sin(kx + delta0), mod pi.

    u is sampled at x1 >= x_match and at x2 about a quarter wavelength
    further; with theta = k x1 + delta0,
    tan(theta) = u1 sin(k dx) / (u2 - u1 cos(k dx)).
    """
    k = float(k_over_beta)
    if not k > 0:
        raise ValueError("k_over_beta must be positive")
    eps = k * k
    xm = match_point(dp, k) if x_match is None else x_match
    quarter = max(1, int(round(0.5 * math.pi / k / step)))
    x_req = left_start(dp, condition) if x_left is None else x_left
    if condition == "physical" and x_req < 0:
        raise ValueError("the physical problem starts at r = 0")
    v = _morse(dp)
    x0 = _admissible_start(v, eps, x_req, step, dp.beta_r0)
    n1 = int(math.ceil((xm - x0) / step))
    x_end = x0 + (n1 + quarter) * step
    if x_end > x_max:
        raise MatchRegionError(f"match region x = {x_end:.1f} exceeds grid bound {x_max}")
    grid = RadialGrid(x0, x_end, step)
    sol = numerov_propagate(dp, eps, grid, 0.0, _TINY)
    u1, u2 = sol.u[n1], sol.u[n1 + quarter]
    x1 = x0 + n1 * step
    dk = k * quarter * step
    theta = math.atan2(u1 * math.sin(dk), u2 - u1 * math.cos(dk))
    return PhaseShiftSample.from_raw(k, theta - k * x1)
