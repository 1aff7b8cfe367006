"""Special functions used by the closed-form Morse results.

Complex log-gamma, real digamma and tetragamma, Kummer's confluent
hypergeometric function M(p, q, z) for complex parameters and real z >= 0,
generalized Laguerre polynomials, and the constants gamma and zeta(3).

Kummer values are returned as :class:`ScaledComplex` because M grows like
``exp(z)`` and the arguments used here reach z ~ 1e3.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import KummerConvergenceError, PoleError
from .precision import DEFAULT, Precision

EULER_GAMMA = 0.57721566490153286061
ZETA3 = 1.2020569031595942854

# B_2, B_4, ..., B_20
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
)

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EPS = 2.0**-53


def constants() -> dict[str, float]:
    """Euler-Mascheroni constant and Apery's constant zeta(3)."""
    return {"euler_gamma": EULER_GAMMA, "zeta3": ZETA3}


# --------------------------------------------------------------------------
# Scaled complex numbers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ScaledComplex:
    """A complex number stored as ``mantissa * exp(exponent)``.

    After :meth:`normalize` the mantissa satisfies ``1 <= |mantissa| < e``
    (or is exactly zero, in which case the exponent is 0).
    """

    mantissa: complex
    exponent: float = 0.0

    @classmethod
    def from_complex(cls, value: complex) -> "ScaledComplex":
        return cls(complex(value), 0.0).normalize()

    def normalize(self) -> "ScaledComplex":
        m = complex(self.mantissa)
        if m == 0:
            return ScaledComplex(0j, 0.0)
        if not (math.isfinite(m.real) and math.isfinite(m.imag)):
            raise ValueError("non-finite mantissa")
        shift = math.floor(math.log(abs(m)))
        # two factors keep exp() in range for subnormal mantissas
        half = shift // 2
        m = m * math.exp(-half) * math.exp(half - shift)
        # guard the [1, e) interval against rounding at the edges
        while abs(m) >= math.e:
            m /= math.e
            shift += 1
        while abs(m) < 1.0:
            m *= math.e
            shift -= 1
        return ScaledComplex(m, float(self.exponent + shift))

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0

    def log_abs(self) -> float:
        if self.is_zero:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent

    def arg(self) -> float:
        return cmath.phase(self.mantissa)

    def log(self) -> complex:
        """Principal logarithm of the represented value."""
        return cmath.log(self.mantissa) + self.exponent

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        if self.exponent > 709.0:
            raise OverflowError("scaled value exceeds double range")
        return self.mantissa * math.exp(self.exponent)

    def __mul__(self, other) -> "ScaledComplex":
        if isinstance(other, ScaledComplex):
            return ScaledComplex(
                self.mantissa * other.mantissa, self.exponent + other.exponent
            ).normalize()
        return ScaledComplex(self.mantissa * complex(other), self.exponent).normalize()

    __rmul__ = __mul__

    def __truediv__(self, other: "ScaledComplex") -> complex:
        """Ratio as a plain complex (underflows quietly to 0)."""
        if other.is_zero:
            raise ZeroDivisionError("division by scaled zero")
        if self.is_zero:
            return 0j
        delta = self.exponent - other.exponent
        if delta < -745.0:
            return 0j
        return (self.mantissa / other.mantissa) * math.exp(delta)

    def __add__(self, other: "ScaledComplex") -> "ScaledComplex":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        hi, lo = (self, other) if self.exponent >= other.exponent else (other, self)
        delta = lo.exponent - hi.exponent
        lo_m = lo.mantissa * math.exp(delta) if delta > -745.0 else 0j
        return ScaledComplex(hi.mantissa + lo_m, hi.exponent).normalize()

    def __neg__(self) -> "ScaledComplex":
        return ScaledComplex(-self.mantissa, self.exponent)


# --------------------------------------------------------------------------
# Gamma family
# --------------------------------------------------------------------------


def _check_gamma_pole(z: complex) -> None:
    if z.real <= 0.5:
        m = round(-z.real)
        if m >= 0 and abs(z - complex(-m, 0.0)) < 1e-300:
            raise PoleError(f"Gamma has a pole at {z!r}")


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z) for complex z.

    The argument is shifted upward by the recurrence until Stirling's series
    is accurate, so the imaginary part is continuous away from the cut along
    the negative real axis.
    """
    z = complex(z)
    _check_gamma_pole(z)
    w = z
    shift_re: list[float] = []
    shift_im: list[float] = []
    while not (w.real >= 0.0 and abs(w) >= 15.0):
        lw = cmath.log(w)
        shift_re.append(lw.real)
        shift_im.append(lw.imag)
        w += 1.0
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0j
    power = inv
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k * (2 * k - 1)) * power
        power *= inv2
    stirling = (w - 0.5) * cmath.log(w) - w + _HALF_LOG_2PI + series
    re = math.fsum([stirling.real] + [-x for x in shift_re])
    im = math.fsum([stirling.imag] + [-x for x in shift_im])
    return complex(re, im)


def _check_real_pole(x: float, name: str) -> None:
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"{name} has a pole at {x!r}")


def digamma(x: float) -> float:
    """psi(x) for real x; poles at the non-positive integers."""
    x = float(x)
    _check_real_pole(x, "digamma")
    acc: list[float] = []
    while x < 10.0:
        acc.append(-1.0 / x)
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for k, b in enumerate(_BERNOULLI[:8], start=1):
        series += b / (2 * k) * power
        power *= inv2
    acc.append(math.log(x) - 0.5 / x - series)
    return math.fsum(acc)


def polygamma2(x: float) -> float:
    """Second polygamma function psi''(x) for real x."""
    x = float(x)
    _check_real_pole(x, "polygamma2")
    acc: list[float] = []
    while x < 15.0:
        acc.append(-2.0 / (x * x * x))
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = inv2 + inv2 * inv
    power = inv2 * inv2
    for k, b in enumerate(_BERNOULLI[:8], start=1):
        series += b * (2 * k + 1) * power
        power *= inv2
    acc.append(-series)
    return math.fsum(acc)


# --------------------------------------------------------------------------
# Laguerre
# --------------------------------------------------------------------------


def laguerre(n: int, alpha: float, z):
    """Generalized Laguerre polynomial L_n^(alpha)(z) by upward recurrence.

    ``z`` may be a scalar or an array.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=float)
    prev = np.ones_like(z)
    if n == 0:
        return float(prev) if scalar else prev
    cur = 1.0 + alpha - z
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - z) * cur - (k + alpha) * prev) / (k + 1)
    return float(cur) if scalar else cur


# --------------------------------------------------------------------------
# Kummer M
# --------------------------------------------------------------------------

_RESCALE_BITS = 800
_RESCALE_TRIGGER = 2.0**400
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class _Part:
    value: ScaledComplex
    err: float  # relative error bound of this part


def _p_plus(p, i, split_n, split_eps):
    if split_n is None:
        return p + i
    return (i - split_n) + split_eps


def _ratio_bound(i, z, abs_p, abs_q):
    # bound on |t_{j+1}/t_j| for every j >= i, valid once i > |q|
    if i <= abs_q + 1:
        return math.inf
    return z * (i + abs_p) / ((i - abs_q) * (i + 1))


def _max_terms(p, q, z):
    return int(z + abs(p) + abs(q) + 60.0 * math.sqrt(z + abs(p) + 1.0) + 400)


def _series_double(p: complex, q: complex, z: float, split_n, split_eps):
    """Sum the series in double precision with exact (fsum) accumulation.

    Terms are kept as ``t * 2**(800*k)``; returns one or two parts.
    """
    abs_p, abs_q = abs(p), abs(q)
    nparts = 1 if split_n is None else 2
    re = [[] for _ in range(nparts)]
    im = [[] for _ in range(nparts)]
    wt = [[] for _ in range(nparts)]  # (i+1)|t| for the running error bound
    sc = [[] for _ in range(nparts)]
    t = 1.0 + 0.0j
    k = 0
    running = 0j
    running_k = 0
    biggest = 0.0
    limit = _max_terms(p, q, z)
    i = 0
    while True:
        part = 0 if (split_n is None or i <= split_n) else 1
        re[part].append(t.real)
        im[part].append(t.imag)
        wt[part].append((i + 1) * abs(t))
        sc[part].append(k)
        if running_k != k:
            shrink = 2.0 ** (-_RESCALE_BITS * (k - running_k))
            running *= shrink
            biggest *= shrink
            running_k = k
        running += t
        biggest = max(biggest, abs(t))

        if split_n is not None and i == split_n:
            factor = z / ((q + i) * (i + 1))
        else:
            factor = _p_plus(p, i, split_n, split_eps) * z / ((q + i) * (i + 1))
        t_next = t * factor
        if t_next == 0:
            break
        rho = _ratio_bound(i + 1, z, abs_p, abs_q)
        if rho < 0.9:
            tail = abs(t_next) / (1.0 - rho)
            floor = max(abs(running), _EPS * biggest)
            if tail <= 2.0**-60 * floor:
                break
        t = t_next
        i += 1
        if i > limit:
            raise KummerConvergenceError(f"series did not terminate after {limit} terms")
        if abs(t) > _RESCALE_TRIGGER:
            t *= 2.0**-_RESCALE_BITS
            k += 1

    out = []
    for part in range(nparts):
        if not re[part]:
            out.append(_Part(ScaledComplex(0j, 0.0), 0.0))
            continue
        kmax = max(sc[part])
        rs = [math.ldexp(x, -_RESCALE_BITS * (kmax - s)) for x, s in zip(re[part], sc[part])]
        ims = [math.ldexp(x, -_RESCALE_BITS * (kmax - s)) for x, s in zip(im[part], sc[part])]
        ws = [math.ldexp(x, -_RESCALE_BITS * (kmax - s)) for x, s in zip(wt[part], sc[part])]
        total = complex(math.fsum(rs), math.fsum(ims))
        err_abs = 2.0 * _EPS * math.fsum(ws) + _EPS * abs(total)
        rel = err_abs / abs(total) if total != 0 else math.inf
        value = ScaledComplex(total, kmax * _RESCALE_BITS * _LN2).normalize()
        out.append(_Part(value, rel))
    return out


def _series_mp(p: complex, q: complex, z: float, split_n, split_eps, prec: int):
    with mpmath.workprec(prec):
        eps_w = mpmath.mpf(2) ** (-prec)
        mp_p = mpmath.mpc(p)
        mp_q = mpmath.mpc(q)
        mp_z = mpmath.mpf(z)
        mp_eps = mpmath.mpc(split_eps)
        abs_p, abs_q = abs(p), abs(q)
        nparts = 1 if split_n is None else 2
        sums = [mpmath.mpc(0) for _ in range(nparts)]
        weights = [mpmath.mpf(0) for _ in range(nparts)]
        t = mpmath.mpc(1)
        biggest = mpmath.mpf(0)
        running = mpmath.mpc(0)
        limit = _max_terms(p, q, z)
        i = 0
        while True:
            part = 0 if (split_n is None or i <= split_n) else 1
            sums[part] += t
            at = abs(t)
            weights[part] += (i + 1) * at
            running += t
            if at > biggest:
                biggest = at
            if split_n is not None and i == split_n:
                factor = mp_z / ((mp_q + i) * (i + 1))
            elif split_n is None:
                factor = (mp_p + i) * mp_z / ((mp_q + i) * (i + 1))
            else:
                factor = ((i - split_n) + mp_eps) * mp_z / ((mp_q + i) * (i + 1))
            t_next = t * factor
            if t_next == 0:
                break
            rho = _ratio_bound(i + 1, z, abs_p, abs_q)
            if rho < 0.9:
                tail = abs(t_next) / (1 - mpmath.mpf(rho))
                floor = max(abs(running), eps_w * biggest)
                if tail <= eps_w * mpmath.mpf(2) ** -8 * floor:
                    break
            t = t_next
            i += 1
            if i > limit:
                raise KummerConvergenceError(
                    f"series did not terminate after {limit} terms"
                )
        out = []
        for part in range(nparts):
            total = sums[part]
            if total == 0:
                out.append(_Part(ScaledComplex(0j, 0.0), 0.0 if weights[part] == 0 else math.inf))
                continue
            mag = abs(total)
            rel = float((2 * eps_w * weights[part]) / mag + eps_w)
            expo = math.floor(float(mpmath.log(mag)))
            mant = complex(total / mpmath.exp(expo))
            out.append(_Part(ScaledComplex(mant, float(expo)).normalize(), rel))
        return out


_MAX_PREC = 4096


def _check_q(q: complex) -> None:
    if q.imag == 0 and q.real <= 0 and q.real == math.floor(q.real):
        raise PoleError(f"Kummer M undefined for q = {q!r}")


def _certified(p, q, z, split_n, split_eps, precision: Precision):
    if z < 0:
        raise ValueError("kummer_m requires real z >= 0")
    parts = _series_double(p, q, z, split_n, split_eps)
    if all(pt.err <= precision.kummer_rtol for pt in parts):
        return parts
    worst = max(pt.err for pt in parts)
    for prec in precision.kummer_escalation:
        parts = _series_mp(p, q, z, split_n, split_eps, prec)
        worst = max(pt.err for pt in parts)
        if worst <= precision.kummer_rtol:
            return parts
    # the bound tells how many digits cancelled; one last pass wide enough
    # for that covers sums that are tiny by structure (p beside a root)
    if precision.kummer_escalation and math.isfinite(worst) and worst > 0:
        extra = math.ceil(math.log2(worst / precision.kummer_rtol)) + 32
        prec = precision.kummer_escalation[-1] + extra
        if prec <= _MAX_PREC:
            parts = _series_mp(p, q, z, split_n, split_eps, prec)
            worst = max(pt.err for pt in parts)
            if worst <= precision.kummer_rtol:
                return parts
    # a sum that is still exactly zero at the widest precision is a true
    # cancellation (e.g. a terminating series at one of its roots); a relative
    # bound means nothing there
    if all(pt.err <= precision.kummer_rtol or pt.value.is_zero for pt in parts):
        return parts
    raise KummerConvergenceError(
        f"M({p}, {q}, {z}) not certified: estimated relative error {worst:.3g}"
    )


def kummer_m(p: complex, q: complex, z: float, precision: Precision = DEFAULT) -> ScaledComplex:
    """Kummer's function M(p, q, z) = sum (p)_n z^n / ((q)_n n!) for real z >= 0.

    Summed in double precision first; if the running error bound exceeds
    ``precision.kummer_rtol`` the sum is repeated at the extended working
    precisions listed in ``precision.kummer_escalation``.

    Raises:
        PoleError: q is a non-positive integer.
        KummerConvergenceError: accuracy could not be certified.
    """
    p, q, z = complex(p), complex(q), float(z)
    _check_q(q)
    return _certified(p, q, z, None, 0.0, precision)[0].value


def kummer_split(
    n: int, eps: complex, q: complex, z: float, precision: Precision = DEFAULT
) -> tuple[ScaledComplex, ScaledComplex]:
    """Split M(-n + eps, q, z) = P + eps * R without forming -n + eps.

    P holds the first n + 1 terms, R the remaining terms with the common
    factor ``eps`` divided out. Both are accurate even when ``eps`` is far
    below double resolution relative to n.
    """
    q, z = complex(q), float(z)
    _check_q(q)
    if n < 0:
        raise ValueError("split index must be non-negative")
    parts = _certified(complex(-n + eps), q, z, int(n), complex(eps), precision)
    return parts[0].value, parts[1].value


def kummer_m_batch(p, q, z: float, precision: Precision = DEFAULT) -> list[ScaledComplex]:
    """Vectorized :func:`kummer_m` for arrays of real p and q at one real z.

    The series is summed for all parameter pairs at once (Neumaier
    compensation, per-element power-of-two rescaling). Elements whose error
    bound misses ``precision.kummer_rtol`` are recomputed by :func:`kummer_m`.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    p, q = np.broadcast_arrays(p, q)
    z = float(z)
    if z < 0:
        raise ValueError("kummer_m_batch requires real z >= 0")
    if np.any((q <= 0) & (q == np.floor(q))):
        raise PoleError("Kummer M undefined for non-positive integer q")
    shape = p.shape
    p, q = p.ravel(), q.ravel()
    size = p.size
    t = np.ones(size)
    total = np.zeros(size)
    comp = np.zeros(size)
    weight = np.zeros(size)
    biggest = np.zeros(size)
    scale = np.zeros(size, dtype=np.int64)
    active = np.ones(size, dtype=bool)
    abs_p, abs_q = np.abs(p), np.abs(q)
    limit = _max_terms(float(abs_p.max(initial=0.0)), float(abs_q.max(initial=0.0)), z)
    shrink = 2.0**-_RESCALE_BITS
    i = 0
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        while active.any():
            idx = np.nonzero(active)[0]
            ti = t[idx]
            s_old = total[idx]
            s_new = s_old + ti
            comp[idx] += np.where(
                np.abs(s_old) >= np.abs(ti), (s_old - s_new) + ti, (ti - s_new) + s_old
            )
            total[idx] = s_new
            weight[idx] += (i + 1) * np.abs(ti)
            biggest[idx] = np.maximum(biggest[idx], np.abs(ti))

            t_next = ti * (p[idx] + i) * z / ((q[idx] + i) * (i + 1))
            done = t_next == 0
            if i + 1 > 0:
                denom = (i + 1 - abs_q[idx]) * (i + 2)
                rho = np.where(
                    i + 1 > abs_q[idx] + 1, z * (i + 1 + abs_p[idx]) / denom, np.inf
                )
                floor = np.maximum(np.abs(s_new + comp[idx]), _EPS * biggest[idx])
                tail = np.abs(t_next) / np.where(rho < 0.9, 1.0 - rho, np.nan)
                done |= (rho < 0.9) & (tail <= 2.0**-60 * floor)
            t[idx] = t_next
            active[idx[done]] = False

            big = active & (np.abs(t) > _RESCALE_TRIGGER)
            if big.any():
                t[big] *= shrink
                total[big] *= shrink
                comp[big] *= shrink
                weight[big] *= shrink
                biggest[big] *= shrink
                scale[big] += 1
            i += 1
            if i > limit:
                raise KummerConvergenceError(f"series did not terminate after {limit} terms")

    result = total + comp
    out: list[ScaledComplex] = []
    for j in range(size):
        r = float(result[j])
        err = (2.0 * _EPS * weight[j] + _EPS * abs(r)) / abs(r) if r != 0 else math.inf
        if err <= precision.kummer_rtol:
            out.append(
                ScaledComplex(complex(r), float(scale[j]) * _RESCALE_BITS * _LN2).normalize()
            )
        else:
            out.append(kummer_m(float(p[j]), float(q[j]), z, precision))
    return np.array(out, dtype=object).reshape(shape).tolist() if len(shape) > 1 else out
