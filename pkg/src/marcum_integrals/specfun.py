"""
Scalar special-function kernels.

Gamma family, Pochhammer symbol, Kummer's confluent hypergeometric
function, the exponentially scaled modified Bessel function, the Humbert
double series of the first and second kind and the inverse of the
regularized upper incomplete gamma function.

All kernels work on Python floats in double precision. Infinite series
share one truncation policy, :class:`SeriesControl`: a series stops once
three consecutive terms fall below ``rel_tol`` times the partial sum.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

__all__ = [
    "SeriesControl",
    "DEFAULT_CONTROL",
    "ln_gamma",
    "pochhammer",
    "upper_inc_gamma",
    "lower_inc_gamma",
    "reg_upper",
    "reg_lower",
    "inv_reg_upper_gamma",
    "kummer_1f1",
    "bessel_i_scaled",
    "humbert_phi1",
    "humbert_phi2",
]

_EPS = sys.float_info.epsilon
_TINY = sys.float_info.min / _EPS


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for infinite series.

    Parameters
    ----------
    rel_tol : float
        A term counts as negligible when ``|term| <= rel_tol * |partial sum|``.
    max_terms : int
        Hard cap on the number of terms; exceeding it raises
        :class:`ConvergenceError`.
    """

    rel_tol: float = 1e-14
    max_terms: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise DomainError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_CONTROL = SeriesControl()


class _Accumulator:
    # Neumaier's variant of Kahan summation.
    __slots__ = ("total", "comp", "abs_total")

    def __init__(self):
        self.total = 0.0
        self.comp = 0.0
        self.abs_total = 0.0

    def add(self, x):
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.comp += (self.total - t) + x
        else:
            self.comp += (x - t) + self.total
        self.total = t
        self.abs_total += abs(x)

    @property
    def value(self):
        return self.total + self.comp


class _Stopper:
    """Tracks the "three consecutive negligible terms" rule."""

    __slots__ = ("rel_tol", "run")

    def __init__(self, rel_tol):
        self.rel_tol = rel_tol
        self.run = 0

    def negligible(self, term, partial):
        if abs(term) <= self.rel_tol * abs(partial):
            self.run += 1
        else:
            self.run = 0
        return self.run >= 3


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------

def ln_gamma(x: float) -> float:
    """Natural logarithm of the Euler gamma function for ``x > 0``."""
    if not x > 0.0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def pochhammer(x: float, n: int) -> float:
    """Rising factorial ``(x)_n = x (x+1) ... (x+n-1)``; ``(x)_0 = 1``."""
    if n < 0 or int(n) != n:
        raise DomainError(f"pochhammer requires a nonnegative integer n, got {n}")
    result = 1.0
    for j in range(int(n)):
        result *= x + j
    return result


def _check_gamma_args(s, x):
    if not s > 0.0:
        raise DomainError(f"incomplete gamma requires s > 0, got {s}")
    if not x >= 0.0:
        raise DomainError(f"incomplete gamma requires x >= 0, got {x}")


def _lower_series(s, x, control):
    # sum_{n>=0} x^n / (s (s+1) ... (s+n)); gamma(s, x) = x^s e^-x * sum
    term = 1.0 / s
    acc = _Accumulator()
    acc.add(term)
    stop = _Stopper(control.rel_tol)
    for n in range(1, control.max_terms + 1):
        term *= x / (s + n)
        acc.add(term)
        if stop.negligible(term, acc.total):
            return acc.value
    raise ConvergenceError(f"incomplete gamma series did not converge (s={s}, x={x})")


def _upper_cf(s, x, control):
    # Modified Lentz evaluation of the continued fraction for Gamma(s, x) x^-s e^x.
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b if b != 0.0 else 1.0 / _TINY
    h = d
    tol = max(control.rel_tol, _EPS)
    for i in range(1, control.max_terms + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= tol:
            return h
    raise ConvergenceError(f"incomplete gamma continued fraction did not converge (s={s}, x={x})")


def _reg_pair(s, x, control=DEFAULT_CONTROL):
    """Return ``(P(s, x), Q(s, x))``, each accurate in its own small tail."""
    if x == 0.0:
        return 0.0, 1.0
    if math.isinf(x):
        return 1.0, 0.0
    log_front = s * math.log(x) - x - math.lgamma(s)
    if x < s + 1.0:
        p = math.exp(log_front) * _lower_series(s, x, control)
        p = min(p, 1.0)
        return p, 1.0 - p
    q = math.exp(log_front) * _upper_cf(s, x, control)
    q = min(q, 1.0)
    return 1.0 - q, q


def reg_upper(s: float, x: float, control: SeriesControl | None = None) -> float:
    """Regularized upper incomplete gamma ``Q(s, x) = Gamma(s, x) / Gamma(s)``."""
    _check_gamma_args(s, x)
    return _reg_pair(s, x, control or DEFAULT_CONTROL)[1]


def reg_lower(s: float, x: float, control: SeriesControl | None = None) -> float:
    """Regularized lower incomplete gamma ``P(s, x) = gamma(s, x) / Gamma(s)``."""
    _check_gamma_args(s, x)
    return _reg_pair(s, x, control or DEFAULT_CONTROL)[0]


def upper_inc_gamma(s: float, x: float, control: SeriesControl | None = None) -> float:
    """Upper incomplete gamma ``Gamma(s, x)``; ``Gamma(s, 0) = Gamma(s)``.

    The continued-fraction branch is evaluated without forming ``Gamma(s)``
    so that the result stays finite where only the tail is representable.
    """
    _check_gamma_args(s, x)
    control = control or DEFAULT_CONTROL
    if x == 0.0:
        return math.exp(math.lgamma(s))
    if math.isinf(x):
        return 0.0
    if x < s + 1.0:
        return math.exp(math.lgamma(s)) * _reg_pair(s, x, control)[1]
    return math.exp(s * math.log(x) - x) * _upper_cf(s, x, control)


def lower_inc_gamma(s: float, x: float, control: SeriesControl | None = None) -> float:
    """Lower incomplete gamma ``gamma(s, x)``."""
    _check_gamma_args(s, x)
    control = control or DEFAULT_CONTROL
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        return math.exp(s * math.log(x) - x) * _lower_series(s, x, control)
    return math.exp(math.lgamma(s)) * _reg_pair(s, x, control)[0]


def inv_reg_upper_gamma(s: float, q: float, tol: float = 1e-13) -> float:
    """Solve ``reg_upper(s, x) = q`` for ``x``.

    Newton steps on the bracketing interval, falling back to bisection
    whenever a step leaves the bracket.

    Parameters
    ----------
    s : float
        Shape, ``s > 0``.
    q : float
        Target upper-tail probability in ``(0, 1)``.
    tol : float
        Absolute tolerance on the attained probability.

    Returns
    -------
    float
        Nonnegative ``x`` with ``|reg_upper(s, x) - q| <= tol`` (or a bracket
        narrowed to machine resolution).
    """
    if not s > 0.0:
        raise DomainError(f"inv_reg_upper_gamma requires s > 0, got {s}")
    if not 0.0 < q < 1.0:
        raise DomainError(f"inv_reg_upper_gamma requires 0 < q < 1, got {q}")

    lgs = math.lgamma(s)
    lo, hi = 0.0, max(1.0, s)
    while reg_upper(s, hi) > q:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise ConvergenceError("could not bracket the inverse incomplete gamma")

    # small-x leading term P(s, x) ~ x^s / Gamma(s + 1)
    x = math.exp((math.log1p(-q) + math.lgamma(s + 1.0)) / s)
    if not lo < x < hi:
        x = 0.5 * (lo + hi)

    for _ in range(500):
        f = reg_upper(s, x) - q
        if abs(f) <= tol * 1e-3:
            return x
        if f > 0.0:
            lo = x
        else:
            hi = x
        density = math.exp((s - 1.0) * math.log(x) - x - lgs)
        step_ok = density > 0.0 and math.isfinite(density)
        x_new = x + f / density if step_ok else lo - 1.0
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if hi - lo <= 4.0 * _EPS * hi or x_new == x:
            return x_new
        x = x_new
    raise ConvergenceError(f"inv_reg_upper_gamma did not converge (s={s}, q={q})")


# ---------------------------------------------------------------------------
# Confluent hypergeometric series
# ---------------------------------------------------------------------------

def _kummer_positive(a, c, z, control):
    # Raw series; returns (value, error bound).
    if z == 0.0:
        return 1.0, 0.0
    term = 1.0
    acc = _Accumulator()
    acc.add(term)
    stop = _Stopper(control.rel_tol)
    for n in range(control.max_terms):
        term *= (a + n) * z / ((c + n) * (n + 1))
        acc.add(term)
        if stop.negligible(term, acc.total):
            value = acc.value
            return value, control.rel_tol * abs(value) + _EPS * acc.abs_total
    raise ConvergenceError(f"1F1 series did not converge (a={a}, c={c}, z={z})")


def _check_c(c):
    if c <= 0.0 and c == math.floor(c):
        raise DomainError(f"1F1 undefined for nonpositive integer c={c}")


def _kummer(a, c, z, control):
    _check_c(c)
    if z < 0.0:
        # Kummer's transformation keeps every term positive for a < c
        value, err = _kummer_positive(c - a, c, -z, control)
        scale = math.exp(z)
        return scale * value, scale * err
    return _kummer_positive(a, c, z, control)


def kummer_1f1(a: float, c: float, z: float, control: SeriesControl | None = None) -> float:
    """Kummer's confluent hypergeometric function ``1F1(a; c; z)``.

    Negative ``z`` goes through ``1F1(a; c; z) = e^z 1F1(c - a; c; -z)``.
    """
    return _kummer(a, c, z, control or DEFAULT_CONTROL)[0]


# ---------------------------------------------------------------------------
# Modified Bessel function
# ---------------------------------------------------------------------------

def _bessel_i_scaled_series(nu, x):
    half = 0.5 * x
    term = math.exp(nu * math.log(half) - math.lgamma(nu + 1.0) - x)
    if term == 0.0:
        return 0.0
    acc = _Accumulator()
    acc.add(term)
    q = half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        acc.add(term)
        if term <= _EPS * 0.25 * acc.total and k > half:
            return acc.value
        if k > 100_000:
            raise ConvergenceError(f"Bessel series did not converge (nu={nu}, x={x})")


def _bessel_i_scaled_asymptotic(nu, x):
    # Hankel expansion e^-x I_nu(x) ~ (2 pi x)^-1/2 sum_k (-1)^k a_k(nu) / x^k
    mu = 4.0 * nu * nu
    term = 1.0
    total = 1.0
    for k in range(1, 200):
        nxt = -term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(nxt) > abs(term):
            return None
        term = nxt
        total += term
        if abs(term) <= _EPS * 0.25 * abs(total):
            return total / math.sqrt(2.0 * math.pi * x)
    return None


def bessel_i_scaled(nu: float, x: float) -> float:
    """Exponentially scaled modified Bessel function ``e^{-x} I_nu(x)``.

    Power series for moderate ``x`` and the large-argument Hankel expansion
    once it converges to full precision. Orders ``nu > -1`` are accepted.
    """
    if not nu > -1.0:
        raise DomainError(f"bessel_i_scaled requires nu > -1, got {nu}")
    if not x >= 0.0:
        raise DomainError(f"bessel_i_scaled requires x >= 0, got {x}")
    if x == 0.0:
        if nu == 0.0:
            return 1.0
        if nu > 0.0:
            return 0.0
        return math.inf
    if x > max(30.0, nu * nu):
        value = _bessel_i_scaled_asymptotic(nu, x)
        if value is not None:
            return value
    return _bessel_i_scaled_series(nu, x)


# ---------------------------------------------------------------------------
# Humbert double series
# ---------------------------------------------------------------------------

def _humbert_phi1(alpha, beta, gamma_c, x, y, control):
    if not abs(x) < 1.0:
        raise DomainError(f"Phi1 series requires |x| < 1, got x={x}")
    if gamma_c <= 0.0:
        raise DomainError(f"Phi1 requires gamma > 0, got {gamma_c}")
    coef = 1.0
    acc = _Accumulator()
    err = 0.0
    stop = _Stopper(control.rel_tol)
    for j in range(control.max_terms):
        f, f_err = _kummer(alpha + j, gamma_c + j, y, control)
        term = coef * f
        acc.add(term)
        err += abs(coef) * f_err
        if stop.negligible(term, acc.total):
            value = acc.value
            return value, err + control.rel_tol * abs(value) + _EPS * acc.abs_total
        coef *= (alpha + j) * (beta + j) * x / ((gamma_c + j) * (j + 1))
    raise ConvergenceError(f"Phi1 series did not converge (x={x}, y={y})")


def humbert_phi1(alpha: float, beta: float, gamma_c: float, x: float, y: float,
                 control: SeriesControl | None = None) -> float:
    """Humbert function ``Phi1(alpha, beta; gamma; x, y)`` for ``|x| < 1``.

    The double series is summed as a single series over the power of ``x``::

        sum_j (alpha)_j (beta)_j x^j / ((gamma)_j j!) * 1F1(alpha + j; gamma + j; y)
    """
    return _humbert_phi1(alpha, beta, gamma_c, x, y, control or DEFAULT_CONTROL)[0]


def _humbert_phi2(beta1, beta2, gamma_c, x, y, control):
    if gamma_c <= 0.0:
        raise DomainError(f"Phi2 requires gamma > 0, got {gamma_c}")
    coef = 1.0
    acc = _Accumulator()
    err = 0.0
    stop = _Stopper(control.rel_tol)
    for j in range(control.max_terms):
        f, f_err = _kummer(beta2, gamma_c + j, y, control)
        term = coef * f
        acc.add(term)
        err += abs(coef) * f_err
        if stop.negligible(term, acc.total):
            value = acc.value
            return value, err + control.rel_tol * abs(value) + _EPS * acc.abs_total
        coef *= (beta1 + j) * x / ((gamma_c + j) * (j + 1))
    raise ConvergenceError(f"Phi2 series did not converge (x={x}, y={y})")


def humbert_phi2(beta1: float, beta2: float, gamma_c: float, x: float, y: float,
                 control: SeriesControl | None = None) -> float:
    """Humbert function ``Phi2(beta1, beta2; gamma; x, y)``, entire in ``x, y``.

    Summed as ``sum_j (beta1)_j x^j / ((gamma)_j j!) * 1F1(beta2; gamma + j; y)``.
    """
    return _humbert_phi2(beta1, beta2, gamma_c, x, y, control or DEFAULT_CONTROL)[0]
