"""
Generalized Marcum Q-function of real order.

``Q_m(a, b)`` is evaluated as a Poisson mixture of regularized incomplete
gamma functions::

    Q_m(a, b) = sum_n  e^{-a^2/2} (a^2/2)^n / n!  *  Q(m + n, b^2/2)

Summation is anchored at the modal Poisson index and expands in both
directions. Neighbouring incomplete gamma values are obtained from the
recurrence ``Q(s + 1, x) = Q(s, x) + x^s e^{-x} / Gamma(s + 1)``, which needs
a single series or continued-fraction evaluation per call. When the result
is close to one the complementary mixture of ``P = 1 - Q`` is summed instead
so that both tails keep full relative accuracy.
"""
from __future__ import annotations

import math

from .errors import ConvergenceError, DomainError
from .specfun import DEFAULT_CONTROL, SeriesControl, _Accumulator, _reg_pair, bessel_i_scaled

__all__ = ["marcum_q", "marcum_q_zero_a", "marcum_q_bessel_oracle"]

_CLAMP_LIMIT = 1e-12


def _check(m, a, b):
    if not m > 0.0:
        raise DomainError(f"Marcum Q requires order m > 0, got {m}")
    if not a >= 0.0:
        raise DomainError(f"Marcum Q requires a >= 0, got {a}")
    if not b >= 0.0:
        raise DomainError(f"Marcum Q requires b >= 0, got {b}")


def _clamp(value):
    if value < -_CLAMP_LIMIT or value > 1.0 + _CLAMP_LIMIT:
        raise ConvergenceError(f"Marcum Q left [0, 1] by more than {_CLAMP_LIMIT}: {value}")
    return min(max(value, 0.0), 1.0)


def marcum_q(m: float, a: float, b: float, control: SeriesControl | None = None) -> float:
    """Generalized Marcum Q-function ``Q_m(a, b)`` for real ``m > 0``.

    Parameters
    ----------
    m : float
        Order, ``m > 0``.
    a, b : float
        Noncentrality and threshold arguments, both nonnegative.
    control : SeriesControl, optional
        Relative truncation tolerance and term budget for the Poisson sum.

    Returns
    -------
    float
        Value in ``[0, 1]``.
    """
    _check(m, a, b)
    control = control or DEFAULT_CONTROL
    x = 0.5 * b * b
    lam = 0.5 * a * a
    if x == 0.0:
        return 1.0
    if lam == 0.0:
        return _reg_pair(m, x, control)[1]

    # sum the smaller of the two complementary mixtures
    upper_side = b * b >= a * a + 2.0 * m
    n0 = int(math.floor(lam))
    s0 = m + n0
    p0, q0 = _reg_pair(s0, x, control)
    r0 = q0 if upper_side else p0

    log_lam = math.log(lam)
    log_x = math.log(x)

    def log_weight(n):
        return n * log_lam - lam - math.lgamma(n + 1.0)

    def increment(s):
        # x^s e^{-x} / Gamma(s + 1)
        return math.exp(s * log_x - x - math.lgamma(s + 1.0))

    acc = _Accumulator()
    acc.add(math.exp(log_weight(n0)) * r0)
    rel_tol = control.rel_tol
    used = 1

    # upward: n > n0
    r = r0
    n = n0
    while True:
        s = m + n
        r = r + increment(s) if upper_side else max(r - increment(s), 0.0)
        n += 1
        w = math.exp(log_weight(n))
        acc.add(w * r)
        used += 1
        ratio = lam / (n + 2.0)
        if ratio < 1.0:
            # sum_{j > n} w_j <= w_{n+1} / (1 - lam / (n + 2))
            tail = w * lam / (n + 1.0) / (1.0 - ratio)
            bound = tail * (1.0 if upper_side else r)
            if bound <= rel_tol * abs(acc.total) or bound == 0.0:
                break
        if used > control.max_terms:
            raise ConvergenceError(f"Marcum Q sum did not converge (m={m}, a={a}, b={b})")

    # downward: n < n0
    r = r0
    n = n0
    while n > 0:
        s = m + n
        r = max(r - increment(s - 1.0), 0.0) if upper_side else r + increment(s - 1.0)
        n -= 1
        w = math.exp(log_weight(n))
        acc.add(w * r)
        used += 1
        if n > 0 and n - 1 < lam:
            # sum_{j < n} w_j <= w_{n-1} / (1 - (n - 1) / lam)
            tail = w * (n / lam) / (1.0 - (n - 1.0) / lam)
            bound = tail * (r if upper_side else 1.0)
            if bound <= rel_tol * abs(acc.total) or bound == 0.0:
                break
        if used > control.max_terms:
            raise ConvergenceError(f"Marcum Q sum did not converge (m={m}, a={a}, b={b})")

    total = acc.value
    return _clamp(total if upper_side else 1.0 - total)


def marcum_q_zero_a(m: int, b: float) -> float:
    """Finite-sum form ``Q_m(0, b) = e^{-b^2/2} sum_{l<m} (b^2/2)^l / l!``.

    Only defined for integer orders.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"marcum_q_zero_a requires an integer order m >= 1, got {m}")
    if not b >= 0.0:
        raise DomainError(f"marcum_q_zero_a requires b >= 0, got {b}")
    x = 0.5 * b * b
    term = 1.0
    acc = _Accumulator()
    acc.add(term)
    for l in range(1, int(m)):
        term *= x / l
        acc.add(term)
    return math.exp(-x) * acc.value


def marcum_q_bessel_oracle(m: float, a: float, b: float, tol: float = 1e-12) -> float:
    """Marcum Q from its Bessel-integral definition, by adaptive quadrature.

    Integrates ``x (x/a)^{m-1} exp(-(x^2 + a^2)/2) I_{m-1}(a x)`` over
    ``[b, inf)``. The exponential and the Bessel factor are merged into
    ``exp(-(x - a)^2 / 2) * e^{-ax} I_{m-1}(ax)`` to stay finite.

    Parameters
    ----------
    m : float
        Order, ``m > 0``.
    a : float
        Noncentrality, strictly positive for this representation.
    b : float
        Lower integration limit, ``b >= 0``.
    tol : float
        Absolute quadrature tolerance.
    """
    # imported here: oracle depends on this module for its own integrands
    from .oracle import adaptive_gk15

    _check(m, a, b)
    if not a > 0.0:
        raise DomainError("the Bessel-integral representation needs a > 0")
    nu = m - 1.0

    def integrand(x):
        if x == 0.0:
            return 0.0
        log_front = math.log(x) + nu * (math.log(x) - math.log(a)) - 0.5 * (x - a) ** 2
        return math.exp(log_front) * bessel_i_scaled(nu, a * x)

    # integrand carries a Gaussian factor centred at a with unit width
    hi = max(a, b) + 40.0 + math.sqrt(max(m, 1.0)) * 4.0
    edges = [b]
    for mark in (a - 8.0, a - 2.0, a, a + 2.0, a + 8.0):
        if edges[-1] < mark < hi:
            edges.append(mark)
    edges.append(hi)
    result = adaptive_gk15(integrand, edges, tol=tol)
    return _clamp(result.value)
