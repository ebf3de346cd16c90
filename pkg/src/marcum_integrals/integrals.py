"""
Closed-form evaluation of the Marcum-Q integrals

    G(k, m, a, b, p) = int_0^inf x^{k-1} Q_m(a, b sqrt(x)) e^{-px} dx
    F(k, m, a, b, p) = int_0^inf x^{k-1} Q_m(a sqrt(x), b) e^{-px} dx

Each evaluator is valid on part of the parameter space:

============  ======  ===============================================
evaluator     family  validity
============  ======  ===============================================
Thm1          G       integer m, real k (Humbert Phi1 series)
Thm2          G       integer k, real m (finite 1F1 sum)
Eq15          F       integer k, real m (finite 1F1 sum)
Thm3          F       integer m, real k (Humbert Phi2 series)
Lemma1        F       k = 1
Lemma2_G/F    G/F     a = 0, integer m
Lemma3        G/F     b = 0
============  ======  ===============================================

:func:`eval_g` and :func:`eval_f` pick the most robust valid evaluator and
fall back to quadrature when none applies or the chosen one cancels badly.
"""
from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError
from .marcum import marcum_q_zero_a
from .oracle import oracle_f, oracle_g
from .params import Family, IntegralSpec
from .specfun import (
    SeriesControl,
    _Accumulator,
    _humbert_phi1,
    _humbert_phi2,
    _kummer,
    _lower_series,
    reg_lower,
    reg_upper,
)

__all__ = [
    "Method",
    "EvalOutcome",
    "IntegralityPolicy",
    "eval_g_thm1",
    "eval_g_thm2",
    "eval_f_eq15",
    "eval_f_thm3",
    "eval_f_k1",
    "eval_g_a0",
    "eval_f_a0",
    "eval_b0",
    "eval_g",
    "eval_f",
    "evaluate",
]

_EPS = sys.float_info.epsilon

# The subtractive forms lose digits against Gamma(k)/p^k, so their series
# are summed until the terms no longer move the partial sum.
_CONTROL = SeriesControl(rel_tol=1e-16, max_terms=50_000)

# Beyond this condition number the subtractive forms hand over to quadrature.
# Rounding then costs at most about 1e4 * eps ~ 2e-12 relative, which keeps
# dispatcher results consistent to 1e-10 under rescaling.
_MAX_CANCELLATION = 1e4


class Method(str, enum.Enum):
    THM1 = "Thm1"
    THM2 = "Thm2"
    EQ15 = "Eq15"
    THM3 = "Thm3"
    LEMMA1 = "Lemma1"
    LEMMA2_G = "Lemma2_G"
    LEMMA2_F = "Lemma2_F"
    LEMMA3 = "Lemma3"
    ORACLE = "Oracle"


@dataclass(frozen=True)
class IntegralityPolicy:
    """Floats within ``tol`` of an integer are treated as that integer."""

    tol: float = 1e-9

    def __post_init__(self):
        if not 0.0 < self.tol < 0.5:
            raise DomainError(f"integrality tolerance must lie in (0, 0.5), got {self.tol}")

    def is_integer(self, x):
        return abs(x - round(x)) <= self.tol

    def as_integer(self, x, name):
        if not self.is_integer(x) or round(x) < 1:
            raise DomainError(f"{name} must be a positive integer here, got {x}")
        return int(round(x))


DEFAULT_POLICY = IntegralityPolicy()


@dataclass(frozen=True)
class EvalOutcome:
    """Value of an integral and how it was obtained.

    ``fallback_from`` names the closed form that was attempted first when
    the dispatcher had to reroute to quadrature.
    """

    value: float
    method: Method
    err_estimate: float
    fallback_from: Method | None = None


@dataclass(frozen=True)
class _Partial:
    value: float
    err: float
    condition: float  # (|lead| + |subtracted|) / |value|


def _lead(k, p):
    return math.exp(math.lgamma(k) - k * math.log(p))


def _subtractive(lead, sub, sub_err):
    value = lead - sub
    magnitude = abs(lead) + abs(sub)
    err = sub_err + _EPS * magnitude
    condition = magnitude / abs(value) if value != 0.0 else math.inf
    return _Partial(value, err, condition)


def _check_common(k, a, b, p):
    if not k > 0.0:
        raise DomainError(f"k must be positive, got {k}")
    if not p > 0.0:
        raise DomainError(f"p must be positive, got {p}")
    if not (a >= 0.0 and b >= 0.0):
        raise DomainError(f"a and b must be nonnegative, got a={a}, b={b}")


# ---------------------------------------------------------------------------
# G family
# ---------------------------------------------------------------------------

def _g_thm1(k, m, a, b, p, control):
    s = b * b + 2.0 * p
    x = b * b / s
    y = a * a * b * b / (2.0 * s)
    phi, phi_err = _humbert_phi1(k, 1.0, 1.0, x, y, control)

    # the first m terms of the Phi1(k, 1, 1) single series
    finite = _Accumulator()
    finite_err = 0.0
    coef = 1.0
    for n in range(m):
        f, f_err = _kummer(k + n, n + 1.0, y, control)
        finite.add(coef * f)
        finite_err += coef * f_err
        coef *= (k + n) * x / (n + 1.0)
    scale = math.exp(k * math.log(2.0 / s) - 0.5 * a * a + math.lgamma(k))
    bracket = phi - finite.value
    return _subtractive(_lead(k, p), scale * bracket, scale * (phi_err + finite_err))


def eval_g_thm1(k: float, m: float, a: float, b: float, p: float,
                policy: IntegralityPolicy | None = None,
                control: SeriesControl | None = None) -> float:
    """G for integer Marcum order ``m`` and real ``k``.

    ``Gamma(k)/p^k - (2/(b^2+2p))^k e^{-a^2/2} Gamma(k) [Phi1(k, 1, 1; x, y)
    - sum_{n<m} (k)_n x^n / n! 1F1(k+n; n+1; y)]`` with ``x = b^2/(b^2+2p)``
    and ``y = a^2 b^2 / (2b^2 + 4p)``.
    """
    _check_common(k, a, b, p)
    m = (policy or DEFAULT_POLICY).as_integer(m, "m")
    return _g_thm1(k, m, a, b, p, control or _CONTROL).value


def _g_thm2(k, m, a, b, p, control):
    lead = _lead(k, p)
    if b == 0.0:
        return _Partial(lead, _EPS * lead, 1.0)
    s = b * b + 2.0 * p
    y = a * a * b * b / (2.0 * s)
    r = 2.0 * p / s
    acc = _Accumulator()
    err = 0.0
    coef = 1.0
    for l in range(k):
        f, f_err = _kummer(l + m, m, y, control)
        acc.add(coef * f)
        err += coef * f_err
        coef *= (m + l) * r / (l + 1.0)
    scale = math.exp(math.lgamma(k) + 2.0 * m * math.log(b) - 0.5 * a * a
                     - k * math.log(p) - m * math.log(s))
    return _subtractive(lead, scale * acc.value, scale * err)


def eval_g_thm2(k: float, m: float, a: float, b: float, p: float,
                policy: IntegralityPolicy | None = None,
                control: SeriesControl | None = None) -> float:
    """G for integer ``k`` and real Marcum order ``m``, as a finite 1F1 sum."""
    _check_common(k, a, b, p)
    if not m > 0.0:
        raise DomainError(f"m must be positive, got {m}")
    k = (policy or DEFAULT_POLICY).as_integer(k, "k")
    return _g_thm2(k, m, a, b, p, control or _CONTROL).value


def _g_a0(k, m, b, p):
    s = b * b + 2.0 * p
    x = b * b / s
    acc = _Accumulator()
    coef = 1.0
    for l in range(m):
        acc.add(coef)
        coef *= (k + l) * x / (l + 1.0)
    value = math.exp(k * math.log(2.0 / s) + math.lgamma(k)) * acc.value
    return _Partial(value, _EPS * m * value, 1.0)


def eval_g_a0(k: float, m: float, b: float, p: float,
              policy: IntegralityPolicy | None = None) -> float:
    """G at ``a = 0``: ``(2/(b^2+2p))^k sum_{l<m} b^{2l} Gamma(k+l) / (l! (b^2+2p)^l)``."""
    _check_common(k, 0.0, b, p)
    m = (policy or DEFAULT_POLICY).as_integer(m, "m")
    return _g_a0(k, m, b, p).value


# ---------------------------------------------------------------------------
# F family
# ---------------------------------------------------------------------------

def _f_eq15(k, m, a, b, p, control):
    lead = _lead(k, p)
    first = lead * reg_upper(m, 0.5 * b * b)
    if a == 0.0 or b == 0.0:
        return _Partial(first, 2.0 * _EPS * first, 1.0)
    t = a * a + 2.0 * p
    y = a * a * b * b / (2.0 * t)
    r = 2.0 * p / t
    acc = _Accumulator()
    err = 0.0
    coef = 1.0
    for l in range(k):
        f, f_err = _kummer(l + 1.0, m + 1.0, y, control)
        acc.add(coef * f)
        err += coef * f_err
        coef *= r
    log_scale = (2.0 * math.log(a) + 2.0 * m * math.log(b) + math.lgamma(k) - 0.5 * b * b
                 - math.lgamma(m + 1.0) - k * math.log(p) - m * math.log(2.0) - math.log(t))
    scale = math.exp(log_scale)
    second = scale * acc.value
    value = first + second
    return _Partial(value, scale * err + 4.0 * _EPS * value, 1.0)


def eval_f_eq15(k: float, m: float, a: float, b: float, p: float,
                policy: IntegralityPolicy | None = None,
                control: SeriesControl | None = None) -> float:
    """F for integer ``k`` and real Marcum order ``m``; all terms are positive."""
    _check_common(k, a, b, p)
    if not m > 0.0:
        raise DomainError(f"m must be positive, got {m}")
    k = (policy or DEFAULT_POLICY).as_integer(k, "k")
    return _f_eq15(k, m, a, b, p, control or _CONTROL).value


def _f_thm3(k, m, a, b, p, control):
    t = a * a + 2.0 * p
    y = a * a * b * b / (2.0 * t)
    xb = 0.5 * b * b
    phi, phi_err = _humbert_phi2(1.0, k, 1.0, xb, y, control)

    # the first m terms of the Phi2(1, k, 1) single series
    finite = _Accumulator()
    finite_err = 0.0
    coef = 1.0
    for n in range(m):
        f, f_err = _kummer(k, n + 1.0, y, control)
        finite.add(coef * f)
        finite_err += coef * f_err
        coef *= xb / (n + 1.0)
    scale = math.exp(math.lgamma(k) + k * math.log(2.0 / t) - xb)
    bracket = phi - finite.value
    return _subtractive(_lead(k, p), scale * bracket, scale * (phi_err + finite_err))


def eval_f_thm3(k: float, m: float, a: float, b: float, p: float,
                policy: IntegralityPolicy | None = None,
                control: SeriesControl | None = None) -> float:
    """F for integer Marcum order ``m`` and real ``k``.

    ``Gamma(k)/p^k - 2^k Gamma(k) e^{-b^2/2} (a^2+2p)^{-k} [Phi2(1, k, 1; b^2/2, y)
    - sum_{n<m} b^{2n} / (n! 2^n) 1F1(k; n+1; y)]`` with ``y = a^2 b^2 / (2a^2 + 4p)``.
    """
    _check_common(k, a, b, p)
    m = (policy or DEFAULT_POLICY).as_integer(m, "m")
    return _f_thm3(k, m, a, b, p, control or _CONTROL).value


def _f_k1(m, a, b, p, control):
    first = reg_upper(m, 0.5 * b * b) / p
    if a == 0.0 or b == 0.0:
        # gamma(m, y) ~ y^m / m cancels a^{2m}, leaving a factor a^2 -> 0
        return _Partial(first, 2.0 * _EPS * first, 1.0)
    t = a * a + 2.0 * p
    y = a * a * b * b / (2.0 * t)
    if y < m + 1.0:
        # gamma(m, y) = y^m e^{-y} sum_n y^n / (m)_{n+1}; the powers of a and t cancel
        log_front = (2.0 * math.log(a) + m * math.log(0.5 * b * b) - math.log(t)
                     - 0.5 * b * b - math.log(p) - math.lgamma(m))
        second = math.exp(log_front) * _lower_series(m, y, control)
    else:
        log_front = (2.0 * math.log(a) - p * b * b / t - math.log(p) - 2.0 * m * math.log(a)
                     + (m - 1.0) * math.log(t))
        second = math.exp(log_front) * reg_lower(m, y, control)
    value = first + second
    return _Partial(value, 4.0 * _EPS * value, 1.0)


def eval_f_k1(m: float, a: float, b: float, p: float,
              control: SeriesControl | None = None) -> float:
    """F at ``k = 1`` for any real order ``m``, via incomplete gamma functions.

    At ``a = 0`` the second term is taken at its limit, zero.
    """
    _check_common(1.0, a, b, p)
    if not m > 0.0:
        raise DomainError(f"m must be positive, got {m}")
    return _f_k1(m, a, b, p, control or _CONTROL).value


def _f_a0(k, m, b, p):
    value = _lead(k, p) * marcum_q_zero_a(m, b)
    return _Partial(value, _EPS * (m + 2) * value, 1.0)


def eval_f_a0(k: float, m: float, b: float, p: float,
              policy: IntegralityPolicy | None = None) -> float:
    """F at ``a = 0``: ``Gamma(k)/p^k e^{-b^2/2} sum_{l<m} b^{2l} / (l! 2^l)``."""
    _check_common(k, 0.0, b, p)
    m = (policy or DEFAULT_POLICY).as_integer(m, "m")
    return _f_a0(k, m, b, p).value


def eval_b0(k: float, p: float) -> float:
    """G and F at ``b = 0``, where ``Q_m(., 0) = 1``: ``Gamma(k) / p^k``."""
    _check_common(k, 0.0, 0.0, p)
    return _lead(k, p)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

_G_METHODS = {Method.THM1, Method.THM2, Method.LEMMA2_G, Method.LEMMA3, Method.ORACLE}
_F_METHODS = {Method.EQ15, Method.THM3, Method.LEMMA1, Method.LEMMA2_F, Method.LEMMA3,
              Method.ORACLE}
_SUBTRACTIVE = {Method.THM1, Method.THM2, Method.THM3}


def _route(spec, policy):
    """Preferred closed form for ``spec``, or ``Method.ORACLE``."""
    k, m, a, b, p = spec.args
    k_int = policy.is_integer(k)
    m_int = policy.is_integer(m)
    if b == 0.0:
        return Method.LEMMA3
    if spec.family is Family.G:
        if a == 0.0 and m_int:
            return Method.LEMMA2_G
        if k_int:
            return Method.THM2
        if m_int:
            return Method.THM1
        return Method.ORACLE
    if a == 0.0 and m_int:
        return Method.LEMMA2_F
    if k_int and round(k) == 1:
        return Method.LEMMA1
    if k_int:
        return Method.EQ15
    if m_int:
        return Method.THM3
    return Method.ORACLE


def _closed_form(method, spec, policy, control):
    k, m, a, b, p = spec.args
    if method is Method.LEMMA3:
        if b != 0.0:
            raise DomainError("Lemma3 needs b = 0")
        lead = _lead(k, p)
        return _Partial(lead, _EPS * lead, 1.0)
    if method is Method.LEMMA2_G:
        if a != 0.0:
            raise DomainError("Lemma2_G needs a = 0")
        return _g_a0(k, policy.as_integer(m, "m"), b, p)
    if method is Method.LEMMA2_F:
        if a != 0.0:
            raise DomainError("Lemma2_F needs a = 0")
        return _f_a0(k, policy.as_integer(m, "m"), b, p)
    if method is Method.LEMMA1:
        if not (policy.is_integer(k) and round(k) == 1):
            raise DomainError("Lemma1 needs k = 1")
        return _f_k1(m, a, b, p, control)
    if method is Method.THM1:
        return _g_thm1(k, policy.as_integer(m, "m"), a, b, p, control)
    if method is Method.THM2:
        return _g_thm2(policy.as_integer(k, "k"), m, a, b, p, control)
    if method is Method.EQ15:
        return _f_eq15(policy.as_integer(k, "k"), m, a, b, p, control)
    if method is Method.THM3:
        return _f_thm3(k, policy.as_integer(m, "m"), a, b, p, control)
    raise DomainError(f"not a closed-form method: {method}")


def _run_oracle(spec, rel_tol, fallback_from=None):
    quad = oracle_g(spec, rel_tol=rel_tol) if spec.family is Family.G else oracle_f(
        spec, rel_tol=rel_tol)
    return EvalOutcome(quad.value, Method.ORACLE, quad.abs_err_estimate, fallback_from)


def evaluate(spec: IntegralSpec, policy: IntegralityPolicy | None = None,
             method: Method | str = "auto", control: SeriesControl | None = None,
             oracle_rel_tol: float = 1e-12) -> EvalOutcome:
    """Evaluate ``spec`` by closed form where one is valid, else by quadrature.

    Parameters
    ----------
    spec : IntegralSpec
        Family and parameters.
    policy : IntegralityPolicy, optional
        Rule deciding when a float parameter counts as an integer.
    method : Method or str
        ``"auto"`` picks the route: ``b = 0`` -> Lemma3; ``a = 0`` with integer
        ``m`` -> Lemma2; ``k = 1`` (F only) -> Lemma1; integer ``k`` -> Thm2/Eq15;
        integer ``m`` -> Thm1/Thm3; otherwise quadrature. Naming a method forces
        it and raises :class:`DomainError` outside its validity region.
    control : SeriesControl, optional
        Series truncation policy for the closed forms.
    oracle_rel_tol : float
        Relative tolerance of the quadrature path.

    Returns
    -------
    EvalOutcome
    """
    policy = policy or DEFAULT_POLICY
    control = control or _CONTROL
    allowed = _G_METHODS if spec.family is Family.G else _F_METHODS

    if method != "auto":
        method = Method(method) if not isinstance(method, Method) else method
        if method not in allowed:
            raise DomainError(f"{method.value} does not evaluate family {spec.family.value}")
        if method is Method.ORACLE:
            return _run_oracle(spec, oracle_rel_tol)
        part = _closed_form(method, spec, policy, control)
        return EvalOutcome(part.value, method, part.err)

    chosen = _route(spec, policy)
    if chosen is Method.ORACLE:
        return _run_oracle(spec, oracle_rel_tol)
    try:
        part = _closed_form(chosen, spec, policy, control)
    except ConvergenceError:
        return _run_oracle(spec, oracle_rel_tol, fallback_from=chosen)
    if chosen in _SUBTRACTIVE and not (part.value > 0.0 and part.condition <= _MAX_CANCELLATION):
        return _run_oracle(spec, oracle_rel_tol, fallback_from=chosen)
    return EvalOutcome(part.value, chosen, part.err)


def eval_g(spec: IntegralSpec, policy: IntegralityPolicy | None = None,
           method: Method | str = "auto", **kwargs) -> EvalOutcome:
    """Evaluate a G-family spec; see :func:`evaluate`."""
    if spec.family is not Family.G:
        raise DomainError("eval_g needs a G-family spec")
    return evaluate(spec, policy, method, **kwargs)


def eval_f(spec: IntegralSpec, policy: IntegralityPolicy | None = None,
           method: Method | str = "auto", **kwargs) -> EvalOutcome:
    """Evaluate an F-family spec; see :func:`evaluate`."""
    if spec.family is not Family.F:
        raise DomainError("eval_f needs an F-family spec")
    return evaluate(spec, policy, method, **kwargs)
