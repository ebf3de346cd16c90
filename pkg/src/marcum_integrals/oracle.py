"""
Quadrature ground truth for the two integral families.

The defining integrals are evaluated directly with adaptive 15-point
Gauss-Kronrod panels. The semi-infinite range is cut at a point ``X``
chosen from the analytic tail bound ``C Gamma(k, pX) / p^k``, which holds
because ``0 <= Q_m <= 1``. An integrable endpoint singularity ``x^{k-1}``
with ``k < 1`` is removed on the first panel by the substitution
``t = x^k``.

Refinement is global: the panel with the largest error estimate is
bisected next, ties broken by creation order, so results and error
estimates are reproducible bit for bit.
"""
from __future__ import annotations

import heapq
import math
import sys
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, QuadratureError
from .marcum import marcum_q
from .params import Family, IntegralSpec
from .specfun import inv_reg_upper_gamma, upper_inc_gamma

__all__ = [
    "QuadratureResult",
    "adaptive_gk15",
    "integrate_semi_infinite",
    "oracle_g",
    "oracle_f",
    "oracle",
]

_EPS = sys.float_info.epsilon
_UFLOW = sys.float_info.min
# below this relative error estimate further bisection only chases rounding noise
_ROUNDOFF = 100.0 * _EPS

# Kronrod abscissae on [0, 1); odd indices are the 7-point Gauss nodes.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_err_estimate: float
    evaluations: int
    truncation_point: float


def _gk15(f, lo, hi):
    """One Gauss-Kronrod panel; returns (integral, error estimate)."""
    centr = 0.5 * (lo + hi)
    hlgth = 0.5 * (hi - lo)
    fc = f(centr)
    resg = fc * _WG[3]
    resk = fc * _WGK[7]
    resabs = abs(resk)
    fv1 = [0.0] * 7
    fv2 = [0.0] * 7
    for j in range(7):
        dx = hlgth * _XGK[j]
        f1 = f(centr - dx)
        f2 = f(centr + dx)
        fv1[j] = f1
        fv2[j] = f2
        resk += _WGK[j] * (f1 + f2)
        resabs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            resg += _WG[j // 2] * (f1 + f2)
    reskh = 0.5 * resk
    resasc = _WGK[7] * abs(fc - reskh)
    for j in range(7):
        resasc += _WGK[j] * (abs(fv1[j] - reskh) + abs(fv2[j] - reskh))
    result = resk * hlgth
    resabs *= abs(hlgth)
    resasc *= abs(hlgth)
    abserr = abs((resk - resg) * hlgth)
    if resasc != 0.0 and abserr != 0.0:
        abserr = resasc * min(1.0, (200.0 * abserr / resasc) ** 1.5)
    if resabs > _UFLOW / (50.0 * _EPS):
        abserr = max(_EPS * 50.0 * resabs, abserr)
    return result, abserr


class _Adaptive:
    """Global adaptive refinement over a growing set of panels."""

    def __init__(self, max_panels):
        self.max_panels = max_panels
        self.heap = []
        self.done = []  # panels too narrow to split further
        self.seq = 0
        self.evaluations = 0

    def add(self, f, lo, hi):
        value, err = _gk15(f, lo, hi)
        self.evaluations += 15
        heapq.heappush(self.heap, (-err, self.seq, lo, hi, value, f))
        self.seq += 1

    @property
    def n_panels(self):
        return len(self.heap) + len(self.done)

    def totals(self):
        panels = sorted(self.heap + self.done, key=lambda item: item[2])
        value = math.fsum(item[4] for item in panels)
        err = math.fsum(-item[0] for item in panels)
        return value, err

    def refine(self, target: Callable[[float], float]):
        value, err = self.totals()
        while err > max(target(value), _ROUNDOFF * abs(value)):
            if not self.heap:
                break
            if self.n_panels >= self.max_panels:
                raise QuadratureError(
                    f"quadrature exceeded {self.max_panels} panels "
                    f"(estimate {value}, error {err})")
            neg_err, _, lo, hi, _, f = heapq.heappop(self.heap)
            mid = 0.5 * (lo + hi)
            if not lo < mid < hi or (hi - lo) <= 64.0 * _EPS * max(abs(lo), abs(hi)):
                self.done.append((neg_err, self.seq, lo, hi, _, f))
                self.seq += 1
                continue
            self.add(f, lo, mid)
            self.add(f, mid, hi)
            value, err = self.totals()
        return value, err


def adaptive_gk15(f: Callable[[float], float], edges, tol: float = 0.0,
                  rel_tol: float = 0.0, max_panels: int = 10_000) -> QuadratureResult:
    """Integrate ``f`` over ``[edges[0], edges[-1]]`` with adaptive GK15 panels.

    ``edges`` gives the initial panel boundaries. Refinement stops when the
    summed error estimate is at most ``max(tol, rel_tol * |result|)``.
    """
    edges = list(edges)
    if len(edges) < 2:
        raise DomainError("need at least two panel edges")
    if tol <= 0.0 and rel_tol <= 0.0:
        raise DomainError("need a positive absolute or relative tolerance")
    engine = _Adaptive(max_panels)
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            engine.add(f, lo, hi)
    value, err = engine.refine(lambda v: max(tol, rel_tol * abs(v)))
    if err > max(tol, rel_tol * abs(value)) and err > _ROUNDOFF * abs(value):
        raise QuadratureError(f"tolerance not reached: estimate {value}, error {err}")
    return QuadratureResult(value, err, engine.evaluations, edges[-1])


def _tail_bound(k, p, bound, x):
    return bound * upper_inc_gamma(k, p * x) / p ** k


def _tail_point(k, p, bound, target, lower):
    """Smallest convenient ``X`` with ``bound * Gamma(k, pX) / p^k <= target``."""
    log_q = math.log(target) + k * math.log(p) - math.log(bound) - math.lgamma(k)
    if log_q >= 0.0:
        return lower + 1.0 / p
    q = math.exp(max(log_q, -690.0))
    return max(inv_reg_upper_gamma(k, q) / p, lower + 1.0 / p)


def _geometric_edges(start, first, stop):
    edges = [start]
    step = first
    while edges[-1] + step < stop:
        edges.append(edges[-1] + step)
        step *= 2.0
    edges.append(stop)
    return edges


def integrate_semi_infinite(f: Callable[[float], float], power: float, decay: float,
                            tol: float = 0.0, rel_tol: float = 1e-12, bound: float = 1.0,
                            lower: float = 0.0, max_panels: int = 10_000) -> QuadratureResult:
    """Integrate ``f`` over ``[lower, inf)``.

    The integrand must satisfy ``|f(x)| <= bound * x^{power-1} e^{-decay x}``;
    that envelope fixes the truncation point and bounds the neglected tail.

    Parameters
    ----------
    f : callable
        Integrand, continuous on ``(lower, inf)``.
    power : float
        Exponent ``k > 0`` of the ``x^{k-1}`` envelope.
    decay : float
        Exponential rate ``p > 0`` of the envelope.
    tol, rel_tol : float
        Absolute and relative tolerances; the looser of the two applies.
    bound : float
        Envelope constant ``C``.
    lower : float
        Lower limit of integration.
    max_panels : int
        Panel budget before :class:`QuadratureError` is raised.
    """
    k, p = power, decay
    if not (k > 0.0 and p > 0.0 and bound > 0.0 and lower >= 0.0):
        raise DomainError("need power > 0, decay > 0, bound > 0 and lower >= 0")
    if tol <= 0.0 and rel_tol <= 0.0:
        raise DomainError("need a positive absolute or relative tolerance")

    scale = bound * math.exp(math.lgamma(k) - k * math.log(p))
    first_target = tol if tol > 0.0 else rel_tol * scale
    X = _tail_point(k, p, bound, 0.1 * first_target * 1e-3, lower)
    width = min(1.0 / p, X - lower)

    engine = _Adaptive(max_panels)
    if lower == 0.0 and k < 1.0:
        c = width

        def g(t, f=f, inv_k=1.0 / k):
            x = t ** inv_k
            if x == 0.0:
                return 0.0
            return f(x) * x ** (1.0 - k) * inv_k

        engine.add(g, 0.0, c ** k)
        edges = _geometric_edges(c, width, X)
    else:
        edges = _geometric_edges(lower, width, X)
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            engine.add(f, lo, hi)

    def target(v):
        return 0.9 * max(tol, rel_tol * abs(v))

    for _ in range(20):
        value, err = engine.refine(target)
        need = max(tol, rel_tol * abs(value))
        tail = _tail_bound(k, p, bound, X)
        if tail <= 0.1 * need or need == 0.0:
            break
        X_new = _tail_point(k, p, bound, 0.01 * need, X)
        extra = _geometric_edges(X, X, X_new)
        for lo, hi in zip(extra[:-1], extra[1:]):
            if hi > lo:
                engine.add(f, lo, hi)
        X = X_new
    else:
        raise QuadratureError("could not place the truncation point")

    total_err = err + tail
    if err > max(tol, rel_tol * abs(value)) and err > _ROUNDOFF * abs(value):
        raise QuadratureError(f"tolerance not reached: estimate {value}, error {err}")
    return QuadratureResult(value, total_err, engine.evaluations, X)


def _weight(k, p, x):
    if x == 0.0:
        return 0.0 if k > 1.0 else (1.0 if k == 1.0 else math.inf)
    return math.exp((k - 1.0) * math.log(x) - p * x)


def oracle_g(spec: IntegralSpec, tol: float = 0.0, rel_tol: float = 1e-12) -> QuadratureResult:
    """Quadrature of ``int_0^inf x^{k-1} Q_m(a, b sqrt(x)) e^{-px} dx``."""
    k, m, a, b, p = spec.args

    def f(x):
        w = _weight(k, p, x)
        if w == 0.0:
            return 0.0
        return w * marcum_q(m, a, b * math.sqrt(x))

    return integrate_semi_infinite(f, k, p, tol=tol, rel_tol=rel_tol)


def oracle_f(spec: IntegralSpec, tol: float = 0.0, rel_tol: float = 1e-12) -> QuadratureResult:
    """Quadrature of ``int_0^inf x^{k-1} Q_m(a sqrt(x), b) e^{-px} dx``."""
    k, m, a, b, p = spec.args

    def f(x):
        w = _weight(k, p, x)
        if w == 0.0:
            return 0.0
        return w * marcum_q(m, a * math.sqrt(x), b)

    return integrate_semi_infinite(f, k, p, tol=tol, rel_tol=rel_tol)


def oracle(spec: IntegralSpec, tol: float = 0.0, rel_tol: float = 1e-12) -> QuadratureResult:
    """Dispatch to :func:`oracle_g` or :func:`oracle_f` by ``spec.family``."""
    if spec.family is Family.G:
        return oracle_g(spec, tol=tol, rel_tol=rel_tol)
    return oracle_f(spec, tol=tol, rel_tol=rel_tol)
