"""
Energy detection and channel-inversion capacity over Nakagami-m fading.

Two communication quantities reduce to the F integral family:

* the fading-averaged detection probability of an energy detector,
  ``m^m / (gbar^m Gamma(m)) * F(m, u, sqrt(2), sqrt(lambda), m/gbar)``;
* the inverse-SNR moment ``R`` of switch-and-stay combining (SSC) over
  correlated branches, which sets the fixed-rate channel-inversion
  capacity ``B log2(1 + 1/R)``.

All SNRs are linear inside this module. Decibel conversion happens only in
:func:`db_to_linear`, which the curve builders and the CLI call at the
boundary.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ConvergenceError, DomainError, NonPhysicalResultError
from .integrals import EvalOutcome, eval_f
from .marcum import marcum_q
from .oracle import integrate_semi_infinite
from .params import Family, IntegralSpec
from .specfun import inv_reg_upper_gamma, reg_upper, upper_inc_gamma

__all__ = [
    "NakagamiChannel",
    "EnergyDetector",
    "SscDiversity",
    "RocPoint",
    "CapacityPoint",
    "db_to_linear",
    "prob_false_alarm",
    "threshold_for_pf",
    "prob_detection_awgn",
    "avg_prob_detection",
    "avg_prob_detection_quadrature",
    "roc_curve",
    "cifr_r",
    "cifr_r_quadrature",
    "cifr_capacity",
    "capacity_curve",
]

_CLAMP_LIMIT = 1e-10
_RHO_WARN = 0.99


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class NakagamiChannel:
    """Nakagami-m fading with fading figure ``m`` and mean SNR ``gamma_bar``."""

    m: float
    gamma_bar: float

    def __post_init__(self):
        if not (math.isfinite(self.m) and self.m >= 0.5):
            raise DomainError(f"fading figure m must be >= 0.5, got {self.m}")
        if not (math.isfinite(self.gamma_bar) and self.gamma_bar > 0.0):
            raise DomainError(f"average SNR must be positive, got {self.gamma_bar}")

    def log_prefactor(self) -> float:
        """``log(m^m / (gamma_bar^m Gamma(m)))``, the gamma-density constant."""
        m = self.m
        return m * math.log(m) - m * math.log(self.gamma_bar) - math.lgamma(m)


@dataclass(frozen=True)
class EnergyDetector:
    """Time-bandwidth product ``u`` and energy threshold ``lam``."""

    u: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and self.u > 0.0):
            raise DomainError(f"time-bandwidth product must be positive, got {self.u}")
        if not (math.isfinite(self.lam) and self.lam > 0.0):
            raise DomainError(f"energy threshold must be positive, got {self.lam}")


@dataclass(frozen=True)
class SscDiversity:
    """Switch-and-stay combining with branch correlation ``rho`` and threshold ``gamma_t``."""

    rho: float
    gamma_t: float

    def __post_init__(self):
        if not (0.0 <= self.rho < 1.0):
            raise DomainError(f"correlation must lie in [0, 1), got {self.rho}")
        if not (math.isfinite(self.gamma_t) and self.gamma_t >= 0.0):
            raise DomainError(f"switching threshold must be >= 0, got {self.gamma_t}")


@dataclass(frozen=True)
class RocPoint:
    pf: float
    pd_avg: float
    pmd: float
    lam: float


@dataclass(frozen=True)
class CapacityPoint:
    gamma_bar_db: float
    spectral_efficiency: float


def _clamp_probability(value, what):
    if not (-_CLAMP_LIMIT <= value <= 1.0 + _CLAMP_LIMIT):
        raise ConvergenceError(f"{what} left [0, 1] by more than {_CLAMP_LIMIT}: {value}")
    return min(max(value, 0.0), 1.0)


# -- energy detection ------------------------------------------------------

def prob_false_alarm(u: float, lam: float) -> float:
    """False-alarm probability ``Q(u, lam/2)`` (regularized upper gamma)."""
    EnergyDetector(u, lam)
    return reg_upper(u, 0.5 * lam)


def threshold_for_pf(u: float, pf: float) -> float:
    """Energy threshold giving false-alarm probability ``pf``."""
    if not (u > 0.0 and math.isfinite(u)):
        raise DomainError(f"time-bandwidth product must be positive, got {u}")
    if not 0.0 < pf < 1.0:
        raise DomainError(f"false-alarm probability must lie in (0, 1), got {pf}")
    return 2.0 * inv_reg_upper_gamma(u, pf)


def prob_detection_awgn(u: float, gamma: float, lam: float) -> float:
    """Detection probability ``Q_u(sqrt(2 gamma), sqrt(lam))`` at a fixed SNR."""
    EnergyDetector(u, lam)
    if not gamma >= 0.0:
        raise DomainError(f"SNR must be nonnegative, got {gamma}")
    return marcum_q(u, math.sqrt(2.0 * gamma), math.sqrt(lam))


def _detection_spec(ch, det):
    return IntegralSpec(Family.F, k=ch.m, m=det.u, a=math.sqrt(2.0), b=math.sqrt(det.lam),
                        p=ch.m / ch.gamma_bar)


def avg_prob_detection(ch: NakagamiChannel, det: EnergyDetector,
                       return_outcome: bool = False) -> float | tuple[float, EvalOutcome]:
    """Detection probability averaged over Nakagami-m fading.

    Evaluates ``m^m/(gbar^m Gamma(m)) F(m, u, sqrt(2), sqrt(lam), m/gbar)``.
    The F dispatcher uses a finite sum for integer ``m``, a Humbert series for
    integer ``u`` and quadrature otherwise.

    Parameters
    ----------
    ch : NakagamiChannel
    det : EnergyDetector
    return_outcome : bool
        Also return the :class:`EvalOutcome` of the underlying F evaluation.
    """
    if det.u < 0.5:
        # the F family is defined for orders >= 1/2 only
        value = avg_prob_detection_quadrature(ch, det)
        return (value, None) if return_outcome else value
    outcome = eval_f(_detection_spec(ch, det))
    value = _clamp_probability(math.exp(ch.log_prefactor()) * outcome.value,
                               "average detection probability")
    return (value, outcome) if return_outcome else value


def avg_prob_detection_quadrature(ch: NakagamiChannel, det: EnergyDetector,
                                  rel_tol: float = 1e-12) -> float:
    """The fading average of ``Q_u(sqrt(2 gamma), sqrt(lam))`` by direct quadrature."""
    m, gbar = ch.m, ch.gamma_bar
    c = math.exp(ch.log_prefactor())
    sqrt_lam = math.sqrt(det.lam)
    u = det.u

    def integrand(g):
        if g == 0.0:
            return c * marcum_q(u, 0.0, sqrt_lam) if m == 1.0 else 0.0
        density = math.exp(ch.log_prefactor() + (m - 1.0) * math.log(g) - m * g / gbar)
        return density * marcum_q(u, math.sqrt(2.0 * g), sqrt_lam)

    res = integrate_semi_infinite(integrand, m, m / gbar, rel_tol=rel_tol, bound=c)
    return _clamp_probability(res.value, "average detection probability")


def roc_curve(ch: NakagamiChannel, u: float, pf_grid: Iterable[float]) -> list[RocPoint]:
    """Average ROC points, ordered by ascending false-alarm probability."""
    points = []
    for pf in sorted(pf_grid):
        lam = threshold_for_pf(u, pf)
        pd = avg_prob_detection(ch, EnergyDetector(u, lam))
        points.append(RocPoint(pf=pf, pd_avg=pd, pmd=1.0 - pd, lam=lam))
    return points


# -- channel inversion with SSC --------------------------------------------

def _check_cifr(ch, ssc):
    if not ch.m > 1.0:
        raise DomainError(
            f"the SSC inverse-SNR moment needs m > 1 so that k = m - 1 > 0, got m={ch.m}")
    if ssc.rho >= _RHO_WARN:
        warnings.warn(f"correlation {ssc.rho} is close to 1; Marcum arguments grow "
                      "like (1 - rho)^(-1/2)", RuntimeWarning, stacklevel=3)


def _ssc_arguments(ch, ssc):
    m, gbar, rho = ch.m, ch.gamma_bar, ssc.rho
    a = math.sqrt(2.0 * m * rho / ((1.0 - rho) * gbar))
    b = math.sqrt(2.0 * m * ssc.gamma_t / ((1.0 - rho) * gbar))
    return a, b


def _missing_moment(ch):
    # int_0^inf p(g)/g dg for the single-branch gamma density
    return ch.m / (ch.gamma_bar * (ch.m - 1.0))


def cifr_r(ch: NakagamiChannel, ssc: SscDiversity, corrected: bool = False) -> float:
    """Inverse-SNR moment ``R`` of SSC output over correlated Nakagami-m fading.

    The default evaluates the uncorrected closed form::

        R = m/(gbar Gamma(m)) Gamma(m-1, m gT/gbar)
            - m^m/(gbar^m Gamma(m)) F(m-1, m, a, b, m/gbar)

    with ``a = sqrt(2 m rho / ((1-rho) gbar))`` and
    ``b = sqrt(2 m gT / ((1-rho) gbar))``. That expression is negative for
    every ``gT > 0``. ``corrected=True`` adds the single-branch moment
    ``m / (gbar (m-1))``, which restores a positive result.

    Raises
    ------
    DomainError
        If ``m <= 1``.
    """
    _check_cifr(ch, ssc)
    m, gbar = ch.m, ch.gamma_bar
    a, b = _ssc_arguments(ch, ssc)
    first = math.exp(math.log(m) - math.log(gbar) - math.lgamma(m)) * upper_inc_gamma(
        m - 1.0, m * ssc.gamma_t / gbar)
    outcome = eval_f(IntegralSpec(Family.F, k=m - 1.0, m=m, a=a, b=b, p=m / gbar))
    second = math.exp(ch.log_prefactor()) * outcome.value
    r = first - second
    if corrected:
        r += _missing_moment(ch)
    return r


def cifr_r_quadrature(ch: NakagamiChannel, ssc: SscDiversity, corrected: bool = False,
                      rel_tol: float = 1e-12) -> float:
    """``R`` from direct quadrature of its two defining integrals.

    ``int_gT^inf c g^{m-2} e^{-m g/gbar} dg``
    ``- int_0^inf c g^{m-2} e^{-m g/gbar} Q_m(sqrt(2 m rho g/((1-rho) gbar)), b) dg``
    with ``c = m^m / (gbar^m Gamma(m))``.
    """
    _check_cifr(ch, ssc)
    m, gbar = ch.m, ch.gamma_bar
    log_c = ch.log_prefactor()
    _, b = _ssc_arguments(ch, ssc)
    slope = math.sqrt(2.0 * m * ssc.rho / ((1.0 - ssc.rho) * gbar))
    c = math.exp(log_c)
    tol = rel_tol * _missing_moment(ch)

    def density(g):
        if g == 0.0:
            return 0.0 if m > 2.0 else (c if m == 2.0 else math.inf)
        return math.exp(log_c + (m - 2.0) * math.log(g) - m * g / gbar)

    def weighted_q(g):
        w = density(g)
        return 0.0 if w == 0.0 else w * marcum_q(m, slope * math.sqrt(g), b)

    first = integrate_semi_infinite(density, m - 1.0, m / gbar, tol=tol, bound=c,
                                    lower=ssc.gamma_t)
    second = integrate_semi_infinite(weighted_q, m - 1.0, m / gbar, tol=tol, bound=c)
    r = first.value - second.value
    if corrected:
        r += _missing_moment(ch)
    return r


def cifr_capacity(bandwidth: float, ch: NakagamiChannel, ssc: SscDiversity,
                  corrected: bool = False) -> float:
    """Channel-inversion capacity ``B log2(1 + 1/R)`` in bit/s (bit/s/Hz for ``B = 1``).

    Raises
    ------
    NonPhysicalResultError
        If ``R <= 0``; the offending ``R`` is attached as ``.value``.
    """
    if not (math.isfinite(bandwidth) and bandwidth > 0.0):
        raise DomainError(f"bandwidth must be positive, got {bandwidth}")
    r = cifr_r(ch, ssc, corrected=corrected)
    if not r > 0.0:
        raise NonPhysicalResultError(
            f"inverse-SNR moment R = {r!r} is not positive; capacity undefined "
            "(the corrected variant adds the missing single-branch term)", r)
    return bandwidth * math.log1p(1.0 / r) / math.log(2.0)


def capacity_curve(bandwidth: float, m_list: Sequence[float], snr_db_grid: Sequence[float],
                   ssc: SscDiversity, corrected: bool = False) -> dict[float, list[CapacityPoint]]:
    """Capacity against mean SNR in dB, one sweep per fading figure."""
    curves = {}
    for m in m_list:
        curves[m] = [
            CapacityPoint(db, cifr_capacity(bandwidth, NakagamiChannel(m, db_to_linear(db)), ssc,
                                            corrected=corrected))
            for db in snr_db_grid
        ]
    return curves
