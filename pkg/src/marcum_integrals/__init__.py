"""Closed forms and quadrature for integrals of the generalized Marcum Q-function."""
from .applications import (
    CapacityPoint,
    EnergyDetector,
    NakagamiChannel,
    RocPoint,
    SscDiversity,
    avg_prob_detection,
    capacity_curve,
    cifr_capacity,
    cifr_r,
    prob_detection_awgn,
    prob_false_alarm,
    roc_curve,
    threshold_for_pf,
)
from .errors import ConvergenceError, DomainError, NonPhysicalResultError, QuadratureError
from .integrals import EvalOutcome, IntegralityPolicy, Method, eval_f, eval_g, evaluate
from .marcum import marcum_q
from .oracle import oracle, oracle_f, oracle_g
from .params import Family, IntegralSpec

__all__ = [
    "CapacityPoint",
    "ConvergenceError",
    "DomainError",
    "EnergyDetector",
    "EvalOutcome",
    "Family",
    "IntegralSpec",
    "IntegralityPolicy",
    "Method",
    "NakagamiChannel",
    "NonPhysicalResultError",
    "QuadratureError",
    "RocPoint",
    "SscDiversity",
    "avg_prob_detection",
    "capacity_curve",
    "cifr_capacity",
    "cifr_r",
    "eval_f",
    "eval_g",
    "evaluate",
    "marcum_q",
    "oracle",
    "oracle_f",
    "oracle_g",
    "prob_detection_awgn",
    "prob_false_alarm",
    "roc_curve",
    "threshold_for_pf",
]
