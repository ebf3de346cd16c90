"""Acceptance criteria, each checked at its stated tolerance.

Every test records a PASS/FAIL line that is echoed in the terminal summary
under "acceptance criteria".
"""
import filecmp
import math
import subprocess
import sys
import time

import pytest

from _grids import SCALES, humbert_grid, integer_grid, integral_grid, marcum_grid
from acceptance_report import record
from brute_force import phi1_double, phi2_double
from marcum_integrals.applications import (
    EnergyDetector,
    NakagamiChannel,
    SscDiversity,
    avg_prob_detection,
    avg_prob_detection_quadrature,
    capacity_curve,
    cifr_r,
    cifr_r_quadrature,
    roc_curve,
)
from marcum_integrals.integrals import (
    eval_b0,
    eval_f_a0,
    eval_f_eq15,
    eval_f_k1,
    eval_f_thm3,
    eval_g_a0,
    eval_g_thm1,
    eval_g_thm2,
    evaluate,
)
from marcum_integrals.marcum import marcum_q, marcum_q_bessel_oracle
from marcum_integrals.oracle import oracle_f, oracle_g
from marcum_integrals.params import Family, IntegralSpec
from marcum_integrals.specfun import humbert_phi1, humbert_phi2, reg_upper


def rel_err(value, reference):
    return abs(value - reference) / max(abs(reference), 1e-300)


def worst(pairs):
    """Largest relative error and the point where it occurs."""
    err, where = 0.0, None
    for point, value, reference in pairs:
        e = rel_err(value, reference)
        if e >= err:
            err, where = e, point
    return err, where


def test_criterion_01_g_oracle_agreement():
    start = time.perf_counter()
    pairs = []
    for k, m, a, b, p in integral_grid():
        ref = oracle_g(IntegralSpec(Family.G, k, m, a, b, p)).value
        pairs.append(((k, m, a, b, p, "Thm1"), eval_g_thm1(k, m, a, b, p), ref))
        if float(k).is_integer():
            pairs.append(((k, m, a, b, p, "Thm2"), eval_g_thm2(k, m, a, b, p), ref))
    elapsed = time.perf_counter() - start
    err, where = worst(pairs)
    ok = err <= 1e-8 and elapsed < 60.0 and len(pairs) >= 300
    record(1, "G closed forms vs quadrature", ok,
           f"{len(pairs)} comparisons, worst rel err {err:.2e} at {where}, {elapsed:.1f} s")
    assert ok


def test_criterion_02_f_oracle_agreement():
    start = time.perf_counter()
    pairs = []
    for k, m, a, b, p in integral_grid():
        ref = oracle_f(IntegralSpec(Family.F, k, m, a, b, p)).value
        pairs.append(((k, m, a, b, p, "Thm3"), eval_f_thm3(k, m, a, b, p), ref))
        if float(k).is_integer():
            pairs.append(((k, m, a, b, p, "Eq15"), eval_f_eq15(k, m, a, b, p), ref))
        if k == 1.0:
            pairs.append(((k, m, a, b, p, "Lemma1"), eval_f_k1(m, a, b, p), ref))
    elapsed = time.perf_counter() - start
    err, where = worst(pairs)
    ok = err <= 1e-8 and elapsed < 60.0 and len(pairs) >= 300
    record(2, "F closed forms vs quadrature", ok,
           f"{len(pairs)} comparisons, worst rel err {err:.2e} at {where}, {elapsed:.1f} s")
    assert ok


def test_criterion_03_cross_formula_consistency():
    g_pairs, f_pairs = [], []
    for k, m, a, b, p in integer_grid():
        k = int(k)
        g_pairs.append(((k, m, a, b, p), eval_g_thm1(k, m, a, b, p), eval_g_thm2(k, m, a, b, p)))
        f_pairs.append(((k, m, a, b, p), eval_f_thm3(k, m, a, b, p), eval_f_eq15(k, m, a, b, p)))
    g_err, g_where = worst(g_pairs)
    f_err, f_where = worst(f_pairs)
    g_bad = sum(rel_err(v, r) > 1e-11 for _, v, r in g_pairs)
    f_bad = sum(rel_err(v, r) > 1e-11 for _, v, r in f_pairs)
    ok = g_bad == 0 and f_bad == 0
    record(3, "Thm1 = Thm2 and Eq15 = Thm3", ok,
           f"{len(g_pairs)} points; G worst {g_err:.2e} at {g_where} ({g_bad} above 1e-11); "
           f"F worst {f_err:.2e} at {f_where} ({f_bad} above 1e-11)")
    assert ok


def test_criterion_04_special_cases():
    pairs = []
    for k, m, a, b, p in integral_grid():
        if a == 0.0:
            g = eval_g_a0(k, m, b, p)
            f = eval_f_a0(k, m, b, p)
            g_general = eval_g_thm2(int(k), m, a, b, p) if float(k).is_integer() else \
                eval_g_thm1(k, m, a, b, p)
            f_general = eval_f_eq15(int(k), m, a, b, p) if float(k).is_integer() else \
                eval_f_thm3(k, m, a, b, p)
            pairs.append(((k, m, a, b, p, "Lemma2_G/general"), g, g_general))
            pairs.append(((k, m, a, b, p, "Lemma2_F/general"), f, f_general))
            pairs.append(((k, m, a, b, p, "Lemma2_G/oracle"), g,
                          oracle_g(IntegralSpec(Family.G, k, m, a, b, p), rel_tol=1e-13).value))
            pairs.append(((k, m, a, b, p, "Lemma2_F/oracle"), f,
                          oracle_f(IntegralSpec(Family.F, k, m, a, b, p), rel_tol=1e-13).value))
        if b == 0.0:
            lead = eval_b0(k, p)
            pairs.append(((k, m, a, b, p, "Lemma3/Thm1"), lead, eval_g_thm1(k, m, a, b, p)))
            pairs.append(((k, m, a, b, p, "Lemma3/Thm3"), lead, eval_f_thm3(k, m, a, b, p)))
            pairs.append(((k, m, a, b, p, "Lemma3/oracle_g"), lead,
                          oracle_g(IntegralSpec(Family.G, k, m, a, b, p), rel_tol=1e-13).value))
            pairs.append(((k, m, a, b, p, "Lemma3/oracle_f"), lead,
                          oracle_f(IntegralSpec(Family.F, k, m, a, b, p), rel_tol=1e-13).value))
    lemma1 = [((m, a, b, p), eval_f_k1(m, a, b, p), eval_f_eq15(1, m, a, b, p))
              for k, m, a, b, p in integral_grid() if k == 1.0]
    lemma1 += [((m, a, b, p), eval_f_k1(m, a, b, p), eval_f_eq15(1, m, a, b, p))
               for m in (0.5, 1.5, 3.3) for a in (0.5, 1.5, 3.0) for b in (0.5, 1.5, 3.0)
               for p in (0.3, 1.0, 4.0)]
    err, where = worst(pairs)
    bad = sum(rel_err(v, r) > 1e-11 for _, v, r in pairs)
    err1, where1 = worst(lemma1)
    ok = bad == 0 and err1 <= 1e-12
    record(4, "Lemma 2/3 exactness and Lemma 1 = Eq15", ok,
           f"Lemma 2/3: {len(pairs)} comparisons, worst {err:.2e} at {where} ({bad} above 1e-11); "
           f"Lemma 1: {len(lemma1)} points, worst {err1:.2e} at {where1}")
    assert ok


def test_criterion_05_humbert_kernels():
    pairs1 = [((a, x, y), humbert_phi1(a, 1.0, 1.0, x, y), phi1_double(a, 1.0, 1.0, x, y))
              for a, x, y in humbert_grid()]
    pairs2 = [((a, x, y), humbert_phi2(1.0, a, 1.0, x, y), phi2_double(1.0, a, 1.0, x, y))
              for a, x, y in humbert_grid()]
    e1, w1 = worst(pairs1)
    e2, w2 = worst(pairs2)
    ok = e1 <= 1e-11 and e2 <= 1e-11 and len(pairs1) == len(pairs2) == 125
    record(5, "Humbert single series vs double sums", ok,
           f"Phi1 worst {e1:.2e} at {w1}; Phi2 worst {e2:.2e} at {w2} (125 points each)")
    assert ok


def test_criterion_06_marcum():
    grid = marcum_grid()
    quad_err = max(abs(marcum_q(m, a, b) - marcum_q_bessel_oracle(m, a, b)) for m, a, b in grid)
    ident_err = 0.0
    for m, _, b in grid:
        for x in (0.0, 0.3, 1.0, 2.5, 6.0):
            ident_err = max(ident_err, abs(marcum_q(m, x, 0.0) - 1.0),
                            abs(marcum_q(m, 0.0, x) - reg_upper(m, 0.5 * x * x)))
    ok = quad_err <= 1e-9 and ident_err <= 1e-13 and len(grid) == 64
    record(6, "Marcum Q series vs Bessel integral", ok,
           f"64 points, worst abs diff {quad_err:.2e}; boundary identities worst {ident_err:.2e}")
    assert ok


def test_criterion_07_scaling_invariance():
    pairs = []
    for k, m, a, b, p in integral_grid():
        g = evaluate(IntegralSpec(Family.G, k, m, a, b, p)).value
        f = evaluate(IntegralSpec(Family.F, k, m, a, b, p)).value
        for s in SCALES:
            gs = evaluate(IntegralSpec(Family.G, k, m, a, b * math.sqrt(s), p * s)).value
            fs = evaluate(IntegralSpec(Family.F, k, m, a * math.sqrt(s), b, p * s)).value
            pairs.append(((k, m, a, b, p, s, "G"), s ** k * gs, g))
            pairs.append(((k, m, a, b, p, s, "F"), s ** k * fs, f))
    err, where = worst(pairs)
    ok = err <= 1e-10
    record(7, "scaling invariance", ok, f"{len(pairs)} comparisons, worst {err:.2e} at {where}")
    assert ok


def test_criterion_08_average_detection():
    pairs = []
    for m in (1.0, 2.0, 3.5):
        for u in (1.0, 3.0, 5.0):
            for gbar in (1.0, 10.0 ** 1.5):
                for lam in (1.0, 5.0, 20.0):
                    ch, det = NakagamiChannel(m, gbar), EnergyDetector(u, lam)
                    pairs.append(((m, u, gbar, lam), avg_prob_detection(ch, det),
                                  avg_prob_detection_quadrature(ch, det)))
    err, where = worst(pairs)
    pmd = [roc_curve(NakagamiChannel(m, 10.0 ** 1.5), 5.0, [0.01])[0].pmd
           for m in (0.5, 1.0, 2.0, 5.0)]
    trend = all(x > y for x, y in zip(pmd, pmd[1:]))
    ok = err <= 1e-8 and trend
    record(8, "average detection probability", ok,
           f"{len(pairs)} points, worst {err:.2e} at {where}; pmd(m=0.5,1,2,5) at pf=0.01 = "
           + ", ".join(f"{v:.4f}" for v in pmd))
    assert ok


def test_criterion_09_cifr():
    pairs = []
    for m in (2.0, 3.0):
        for rho in (0.0, 0.3, 0.7):
            for gt in (0.5, 1.0, 2.0):
                for gbar in (5.0, 10.0, 50.0):
                    ch, ssc = NakagamiChannel(m, gbar), SscDiversity(rho, gt)
                    pairs.append(((m, rho, gt, gbar), cifr_r(ch, ssc), cifr_r_quadrature(ch, ssc)))
    err, where = worst(pairs)

    # the uncorrected R is negative on the whole sweep, so SE is taken from the corrected R
    ssc = SscDiversity(0.5, 1.0)
    grid = [float(db) for db in range(26)]
    printed_negative = all(cifr_r(NakagamiChannel(m, 10.0 ** (db / 10.0)), ssc) < 0.0
                           for m in (2.0, 3.0, 4.0) for db in grid)
    curves = capacity_curve(1.0, [2.0, 3.0, 4.0], grid, ssc, corrected=True)
    se = {m: [pt.spectral_efficiency for pt in pts] for m, pts in curves.items()}
    in_snr = all(all(b > a for a, b in zip(v, v[1:])) for v in se.values())
    in_m = all(se[2.0][i] < se[3.0][i] < se[4.0][i] for i in range(len(grid)))
    ok = err <= 1e-8 and in_snr and in_m
    record(9, "SSC inverse-SNR moment and capacity trend", ok,
           f"{len(pairs)} points, worst {err:.2e} at {where}; corrected-R SE increasing in SNR: "
           f"{in_snr}, increasing in m: {in_m}; uncorrected R negative on sweep: {printed_negative}")
    assert ok


COMMANDS = {
    "eval": ["eval", "--family", "g", "--k", "2.5", "--m", "2", "--a", "1", "--b", "1.5",
             "--p", "0.8"],
    "roc": ["roc", "--u", "5", "--snr-db", "15", "--m", "0.5,1,2,5", "--pf", "log:1e-4:0.99:50"],
    "cifr": ["cifr", "--m", "2,3,4", "--snr-db", "lin:0:25:26", "--gamma-t-db", "0", "--rho",
             "0.5", "--ssc-corrected"],
}


def _invoke(argv, out):
    cmd = [sys.executable, "-m", "marcum_integrals", *argv]
    if out is not None:
        cmd += ["--out", str(out)]
    return subprocess.run(cmd, capture_output=True, check=True).stdout


def test_criterion_10_cli_determinism(tmp_path):
    same = {}
    for name, argv in COMMANDS.items():
        if name == "eval":
            same[name] = _invoke(argv, None) == _invoke(argv, None)
        else:
            first, second = tmp_path / f"{name}1.csv", tmp_path / f"{name}2.csv"
            _invoke(argv, first)
            _invoke(argv, second)
            same[name] = filecmp.cmp(first, second, shallow=False)
    ok = all(same.values())
    record(10, "CLI determinism", ok, ", ".join(f"{k}: {'identical' if v else 'DIFFERENT'}"
                                                for k, v in same.items()))
    assert ok
