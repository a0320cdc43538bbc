"""Acceptance gate: one test per criterion, one printed pass/fail line each.

Soft asserts (criterion 10) emit their reports and flag failures without
failing the exact-identity portion of the gate.
"""

import csv
import math
import subprocess
import sys
import time

import numpy as np

from charkit.characters import character_by_index, enumerate_characters
from charkit.experiments import (
    SuiteReport,
    _suite_bateman_chowla,
    _suite_gauss_induction,
    _suite_gauss_modulus,
    _suite_lambda,
    _suite_moment_identity,
    _suite_partial_sum,
    _suite_triangle_fuzz,
    _suite_trig,
    cubic_aggregate_report,
    direction_experiment,
    parity_enrichment_report,
)
from charkit.pretentious import lambda_inequality_check
from charkit.residue import build_modulus
from charkit.sums import bulk_m_values, prefix_profile


def _line(num: int, name: str, ok: bool, t0: float, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    extra = f" [{detail}]" if detail else ""
    print(f"ACCEPTANCE {num} ({name}): {status} in {time.time() - t0:.1f}s{extra}")
    return ok


# runtime budgets are checked against process CPU time: wall clock on a
# loaded shared box measures the neighbors, not this computation
def _run_step(num: int, name: str, step, limit: float) -> None:
    t0, c0 = time.time(), time.process_time()
    rep = SuiteReport()
    step(rep)
    cpu = time.process_time() - c0
    ok = rep.ok and cpu < limit
    assert _line(num, name, ok, t0, f"cpu {cpu:.1f}s; " + "; ".join(rep.lines))


def test_criterion_1_gauss_modulus():
    _run_step(1, "gauss-sum modulus", _suite_gauss_modulus, 10.0)


def test_criterion_2_gauss_induction():
    _run_step(2, "gauss-sum induction", _suite_gauss_induction, 10.0)


def test_criterion_3_moment_identity():
    _run_step(3, "kloosterman moment identity", _suite_moment_identity, 30.0)


def test_criterion_4_bateman_chowla():
    t0, c0 = time.time(), time.process_time()
    rep = SuiteReport()
    _suite_bateman_chowla(rep)
    ok = rep.ok and time.process_time() - c0 < 60.0
    detail = "; ".join(rep.lines)
    if ok:
        detail += "; per-character exactness holds at every prime q <= 50"
    assert _line(4, "bateman-chowla average", ok, t0, detail)


def test_criterion_5_triangle_fuzz():
    t0, c0 = time.time(), time.process_time()
    rep = SuiteReport()
    _suite_triangle_fuzz(rep, seed=1, cases=10_000)
    ok = rep.ok and time.process_time() - c0 < 60.0
    assert _line(5, "triangle inequality fuzz", ok, t0, "; ".join(rep.lines))


def test_criterion_6_trig_machinery():
    _run_step(6, "trig closed forms and delta_g", _suite_trig, 60.0)


def test_criterion_7_partial_sum():
    _run_step(7, "partial-sum lower bound", _suite_partial_sum, 60.0)


def test_criterion_8_euler_factor_inequalities():
    t0 = time.time()
    rep = SuiteReport()
    _suite_lambda(rep, qmax=50, rmax=60)
    leg13 = next(c for c in enumerate_characters(13) if c.order == 2)
    extremal = lambda_inequality_check(leg13, 2, 3)
    ok = rep.ok and abs(extremal - 2 / 3) < 1e-12
    assert _line(
        8,
        "lambda and prime-power inequalities",
        ok,
        t0,
        f"extremal value {extremal:.12f}; " + "; ".join(rep.lines),
    )


def test_criterion_9_polya_vinogradov_envelope():
    t0, c0 = time.time(), time.process_time()
    worst = 0.0
    worst_q = None
    for q in range(3, 2001):
        m = build_modulus(q)
        chars = [c for c in enumerate_characters(m) if not c.is_principal]
        if not chars:
            continue
        mv, _ = bulk_m_values(m, chars)
        ratio = float(np.max(mv)) / (math.sqrt(q) * math.log(q))
        if ratio > worst:
            worst, worst_q = ratio, q
    p3 = prefix_profile(character_by_index(3, 1))
    leg7 = next(c for c in enumerate_characters(7) if c.order == 2)
    p7 = prefix_profile(leg7)
    cpu = time.process_time() - c0
    ok = (
        worst < 1.0
        and p3.m_value == 1.0
        and p3.argmax_x == 1
        and p7.m_value == 2.0
        and p7.argmax_x == 2
        and cpu < 120.0
    )
    assert _line(
        9,
        "polya-vinogradov envelope q <= 2000",
        ok,
        t0,
        f"max M/(sqrt(q) ln q) = {worst:.4f} at q={worst_q}; spot M=1, M=2 exact",
    )


def test_criterion_10_soft_asserts():
    t0, c0 = time.time(), time.process_time()
    cubic = cubic_aggregate_report()
    print(
        "  10a cubic aggregate: "
        + ("ok" if cubic["soft_ok"] else "FLAGGED")
        + f" (cubic {cubic['aggregate_cubic_max']:.4f}"
        + f" vs all {cubic['aggregate_all_max']:.4f})"
    )
    parity = parity_enrichment_report(10007)
    print(
        "  10b parity enrichment: "
        + ("ok" if parity["soft_ok"] else "FLAGGED")
        + f" (ratio {parity['enrichment_ratio']:.3f})"
    )
    direction = direction_experiment(10007, 5003)
    med = direction["euler_product_median_rel_error"]
    print(
        "  10c euler-product proxy: "
        + ("ok" if direction["soft_ok_median_under_25pct"] else "FLAGGED")
        + f" (median rel error {med:.3f})"
    )
    reports_emitted = (
        "soft_ok" in cubic
        and "soft_ok" in parity
        and "soft_ok_median_under_25pct" in direction
    )
    ok = reports_emitted and time.process_time() - c0 < 1800.0
    # 10a and 10b are deterministic and expected to hold; 10c is a proxy
    # whose failure only flags for investigation.
    ok = ok and cubic["soft_ok"] and parity["soft_ok"]
    assert _line(
        10,
        "property-based soft asserts",
        ok,
        t0,
        "10c flagged, reported above" if not direction["soft_ok_median_under_25pct"] else "",
    )


def test_criterion_11_determinism(tmp_path):
    t0 = time.time()
    outputs = []
    for i in (1, 2):
        out = tmp_path / f"scan{i}.csv"
        verify = subprocess.run(
            [sys.executable, "-m", "charkit.cli", "verify"],
            capture_output=True,
            text=True,
        )
        assert verify.returncode == 0, verify.stdout + verify.stderr
        scan = subprocess.run(
            [
                sys.executable,
                "-m",
                "charkit.cli",
                "scan",
                "--skip-identities",
                "--qmin",
                "3",
                "--qmax",
                "500",
                "--threads",
                "8",
                "--out",
                str(out),
            ],
            capture_output=True,
            text=True,
        )
        assert scan.returncode == 0, scan.stderr
        outputs.append(out.read_bytes())
    identical = outputs[0] == outputs[1]
    with open(tmp_path / "scan1.csv", newline="") as fh:
        n_rows = sum(1 for _ in csv.DictReader(fh))
    assert _line(
        11,
        "verify-then-scan determinism",
        identical,
        t0,
        f"{n_rows} rows byte-identical across runs",
    )
