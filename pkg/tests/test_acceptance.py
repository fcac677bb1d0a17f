"""Acceptance criteria at their stated sizes and tolerances (the ``full`` suite).

Each test prints one ``[PASS]`` / ``[FAIL]`` line; the lines are repeated in
the terminal summary.  ``SELPOP_SUITE=fast`` runs the reduced trial counts.
"""

import os
import time

import pytest

import conftest
from selpop import verify

SUITE = os.environ.get("SELPOP_SUITE", "full")
P = verify.SUITES[SUITE]


def timed(fn, *args, extra=0.0):
    t0 = time.perf_counter()
    res = fn(*args)
    res.seconds = time.perf_counter() - t0 + extra
    return res


def report(res, capsys):
    line = res.line()
    conftest.ACCEPTANCE_LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert res.passed, line


@pytest.fixture(scope="module")
def median_runs():
    t0 = time.perf_counter()
    runs = verify.fast_median_runs(P)
    return runs, time.perf_counter() - t0


def test_criterion_1_scheduler_semantics(capsys):
    report(timed(verify.criterion_1, P), capsys)


def test_criterion_2_fragmented_time(capsys):
    report(timed(verify.criterion_2, P), capsys)


def test_criterion_3_parallel_vs_fragmented(capsys):
    report(timed(verify.criterion_3, P), capsys)


def test_criterion_4_leader_election(capsys):
    report(timed(verify.criterion_4, P), capsys)


def test_criterion_5_majority(capsys):
    report(timed(verify.criterion_5, P), capsys)


def test_criterion_6_multiplication(capsys):
    report(timed(verify.criterion_6, P), capsys)


def test_criterion_7_standard_median(capsys):
    report(timed(verify.criterion_7, P), capsys)


def test_criterion_8_fast_median(median_runs, capsys):
    runs, shared = median_runs
    report(timed(verify.criterion_8, P, runs, extra=shared), capsys)


def test_criterion_9_candidate_shrinkage(median_runs, capsys):
    report(timed(verify.criterion_9, P, median_runs[0]), capsys)


def test_criterion_10_protocol_text(capsys):
    report(timed(verify.criterion_10, P), capsys)
