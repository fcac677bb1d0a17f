import math

import pytest

from selpop.engine import Limits
from selpop.errors import InvariantBreach, ModelAssumptionViolated, NoCandidate
from selpop.protocols import (epidemic_selective, epidemic_standard, leader_election, majority, median_standard,
                              multiply_fast, multiply_slow)
from selpop.protocols.base import G_WINS, R_WINS, TIE, MajorityVerdict, MedianKey, ProductSize
from selpop.protocols.fast_median import FastMedian, fast_median
from selpop.protocols.multiply_fast import rounds
from selpop.rng import RawStream


# ---- epidemics --------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(40))
def test_two_agent_epidemic_every_path(seed):
    # from {1, 0}: one spread, then each informer sees an empty G0 and stops
    res, _ = epidemic_selective(2).execute(RawStream(seed))
    assert res.census == {"Stop": 2}
    assert res.kind_counts["Meaningful"] == 1 and res.kind_counts["Emptiness"] == 2
    assert res.kind_counts.get("Singleton", 0) == 0


def test_standard_epidemic_small():
    res, _ = epidemic_standard(5).execute(RawStream(3))
    assert res.stabilized and res.census == {"1": 5}
    assert res.kind_counts["Meaningful"] == 4


@pytest.mark.parametrize("seed", range(10))
def test_rested_epidemic_counts(seed):
    res, _ = epidemic_selective(4, rested=True).execute(RawStream(seed))
    assert res.census == {"1*": 4}
    assert res.kind_counts["Meaningful"] == 3 and res.kind_counts["Emptiness"] == 1


def test_epidemic_argument_checks():
    with pytest.raises(ValueError):
        epidemic_selective(1)
    with pytest.raises(ValueError):
        epidemic_standard(4, informers=4)


# ---- leader election --------------------------------------------------------------

def test_single_candidate_confirms_everyone():
    res, _ = leader_election(50, candidates=1).execute(RawStream(1))
    assert res.stabilized and res.census == {"L*": 1, "F*": 49}
    assert res.output.agent == 0


def test_le_never_loses_or_doubles_leaders():
    seen = []

    def watch(pop, rec):
        seen.append((pop.count("L", "L*"), pop.count("L*")))

    res, _ = leader_election(100).execute(RawStream(8), observer=watch)
    assert res.stabilized and res.output.agent is not None
    assert all(alive >= 1 and confirmed <= 1 for alive, confirmed in seen)


def test_no_candidate():
    with pytest.raises(NoCandidate):
        leader_election(10, candidates=0)


# ---- majority -----------------------------------------------------------------------

@pytest.mark.parametrize("g,r,want", [(3, 2, G_WINS), (2, 3, R_WINS), (2, 2, TIE), (1, 0, G_WINS),
                                      (0, 4, R_WINS), (51, 49, G_WINS)])
def test_majority_examples(g, r, want):
    res, _ = majority(g, r).execute(RawStream(g * 100 + r))
    assert res.stabilized and res.correct
    assert res.output == MajorityVerdict(want)


@pytest.mark.parametrize("g,r", [(30, 20), (20, 30), (25, 25)])
def test_majority_difference_conserved_until_decided(g, r):
    bad = []

    def watch(pop, rec):
        starred_g, starred_r = pop.count("G*"), pop.count("R*")
        if not starred_g and not starred_r and pop.count("G") - pop.count("R") != g - r:
            bad.append(rec.step)
        if (starred_g and g <= r) or (starred_r and r <= g):
            bad.append(rec.step)

    majority(g, r).execute(RawStream(5), observer=watch)
    assert bad == []


# ---- multiplication -----------------------------------------------------------------

@pytest.mark.parametrize("x,y", [(0, 5), (3, 4), (1, 1), (3, 0), (6, 7)])
def test_slow_multiplication(x, y):
    res, _ = multiply_slow(x, y).execute(RawStream(x * 10 + y))
    assert res.stabilized and res.output == ProductSize(x * y)


@pytest.mark.parametrize("x,y", [(2, 3), (0, 5), (4, 0), (1, 1), (3, 8)])
def test_fast_multiplication(x, y):
    res, _ = multiply_fast(x, y).execute(RawStream(x * 10 + y))
    assert res.stabilized and res.output == ProductSize(x * y)
    assert rounds(res.rule_counts) == y.bit_length()


def test_fast_multiplication_five_by_six():
    res, _ = multiply_fast(5, 6).execute(RawStream(56))
    assert res.output == ProductSize(30)
    assert rounds(res.rule_counts) == 3


@pytest.mark.parametrize("make", [multiply_slow, multiply_fast])
def test_free_pool_exhausted(make):
    res, _ = make(3, 4, free=5).execute(RawStream(2))
    assert not res.stabilized and not res.correct
    assert any(d.startswith("FreePoolExhausted") for d in res.diagnostics)


def test_negative_inputs_rejected():
    with pytest.raises(ValueError):
        multiply_slow(-1, 2)
    with pytest.raises(ValueError):
        multiply_fast(2, 2, free=-1)


# ---- median -----------------------------------------------------------------------

def test_standard_median_three_keys():
    res, _ = median_standard([5, 1, 9]).execute(RawStream(4))
    assert res.stabilized and res.output == MedianKey(5)


def test_standard_median_partition():
    res, _ = median_standard(range(1, 102)).execute(RawStream(11))
    assert res.correct and res.census == {"L": 50, "N": 1, "U": 50}
    assert res.output == MedianKey(51)


def test_median_needs_odd_distinct_keys():
    with pytest.raises(ModelAssumptionViolated):
        median_standard([1, 2])
    with pytest.raises(ModelAssumptionViolated):
        fast_median([3, 3, 4])


@pytest.mark.parametrize("seed", range(6))
def test_fast_median_nine_keys(seed):
    res, _ = fast_median(range(1, 10)).execute(RawStream(seed))
    assert res.correct and res.output == MedianKey(5)
    assert res.extras["report"].violations == 0


@pytest.mark.parametrize("seed", range(4))
def test_fast_median_report_invariants(seed):
    keys = [(k * 37) % 101 for k in range(101)]
    res, _ = fast_median(keys).execute(RawStream(seed))
    assert res.correct
    rep = res.extras["report"]
    assert rep.iterations[-1].verdict == "tie"
    for a, b in zip(rep.iterations, rep.iterations[1:]):
        assert b.candidates_before == a.candidates_after < a.candidates_before
    for it in rep.iterations:
        assert it.median_in_c
        for ph in it.phases:
            assert 0 <= ph.colored_this_phase <= ph.uncolored_before
            assert ph.interactions_used > 0 and ph.chunks_used >= 0
            assert ph.colored_this_phase >= math.ceil(ph.uncolored_before / 22)


def test_two_pivots_raise():
    class TwoPivots(FastMedian):
        def _stage(self, sim, pop, halts, budget_end, audit_ref=-1):
            if pop.spec.name == "median-fast/le":
                for a in range(2):
                    pop.set_state(a, "Ldone")
                for a in range(2, pop.n):
                    pop.set_state(a, "F")
                sim.bind(pop, halts, None)
                return pop
            return super()._stage(sim, pop, halts, budget_end, audit_ref)

    with pytest.raises(InvariantBreach):
        TwoPivots(range(1, 8)).execute(RawStream(0), Limits(10**6))
