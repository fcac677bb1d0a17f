import numpy as np
import pytest
from hypothesis import given, strategies as st

from selpop import kernel as K
from selpop.engine import (Limits, Simulation, is_stable_generic, sample_initiator, step_selective,
                           step_standard)
from selpop.errors import GuardedProtocolNeedsPredicate, MissingNullRule
from selpop.metrics import fragmented_time
from selpop.population import Population, build_population
from selpop.protocols import epidemic_selective, leader_election
from selpop.protocols.epidemic import SELECTIVE_SPEC as EPI, STANDARD_SPEC as EPI_STD
from selpop.protocols.leader_election import SPEC as LE
from selpop.protocols.majority import SPEC as MAJ
from selpop.protocols.median_standard import SPEC as MED
from selpop.rng import RawStream
from selpop.spec import Rule, make_spec
from selpop.verify import (frozen_configs, oracle_step, probe_spec, responder_chi_square, scenario_populations,
                           scripted_scenario)
from reference_stepper import ReferenceScheduler, WordReader


def step_with_initiator(make_pop, stepper, spec, agent):
    """First seed whose first step picks ``agent`` as initiator."""
    for seed in range(500):
        pop = make_pop()
        rec = stepper(pop, spec, RawStream(seed))
        if rec.initiator == agent:
            return pop, rec
    raise AssertionError("no seed picked the agent")


# ---- selective steps ------------------------------------------------------------

def test_epidemic_meaningful_step():
    pop, rec = step_with_initiator(lambda: build_population(EPI, [("1", 1), ("0", 2)]), step_selective, EPI, 0)
    assert rec.kind == "Meaningful" and rec.responder in (1, 2)
    assert pop.state_name(rec.responder) == "1"


def test_epidemic_emptiness_step():
    pop, rec = step_with_initiator(lambda: build_population(EPI, {"1": 3}), step_selective, EPI, 0)
    assert rec.kind == "Emptiness" and rec.responder is None
    assert pop.state_name(0) == "Stop"


def test_le_singleton_step():
    pop, rec = step_with_initiator(lambda: build_population(LE, [("L", 1), ("F", 3)]), step_selective, LE, 0)
    assert rec.kind == "Singleton"
    assert pop.state_name(0) == "L*"


def test_missing_null_rule_is_an_error():
    spec = make_spec("bare", "selective", ["a", "b"], groups={"A": ["a"], "B": ["b"]},
                     targets={"a": "B"}, rules=[Rule("a", "b", "b", "b")])
    pop = build_population(spec, {"a": 2})
    with pytest.raises(MissingNullRule):
        Simulation(pop, RawStream(0)).advance(10)


# ---- standard steps ---------------------------------------------------------------

def test_median_initialisation_pair():
    def make():
        return build_population(MED, [("N", 3), ("N", 7)], keyed=True)
    for agent in (0, 1):
        pop, rec = step_with_initiator(make, step_standard, MED, agent)
        assert rec.kind == "Meaningful"
        assert [pop.state_name(a) for a in (0, 1)] == ["L", "U"]


def test_median_fix_order_pair():
    pop = build_population(MED, [("U", 2), ("L", 8)], keyed=True)
    rec = step_standard(pop, MED, RawStream(1))
    assert rec.kind == "Meaningful"
    assert [pop.state_name(0), pop.state_name(1)] == ["L", "U"]


def test_standard_epidemic_nomatch():
    pop = build_population(EPI_STD, {"0": 2})
    rec = step_standard(pop, EPI_STD, RawStream(4))
    assert rec.kind == "NoMatch" and rec.rule is None
    assert pop.census() == {"0": 2}


def test_standard_needs_two_agents():
    with pytest.raises(ValueError):
        step_standard(build_population(EPI_STD, {"1": 1}), EPI_STD, RawStream(0))


def test_sample_initiator_single_agent():
    pop = build_population(EPI, {"0": 1})
    assert all(sample_initiator(pop, RawStream(s)) == 0 for s in range(5))


def test_initiator_frequencies():
    spec = make_spec("idle", "standard", ["q"])
    sim = Simulation(build_population(spec, {"q": 4}), RawStream(11), record=True, track=False)
    sim.advance(1_000_000)
    freq = np.bincount(sim.trace().records[:, 1], minlength=4) / 1_000_000
    assert np.allclose(freq, 0.25, atol=0.005)


def test_responder_uniformity_chi_square():
    for k, pop in enumerate(frozen_configs()):
        _, dof, p = responder_chi_square(pop, 100_000, 50 + k)
        assert dof > 0 and p > 0.001


# ---- scripted scenarios and the reference stepper ------------------------------

@pytest.mark.parametrize("name", list(scenario_populations()))
def test_scripted_twenty_steps(name):
    pop = scenario_populations()[name]
    errors, kinds = scripted_scenario(pop, seed=sum(map(ord, name)))
    assert errors == []
    assert len(kinds) == 20


def test_probe_discriminates_emptiness_and_singleton():
    pop = Population.from_counts(probe_spec(), {"x": 1, "y": 1, "z": 2})
    _, kinds = scripted_scenario(pop, seed=3, steps=60)
    assert {"Emptiness", "Singleton", "NoMatch"} <= set(kinds)


def _reference_matches(pop, seed, steps):
    spec = pop.spec
    names = [pop.state_name(a) for a in range(pop.n)]
    ref = ReferenceScheduler(spec, names, pop.ranks.tolist())
    rd = WordReader(np.random.PCG64(seed).random_raw(steps * 8 + 1000))
    sim = Simulation(pop, RawStream(seed), record=True)
    sim.advance(steps)
    got = sim.trace().records
    for row in got:
        i, r, kind, rule = ref.step(rd)
        want_r = r if kind in (K.MEANINGFUL, K.NOMATCH) else -1
        want = (i, want_r, kind, rule if kind != K.NOMATCH else -1)
        assert tuple(int(x) for x in row[1:]) == want
    assert [pop.state_name(a) for a in range(pop.n)] == ref.names
    assert int(sim.stream.pos[0]) == rd.i


@pytest.mark.parametrize("name", ["epidemic", "epidemic-std", "le", "majority", "mult-slow", "mult-fast",
                                  "median-std", "median-fast"])
def test_kernel_matches_reference_bit_for_bit(name):
    from selpop.protocols import make_bundle
    from selpop.protocols.fast_median import coloring_spec
    if name == "median-fast":
        keys = list(range(1, 42))
        pop = Population.from_keyed(coloring_spec(), [("P1" if k == 21 else "N0.c1", k) for k in keys])
    else:
        pop = make_bundle(name, 41 if "median" in name else 40, {}, seed=9).population()
    _reference_matches(pop, seed=1234, steps=3000)


@given(st.integers(0, 2**32), st.integers(2, 12), st.integers(0, 12))
def test_reference_agreement_on_random_majority(seed, g, r):
    pop = build_population(MAJ, {"G": g, "R": r})
    _reference_matches(pop, seed, 200)


# ---- run ------------------------------------------------------------------------

def test_epidemic_run_stabilizes():
    b = epidemic_selective(1000)
    res, _ = b.execute(RawStream(2024))
    assert res.stabilized and res.correct
    assert set(res.census) <= {"1", "Stop"}


def test_limits_reject_zero_budget():
    with pytest.raises(ValueError):
        Limits(0)


def test_le_from_seven_candidates():
    res, _ = leader_election(7).execute(RawStream(7))
    assert res.census == {"L*": 1, "F*": 6}


def test_unstable_run_reports_not_exception():
    res, _ = leader_election(200).execute(RawStream(1), Limits(10))
    assert not res.stabilized and res.diagnostics[0].startswith("NotStabilized")


def test_runs_are_deterministic():
    a = leader_election(300).execute(RawStream(5), record=True)
    b = leader_election(300).execute(RawStream(5), record=True)
    assert np.array_equal(a[1].records, b[1].records)
    assert a[0].chunks == b[0].chunks


def test_streamed_chunking_matches_recomputation():
    for seed in range(5):
        res, trace = epidemic_selective(200).execute(RawStream(seed), record=True)
        again = fragmented_time(trace.responders(), 200)
        assert again == res.chunks


def test_split_advance_equals_single_advance():
    def trace(splits):
        sim = Simulation(leader_election(100).population(), RawStream(3), record=True)
        for s in splits:
            sim.advance(s)
        return sim.trace()
    one, many = trace([5000]), trace([1, 7, 992, 4000])
    assert np.array_equal(one.records, many.records) and one.chunks == many.chunks


@given(st.integers(0, 2**32), st.integers(2, 30))
def test_record_invariants(seed, n):
    pop = leader_election(n).population()
    sim = Simulation(pop, RawStream(seed), record=True)
    for _ in range(60):
        before = pop.state.copy()
        rec = sim.step()
        if rec.kind == "Meaningful":
            assert rec.responder is not None and rec.rule is not None
        if rec.kind in ("Emptiness", "Singleton"):
            assert rec.responder is None
        if rec.kind == "NoMatch":
            assert np.array_equal(before, pop.state)
        want = oracle_step(pop.spec, [pop.spec.states[s] for s in before], pop.ranks, rec.initiator, rec.responder)
        assert not isinstance(want, str) and want[0] == rec.kind
    pop.audit()


# ---- generic stability ------------------------------------------------------------

def test_generic_stability_examples():
    rested = epidemic_selective(4, rested=True).spec
    assert is_stable_generic(build_population(rested, {"1*": 4}))
    assert not is_stable_generic(build_population(EPI_STD, {"1": 4, "0": 1}))
    assert not is_stable_generic(build_population(MAJ, {"G*": 3, "N": 2}))
    with pytest.raises(GuardedProtocolNeedsPredicate):
        is_stable_generic(build_population(MED, [("N", 1), ("N", 2)], keyed=True))
