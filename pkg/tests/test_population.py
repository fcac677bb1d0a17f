import numpy as np
import pytest
from hypothesis import given, strategies as st

from selpop.errors import DuplicateKey, EmptyPopulation, UnknownState
from selpop.population import Population, build_population
from selpop.protocols.epidemic import SELECTIVE_SPEC as EPI
from selpop.protocols.median_standard import SPEC as MED


def test_epidemic_counts_fill_groups():
    pop = build_population(EPI, {"1": 1, "0": 2})
    assert pop.n == 3
    assert pop.group_size("G1") == 1
    assert pop.group_size("G0") == 2
    pop.audit()


def test_single_state_population():
    pop = build_population(EPI, [("0", 5)])
    assert pop.group_size("G0") == 5 and pop.group_size("G1") == 0


def test_keyed_population_hides_keys():
    pop = build_population(MED, [("N", 5), ("N", 1), ("N", 9)], keyed=True)
    assert pop.census() == {"N": 3}
    assert pop.compare(1, 0) and pop.compare(0, 2) and not pop.compare(2, 1)
    # ranks are a comparison surrogate, not the keys themselves
    assert sorted(pop.ranks.tolist()) == [0, 1, 2]


def test_construction_errors():
    with pytest.raises(DuplicateKey):
        build_population(MED, [("N", 1), ("N", 1)], keyed=True)
    with pytest.raises(UnknownState):
        build_population(EPI, {"2": 1})
    with pytest.raises(EmptyPopulation):
        build_population(EPI, {"0": 0})
    with pytest.raises(EmptyPopulation):
        build_population(MED, [], keyed=True)


def test_rebind_maps_occupied_states_only():
    pop = build_population(EPI, {"1": 2, "0": 1})
    other = pop.rebind(EPI, {"1": "Stop"})
    assert other.census() == {"Stop": 2, "0": 1}
    with pytest.raises(UnknownState):
        pop.rebind(EPI, {"1": "nope"})


@given(st.lists(st.tuples(st.integers(0, 19), st.sampled_from(["0", "1", "Stop"])), max_size=80))
def test_group_index_survives_any_rewrite_sequence(moves):
    pop = build_population(EPI, {"0": 12, "1": 8})
    for agent, state in moves:
        pop.set_state(agent, state)
        pop.audit()
    names = [pop.state_name(a) for a in range(pop.n)]
    for g in ("G0", "G1"):
        listed = sorted(pop.group_agents(g).tolist())
        assert listed == [a for a, s in enumerate(names) if EPI.group_of[s] == g]
    assert int(pop.size.sum()) == pop.n
    assert np.array_equal(pop.counts, np.bincount(pop.state, minlength=3))
