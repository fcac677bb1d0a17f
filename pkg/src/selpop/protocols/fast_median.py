"""Median selection by repeated pivot partitioning in the selective model.

The protocol is a loop of stages run under one leader.  Each stage is its
own selective spec; the controller swaps specs only when the leader enters
a stage-final state, and the swap renames states one-to-one (or merges
names), so no agent learns anything it could not have held in its state.
The union of all stage state spaces is fixed and independent of n.

Stages of one iteration:

* coloring phases: agents compare keys with the pivot ``P`` or with already
  colored agents; colored agents hold up to 21 tickets;
* reset: after a phase, colored agents settle and neutral ones return to
  the uncolored group;
* majority: settled colors run the M-protocol, the leader probes the verdict;
* broadcast: the verdict clears the candidate flag of the losing side;
* handover: the pivot passes to a uniformly met candidate.

A tie ends the loop; the pivot is the median and an epidemic announces it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .. import kernel as K
from ..engine import Limits, RunResult, Simulation, Trace
from ..errors import InvariantBreach
from ..population import Population
from ..rng import RawStream
from ..spec import Guard, Rule, lift, make_spec
from . import majority as M
from .base import MedianKey, PhaseLog
from .median_standard import check_keys, true_median

TICKETS = 21
CANDS = ("c0", "c1")
LT, GT = Guard.LESS, Guard.GREATER


def R(t, c):
    return f"R{t}.{c}"


def G(t, c):
    return f"G{t}.{c}"


# ---- stage specs ----------------------------------------------------------

LE_SPEC = make_spec(
    "median-fast/le", "selective", ["L", "Ldone", "F"],
    groups={"G0": ["L", "Ldone"], "G1": ["F"]},
    rules=[Rule("L", "L", "L", "F", group="G0"), Rule("L", None, "Ldone", group="G0")],
)

COLORED = [f(t, c) for c in CANDS for f in (R, G) for t in range(TICKETS + 1)]
ACTIVE = COLORED + [f"N.{c}" for c in CANDS]
SETTLED = [f"{s}.{c}" for s in ("Rs", "Gs") for c in CANDS]
UNCOLORED = [f"N0.{c}" for c in CANDS]


@lru_cache(maxsize=None)
def coloring_spec(destroy_pivot: bool = False):
    pivots = ["P1", "P", "Pd", "Pf"]
    groups = {"G0": UNCOLORED, "G1": pivots + ACTIVE, "GS": SETTLED}
    rules: list[Rule] = []
    add = lambda *a, g: rules.append(Rule(*a, group=g))
    for d in CANDS:
        for p in ("P1", "P"):
            add(p, f"N0.{d}", "P", G(TICKETS, d), LT, g="G0")
            add(p, f"N0.{d}", "P", R(TICKETS, d), GT, g="G0")
    add("P1", None, "Pf", g="G0")
    add("P", None, "Pd", g="G0")
    for c in CANDS:
        for t in range(1, TICKETS + 1):
            for d in CANDS:
                add(R(t, c), f"N0.{d}", R(t - 1, c), f"N.{d}", LT, g="G0")
                add(R(t, c), f"N0.{d}", R(t, c), R(TICKETS, d), GT, g="G0")
                add(G(t, c), f"N0.{d}", G(t, c), G(TICKETS, d), LT, g="G0")
                add(G(t, c), f"N0.{d}", G(t - 1, c), f"N.{d}", GT, g="G0")
            add(R(t, c), None, R(t, c), g="G0")
            add(G(t, c), None, G(t, c), g="G0")
        for d in CANDS:
            add(R(0, c), f"N.{d}", R(0, c), R(TICKETS, d), GT, g="G1")
            add(G(0, c), f"N.{d}", G(0, c), G(TICKETS, d), LT, g="G1")
        add(f"N.{c}", "P", R(TICKETS, c), "P", LT, g="G1")
        add(f"N.{c}", "P", G(TICKETS, c), "P", GT, g="G1")
        # a ticketless colored agent meeting the pivot leaves it a pivot; the
        # fault injection colors the pivot itself instead
        add(R(0, c), "P", R(0, c), R(TICKETS, "c0") if destroy_pivot else "P", LT, g="G1")
        add(G(0, c), "P", G(0, c), G(TICKETS, "c0") if destroy_pivot else "P", GT, g="G1")
        for s in (R(0, c), G(0, c), f"N.{c}"):
            add(s, None, s, g="G1")
    states = pivots + UNCOLORED + ACTIVE + SETTLED
    name = "median-fast/coloring" + ("+destroy-pivot" if destroy_pivot else "")
    return make_spec(name, "selective", states, groups=groups, rules=rules)


def _settle(s: str) -> str:
    base, c = s.split(".")
    if base == "N":
        return f"N0.{c}"
    return f"{'Rs' if base[0] == 'R' else 'Gs'}.{c}"


@lru_cache(maxsize=None)
def reset_spec():
    informers = ["Pd", "P1"] + UNCOLORED + SETTLED
    rules = []
    for i in informers:
        if i == "P1":
            continue
        for a in ACTIVE:
            rules.append(Rule(i, a, i, _settle(a), group="GA"))
        rules.append(Rule(i, None, "P1" if i == "Pd" else i, group="GA"))
    return make_spec("median-fast/reset", "selective", informers + ACTIVE,
                     groups={"GI": informers, "GA": ACTIVE}, rules=rules)


PAYLOADS = ("r0", "r1", "g0", "g1")
M_STATES = [f"{s}.{p}" for s in M.STATES for p in PAYLOADS]


@lru_cache(maxsize=None)
def majority_spec():
    base = lift(M.SPEC, PAYLOADS)
    probes = ["Q1", "Q2", "VL", "VU", "VT"]
    rules = list(base.rules)
    for p in PAYLOADS:
        rules.append(Rule("Q1", f"R*.{p}", "VL", f"R*.{p}", group="GR"))
        rules.append(Rule("Q2", f"G*.{p}", "VU", f"G*.{p}", group="GG"))
    rules.append(Rule("Q1", None, "Q2", group="GR"))
    rules.append(Rule("Q2", None, "VT", group="GG"))
    groups = {g.name: list(g.states) for g in base.groups}
    groups["GQ"] = probes
    targets = dict(base.targets)
    targets.update({"Q1": "GR", "Q2": "GG"})
    return make_spec("median-fast/majority", "selective", list(base.states) + probes,
                     groups=groups, targets=targets, rules=rules)


@lru_cache(maxsize=None)
def broadcast_spec(winner: str):
    informers = ["V", "H"] + UNCOLORED
    rules = []
    for i in ["V"] + UNCOLORED:
        for m in M_STATES:
            pay = m.split(".")[1]
            keep = pay[1] == "1" and pay[0] == winner
            rules.append(Rule(i, m, i, f"N0.c{int(keep)}", group="GM"))
        rules.append(Rule(i, None, "H" if i == "V" else i, group="GM"))
    return make_spec(f"median-fast/broadcast-{winner}", "selective", informers + M_STATES,
                     groups={"GI": informers, "GM": M_STATES}, rules=rules)


HANDOVER_SPEC = make_spec(
    "median-fast/handover", "selective", ["H", "Hx", "P1", "N0.c0", "N0.c1"],
    groups={"GH": ["H", "Hx", "P1"], "GC1": ["N0.c1"], "GC0": ["N0.c0"]},
    rules=[
        Rule("H", "N0.c1", "N0.c0", "P1", group="GC1"),
        Rule("H", None, "Hx", group="GC1"),      # empty candidate set
    ],
)

ANNOUNCE_SPEC = make_spec(
    "median-fast/announce", "selective", ["A", "A*", "Dn"] + M_STATES,
    groups={"GD": ["A", "A*", "Dn"], "GM": M_STATES},
    rules=[Rule("A", m, "A", "Dn", group="GM") for m in M_STATES]
    + [Rule("Dn", m, "Dn", "Dn", group="GM") for m in M_STATES]
    + [Rule("A", None, "A*", group="GM"), Rule("Dn", None, "Dn", group="GM")],
)


def _audit_map() -> dict[str, int]:
    rel = {s: -1 for s in COLORED if s[0] == "R"}
    rel.update({s: 1 for s in COLORED if s[0] == "G"})
    rel.update({s: -1 if s[0] == "R" else 1 for s in SETTLED})
    return rel


def stage_specs() -> list:
    """Every stage spec, e.g. for documentation or round-trip checks."""
    return [LE_SPEC, coloring_spec(), reset_spec(), majority_spec(), broadcast_spec("r"),
            broadcast_spec("g"), HANDOVER_SPEC, ANNOUNCE_SPEC]


# ---- controller -----------------------------------------------------------

class StageStall(Exception):
    pass


@dataclass
class Iteration:
    candidates_before: int
    candidates_after: int
    phases: list[PhaseLog] = field(default_factory=list)
    verdict: str = ""
    median_in_c: bool = True


@dataclass
class FastMedianReport:
    iterations: list[Iteration] = field(default_factory=list)
    violations: int = 0
    first_violation_step: int = 0

    @property
    def phases(self) -> list[PhaseLog]:
        return [ph for it in self.iterations for ph in it.phases]


class FastMedian:
    """Composed controller; same calling convention as :class:`Bundle`."""

    name = "median-fast"

    def __init__(self, keys: Sequence, *, destroy_pivot: bool = False, audit: bool = True,
                 stop_on_violation: bool = False, max_iterations: int | None = None):
        self.keys = check_keys(keys)
        self.n = len(self.keys)
        self.destroy_pivot = destroy_pivot
        self.audit = audit
        self.stop_on_violation = stop_on_violation
        self.max_iterations = max_iterations or 8 * self.n.bit_length() + 20
        self.expected = MedianKey(true_median(self.keys))
        self.params = {"n": self.n}

    def population(self) -> Population:
        return Population.from_keyed(LE_SPEC, [("L", k) for k in self.keys])

    def default_limit(self, n: int) -> int:
        return max(10**6, int(400 * n * math.log(n) ** 4))

    # one stage: bind the renamed population, then step until a leader state halts it
    def _stage(self, sim: Simulation, pop: Population, halts, budget_end, audit_ref=-1):
        sim.bind(pop, halts, _audit_map() if self.audit and audit_ref >= 0 else None)
        sim.audit_ref = audit_ref
        while True:
            left = budget_end - sim.interactions
            if left <= 0:
                raise StageStall(f"interaction budget exhausted in stage {pop.spec.name}")
            code = sim.advance(left)
            if code == K.HALTED:
                return pop
            if code == K.VIOLATION:
                raise StageStall(f"coloring soundness violated in stage {pop.spec.name}")

    def execute(self, stream: RawStream, limits: Limits | None = None, *, record: bool = False,
                pop: Population | None = None, observer=None) -> tuple[RunResult, Trace]:
        if observer is not None:
            raise ValueError("the composed controller does not support per-step observers")
        pop = pop if pop is not None else self.population()
        n = pop.n
        limits = limits or Limits(self.default_limit(n))
        sim = Simulation(pop, stream, record=record, stop_on_violation=self.stop_on_violation)
        end = limits.max_interactions
        median_agent = int(np.flatnonzero(pop.ranks == n // 2)[0])
        report = FastMedianReport()
        diagnostics: list[str] = []
        output = MedianKey(None)
        stabilized = False
        try:
            self._stage(sim, pop, ["Ldone"], end)
            color = coloring_spec(self.destroy_pivot)
            rename = {"Ldone": "P1", "F": "N0.c1"}
            for _ in range(self.max_iterations):
                start = sim.pop.rebind(color, rename)
                pivots = start.agents_in("P1")
                if len(pivots) != 1:
                    raise InvariantBreach(f"expected one pivot, found {len(pivots)}")
                pivot = int(pivots[0])
                it = Iteration(1 + start.count("N0.c1"), 0)
                report.iterations.append(it)
                # coloring phases until a phase opens on an empty uncolored group
                while True:
                    m = start.count(*UNCOLORED)
                    t0, k0 = sim.interactions, sim.chunk_report().chunk_count
                    pop = self._stage(sim, start, ["Pd", "Pf"], end, audit_ref=pivot)
                    if pop.count("Pf"):
                        break
                    it.phases.append(PhaseLog(m, pop.count(*COLORED), sim.interactions - t0,
                                              sim.chunk_report().chunk_count - k0))
                    self._stage(sim, pop.rebind(reset_spec()), ["P1"], end, audit_ref=pivot)
                    start = sim.pop.rebind(color)
                # majority over the settled colors
                to_m = {"Pf": "Q1"}
                for c in CANDS:
                    to_m[f"Rs.{c}"] = f"R.r{c[1]}"
                    to_m[f"Gs.{c}"] = f"G.g{c[1]}"
                pop = self._stage(sim, pop.rebind(majority_spec(), to_m), ["VL", "VU", "VT"], end)
                if pop.count("VT"):
                    it.verdict = "tie"
                    it.candidates_after = 1
                    it.median_in_c = pivot == median_agent
                    pop = self._stage(sim, pop.rebind(ANNOUNCE_SPEC, {"VT": "A"}), ["A*"], end)
                    output = MedianKey(pop.reveal_key(pivot))
                    stabilized = True
                    break
                winner = "r" if pop.count("VL") else "g"
                it.verdict = "smaller" if winner == "r" else "larger"
                pop = self._stage(sim, pop.rebind(broadcast_spec(winner), {"VL": "V", "VU": "V"}), ["H"], end)
                it.candidates_after = pop.count("N0.c1")
                it.median_in_c = pop.state_name(median_agent) == "N0.c1"
                pop = self._stage(sim, pop.rebind(HANDOVER_SPEC), ["P1", "Hx"], end)
                if pop.count("Hx"):
                    raise InvariantBreach("pivot handover found an empty candidate set")
                rename = {}
            else:
                diagnostics.append(f"IterationLimit: no tie within {self.max_iterations} iterations")
        except StageStall as exc:
            diagnostics.append(f"Stall: {exc}")
        report.violations = sim.violations
        report.first_violation_step = int(sim.ctr[K.C_VIOL_STEP])
        if report.violations:
            diagnostics.append(f"ColoringViolation: {report.violations} unsound colorings")
        if any(not it.median_in_c for it in report.iterations):
            diagnostics.append("MedianLost: the true median left the candidate set")
        result = RunResult(
            stabilized=stabilized,
            interactions=sim.interactions,
            chunks=sim.chunk_report(),
            census=sim.pop.census(),
            kind_counts=sim.kinds(),
            rule_counts=[int(c) for c in sim.rule_counts],
            diagnostics=diagnostics,
            output=output,
        )
        result.correct = stabilized and output == self.expected and not report.violations
        result.extras = {"report": report, "iterations": len(report.iterations),
                         "phases": len(report.phases)}
        return result, sim.trace()


def fast_median(keys: Sequence, **kw) -> FastMedian:
    return FastMedian(keys, **kw)
