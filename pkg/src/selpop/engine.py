"""Random scheduler for the standard and selective models."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import kernel as K
from .errors import GuardedProtocolNeedsPredicate, MissingNullRule
from .metrics import ChunkReport, responder_cap
from .population import Population
from .rng import RawStream
from .spec import ProtocolSpec


@dataclass(frozen=True)
class InteractionRecord:
    step: int
    initiator: int
    responder: int | None
    kind: str
    rule: int | None


@dataclass(frozen=True)
class Limits:
    max_interactions: int
    stability_check_period: int | None = None   # default: n

    def __post_init__(self):
        if self.max_interactions < 1:
            raise ValueError("max_interactions must be at least 1")
        if self.stability_check_period is not None and self.stability_check_period < 1:
            raise ValueError("stability_check_period must be at least 1")


@dataclass
class RunResult:
    stabilized: bool
    interactions: int
    chunks: ChunkReport
    census: dict[str, int]
    kind_counts: dict[str, int]
    rule_counts: list[int] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)
    output: object = None
    correct: bool | None = None
    extras: dict = field(default_factory=dict)

    @property
    def parallel_time(self) -> float:
        return self.interactions / self.chunks.n

    @property
    def fragmented_time(self) -> float:
        return self.chunks.fragmented_time


@dataclass
class Trace:
    """Full interaction history (when recorded) plus the streamed chunking."""

    records: np.ndarray | None      # rows: step, initiator, responder, kind, rule (-1 = absent)
    chunks: ChunkReport

    def __iter__(self):
        if self.records is None:
            return iter(())
        return (_record(row) for row in self.records)

    def responders(self) -> list[int | None]:
        """Per-interaction tally entries used for chunking."""
        if self.records is None:
            raise ValueError("trace was not recorded")
        rows = self.records
        return [int(r) if k == K.MEANINGFUL else None for r, k in zip(rows[:, 2], rows[:, 3])]


def _record(row) -> InteractionRecord:
    step, i, r, kind, rule = (int(x) for x in row)
    return InteractionRecord(step, i, None if r < 0 else r, K.KIND_NAMES[kind], None if rule < 0 else rule)


@dataclass(frozen=True)
class CompiledSpec:
    target: np.ndarray
    match: np.ndarray
    null_rule: np.ndarray
    out_i: np.ndarray
    out_r: np.ndarray


def compile_spec(spec: ProtocolSpec) -> CompiledSpec:
    cached = spec.__dict__.get("_compiled")
    if cached is not None:
        return cached
    idx = spec.state_index
    gidx = {g: i for i, g in enumerate(spec.group_names)}
    s = len(spec.states)
    target = np.full(s, -1, dtype=np.int64)
    for st, g in spec.targets:
        target[idx[st]] = gidx[g]
    match = np.full((s, s, 2), -1, dtype=np.int64)
    null_rule = np.full(s, -1, dtype=np.int64)
    out_i = np.zeros(len(spec.rules), dtype=np.int64)
    out_r = np.full(len(spec.rules), -1, dtype=np.int64)
    for rid, r in enumerate(spec.rules):
        out_i[rid] = idx[r.initiator_out]
        if r.is_null:
            null_rule[idx[r.initiator]] = rid
            continue
        out_r[rid] = idx[r.responder_out]
        for c in r.guard.outcomes():
            match[idx[r.initiator], idx[r.responder], c] = rid
    compiled = CompiledSpec(target, match, null_rule, out_i, out_r)
    spec.__dict__["_compiled"] = compiled
    return compiled


class Simulation:
    """A population, a random stream and the counters of one run.

    The chunk tracker and counters survive :meth:`rebind`, so a composed
    protocol that swaps its active rule set keeps one continuous trace.
    """

    def __init__(self, pop: Population, stream: RawStream, *, track: bool = True, record: bool = False,
                 halt_states: Iterable[str] = (), audit_rel: dict[str, int] | None = None,
                 audit_ref: int = -1, stop_on_violation: bool = False):
        self.stream = stream
        self.track = track
        self.record = record
        n = pop.n
        self.ctr = np.zeros(K.N_COUNTERS, dtype=np.int64)
        self.kind_counts = np.zeros(4, dtype=np.int64)
        self.tally = np.zeros(n, dtype=np.int64)
        self.stamp = np.zeros(n, dtype=np.int64)
        self.bounds = np.zeros(64, dtype=np.int64)
        self.bmax = np.zeros(64, dtype=np.int64)
        self.resp_cap = responder_cap(n) if n >= 2 else 1
        self.rec = np.zeros((1024 if record else 1, 5), dtype=np.int64)
        self.audit_ref = audit_ref
        self.stop_on_violation = stop_on_violation
        self.stop_kinds = np.zeros(4, dtype=np.bool_)
        self.bind(pop, halt_states, audit_rel)

    def bind(self, pop: Population, halt_states: Iterable[str] = (), audit_rel: dict[str, int] | None = None):
        self.pop = pop
        self.spec = pop.spec
        self.compiled = compile_spec(pop.spec)
        idx = pop.spec.state_index
        self.halt = np.zeros(len(pop.spec.states), dtype=np.bool_)
        for s in halt_states:
            self.halt[idx[s]] = True
        self.audit_rel = np.zeros(len(pop.spec.states), dtype=np.int64)
        for s, rel in (audit_rel or {}).items():
            if s in idx:
                self.audit_rel[idx[s]] = rel
        self.rule_counts = np.zeros(len(pop.spec.rules), dtype=np.int64)

    @property
    def interactions(self) -> int:
        return int(self.ctr[K.C_STEP])

    @property
    def violations(self) -> int:
        return int(self.ctr[K.C_VIOL])

    def advance(self, max_steps: int, stop_kinds: Iterable[str] = ()) -> int:
        """Run up to ``max_steps`` steps; returns the kernel's stop code."""
        pop, c = self.pop, self.compiled
        self.stop_kinds[:] = False
        for k in stop_kinds:
            self.stop_kinds[K.KIND_NAMES.index(k)] = True
        start = self.interactions
        while True:
            left = max_steps - (self.interactions - start)
            if left <= 0:
                return K.DONE
            self.stream.ensure()
            code = K.advance(
                pop.spec.selective, pop.spec.key_order, pop.has_keys,
                pop.state, pop.ranks, pop.state_group, c.target, pop.members, pop.size, pop.pos, pop.counts,
                c.match, c.null_rule, c.out_i, c.out_r,
                self.halt, self.stop_kinds, self.audit_rel, self.audit_ref, self.stop_on_violation,
                self.stream.buf, self.stream.pos, left, self.ctr,
                self.record, self.rec,
                self.track, self.resp_cap, self.tally, self.stamp, self.bounds, self.bmax,
                self.kind_counts, self.rule_counts)
            if code == K.NEED_WORDS:
                continue
            if code == K.CHUNKS_FULL:
                self.bounds = np.concatenate([self.bounds, np.zeros_like(self.bounds)])
                self.bmax = np.concatenate([self.bmax, np.zeros_like(self.bmax)])
                continue
            if code == K.RECORDS_FULL:
                self.rec = np.concatenate([self.rec, np.zeros_like(self.rec)])
                continue
            if code == K.MISSING_NULL:
                agent = int(self.ctr[K.C_INFO])
                raise MissingNullRule(
                    f"{pop.spec.name}: no null rule for state {pop.state_name(agent)!r} (agent {agent})")
            return code

    def step(self) -> InteractionRecord:
        if not self.record:
            raise ValueError("single steps need record=True")
        self.advance(1)
        return _record(self.rec[self.ctr[K.C_NREC] - 1])

    def chunk_report(self) -> ChunkReport:
        k = int(self.ctr[K.C_CHUNKS])
        nb = int(self.ctr[K.C_NBOUND])
        maxima = list(self.bmax[:max(nb - 1, 0)]) + ([int(self.ctr[K.C_CURMAX])] if nb else [])
        return ChunkReport(self.pop.n, k, tuple(int(b) for b in self.bounds[:nb]),
                           tuple(int(m) for m in maxima), self.interactions)

    def trace(self) -> Trace:
        recs = self.rec[:self.ctr[K.C_NREC]].copy() if self.record else None
        return Trace(recs, self.chunk_report())

    def kinds(self) -> dict[str, int]:
        return {name: int(v) for name, v in zip(K.KIND_NAMES, self.kind_counts)}


def sample_initiator(pop: Population, rng: RawStream) -> int:
    return rng.below(pop.n)


def _single_step(pop: Population, spec: ProtocolSpec, rng: RawStream) -> InteractionRecord:
    if pop.spec is not spec and pop.spec != spec:
        raise ValueError("population was built for a different protocol")
    sim = Simulation(pop, rng, track=False, record=True)
    return sim.step()


def step_selective(pop: Population, spec: ProtocolSpec, rng: RawStream) -> InteractionRecord:
    if not spec.selective:
        raise ValueError(f"{spec.name} is a standard-model protocol")
    if spec.comparison_model and not pop.has_keys:
        raise ValueError("guarded rules need a keyed population")
    return _single_step(pop, spec, rng)


def step_standard(pop: Population, spec: ProtocolSpec, rng: RawStream) -> InteractionRecord:
    if spec.selective:
        raise ValueError(f"{spec.name} is a selective protocol")
    if pop.n < 2:
        raise ValueError("the standard model needs n >= 2")
    return _single_step(pop, spec, rng)


def is_stable_generic(pop: Population, spec: ProtocolSpec | None = None) -> bool:
    """True iff no scheduler draw can fire a rule that changes a state."""
    spec = spec or pop.spec
    if spec.comparison_model:
        raise GuardedProtocolNeedsPredicate(f"{spec.name} compares keys; supply a stability predicate")
    idx = spec.state_index
    counts = pop.counts
    gnames = spec.group_names
    for r in spec.rules:
        s = idx[r.initiator]
        if counts[s] == 0:
            continue
        if r.is_null:
            if r.initiator_out == r.initiator:
                continue
            tg = spec.target_of[r.initiator]
            avail = pop.size[gnames.index(tg)] - (1 if spec.group_of[r.initiator] == tg else 0)
            if avail == 0:
                return False
            continue
        if r.initiator_out == r.initiator and r.responder_out == r.responder:
            continue
        t = idx[r.responder]
        if counts[t] >= (2 if t == s else 1):
            return False
    return True


def run(pop: Population, spec: ProtocolSpec, rng: RawStream, limits: Limits, *,
        is_stable: Callable[[Population], bool] | None = None,
        stall: Callable[[Population], str | None] | None = None,
        halt_states: Iterable[str] = (), record: bool = False,
        observer: Callable[[Population, InteractionRecord], None] | None = None,
        sim: Simulation | None = None) -> tuple[RunResult, Trace]:
    """Step until the stability predicate holds or the interaction budget runs out.

    Stability is checked before the first step, every
    ``limits.stability_check_period`` interactions (default ``n``), and
    whenever an agent enters one of ``halt_states``.  With an ``observer``
    the run proceeds one step at a time and calls it after every step.
    """
    if pop.spec is not spec and pop.spec != spec:
        raise ValueError("population was built for a different protocol")
    if not spec.selective and pop.n < 2:
        raise ValueError("the standard model needs n >= 2")
    stable = is_stable or (lambda p: is_stable_generic(p, spec))
    if sim is None:
        sim = Simulation(pop, rng, record=record or observer is not None, halt_states=halt_states)
    start = sim.interactions
    period = limits.stability_check_period or pop.n
    stabilized = stable(pop)
    diagnostics: list[str] = []
    while not stabilized and sim.interactions - start < limits.max_interactions:
        if observer is not None:
            rec = sim.step()
            observer(pop, rec)
            due = (sim.interactions - start) % period == 0
            if not (due or (sim.halt[pop.state[rec.initiator]]
                            or (rec.responder is not None and sim.halt[pop.state[rec.responder]]))):
                continue
        else:
            budget = min(period, limits.max_interactions - (sim.interactions - start))
            sim.advance(budget)
        stabilized = stable(pop)
        if not stabilized and stall is not None:
            why = stall(pop)
            if why:
                diagnostics.append(why)
                break
    if not stabilized and not diagnostics:
        diagnostics.append(f"NotStabilized: no stable configuration within {limits.max_interactions} interactions")
    if spec.selective and sim.kind_counts[K.NOMATCH]:
        diagnostics.append(f"NoMatchDraws: {int(sim.kind_counts[K.NOMATCH])}")
    result = RunResult(
        stabilized=stabilized,
        interactions=sim.interactions - start,
        chunks=sim.chunk_report(),
        census=pop.census(),
        kind_counts=sim.kinds(),
        rule_counts=[int(c) for c in sim.rule_counts],
        diagnostics=diagnostics,
    )
    return result, sim.trace()


def parallel_time(interactions: int, n: int) -> float:
    return interactions / n


def log_n(n: int) -> float:
    return math.log(n)
