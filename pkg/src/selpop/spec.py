"""Protocol descriptions: states, group partition, target map and rules."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import SpecError

STANDARD = "standard"
SELECTIVE = "selective"
ALL_GROUP = "*"


class Guard(enum.Enum):
    NONE = ""
    LESS = "<"       # initiator key < responder key
    GREATER = ">"    # initiator key > responder key

    def outcomes(self) -> tuple[int, ...]:
        """Comparison outcomes (0: less, 1: greater) this guard accepts."""
        if self is Guard.LESS:
            return (0,)
        if self is Guard.GREATER:
            return (1,)
        return (0, 1)


@dataclass(frozen=True)
class Rule:
    initiator: str
    responder: str | None
    initiator_out: str
    responder_out: str | None = None
    guard: Guard = Guard.NONE
    group: str | None = None

    @property
    def is_null(self) -> bool:
        return self.responder is None

    def __str__(self) -> str:
        grp = f"{self.group}|" if self.group is not None else ""
        if self.is_null:
            return f"{self.initiator} + {grp}null -> {self.initiator_out}"
        g = f" [{self.guard.value}]" if self.guard is not Guard.NONE else ""
        return f"{self.initiator} + {grp}{self.responder}{g} -> {self.initiator_out} + {self.responder_out}"


@dataclass(frozen=True)
class Group:
    name: str
    states: tuple[str, ...]


@dataclass(frozen=True)
class SpecIssue:
    kind: str
    message: str
    # what the issue is about: ("rule", index), ("group", name), ("state", name),
    # ("target", state) or ("spec", "")
    subject: tuple[str, object] = ("spec", "")


@dataclass(frozen=True)
class ProtocolSpec:
    name: str
    model: str
    states: tuple[str, ...]
    groups: tuple[Group, ...] = ()
    targets: tuple[tuple[str, str], ...] = ()
    rules: tuple[Rule, ...] = ()
    # Standard model only: order every drawn pair by key (smaller first)
    # before matching, which makes the rules symmetric in the two roles.
    key_order: bool = False
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.check:
            issues = spec_issues(self)
            if issues:
                first = issues[0]
                raise SpecError(first.message, kind=first.kind)

    @property
    def selective(self) -> bool:
        return self.model == SELECTIVE

    @property
    def comparison_model(self) -> bool:
        return self.key_order or any(r.guard is not Guard.NONE for r in self.rules)

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def group_names(self) -> tuple[str, ...]:
        if not self.selective:
            return (ALL_GROUP,)
        return tuple(g.name for g in self.groups)

    @cached_property
    def group_of(self) -> dict[str, str]:
        if not self.selective:
            return {s: ALL_GROUP for s in self.states}
        return {s: g.name for g in self.groups for s in g.states}

    @cached_property
    def target_of(self) -> dict[str, str]:
        return dict(self.targets)

    def members(self, group: str) -> tuple[str, ...]:
        if not self.selective:
            return self.states
        for g in self.groups:
            if g.name == group:
                return g.states
        raise KeyError(group)

    def rules_for(self, state: str) -> list[Rule]:
        return [r for r in self.rules if r.initiator == state]

    def null_rule(self, state: str) -> Rule | None:
        for r in self.rules:
            if r.is_null and r.initiator == state:
                return r
        return None

    def replace(self, **changes) -> "ProtocolSpec":
        fields = dict(name=self.name, model=self.model, states=self.states, groups=self.groups,
                      targets=self.targets, rules=self.rules, key_order=self.key_order)
        fields.update(changes)
        return ProtocolSpec(**fields)


def make_spec(name: str, model: str, states: Iterable[str], *,
              groups: Mapping[str, Sequence[str]] | None = None,
              targets: Mapping[str, str] | None = None,
              rules: Iterable[Rule] = (), key_order: bool = False, check: bool = True) -> ProtocolSpec:
    """Convenience constructor taking plain dicts.

    For selective specs, rules given without a group get the initiator's target,
    and initiators without an explicit target take the group named in their rules.
    """
    targets = dict(targets or {})
    rules = list(rules)
    if model == SELECTIVE:
        for r in rules:
            if r.group is not None:
                targets.setdefault(r.initiator, r.group)
        rules = [r if r.group is not None or r.initiator not in targets
                 else Rule(r.initiator, r.responder, r.initiator_out, r.responder_out, r.guard,
                           targets[r.initiator])
                 for r in rules]
    return ProtocolSpec(
        name=name, model=model, states=tuple(states),
        groups=tuple(Group(g, tuple(ss)) for g, ss in (groups or {}).items()),
        targets=tuple(targets.items()), rules=tuple(rules), key_order=key_order, check=check)


def _match_keys(rule: Rule) -> list[tuple]:
    if rule.is_null:
        return [(rule.initiator, None, None)]
    return [(rule.initiator, rule.responder, c) for c in rule.guard.outcomes()]


def spec_issues(spec: ProtocolSpec) -> list[SpecIssue]:
    """All invariant violations of ``spec``, in a stable order."""
    out: list[SpecIssue] = []
    add = lambda kind, msg, subj=("spec", ""): out.append(SpecIssue(kind, msg, subj))

    if spec.model not in (STANDARD, SELECTIVE):
        add("UnknownModel", f"model must be standard or selective, got {spec.model!r}")
        return out
    if not spec.states:
        add("NoStates", "protocol declares no states")
    seen: set[str] = set()
    for s in spec.states:
        if s in seen:
            add("DuplicateState", f"state {s!r} declared twice", ("state", s))
        seen.add(s)
    known = set(spec.states)

    if spec.model == STANDARD:
        for g in spec.groups:
            add("GroupInStandardModel", f"group {g.name!r} declared in a standard-model protocol",
                ("group", g.name))
        for s, _ in spec.targets:
            add("GroupInStandardModel", f"target for {s!r} declared in a standard-model protocol",
                ("target", s))
    else:
        if spec.key_order:
            add("KeyOrderInSelectiveModel", "key ordering of pairs is a standard-model directive")
        owner: dict[str, str] = {}
        names: set[str] = set()
        for g in spec.groups:
            if g.name in names:
                add("DuplicateGroup", f"group {g.name!r} declared twice", ("group", g.name))
            names.add(g.name)
            for s in g.states:
                if s not in known:
                    add("UnknownState", f"group {g.name!r} lists unknown state {s!r}", ("group", g.name))
                elif s in owner:
                    add("OverlappingGroups", f"state {s!r} is in both {owner[s]!r} and {g.name!r}",
                        ("group", g.name))
                else:
                    owner[s] = g.name
        for s in spec.states:
            if s not in owner:
                add("UncoveredState", f"state {s!r} belongs to no group", ("state", s))
        tseen: set[str] = set()
        for s, g in spec.targets:
            if s not in known:
                add("UnknownState", f"target declared for unknown state {s!r}", ("target", s))
            if g not in names:
                add("UnknownGroup", f"target of {s!r} is unknown group {g!r}", ("target", s))
            if s in tseen:
                add("TargetConflict", f"state {s!r} has two targets", ("target", s))
            tseen.add(s)

    target_of = dict(spec.targets)
    group_states = {g.name: set(g.states) for g in spec.groups}
    claimed: dict[tuple, int] = {}
    for i, r in enumerate(spec.rules):
        subj = ("rule", i)
        refs = [r.initiator, r.initiator_out] + ([r.responder, r.responder_out] if not r.is_null else [])
        bad = [s for s in refs if s not in known]
        if bad:
            add("UnknownState", f"rule {i + 1} uses unknown state {bad[0]!r}", subj)
            continue
        if r.is_null:
            if r.responder_out is not None:
                add("MalformedRule", f"rule {i + 1}: a null rule rewrites only the initiator", subj)
            if r.guard is not Guard.NONE:
                add("MalformedRule", f"rule {i + 1}: a null rule cannot carry a guard", subj)
        elif r.responder_out is None:
            add("MalformedRule", f"rule {i + 1}: missing responder output", subj)
        if spec.model == STANDARD:
            if r.group is not None:
                add("GroupInStandardModel", f"rule {i + 1} names a group in a standard-model protocol", subj)
            if r.is_null:
                add("NullRuleInStandardModel", f"rule {i + 1}: null rules need the selective model", subj)
            if r.guard is not Guard.NONE:
                add("GuardInStandardModel",
                    f"rule {i + 1}: guards need the selective model (use 'order by-key')", subj)
        else:
            tgt = target_of.get(r.initiator)
            if tgt is None:
                add("MissingTarget", f"rule {i + 1}: initiator {r.initiator!r} has no target group", subj)
            elif r.group is not None and r.group != tgt:
                if r.group not in group_states:
                    add("UnknownGroup", f"rule {i + 1} names unknown group {r.group!r}", subj)
                else:
                    add("TargetConflict",
                        f"rule {i + 1} targets {r.group!r} but {r.initiator!r} targets {tgt!r}", subj)
            elif tgt is not None and not r.is_null and r.responder not in group_states.get(tgt, ()):
                add("RulePatternOutsideTargetGroup",
                    f"rule {i + 1}: responder {r.responder!r} is not in target group {tgt!r}", subj)
        for key in _match_keys(r):
            if key in claimed:
                add("DuplicateRuleMatch", f"rules {claimed[key] + 1} and {i + 1} match the same draw", subj)
            else:
                claimed[key] = i
    return out


def structurally_equal(a: ProtocolSpec, b: ProtocolSpec) -> bool:
    """Equality up to declaration order of states, groups, targets and rules."""
    return (
        a.name == b.name and a.model == b.model and a.key_order == b.key_order
        and sorted(a.states) == sorted(b.states)
        and {g.name: frozenset(g.states) for g in a.groups} == {g.name: frozenset(g.states) for g in b.groups}
        and dict(a.targets) == dict(b.targets)
        and Counter(a.rules) == Counter(b.rules)
    )


def lift(spec: ProtocolSpec, payloads: Sequence[str], fixed: Iterable[str] = (),
         name: str | None = None) -> ProtocolSpec:
    """Product of ``spec`` with a per-agent payload that rules carry unchanged.

    Every state ``s`` outside ``fixed`` becomes ``s.p`` for each payload ``p``;
    a rule is copied once per combination of initiator and responder payloads.
    """
    fixed = set(fixed)

    def copies(s: str) -> list[tuple[str, str | None]]:
        return [(s, None)] if s in fixed else [(f"{s}.{p}", p) for p in payloads]

    def tag(s: str | None, p: str | None) -> str | None:
        if s is None or s in fixed or p is None:
            return s
        return f"{s}.{p}"

    states = [c for s in spec.states for c, _ in copies(s)]
    groups = tuple(Group(g.name, tuple(c for s in g.states for c, _ in copies(s))) for g in spec.groups)
    targets = tuple((c, t) for s, t in spec.targets for c, _ in copies(s))
    rules = []
    for r in spec.rules:
        for ci, pi in copies(r.initiator):
            if r.is_null:
                rules.append(Rule(ci, None, tag(r.initiator_out, pi), None, r.guard, r.group))
                continue
            for cr, pr in copies(r.responder):
                rules.append(Rule(ci, cr, tag(r.initiator_out, pi), tag(r.responder_out, pr), r.guard, r.group))
    return ProtocolSpec(name or spec.name, spec.model, tuple(states), groups, targets, tuple(rules),
                        spec.key_order)
