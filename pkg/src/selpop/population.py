"""Agent populations with a constant-time group membership index."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DuplicateKey, EmptyPopulation, UnknownState
from .spec import ProtocolSpec


class Population:
    """States, hidden keys and the per-group dense member lists of ``n`` agents.

    ``members[g, :size[g]]`` lists the agents whose state lies in group ``g``;
    ``pos[a]`` is agent ``a``'s slot in that list.  Keys are stored as ranks,
    which preserve every comparison; the raw keys are only handed out by
    :meth:`reveal_key` when a protocol announces its result.
    """

    def __init__(self, spec: ProtocolSpec, state: np.ndarray, keys: Sequence | None = None):
        self.spec = spec
        self.state = np.ascontiguousarray(state, dtype=np.int64)
        self.n = len(self.state)
        if self.n == 0:
            raise EmptyPopulation("population needs at least one agent")
        self._keys = None
        self._rank = np.zeros(self.n, dtype=np.int64)
        if keys is not None:
            keys = list(keys)
            if len(keys) != self.n:
                raise ValueError("one key per agent required")
            order = sorted(range(self.n), key=keys.__getitem__)
            for a, b in zip(order, order[1:]):
                if not keys[a] < keys[b]:
                    raise DuplicateKey(f"key {keys[a]!r} appears more than once")
            self._rank[order] = np.arange(self.n)
            self._keys = keys
        self._index()

    # construction -----------------------------------------------------
    def _index(self) -> None:
        spec = self.spec
        s_count = len(spec.states)
        gnames = spec.group_names
        gidx = {g: i for i, g in enumerate(gnames)}
        self.state_group = np.array([gidx[spec.group_of[s]] for s in spec.states], dtype=np.int64)
        if self.state.min() < 0 or self.state.max() >= s_count:
            raise UnknownState("state index out of range")
        self.counts = np.bincount(self.state, minlength=s_count).astype(np.int64)
        self.members = np.zeros((len(gnames), self.n), dtype=np.int64)
        self.size = np.zeros(len(gnames), dtype=np.int64)
        self.pos = np.zeros(self.n, dtype=np.int64)
        agent_group = self.state_group[self.state]
        for g in range(len(gnames)):
            agents = np.flatnonzero(agent_group == g)
            self.members[g, :len(agents)] = agents
            self.size[g] = len(agents)
            self.pos[agents] = np.arange(len(agents))

    @classmethod
    def from_counts(cls, spec: ProtocolSpec, counts: Iterable[tuple[str, int]] | dict,
                    keys: Sequence | None = None) -> "Population":
        items = counts.items() if isinstance(counts, dict) else counts
        idx = []
        for name, c in items:
            if name not in spec.state_index:
                raise UnknownState(f"{name!r} is not a state of {spec.name}")
            if c < 0:
                raise ValueError("negative count")
            idx.extend([spec.state_index[name]] * c)
        if not idx:
            raise EmptyPopulation("counts sum to zero")
        return cls(spec, np.array(idx, dtype=np.int64), keys)

    @classmethod
    def from_keyed(cls, spec: ProtocolSpec, agents: Iterable[tuple[str, object]]) -> "Population":
        agents = list(agents)
        if not agents:
            raise EmptyPopulation("no agents given")
        for name, _ in agents:
            if name not in spec.state_index:
                raise UnknownState(f"{name!r} is not a state of {spec.name}")
        state = np.array([spec.state_index[s] for s, _ in agents], dtype=np.int64)
        return cls(spec, state, [k for _, k in agents])

    # queries ------------------------------------------------------------
    @property
    def has_keys(self) -> bool:
        return self._keys is not None

    @property
    def ranks(self) -> np.ndarray:
        # internal: comparison surrogate used by the kernel and audits
        return self._rank

    def compare(self, a: int, b: int) -> bool:
        """True iff agent ``a``'s hidden key is smaller than agent ``b``'s."""
        return bool(self._rank[a] < self._rank[b])

    def reveal_key(self, agent: int):
        return None if self._keys is None else self._keys[agent]

    def state_name(self, agent: int) -> str:
        return self.spec.states[self.state[agent]]

    def count(self, *names: str) -> int:
        idx = self.spec.state_index
        return int(sum(self.counts[idx[s]] for s in names))

    def group_size(self, group: str) -> int:
        return int(self.size[self.spec.group_names.index(group)])

    def group_agents(self, group: str) -> np.ndarray:
        g = self.spec.group_names.index(group)
        return self.members[g, :self.size[g]].copy()

    def agents_in(self, *names: str) -> np.ndarray:
        idx = [self.spec.state_index[s] for s in names]
        return np.flatnonzero(np.isin(self.state, idx))

    def census(self) -> dict[str, int]:
        return {s: int(c) for s, c in zip(self.spec.states, self.counts) if c}

    def set_state(self, agent: int, name: str) -> None:
        """Rewrite one agent directly (scripted scenarios and tests)."""
        new = self.spec.state_index[name]
        old = self.state[agent]
        if new == old:
            return
        self.counts[old] -= 1
        self.counts[new] += 1
        self.state[agent] = new
        go, gn = self.state_group[old], self.state_group[new]
        if go != gn:
            p, last = self.pos[agent], self.size[go] - 1
            moved = self.members[go, last]
            self.members[go, p] = moved
            self.pos[moved] = p
            self.size[go] = last
            q = self.size[gn]
            self.members[gn, q] = agent
            self.pos[agent] = q
            self.size[gn] = q + 1

    def rebind(self, spec: ProtocolSpec, rename: dict[str, str] | None = None) -> "Population":
        """Same agents and keys under another protocol, states mapped by name."""
        rename = rename or {}
        table = np.full(len(self.spec.states), -1, dtype=np.int64)
        for i, s in enumerate(self.spec.states):
            if self.counts[i] == 0:
                continue
            target = rename.get(s, s)
            if target not in spec.state_index:
                raise UnknownState(f"{target!r} (from {s!r}) is not a state of {spec.name}")
            table[i] = spec.state_index[target]
        other = object.__new__(Population)
        other.spec = spec
        other.state = table[self.state]
        other.n = self.n
        other._keys = self._keys
        other._rank = self._rank
        other._index()
        return other

    def copy(self) -> "Population":
        return self.rebind(self.spec)

    def audit(self) -> None:
        """Check the group index against the states; raises AssertionError."""
        agent_group = self.state_group[self.state]
        assert int(self.size.sum()) == self.n
        seen = np.zeros(self.n, dtype=bool)
        for g in range(len(self.size)):
            listed = self.members[g, :self.size[g]]
            assert np.all(agent_group[listed] == g), "agent listed under the wrong group"
            assert np.all(self.pos[listed] == np.arange(len(listed))), "stale back-map"
            assert not seen[listed].any(), "agent listed twice"
            seen[listed] = True
        assert seen.all(), "agent missing from the index"
        assert np.array_equal(self.counts, np.bincount(self.state, minlength=len(self.spec.states)))


def build_population(spec: ProtocolSpec, input, keyed: bool = False) -> Population:
    """Population from ``{state: count}`` / ``[(state, count)]``, or from
    ``[(state, key)]`` when ``keyed`` is true."""
    if keyed:
        return Population.from_keyed(spec, input)
    return Population.from_counts(spec, input)
