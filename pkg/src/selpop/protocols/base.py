"""Protocol bundles: a spec with its input, stability predicate and output."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..engine import Limits, RunResult, Simulation, Trace, run
from ..population import Population
from ..rng import RawStream
from ..spec import ProtocolSpec


# ---- outputs --------------------------------------------------------------

@dataclass(frozen=True)
class EpidemicDone:
    informed: int


@dataclass(frozen=True)
class Leader:
    agent: int | None


G_WINS, R_WINS, TIE = "G-wins", "R-wins", "Tie"


@dataclass(frozen=True)
class MajorityVerdict:
    verdict: str | None


@dataclass(frozen=True)
class ProductSize:
    z: int


@dataclass(frozen=True)
class MedianKey:
    key: object


@dataclass(frozen=True)
class PartitionSummary:
    counts: dict


ProtocolOutput = EpidemicDone | Leader | MajorityVerdict | ProductSize | MedianKey | PartitionSummary


@dataclass
class PhaseLog:
    uncolored_before: int
    colored_this_phase: int
    interactions_used: int
    chunks_used: int


# ---- bundle ---------------------------------------------------------------

@dataclass(frozen=True)
class Bundle:
    """Everything needed to run one protocol instance and judge the result."""

    name: str
    spec: ProtocolSpec
    build: Callable[[], Population]
    output: Callable[[Population], object]
    expected: object = None
    is_stable: Callable[[Population], bool] | None = None
    stall: Callable[[Population], str | None] | None = None
    halt_states: tuple[str, ...] = ()
    params: dict = field(default_factory=dict)

    def population(self) -> Population:
        return self.build()

    def default_limit(self, n: int) -> int:
        return max(10_000, 200 * n * max(1, n.bit_length()) ** 2)

    def execute(self, stream: RawStream, limits: Limits | None = None, *, record: bool = False,
                pop: Population | None = None, observer=None) -> tuple[RunResult, Trace]:
        pop = pop if pop is not None else self.build()
        limits = limits or Limits(self.default_limit(pop.n))
        result, trace = run(pop, self.spec, stream, limits, is_stable=self.is_stable, stall=self.stall,
                            halt_states=self.halt_states, record=record, observer=observer)
        result.output = self.output(pop)
        result.correct = result.stabilized and (self.expected is None or result.output == self.expected)
        return result, trace

    def simulation(self, stream: RawStream, *, record: bool = False) -> Simulation:
        return Simulation(self.build(), stream, record=record, halt_states=self.halt_states)
