"""One-way epidemics in both models."""

from __future__ import annotations

from ..population import Population
from ..spec import Rule, make_spec
from .base import Bundle, EpidemicDone

SELECTIVE_SPEC = make_spec(
    "epidemic", "selective", ["0", "1", "Stop"],
    groups={"G0": ["0"], "G1": ["1", "Stop"]},
    rules=[
        Rule("1", "0", "1", "1", group="G0"),
        Rule("1", None, "Stop", group="G0"),
    ],
)

# single informer that rests once nobody is left to inform
RESTED_SPEC = make_spec(
    "epidemic-rested", "selective", ["0", "1", "1*"],
    groups={"G0": ["0"], "G1": ["1"], "G1*": ["1*"]},
    rules=[
        Rule("0", "1", "1*", "1", group="G1"),
        Rule("1", None, "1*", group="G0"),
    ],
)

STANDARD_SPEC = make_spec("epidemic-std", "standard", ["0", "1"], rules=[Rule("1", "0", "1", "1")])


def _check_n(n: int, informers: int) -> None:
    if n < 2:
        raise ValueError("epidemic needs n >= 2")
    if not 1 <= informers < n:
        raise ValueError("need 1 <= informers < n")


def epidemic_selective(n: int, informers: int = 1, rested: bool = False) -> Bundle:
    _check_n(n, informers)
    if rested:
        spec = RESTED_SPEC
        stable = lambda p: p.count("0") == 0 and p.count("1") == 0
        done = lambda p: EpidemicDone(p.count("1*"))
    else:
        spec = SELECTIVE_SPEC
        stable = lambda p: p.count("0") == 0 and p.count("1") == 0
        done = lambda p: EpidemicDone(p.count("Stop"))
    return Bundle(
        name=spec.name, spec=spec,
        build=lambda: Population.from_counts(spec, {"1": informers, "0": n - informers}),
        output=done, expected=EpidemicDone(n), is_stable=stable,
        params={"n": n, "informers": informers, "rested": rested},
    )


def epidemic_standard(n: int, informers: int = 1) -> Bundle:
    _check_n(n, informers)
    spec = STANDARD_SPEC
    return Bundle(
        name=spec.name, spec=spec,
        build=lambda: Population.from_counts(spec, {"1": informers, "0": n - informers}),
        output=lambda p: EpidemicDone(p.count("1")), expected=EpidemicDone(n),
        is_stable=lambda p: p.count("0") == 0,
        params={"n": n, "informers": informers},
    )
