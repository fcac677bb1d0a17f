"""Leader election with confirmation."""

from __future__ import annotations

from ..errors import NoCandidate
from ..population import Population
from ..spec import Rule, make_spec
from .base import Bundle, Leader

SPEC = make_spec(
    "le", "selective", ["L", "L*", "F", "F*"],
    groups={"G0": ["L", "L*", "F*"], "G1": ["F"]},
    rules=[
        Rule("L", "L", "L", "F", group="G0"),
        Rule("L", None, "L*", group="G0"),
        Rule("L*", "F", "L*", "F*", group="G1"),
        Rule("F*", "F", "F*", "F*", group="G1"),
        # once every follower is confirmed the confirmers idle
        Rule("L*", None, "L*", group="G1"),
        Rule("F*", None, "F*", group="G1"),
    ],
)


def _stable(p: Population) -> bool:
    return p.count("L*") == 1 and p.count("F*") == p.n - 1


def _leader(p: Population) -> Leader:
    agents = p.agents_in("L*")
    return Leader(int(agents[0]) if len(agents) == 1 else None)


def leader_election(n: int, candidates: int | None = None) -> Bundle:
    candidates = n if candidates is None else candidates
    if candidates < 1:
        raise NoCandidate("leader election needs at least one candidate")
    if candidates > n:
        raise ValueError("more candidates than agents")
    return Bundle(
        name="le", spec=SPEC,
        build=lambda: Population.from_counts(SPEC, {"L": candidates, "F": n - candidates}),
        output=_leader, is_stable=_stable, params={"n": n, "candidates": candidates},
    )
