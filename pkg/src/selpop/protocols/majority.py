"""Exact majority between two subpopulations."""

from __future__ import annotations

from ..population import Population
from ..spec import Rule, make_spec
from .base import G_WINS, R_WINS, TIE, Bundle, MajorityVerdict

STATES = ["G", "G*", "R", "R*", "N"]
GROUPS = {"GR": ["R", "R*"], "GN": ["N"], "GG": ["G", "G*"]}
RULES = [
    Rule("R", "G", "N", "N", group="GG"),
    Rule("R", None, "R*", group="GG"),
    Rule("G", "R", "N", "N", group="GR"),
    Rule("G", None, "G*", group="GR"),
    Rule("R*", "N", "R*", "R*", group="GN"),
    Rule("G*", "N", "G*", "G*", group="GN"),
    # winners idle once no neutral agent is left
    Rule("R*", None, "R*", group="GN"),
    Rule("G*", None, "G*", group="GN"),
]
SPEC = make_spec("majority", "selective", STATES, groups=GROUPS, rules=RULES)


def verdict_of(p: Population) -> MajorityVerdict:
    n = p.n
    if p.count("G*") == n:
        return MajorityVerdict(G_WINS)
    if p.count("R*") == n:
        return MajorityVerdict(R_WINS)
    if p.count("N") == n:
        return MajorityVerdict(TIE)
    return MajorityVerdict(None)


def expected_verdict(g: int, r: int) -> MajorityVerdict:
    return MajorityVerdict(G_WINS if g > r else R_WINS if r > g else TIE)


def majority(g: int, r: int) -> Bundle:
    if g < 0 or r < 0 or g + r < 1:
        raise ValueError("need g, r >= 0 and g + r >= 1")
    return Bundle(
        name="majority", spec=SPEC,
        build=lambda: Population.from_counts(SPEC, {"G": g, "R": r}),
        output=verdict_of, expected=expected_verdict(g, r),
        is_stable=lambda p: verdict_of(p).verdict is not None,
        params={"g": g, "r": r},
    )
