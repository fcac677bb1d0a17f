"""Leader-driven multiplication, one product agent per leader round trip."""

from __future__ import annotations

from ..population import Population
from ..spec import Rule, make_spec
from .base import Bundle, ProductSize

STATES = ["X", "Y", "Y^", "Z", "L_in", "L_y", "L_z", "L_y^", "L_out", "free"]
GROUPS = {
    "G_x": ["X"], "G_y": ["Y"], "G_y^": ["Y^"], "G_z": ["Z"],
    "G_R": ["L_in", "L_y", "L_z", "L_y^", "L_out", "free"],
}
CORE_RULES = [
    Rule("L_in", "X", "L_y", "free", group="G_x"),
    Rule("L_in", None, "L_out", group="G_x"),
    Rule("L_y", "Y", "L_z", "Y^", group="G_y"),
    Rule("L_y", None, "L_y^", group="G_y"),
    Rule("L_z", "free", "L_y", "Z", group="G_R"),
    Rule("L_y^", "Y^", "L_y^", "Y", group="G_y^"),
    Rule("L_y^", None, "L_in", group="G_y^"),
]
# with no free agent left the leader can only wait
STALL_RULE = Rule("L_z", None, "L_z", group="G_R")
SPEC = make_spec("mult-slow", "selective", STATES, groups=GROUPS, rules=CORE_RULES + [STALL_RULE])
CORE_SPEC = make_spec("mult-slow", "selective", STATES, groups=GROUPS, rules=CORE_RULES)


def _stall(p: Population) -> str | None:
    if p.count("L_z") and p.count("free") == 0:
        return "FreePoolExhausted: the leader needs a free agent to create Z"
    return None


def multiply_slow(x: int, y: int, free: int | None = None) -> Bundle:
    if x < 0 or y < 0:
        raise ValueError("x and y must be non-negative")
    free = x * y if free is None else free
    if free < 0:
        raise ValueError("free must be non-negative")
    return Bundle(
        name="mult-slow", spec=SPEC,
        build=lambda: Population.from_counts(SPEC, {"L_in": 1, "X": x, "Y": y, "free": free}),
        output=lambda p: ProductSize(p.count("Z")), expected=ProductSize(x * y),
        is_stable=lambda p: p.count("L_out") == 1, stall=_stall, halt_states=("L_out",),
        params={"x": x, "y": y, "free": free},
    )
