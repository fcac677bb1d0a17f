"""Multiplication by halving Y and doubling X once per bit of |Y|."""

from __future__ import annotations

from ..population import Population
from ..spec import Rule, make_spec
from .base import Bundle, ProductSize

GROUPS = {
    "G_L": ["L_in", "L_out", "L", "L0", "L0_in", "L1", "L1_in", "L'", "L''"],
    "G_A": ["A", "A'", "A''"],
    "G_B": ["B"],
    "G_C": ["C0", "C0*", "C1", "C1*"],
    "G_D": ["D"],
    "G_X": ["X"],
    "G_Y": ["Y"],
    "G_Z": ["Z"],
    "G_f": ["free"],
}
STATES = [s for ss in GROUPS.values() for s in ss]

STAGE1 = [
    Rule("L_in", None, "L_out", group="G_Y"),           # 1a
    Rule("L_in", "Y", "L", "A", group="G_Y"),           # 1b
    Rule("A", "Y", "A", "A", group="G_Y"),              # 2a
    Rule("A", None, "A'", group="G_Y"),                 # 2b
    Rule("A'", "A", "B", "free", group="G_A"),          # 3a
    Rule("A'", "A'", "B", "free", group="G_A"),         # 3a
    Rule("A'", None, "A''", group="G_A"),               # 3b
    Rule("L", "A''", "L1", "free", group="G_A"),        # 4a
    Rule("L", None, "L0", group="G_A"),                 # 4b
    Rule("B", None, "Y", group="G_A"),                  # 5
    Rule("L0", None, "L0_in", group="G_B"),             # 6a
    Rule("L1", None, "L1_in", group="G_B"),             # 6b
]
STAGE2 = [
    Rule("L0_in", "X", "L'", "C0", group="G_X"),        # 1a
    Rule("L1_in", "X", "L'", "C1", group="G_X"),        # 1b
    Rule("C0", "X", "C0", "C0", group="G_X"),           # 2a
    Rule("C1", "X", "C1", "C1", group="G_X"),           # 2b
    Rule("C0", None, "C0*", group="G_X"),               # 2c
    Rule("C1", None, "C1*", group="G_X"),               # 2d
    Rule("C1*", "free", "C0*", "Z", group="G_f"),       # 3
    Rule("C0*", "free", "D", "D", group="G_f"),         # 4
    Rule("D", None, "X", group="G_C"),                  # 5a
    Rule("L'", None, "L''", group="G_C"),               # 5b
    Rule("L''", None, "L_in", group="G_D"),             # 6
]
EXTRA = [
    # |X| = 0: nothing to add or double, go straight to the next round
    Rule("L0_in", None, "L_in", group="G_X"),
    Rule("L1_in", None, "L_in", group="G_X"),
    # out of free agents: wait (reported by the stall predicate)
    Rule("C0*", None, "C0*", group="G_f"),
    Rule("C1*", None, "C1*", group="G_f"),
]
SPEC = make_spec("mult-fast", "selective", STATES, groups=GROUPS, rules=STAGE1 + STAGE2 + EXTRA)

# indices of the rules that close Stage 1, one firing per round
ROUND_RULES = (10, 11)


def free_needed(x: int, y: int) -> int:
    """Free agents that always suffice: the X doublings plus Z itself."""
    return x * ((1 << y.bit_length()) - 1) + x * y


def _stall(p: Population) -> str | None:
    if p.count("C0*", "C1*") and p.count("free") == 0:
        return "FreePoolExhausted: doubling X needs more free agents"
    return None


def multiply_fast(x: int, y: int, free: int | None = None) -> Bundle:
    if x < 0 or y < 0:
        raise ValueError("x and y must be non-negative")
    free = free_needed(x, y) if free is None else free
    if free < 0:
        raise ValueError("free must be non-negative")
    return Bundle(
        name="mult-fast", spec=SPEC,
        build=lambda: Population.from_counts(SPEC, {"L_in": 1, "X": x, "Y": y, "free": free}),
        output=lambda p: ProductSize(p.count("Z")), expected=ProductSize(x * y),
        is_stable=lambda p: p.count("L_out") == 1, stall=_stall, halt_states=("L_out",),
        params={"x": x, "y": y, "free": free},
    )


def rounds(rule_counts) -> int:
    """Completed rounds, read off the per-rule firing counts of a run."""
    return int(rule_counts[ROUND_RULES[0]] + rule_counts[ROUND_RULES[1]])
