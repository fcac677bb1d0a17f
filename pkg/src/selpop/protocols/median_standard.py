"""Symmetric median protocol in the standard model."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import ModelAssumptionViolated
from ..metrics import zero_disorder
from ..population import Population
from ..spec import Rule, make_spec
from .base import Bundle, MedianKey

# rules act on (smaller-key agent, larger-key agent)
SPEC = make_spec(
    "median-std", "standard", ["L", "N", "U"],
    rules=[
        Rule("N", "N", "L", "U"),
        Rule("U", "L", "L", "U"),
        Rule("U", "N", "N", "U"),
        Rule("N", "L", "L", "N"),
    ],
    key_order=True,
)


def check_keys(keys: Sequence) -> list:
    keys = list(keys)
    if len(keys) % 2 == 0:
        raise ModelAssumptionViolated(f"median needs an odd population, got n={len(keys)}")
    if len(set(keys)) != len(keys):
        raise ModelAssumptionViolated("median needs pairwise distinct keys")
    return keys


def true_median(keys: Sequence):
    return sorted(keys)[len(keys) // 2]


class _Stability:
    """Zero-disorder test with the key order computed once."""

    def __init__(self):
        self.order = None

    def __call__(self, p: Population) -> bool:
        if self.order is None:
            self.order = np.argsort(p.ranks)
        idx = p.spec.state_index
        return zero_disorder(p.state, self.order, idx["L"], idx["N"], idx["U"])


def _median_out(p: Population) -> MedianKey:
    agents = p.agents_in("N")
    return MedianKey(p.reveal_key(int(agents[0])) if len(agents) == 1 else None)


def median_standard(keys: Sequence) -> Bundle:
    keys = check_keys(keys)
    return Bundle(
        name="median-std", spec=SPEC,
        build=lambda: Population.from_keyed(SPEC, [("N", k) for k in keys]),
        output=_median_out, expected=MedianKey(true_median(keys)),
        is_stable=_Stability(),
        params={"n": len(keys)},
    )
