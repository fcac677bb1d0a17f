"""Built-in protocols, addressable by name."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .base import (G_WINS, R_WINS, TIE, Bundle, EpidemicDone, Leader, MajorityVerdict, MedianKey,
                   PartitionSummary, PhaseLog, ProductSize)
from .epidemic import epidemic_selective, epidemic_standard
from .fast_median import FastMedian, fast_median
from .leader_election import leader_election
from .majority import majority
from .median_standard import median_standard
from .multiply_fast import free_needed, multiply_fast
from .multiply_slow import multiply_slow

BUILTINS = ("epidemic", "epidemic-std", "le", "majority", "mult-slow", "mult-fast", "median-std", "median-fast")


def random_keys(n: int, seed: int) -> list[int]:
    """Seeded random permutation of 1..n, used as hidden keys."""
    rng = np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), 0x6B657973]))
    return [int(k) for k in rng.permutation(n) + 1]


def _fill_x(n: int, y: int, need) -> int:
    # largest x whose run fits in n agents (leader + X + Y + free pool)
    x = 0
    while 1 + (x + 1) + y + need(x + 1, y) <= n:
        x += 1
    return x


def make_bundle(name: str, n: int, params: dict | None = None, seed: int = 0):
    """Bundle for built-in ``name`` at population size ``n``."""
    p = dict(params or {})
    if n < 1:
        from ..errors import EmptyPopulation
        raise EmptyPopulation(f"population size must be at least 1, got {n}")
    if name == "epidemic":
        return epidemic_selective(n, p.get("informers", 1), p.get("rested", False))
    if name == "epidemic-std":
        return epidemic_standard(n, p.get("informers", 1))
    if name == "le":
        return leader_election(n, p.get("candidates", n))
    if name == "majority":
        g = p.get("g", n // 2 + 1 if n > 1 else 1)
        r = p.get("r", n - g)
        if g + r != n:
            raise ConfigError(f"majority needs g + r = n, got {g} + {r} != {n}")
        return majority(g, r)
    if name in ("mult-slow", "mult-fast"):
        slow = name == "mult-slow"
        need = (lambda x, y: x * y) if slow else free_needed
        y = p.get("y", 3)
        x = p.get("x", _fill_x(n, y, need))
        free = p.get("free", n - 1 - x - y)
        if free < 0:
            raise ConfigError(f"n={n} is too small for x={x}, y={y}")
        return (multiply_slow if slow else multiply_fast)(x, y, free)
    if name in ("median-std", "median-fast"):
        keys = p.get("keys") or random_keys(n, seed)
        if name == "median-std":
            return median_standard(keys)
        return fast_median(keys, **{k: p[k] for k in ("destroy_pivot", "max_iterations") if k in p})
    raise ConfigError(f"unknown protocol {name!r}; built-ins: {', '.join(BUILTINS)}")


__all__ = [
    "BUILTINS", "Bundle", "FastMedian", "EpidemicDone", "Leader", "MajorityVerdict", "ProductSize",
    "MedianKey", "PartitionSummary", "PhaseLog", "G_WINS", "R_WINS", "TIE",
    "epidemic_selective", "epidemic_standard", "leader_election", "majority", "multiply_slow",
    "multiply_fast", "median_standard", "fast_median", "make_bundle", "random_keys",
]
