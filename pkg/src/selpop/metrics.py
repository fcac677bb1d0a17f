"""Fragmented parallel time, disorder and scaling fits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientData, InvalidState


def responder_cap(n: int) -> int:
    """Largest number of responder appearances an agent may have in one chunk.

    The bound ``10 ln n`` is real valued, so ``floor(10 ln n)`` responses fit
    and the next one forces a cut.
    """
    return math.floor(10 * math.log(n))


@dataclass(frozen=True)
class ChunkReport:
    n: int
    chunk_count: int
    boundaries: tuple[int, ...]            # 0-based index of each chunk's first interaction
    responder_max_per_chunk: tuple[int, ...]
    interactions: int

    @property
    def fragmented_time(self) -> float:
        return self.chunk_count * math.log(self.n)

    @property
    def parallel_time(self) -> float:
        return self.interactions / self.n


def fragmented_time(responders: Iterable[int | None], n: int) -> ChunkReport:
    """Greedy chunking of a trace given as one entry per interaction.

    Each entry is the agent that responded in a meaningful interaction, or
    ``None`` (or a negative id) when the interaction tallies no responder.
    Greedy maximal prefixes are optimal because any contiguous piece of a
    valid chunk is itself a valid chunk.
    """
    if n < 2:
        raise ValueError("fragmented time needs n >= 2")
    cap = responder_cap(n)
    bounds: list[int] = []
    maxima: list[int] = []
    tally: dict[int, int] = {}
    cur = 0
    count = 0
    for idx, r in enumerate(responders):
        count += 1
        if not bounds:
            bounds.append(idx)
        if r is None or r < 0:
            continue
        t = tally.get(r, 0) + 1
        if t > cap:
            maxima.append(cur)
            bounds.append(idx)
            tally = {r: 1}
            cur = 1
        else:
            tally[r] = t
            cur = max(cur, t)
    if bounds:
        maxima.append(cur)
    return ChunkReport(n, len(bounds), tuple(bounds), tuple(maxima), count)


def min_chunks_exhaustive(responders: Sequence[int | None], n: int) -> int:
    """Minimum chunk count by dynamic programming over every cut position.

    Checks each candidate chunk directly against the responder bound; it
    shares nothing with the greedy pass and serves as its oracle.
    """
    cap = responder_cap(n)
    m = len(responders)
    if m == 0:
        return 0

    def valid(lo: int, hi: int) -> bool:
        seen: dict[int, int] = {}
        for r in responders[lo:hi]:
            if r is None or r < 0:
                continue
            seen[r] = seen.get(r, 0) + 1
            if seen[r] > cap:
                return False
        return True

    best = [0] + [math.inf] * m
    for hi in range(1, m + 1):
        for lo in range(hi):
            if best[lo] + 1 < best[hi] and valid(lo, hi):
                best[hi] = best[lo] + 1
    return int(best[m])


MEDIAN_STATES = ("L", "N", "U")
# (smaller-key state, larger-key state) pairs on which some median rule fires
_DISORDERED = {("N", "N"), ("U", "L"), ("U", "N"), ("N", "L")}


def _codes(states: Sequence[str]) -> np.ndarray:
    try:
        return np.array([MEDIAN_STATES.index(s) for s in states], dtype=np.int64)
    except ValueError:
        bad = next(s for s in states if s not in MEDIAN_STATES)
        raise InvalidState(f"disorder is defined on states L, N, U only, got {bad!r}") from None


def disorder(states: Sequence[str], keys: Sequence) -> int:
    """Number of unordered agent pairs on which a median rule would fire.

    Direct enumeration of all pairs: O(n^2) time and memory.
    """
    if len(states) != len(keys):
        raise ValueError("one key per state required")
    codes = _codes(states)
    order = sorted(range(len(keys)), key=lambda a: keys[a])
    c = codes[order]
    table = np.zeros((3, 3), dtype=bool)
    for lo, hi in _DISORDERED:
        table[MEDIAN_STATES.index(lo), MEDIAN_STATES.index(hi)] = True
    pair = table[c[:, None], c[None, :]]
    return int(np.triu(pair, k=1).sum())


def zero_disorder(state_codes: np.ndarray, key_order: np.ndarray, l: int, nn: int, u: int) -> bool:
    """Sort-and-scan test for disorder 0 given agents listed by increasing key.

    With keys sorted, the configuration is disorder-free exactly when it reads
    ``L...L`` then at most one ``N`` then ``U...U``.
    """
    s = state_codes[key_order]
    rank = np.full(int(max(l, nn, u)) + 1, -1, dtype=np.int64)
    rank[l], rank[nn], rank[u] = 0, 1, 2
    r = rank[s]
    if (r < 0).any():
        return False
    return bool(np.all(np.diff(r) >= 0) and (r == 1).sum() <= 1)


@dataclass(frozen=True)
class Lemma1Result:
    parallel_time: float
    fragmented_time: float
    within: bool
    long_enough: bool


def lemma1_check(interactions: int, chunk_count: int, n: int, min_length: int | None = None) -> Lemma1Result:
    """Compare T = |I|/n with T_F = k ln n against ``T/10 <= T_F <= 2T``.

    ``long_enough`` flags traces of at least ``min_length`` interactions
    (default ``10 n ln n``); shorter ones are excluded from aggregate rates.
    """
    t = interactions / n
    tf = chunk_count * math.log(n)
    if min_length is None:
        min_length = math.ceil(10 * n * math.log(n))
    within = interactions > 0 and t / 10 <= tf <= 2 * t
    return Lemma1Result(t, tf, within, interactions >= min_length)


@dataclass(frozen=True)
class Fit:
    slope: float
    intercept: float
    residual: float


def _fit(x: np.ndarray, y: np.ndarray) -> Fit:
    a = np.vstack([x, np.ones_like(x)]).T
    coef, res, *_ = np.linalg.lstsq(a, y, rcond=None)
    resid = float(np.sqrt(np.mean((a @ coef - y) ** 2)))
    return Fit(float(coef[0]), float(coef[1]), resid)


def _points(points: Iterable[tuple[float, float]], min_n: float) -> tuple[np.ndarray, np.ndarray]:
    pts = [(float(n), float(v)) for n, v in points]
    if len({n for n, _ in pts}) < 3:
        raise InsufficientData("need at least 3 distinct n values")
    if any(v <= 0 or n <= min_n for n, v in pts):
        raise InsufficientData("values and sizes must be positive")
    arr = np.array(pts)
    return arr[:, 0], arr[:, 1]


def fit_exponent(points: Iterable[tuple[float, float]]) -> Fit:
    """Least-squares slope of log(value) against log(n)."""
    n, v = _points(points, 0.0)
    return _fit(np.log(n), np.log(v))


def fit_polylog(points: Iterable[tuple[float, float]]) -> Fit:
    """Least-squares slope of log(value) against log(log(n)); n must exceed 1."""
    n, v = _points(points, 1.0)
    return _fit(np.log(np.log(n)), np.log(v))
