"""Compiled scheduler loop.

One function, :func:`advance`, executes scheduler steps for both models over
flat arrays.  All mutable run state lives in arrays owned by the caller, so a
run can be split into any number of calls without changing the outcome.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .rng import STEP_RESERVE, bounded

# interaction kinds
MEANINGFUL, EMPTINESS, SINGLETON, NOMATCH = 0, 1, 2, 3
KIND_NAMES = ("Meaningful", "Emptiness", "Singleton", "NoMatch")

# return codes
DONE, HALTED, STOPPED, NEED_WORDS, MISSING_NULL, CHUNKS_FULL, RECORDS_FULL, VIOLATION = range(8)

# slots of the counter array
C_STEP, C_CHUNKS, C_NBOUND, C_CURMAX, C_NREC, C_VIOL, C_VIOL_STEP, C_INFO = range(8)
N_COUNTERS = 8


@njit(cache=True)
def _move(a, new, state, state_group, members, gsize, pos, counts):
    old = state[a]
    if old == new:
        return
    counts[old] -= 1
    counts[new] += 1
    state[a] = new
    go = state_group[old]
    gn = state_group[new]
    if go != gn:
        p = pos[a]
        last = gsize[go] - 1
        b = members[go, last]
        members[go, p] = b
        pos[b] = p
        gsize[go] = last
        q = gsize[gn]
        members[gn, q] = a
        pos[a] = q
        gsize[gn] = q + 1


@njit(cache=True)
def _audit_ok(a, s, rank, audit_rel, audit_ref):
    rel = audit_rel[s]
    if rel == 0 or audit_ref < 0:
        return True
    if rel < 0:
        return rank[a] < rank[audit_ref]
    return rank[a] > rank[audit_ref]


@njit(cache=True)
def advance(selective, key_order, has_keys,
            state, rank, state_group, target, members, gsize, pos, counts,
            match, null_rule, out_i, out_r,
            halt, stop_kinds, audit_rel, audit_ref, stop_on_violation,
            raw, rp, max_steps, ctr,
            record, rec,
            track, resp_cap, tally, stamp, bounds, bmax,
            kind_counts, rule_counts):
    n = state.shape[0]
    for _ in range(max_steps):
        if rp[0] > raw.shape[0] - STEP_RESERVE:
            return NEED_WORDS
        if track and ctr[C_NBOUND] >= bounds.shape[0]:
            return CHUNKS_FULL
        if record and ctr[C_NREC] >= rec.shape[0]:
            return RECORDS_FULL

        i = bounded(raw, rp, n)
        resp = -1
        rid = -1
        kind = NOMATCH
        if selective:
            s = state[i]
            tg = target[s]
            if tg >= 0:
                in_t = state_group[s] == tg
                avail = gsize[tg] - (1 if in_t else 0)
                if avail > 0:
                    j = bounded(raw, rp, avail)
                    if in_t and j >= pos[i]:
                        j += 1
                    resp = members[tg, j]
                    c = 0
                    if has_keys and rank[i] > rank[resp]:
                        c = 1
                    rid = match[s, state[resp], c]
                    if rid >= 0:
                        kind = MEANINGFUL
                        _move(i, out_i[rid], state, state_group, members, gsize, pos, counts)
                        _move(resp, out_r[rid], state, state_group, members, gsize, pos, counts)
                else:
                    kind = SINGLETON if in_t else EMPTINESS
                    rid = null_rule[s]
                    if rid < 0:
                        ctr[C_INFO] = i
                        # states are untouched; the run cannot continue
                        return MISSING_NULL
                    _move(i, out_i[rid], state, state_group, members, gsize, pos, counts)
        else:
            j = bounded(raw, rp, n - 1)
            if j >= i:
                j += 1
            resp = j
            a = i
            b = j
            if key_order and rank[j] < rank[i]:
                a = j
                b = i
            c = 0
            if has_keys and rank[a] > rank[b]:
                c = 1
            rid = match[state[a], state[b], c]
            if rid >= 0:
                kind = MEANINGFUL
                _move(a, out_i[rid], state, state_group, members, gsize, pos, counts)
                _move(b, out_r[rid], state, state_group, members, gsize, pos, counts)

        ctr[C_STEP] += 1
        step = ctr[C_STEP]
        kind_counts[kind] += 1
        if rid >= 0:
            rule_counts[rid] += 1
        if record:
            k = ctr[C_NREC]
            rec[k, 0] = step
            rec[k, 1] = i
            rec[k, 2] = resp if kind == MEANINGFUL or kind == NOMATCH else -1
            rec[k, 3] = kind
            rec[k, 4] = rid if kind != NOMATCH else -1
            ctr[C_NREC] = k + 1

        if track:
            if ctr[C_CHUNKS] == 0:
                ctr[C_CHUNKS] = 1
                bounds[0] = step - 1
                ctr[C_NBOUND] = 1
                ctr[C_CURMAX] = 0
            if kind == MEANINGFUL:
                kc = ctr[C_CHUNKS]
                if stamp[resp] != kc:
                    stamp[resp] = kc
                    tally[resp] = 0
                if tally[resp] + 1 > resp_cap:
                    bmax[ctr[C_NBOUND] - 1] = ctr[C_CURMAX]
                    kc += 1
                    ctr[C_CHUNKS] = kc
                    bounds[ctr[C_NBOUND]] = step - 1
                    ctr[C_NBOUND] += 1
                    stamp[resp] = kc
                    tally[resp] = 1
                    ctr[C_CURMAX] = 1
                else:
                    tally[resp] += 1
                    if tally[resp] > ctr[C_CURMAX]:
                        ctr[C_CURMAX] = tally[resp]

        if kind == MEANINGFUL or kind == EMPTINESS or kind == SINGLETON:
            si = state[i]
            bad = not _audit_ok(i, si, rank, audit_rel, audit_ref)
            if kind == MEANINGFUL and not _audit_ok(resp, state[resp], rank, audit_rel, audit_ref):
                bad = True
            if bad:
                if ctr[C_VIOL] == 0:
                    ctr[C_VIOL_STEP] = step
                ctr[C_VIOL] += 1
                if stop_on_violation:
                    return VIOLATION
            if halt[si] or (kind == MEANINGFUL and halt[state[resp]]):
                return HALTED
        if stop_kinds[kind]:
            return STOPPED
    return DONE
