"""Verification suites: the acceptance criteria as runnable checks.

Each ``criterion_k(p)`` takes the suite parameters and returns a
:class:`CriterionResult`.  ``fast`` shrinks trial counts and sizes so the
whole suite fits in a few minutes; ``full`` runs the stated sizes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats

from . import kernel as K
from .dsl import Diagnostic, check_protocol, parse_protocol, pretty_print
from .engine import Limits, Simulation
from .metrics import disorder, fit_exponent, fragmented_time, lemma1_check, min_chunks_exhaustive
from .population import Population
from .protocols import (epidemic_selective, epidemic_standard, leader_election, majority, make_bundle,
                        median_standard, multiply_fast, multiply_slow)
from .protocols.epidemic import RESTED_SPEC, SELECTIVE_SPEC, STANDARD_SPEC
from .protocols.leader_election import SPEC as LE_SPEC
from .protocols.majority import SPEC as MAJORITY_SPEC
from .protocols.median_standard import SPEC as MEDIAN_SPEC
from .protocols.base import ProductSize, TIE
from .protocols.fast_median import FastMedian, coloring_spec
from .protocols.majority import expected_verdict
from .protocols.multiply_fast import rounds
from .rng import RawStream, trial_seed
from .spec import Rule, make_spec, structurally_equal


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    checks: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number}: {self.title} ({self.seconds:.1f}s) {self.detail}"


SUITES = {
    "full": dict(
        chi_draws=100_000, lemma1_n=(1000, 10000), lemma1_trials=100,
        le_n=(1000, 10000), le_trials=100, le_big=100000, le_big_trials=20,
        maj_seeds=3, maj_n=10000, maj_trials=50, maj_grid=(1000, 10000, 100000), maj_grid_trials=10,
        mult_seeds=3, mult_y=5, mult_n=(1000, 100000), mult_trials=5,
        med_n=(101, 501, 1001), med_trials=30, med_audit=5, med_grid=(101, 301, 1001),
        fm_n=(101, 1001, 10001), fm_trials=30,
    ),
    "fast": dict(
        chi_draws=100_000, lemma1_n=(1000, 10000), lemma1_trials=20,
        le_n=(1000, 10000), le_trials=20, le_big=100000, le_big_trials=3,
        maj_seeds=1, maj_n=10000, maj_trials=10, maj_grid=(1000, 10000, 100000), maj_grid_trials=3,
        mult_seeds=1, mult_y=5, mult_n=(1000, 100000), mult_trials=2,
        med_n=(101, 501, 1001), med_trials=10, med_audit=2, med_grid=(101, 301, 1001),
        fm_n=(101, 1001, 10001), fm_trials=8,
    ),
}

BASE_SEED = 20240601


def _stream(tag: int, n: int, t: int) -> RawStream:
    return RawStream(trial_seed(BASE_SEED ^ (tag << 40), n, t))


# ---- scheduler oracle ------------------------------------------------------------

def _rule_for(spec, si: str, sr: str, c: int):
    for rid, r in enumerate(spec.rules):
        if not r.is_null and r.initiator == si and r.responder == sr and c in r.guard.outcomes():
            return rid, r
    return None, None


def _null_for(spec, s: str):
    for rid, r in enumerate(spec.rules):
        if r.is_null and r.initiator == s:
            return rid, r
    return None, None


def oracle_step(spec, names: list[str], ranks, i: int, resp: int | None):
    """Expected (kind, rule, new state names) for a step whose scheduler picked
    initiator ``i`` and, when one was drawn, responder ``resp``.

    Written against the protocol description directly, not the compiled tables.
    Returns a string describing the problem if ``resp`` is not a legal draw.
    """
    new = list(names)
    si = names[i]
    if spec.selective:
        tg = spec.target_of.get(si)
        if tg is None:
            return ("NoMatch", None, new) if resp is None else "responder drawn for an idle state"
        members = [a for a, s in enumerate(names) if spec.group_of[s] == tg and a != i]
        if not members:
            if resp is not None:
                return "responder drawn from an empty candidate set"
            kind = "Singleton" if spec.group_of[si] == tg else "Emptiness"
            rid, r = _null_for(spec, si)
            if r is None:
                return "missing null rule"
            new[i] = r.initiator_out
            return kind, rid, new
        if resp not in members:
            return f"responder {resp} not in target group minus initiator"
        a, b = i, resp
    else:
        if resp is None or resp == i:
            return "standard model needs a distinct responder"
        a, b = i, resp
        if spec.key_order and ranks[b] < ranks[a]:
            a, b = b, a
    c = 0 if ranks[a] < ranks[b] else 1
    rid, r = _rule_for(spec, names[a], names[b], c)
    if r is None:
        return "NoMatch", None, new
    new[a], new[b] = r.initiator_out, r.responder_out
    return "Meaningful", rid, new


def scripted_scenario(pop: Population, seed: int, steps: int = 20) -> tuple[list[str], list[str]]:
    """Step ``pop`` one interaction at a time and compare every step with the
    oracle.  Returns (mismatch messages, observed kinds)."""
    spec = pop.spec
    sim = Simulation(pop, RawStream(seed), record=True)
    errors, kinds = [], []
    for k in range(steps):
        before = [pop.state_name(a) for a in range(pop.n)]
        rec = sim.step()
        after = [pop.state_name(a) for a in range(pop.n)]
        want = oracle_step(spec, before, pop.ranks, rec.initiator, rec.responder)
        kinds.append(rec.kind)
        if isinstance(want, str):
            errors.append(f"{spec.name} step {k}: {want}")
            continue
        kind, rid, new = want
        if (kind, rid, new) != (rec.kind, rec.rule, after):
            errors.append(f"{spec.name} step {k}: got {rec.kind}/{rec.rule}, oracle {kind}/{rid}")
        pop.audit()
    return errors, kinds


def probe_spec():
    """Four states exercising every scheduler outcome."""
    return make_spec(
        "probe", "selective", ["x", "y", "z", "w"],
        groups={"Gx": ["x"], "Gw": ["w"], "Gz": ["y", "z"]},
        targets={"x": "Gx", "y": "Gw", "z": "Gz"},
        rules=[Rule("x", None, "x"), Rule("y", None, "y"), Rule("z", None, "z")],
    )


def scenario_populations() -> dict[str, Population]:
    keys7 = [4, 1, 7, 2, 6, 3, 5]
    color = coloring_spec()
    return {
        "epidemic": epidemic_selective(4).population(),
        "epidemic-std": epidemic_standard(4).population(),
        "le": leader_election(4).population(),
        "majority": majority(3, 2).population(),
        "mult-slow": multiply_slow(2, 2).population(),
        "mult-fast": multiply_fast(2, 3).population(),
        "median-std": median_standard([5, 3, 9, 1, 7]).population(),
        "median-fast": Population.from_keyed(color, [("P1" if k == 4 else "N0.c1", k) for k in keys7]),
        "probe": Population.from_counts(probe_spec(), {"x": 1, "y": 1, "z": 2}),
    }


# ---- responder uniformity ----------------------------------------------------------

def frozen_configs():
    a = make_spec("frozen-a", "selective", ["a", "b", "c"],
                  groups={"GA": ["a", "b"], "GC": ["c"]},
                  targets={"a": "GA", "b": "GC"})
    b = make_spec("frozen-b", "selective", ["s", "t"],
                  groups={"GS": ["s"], "GT": ["t"]},
                  targets={"s": "GT", "t": "GT"})
    c = make_spec("frozen-c", "standard", ["q"])
    return [
        Population.from_counts(a, {"a": 6, "b": 4, "c": 5}),
        Population.from_counts(b, {"s": 3, "t": 40}),
        Population.from_counts(c, {"q": 8}),
    ]


def responder_chi_square(pop: Population, draws: int, seed: int) -> tuple[float, int, float]:
    """Pooled chi-square of responder counts per initiator against uniform over
    the legal candidates.  The configuration has no rules, so it stays frozen."""
    sim = Simulation(pop, RawStream(seed), record=True, track=False)
    sim.advance(draws)
    rec = sim.trace().records
    stat, dof = 0.0, 0
    for i in range(pop.n):
        resp = rec[(rec[:, 1] == i) & (rec[:, 2] >= 0), 2]
        if pop.spec.selective:
            tg = pop.spec.target_of.get(pop.state_name(i))
            if tg is None:
                continue
            cands = [a for a in pop.group_agents(tg) if a != i]
        else:
            cands = [a for a in range(pop.n) if a != i]
        if len(cands) < 2 or len(resp) == 0:
            continue
        if not np.isin(resp, cands).all():
            return math.inf, 1, 0.0
        obs = np.array([(resp == a).sum() for a in cands], dtype=float)
        exp = len(resp) / len(cands)
        stat += float(((obs - exp) ** 2 / exp).sum())
        dof += len(cands) - 1
    return stat, dof, float(stats.chi2.sf(stat, dof))


# ---- criteria ---------------------------------------------------------------------

def criterion_1(p) -> CriterionResult:
    pvals = []
    for k, pop in enumerate(frozen_configs()):
        _, _, pv = responder_chi_square(pop, p["chi_draws"], 1000 + k)
        pvals.append(pv)
    errors, seen = [], set()
    for k, (name, pop) in enumerate(scenario_populations().items()):
        e, kinds = scripted_scenario(pop, 77 + k)
        errors += e
        seen.update(kinds)
    ok = min(pvals) > 0.001 and not errors and seen == set(K.KIND_NAMES)
    detail = (f"chi-square p-values {', '.join(f'{v:.3g}' for v in pvals)}; "
              f"scripted mismatches {len(errors)}; outcomes seen {sorted(seen)}")
    if errors:
        detail += "; first: " + errors[0]
    return CriterionResult(1, "scheduler semantics", ok, detail)


def random_trace(rng: np.random.Generator, n: int, length: int) -> list[int | None]:
    # responder ids biased toward one agent so that cuts actually happen
    hot = int(rng.integers(n))
    out = []
    for _ in range(length):
        u = rng.random()
        out.append(None if u < 0.15 else hot if u < 0.75 else int(rng.integers(n)))
    return out


def criterion_2(p) -> CriterionResult:
    rng = np.random.default_rng(BASE_SEED)
    bad = 0
    for _ in range(500):
        n = int(rng.integers(2, 7))
        trace = random_trace(rng, n, int(rng.integers(0, 61)))
        if fragmented_time(trace, n).chunk_count != min_chunks_exhaustive(trace, n):
            bad += 1
    return CriterionResult(2, "chunk minimality", bad == 0, f"{bad} mismatches over 500 traces")


def criterion_3(p) -> CriterionResult:
    inside = lower = total = long_ = 0
    for n in p["lemma1_n"]:
        for t in range(p["lemma1_trials"]):
            r, _ = epidemic_standard(n).execute(_stream(3, n, t))
            if r.interactions == 0:
                continue
            chk = lemma1_check(r.interactions, r.chunks.chunk_count, n)
            total += 1
            inside += chk.within
            lower += chk.parallel_time / 10 <= chk.fragmented_time
            long_ += chk.long_enough
    frac = inside / total
    ok = frac >= 0.95 and lower == total
    return CriterionResult(3, "fragmented vs parallel time envelope", ok,
                           f"within {inside}/{total} ({frac:.3f}); lower bound {lower}/{total}; "
                           f"{long_} runs reach the minimum-length filter")


def criterion_4(p) -> CriterionResult:
    fails, ratio = 0, {}
    for n in p["le_n"]:
        ks = []
        for t in range(p["le_trials"]):
            b = leader_election(n)
            r, _ = b.execute(_stream(4, n, t))
            c = r.census
            fails += not (r.stabilized and c.get("L*", 0) == 1 and c.get("F*", 0) == n - 1)
            ks.append(r.chunks.chunk_count)
        ratio[n] = float(np.mean(ks))
    big = p["le_big"]
    ratio[big] = float(np.mean([leader_election(big).execute(_stream(4, big, t))[0].chunks.chunk_count
                                for t in range(p["le_big_trials"])]))
    growth = ratio[big] / ratio[min(p["le_n"])]
    ok = fails == 0 and growth <= 2.0
    return CriterionResult(4, "leader election", ok,
                           f"incorrect {fails}; mean T_F/ln n {ratio}; growth {growth:.3f}")


def criterion_5(p) -> CriterionResult:
    wrong = 0
    for total in range(1, 13):
        for g in range(total + 1):
            r_ = total - g
            for s in range(p["maj_seeds"]):
                res, _ = majority(g, r_).execute(_stream(5, total, g * 10 + s))
                want = expected_verdict(g, r_)
                ok = res.stabilized and res.output == want
                if want.verdict == TIE:
                    ok = ok and set(res.census) == {"N"}
                wrong += not ok
    n = p["maj_n"]
    good = sum(make_bundle("majority", n).execute(_stream(5, n, 100 + t))[0].correct
               for t in range(p["maj_trials"]))
    pts = []
    for n in p["maj_grid"]:
        tf = [make_bundle("majority", n).execute(_stream(5, n, 200 + t))[0].fragmented_time
              for t in range(p["maj_grid_trials"])]
        pts.append((n, float(np.mean(tf))))
    slope = fit_exponent(pts).slope
    ok = wrong == 0 and good == p["maj_trials"] and slope <= 0.3
    return CriterionResult(5, "majority", ok,
                           f"exhaustive mismatches {wrong}; n={p['maj_n']} correct {good}/{p['maj_trials']}; "
                           f"T_F slope {slope:.3f}")


def criterion_6(p) -> CriterionResult:
    wrong = 0
    for x in range(9):
        for y in range(9):
            for s in range(p["mult_seeds"]):
                for f in (multiply_slow, multiply_fast):
                    r, _ = f(x, y).execute(_stream(6, x * 9 + y, s + (100 if f is multiply_fast else 0)))
                    wrong += not (r.correct and r.output == ProductSize(x * y))
    used = {}
    for y in range(1, 9):
        r, _ = multiply_fast(3, y).execute(_stream(6, 1000 + y, 0))
        used[y] = rounds(r.rule_counts)
    off = [y for y, k in used.items() if k != math.ceil(math.log2(y))]
    tf = {}
    for n in p["mult_n"]:
        tf[n] = float(np.mean([make_bundle("mult-fast", n, {"y": p["mult_y"]}).execute(_stream(6, n, t))[0]
                               .fragmented_time for t in range(p["mult_trials"])]))
    lo, hi = p["mult_n"]
    growth = tf[hi] / tf[lo]
    ok = wrong == 0 and not off and growth <= 2.0
    detail = (f"grid mismatches {wrong}; rounds {used}; y with rounds != ceil(log2 y): {off}; "
              f"T_F growth {growth:.3f}")
    return CriterionResult(6, "multiplication", ok, detail)


def disorder_audit(keys, seed: int) -> tuple[int, int]:
    """Run the standard median protocol stopping after every Meaningful step;
    returns (non-decreasing steps, Meaningful steps)."""
    b = median_standard(keys)
    pop = b.population()
    sim = Simulation(pop, RawStream(seed))
    names = lambda: [pop.state_name(a) for a in range(pop.n)]
    d = disorder(names(), pop.ranks)
    bad = steps = 0
    limit = b.default_limit(pop.n)
    while d > 0 and sim.interactions < limit:
        before = sim.interactions
        code = sim.advance(limit - before, stop_kinds=("Meaningful",))
        if code != K.STOPPED:
            break
        nd = disorder(names(), pop.ranks)
        steps += 1
        bad += not nd < d
        d = nd
    return bad + (d != 0), steps


def criterion_7(p) -> CriterionResult:
    from .protocols import random_keys
    good, total, means = 0, 0, {}
    inter: dict[int, list] = {}
    for n in sorted(set(p["med_n"]) | set(p["med_grid"])):
        trials = p["med_trials"] if n in p["med_n"] else max(10, p["med_trials"] // 3)
        for t in range(trials):
            seed = trial_seed(BASE_SEED, n, t)
            r, _ = median_standard(random_keys(n, seed)).execute(_stream(7, n, t))
            inter.setdefault(n, []).append(r.interactions)
            if n in p["med_n"]:
                good += r.correct
                total += 1
    bad = steps = 0
    for t in range(p["med_audit"]):
        b_, s_ = disorder_audit(random_keys(101, t), 700 + t)
        bad += b_
        steps += s_
    slope = fit_exponent([(n, float(np.mean(inter[n]))) for n in p["med_grid"]]).slope
    ok = good == total and bad == 0 and 1.9 <= slope <= 2.3
    return CriterionResult(7, "standard median", ok,
                           f"correct {good}/{total}; disorder audit {bad} violations over {steps} "
                           f"Meaningful steps; interactions slope {slope:.3f}")


@dataclass
class FastMedianRuns:
    correct: dict = field(default_factory=dict)
    trials: dict = field(default_factory=dict)
    tf: dict = field(default_factory=dict)
    violations: dict = field(default_factory=dict)
    phases: list = field(default_factory=list)           # (m, colored)
    iterations: list = field(default_factory=list)       # (before, after, median_in_c)


def fast_median_runs(p, destroy_pivot: bool = False) -> FastMedianRuns:
    from .protocols import random_keys
    out = FastMedianRuns()
    for n in p["fm_n"]:
        for t in range(p["fm_trials"]):
            seed = trial_seed(BASE_SEED, n, t)
            fm = FastMedian(random_keys(n, seed), destroy_pivot=destroy_pivot,
                            stop_on_violation=destroy_pivot)
            r, _ = fm.execute(_stream(8, n, t))
            rep = r.extras["report"]
            out.correct[n] = out.correct.get(n, 0) + bool(r.correct)
            out.trials[n] = out.trials.get(n, 0) + 1
            out.tf.setdefault(n, []).append(r.fragmented_time)
            out.violations[n] = out.violations.get(n, 0) + rep.violations
            out.phases += [(ph.uncolored_before, ph.colored_this_phase) for ph in rep.phases]
            out.iterations += [(it.candidates_before, it.candidates_after, it.median_in_c)
                               for it in rep.iterations]
    return out


def criterion_8(p, runs: FastMedianRuns) -> CriterionResult:
    correct = all(runs.correct[n] == runs.trials[n] for n in runs.trials)
    sound = runs.violations.get(min(runs.trials), 0) == 0 and sum(runs.violations.values()) == 0
    short = [(m, c) for m, c in runs.phases if c < math.ceil(m / 22)]
    fracs = [c / m for m, c in runs.phases if m]
    slope = fit_exponent([(n, float(np.mean(v))) for n, v in sorted(runs.tf.items())]).slope
    in_c = all(x[2] for x in runs.iterations)
    ok = correct and sound and not short and slope <= 0.5 and in_c
    checks = dict(correct=correct, soundness=sound, phase_bound=not short, tf_slope=slope <= 0.5,
                  median_in_c=in_c)
    detail = (f"correct {runs.correct}/{runs.trials}; violations {runs.violations}; "
              f"phases below ceil(m/22): {len(short)} of {len(runs.phases)}; "
              f"mean colored fraction {np.mean(fracs):.3f} (min {min(fracs):.3f}, reference 0.2); "
              f"T_F slope {slope:.3f}; median in C at every iteration: {in_c}")
    return CriterionResult(8, "fast median", ok, detail, checks=checks)


def criterion_9(p, runs: FastMedianRuns) -> CriterionResult:
    its = runs.iterations
    shrunk = sum(after <= 0.75 * before for before, after, _ in its)
    frac = shrunk / len(its) if its else 0.0
    ok = len(its) >= 200 and frac >= 0.4
    return CriterionResult(9, "candidate shrink", ok, f"{shrunk}/{len(its)} iterations shrink to <= 3/4 ({frac:.3f})")


# ---- DSL ----------------------------------------------------------------------------

MALFORMED = (
    ("unknown character", "protocol p\nmodel selective\nstates: a, b\na + b -> a $ b\n"),
    ("missing arrow", "protocol p\nmodel selective\nstates: a, b\ngroup G = {a, b}\ntarget a -> G\na + G|b a + a\n"),
    ("unknown model", "protocol p\nmodel quantum\nstates: a\n"),
    ("duplicate state", "protocol p\nmodel selective\nstates: a, a\n"),
    ("reserved word as state", "protocol p\nmodel selective\nstates: a, group\n"),
    ("unclosed group", "protocol p\nmodel selective\nstates: a, b\ngroup G = {a, b\n"),
    ("state in two groups", "protocol p\nmodel selective\nstates: a, b\ngroup G = {a}\ngroup H = {a, b}\n"),
    ("state in no group", "protocol p\nmodel selective\nstates: a, b\ngroup G = {a}\n"),
    ("unknown target group", "protocol p\nmodel selective\nstates: a\ngroup G = {a}\ntarget a -> H\n"),
    ("two targets", "protocol p\nmodel selective\nstates: a\ngroup G = {a}\ntarget a -> G\ntarget a -> G\n"),
    ("responder outside target", "protocol p\nmodel selective\nstates: a, b\ngroup G = {a}\n"
                                 "group H = {b}\ntarget a -> G\na + G|b -> a + a\n"),
    ("unknown state in rule", "protocol p\nmodel selective\nstates: a\ngroup G = {a}\ntarget a -> G\n"
                              "a + G|c -> a + a\n"),
    ("bad guard", "protocol p\nmodel selective\nstates: a\ngroup G = {a}\ntarget a -> G\na + G|a [=] -> a + a\n"),
    ("group in standard model", "protocol p\nmodel standard\nstates: a\ngroup G = {a}\n"),
    ("null rule in standard model", "protocol p\nmodel standard\nstates: a\na + null -> a\n"),
    ("missing protocol line", "model selective\nstates: a\ngroup G = {a}\n"),
    ("missing model line", "protocol p\nstates: a\n"),
    ("trailing input", "protocol p\nmodel selective\nstates: a\ngroup G = {a} extra\n"),
    ("conflicting rules", "protocol p\nmodel selective\nstates: a, b\ngroup G = {a, b}\ntarget a -> G\n"
                          "a + G|b -> a + a\na + G|b -> b + b\n"),
    ("invalid utf-8", b"protocol p\nmodel selective\nstates: \xff\xfe\n"),
)


def dsl_round_trip(spec) -> bool:
    text = pretty_print(spec)
    again = parse_protocol(text)
    return structurally_equal(spec, again) and pretty_print(again) == text


def spanned(diags: list[Diagnostic]) -> bool:
    errs = [d for d in diags if d.severity == "error"]
    return bool(errs) and all(d.span is not None and d.span.line >= 1 for d in errs)


def criterion_10(p) -> CriterionResult:
    specs = [SELECTIVE_SPEC, RESTED_SPEC, STANDARD_SPEC, LE_SPEC, MAJORITY_SPEC, MEDIAN_SPEC]
    trips = sum(dsl_round_trip(s) for s in specs)
    bad = []
    for label, text in MALFORMED:
        try:
            spec, diags = check_protocol(text)
        except Exception as exc:            # a crash is exactly what this criterion rules out
            bad.append(f"{label}: crashed ({exc!r})")
            continue
        if spec is not None or not spanned(diags):
            bad.append(label)
    ok = trips == len(specs) and not bad
    return CriterionResult(10, "protocol text format", ok,
                           f"round trips {trips}/{len(specs)}; malformed fixtures without a spanned "
                           f"diagnostic: {bad or 'none'} ({len(MALFORMED)} fixtures)")


# ---- suite ----------------------------------------------------------------------------

def run_suite(name: str = "fast", *, inject: str | None = None, only=None,
              emit: Callable[[str], None] | None = print) -> list[CriterionResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if inject not in (None, "destroy-pivot"):
        raise ValueError(f"unknown fault injection {inject!r}")
    p = SUITES[name]
    wanted = set(only or range(1, 11))
    results: list[CriterionResult] = []
    runs = None

    def timed(fn, *args, extra=0.0):
        t0 = time.perf_counter()
        res = fn(*args)
        res.seconds = time.perf_counter() - t0 + extra
        results.append(res)
        if emit:
            emit(res.line())

    for k, fn in ((1, criterion_1), (2, criterion_2), (3, criterion_3), (4, criterion_4),
                  (5, criterion_5), (6, criterion_6), (7, criterion_7)):
        if k in wanted:
            timed(fn, p)
    if wanted & {8, 9}:
        t0 = time.perf_counter()
        runs = fast_median_runs(p, destroy_pivot=inject == "destroy-pivot")
        shared = time.perf_counter() - t0
        if 8 in wanted:
            timed(criterion_8, p, runs, extra=shared)
        if 9 in wanted:
            timed(criterion_9, p, runs)
    if 10 in wanted:
        timed(criterion_10, p)
    return results
