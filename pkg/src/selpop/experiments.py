"""Trial runner, CSV rows and scaling tables for sweeps over population sizes."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .engine import Limits
from .errors import ConfigError, EmptyPopulation, SelpopError
from .metrics import Fit, fit_exponent, fit_polylog
from .population import Population
from .protocols import BUILTINS, Bundle, make_bundle
from .rng import RawStream, trial_seed
from .spec import ProtocolSpec

CSV_HEADER = ("protocol", "model", "n", "seed", "trial", "interactions", "chunks", "fragmented_time",
              "parallel_time", "stabilized", "correct", "extra_key", "extra_value")


@dataclass
class ExperimentConfig:
    protocol: str | None = None          # built-in name
    protocol_file: str | None = None     # path to a .pp file
    n_grid: list[int] = field(default_factory=lambda: [100])
    trials: int = 1
    seed: int = 0
    max_interactions: int | None = None
    params: dict = field(default_factory=dict)
    out: str | None = None
    workers: int = 1

    def __post_init__(self):
        self.n_grid = [int(n) for n in self.n_grid]
        self.check()

    def check(self) -> None:
        if (self.protocol is None) == (self.protocol_file is None):
            raise ConfigError("give exactly one of protocol / protocol_file")
        if self.protocol is not None and self.protocol not in BUILTINS:
            raise ConfigError(f"unknown protocol {self.protocol!r}; built-ins: {', '.join(BUILTINS)}")
        if not self.n_grid:
            raise ConfigError("n-grid is empty")
        if any(n < 1 for n in self.n_grid):
            raise EmptyPopulation(f"population size must be at least 1, got {min(self.n_grid)}")
        if self.n_grid != sorted(set(self.n_grid)):
            raise ConfigError("n-grid must be strictly increasing")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.max_interactions is not None and self.max_interactions < 1:
            raise ConfigError("max_interactions must be at least 1")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    @property
    def label(self) -> str:
        return self.protocol or Path(self.protocol_file).stem

    @classmethod
    def from_json(cls, path: str, **overrides) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


@dataclass(frozen=True)
class CsvRow:
    protocol: str
    model: str
    n: int
    seed: int
    trial: int
    interactions: int
    chunks: int
    fragmented_time: float
    parallel_time: float
    stabilized: bool
    correct: bool
    extra_key: str = ""
    extra_value: str = ""

    def cells(self) -> list[str]:
        out = []
        for name in CSV_HEADER:
            v = getattr(self, name)
            if isinstance(v, bool):
                v = "true" if v else "false"
            elif isinstance(v, float):
                v = f"{v:.6f}"
            out.append(str(v))
        return out


def write_csv(rows, path: str | None) -> str:
    """Serialize rows; write to ``path`` when given.  Returns the CSV text."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.cells())
    text = buf.getvalue()
    if path:
        Path(path).write_text(text)
    return text


def read_csv(path: str) -> list[dict]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


# ---- protocol files ------------------------------------------------------

def parse_init(text: str) -> list[tuple[str, str]]:
    """``"1=1,0=*"`` -> [("1", "1"), ("0", "*")]."""
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, eq, count = part.rpartition("=")
        if not eq or not name:
            raise ConfigError(f"bad init entry {part!r}; expected state=count")
        out.append((name, count))
    return out


def initial_counts(spec: ProtocolSpec, n: int, init=None) -> dict[str, int]:
    """Counts for a file protocol.  By default every agent starts in the first
    declared state; ``init`` lists ``state=count`` pairs, one of them may be ``*``."""
    if not init:
        return {spec.states[0]: n}
    pairs = parse_init(init) if isinstance(init, str) else list(init.items())
    counts, rest = {}, None
    for name, c in pairs:
        if name not in spec.state_index:
            raise ConfigError(f"init names unknown state {name!r}")
        if str(c) == "*":
            if rest is not None:
                raise ConfigError("only one init entry may be '*'")
            rest = name
        else:
            counts[name] = counts.get(name, 0) + int(c)
    fixed = sum(counts.values())
    if rest is not None:
        counts[rest] = counts.get(rest, 0) + n - fixed
    if sum(counts.values()) != n or min(counts.values()) < 0:
        raise ConfigError(f"init counts do not add up to n={n}")
    return counts


def file_bundle(spec: ProtocolSpec, n: int, params: dict | None = None) -> Bundle:
    params = params or {}
    counts = initial_counts(spec, n, params.get("init"))
    if spec.comparison_model:
        from .protocols import random_keys
        keys = random_keys(n, params.get("key_seed", 0))

        def build():
            names = [s for s, c in counts.items() for _ in range(c)]
            return Population.from_keyed(spec, zip(names, keys))
    else:
        def build():
            return Population.from_counts(spec, counts)
    return Bundle(name=spec.name, spec=spec, build=build, output=lambda p: p.census(), params={"n": n})


def load_spec(path: str) -> ProtocolSpec:
    from .dsl import parse_protocol
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_protocol(data)


# ---- trials ----------------------------------------------------------------

@dataclass
class TrialOutcome:
    n: int
    trial: int
    seed: int
    model: str
    interactions: int
    chunks: int
    stabilized: bool
    correct: bool
    output: object = None
    extras: list[tuple[str, str]] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def parallel_time(self) -> float:
        return self.interactions / self.n

    @property
    def fragmented_time(self) -> float:
        return self.chunks * math.log(self.n) if self.n > 1 else 0.0


def _output_text(out) -> str:
    if out is None:
        return ""
    if isinstance(out, dict):
        return " ".join(f"{k}:{v}" for k, v in out.items())
    vals = [getattr(out, f.name) for f in fields(out)] if hasattr(out, "__dataclass_fields__") else [out]
    return str(vals[0]) if len(vals) == 1 else str(vals)


def _extras(name: str, result) -> list[tuple[str, str]]:
    out = [("output", _output_text(result.output))]
    if name == "mult-fast":
        from .protocols.multiply_fast import rounds
        out.append(("rounds", str(rounds(result.rule_counts))))
    if name == "median-fast" and "report" in result.extras:
        rep = result.extras["report"]
        out.append(("iterations", str(len(rep.iterations))))
        for i, it in enumerate(rep.iterations):
            out.append(("iteration", f"{i}:{it.candidates_before}->{it.candidates_after}:{it.verdict}"))
            for ph in it.phases:
                frac = ph.colored_this_phase / ph.uncolored_before if ph.uncolored_before else 0.0
                out.append(("phase", f"{i}:{ph.uncolored_before}:{ph.colored_this_phase}:{frac:.4f}"))
        out.append(("violations", str(rep.violations)))
    for d in result.diagnostics:
        if not d.startswith("NoMatchDraws"):
            out.append(("diagnostic", d))
    return out


def run_trial(job: tuple) -> TrialOutcome:
    """One (n, trial) cell; module level so worker processes can import it."""
    name, spec, n, t, base, max_inter, params = job
    seed = trial_seed(base, n, t)
    bundle = file_bundle(spec, n, params) if spec is not None else make_bundle(name, n, params, seed)
    limits = Limits(max_inter) if max_inter else None
    result, _ = bundle.execute(RawStream(seed), limits)
    model = (spec or getattr(bundle, "spec", None))
    model = model.model if model is not None else "selective"
    return TrialOutcome(n, t, seed, model, result.interactions, result.chunks.chunk_count,
                        bool(result.stabilized), bool(result.correct), result.output,
                        _extras(name, result), list(result.diagnostics))


def resolve_workers(requested: int = 1) -> int:
    env = os.environ.get("SELPOP_WORKERS")
    if env:
        try:
            requested = int(env)
        except ValueError:
            raise ConfigError(f"SELPOP_WORKERS must be an integer, got {env!r}") from None
    if requested < 1:
        raise ConfigError("workers must be at least 1")
    return requested


def run_trials(cfg: ExperimentConfig) -> list[TrialOutcome]:
    """All trials of ``cfg`` in (n, trial) order, whatever the completion order."""
    spec = load_spec(cfg.protocol_file) if cfg.protocol_file else None
    # fail fast on bad parameters before any worker starts
    for n in cfg.n_grid:
        if spec is not None:
            initial_counts(spec, n, cfg.params.get("init"))
        else:
            make_bundle(cfg.protocol, n, cfg.params, 0)
    jobs = [(cfg.protocol, spec, n, t, cfg.seed, cfg.max_interactions, cfg.params)
            for n in cfg.n_grid for t in range(cfg.trials)]
    workers = min(resolve_workers(cfg.workers), len(jobs))
    if workers <= 1:
        return [run_trial(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_trial, jobs))


def to_rows(label: str, outcomes) -> list[CsvRow]:
    rows = []
    for o in outcomes:
        base = dict(protocol=label, model=o.model, n=o.n, seed=o.seed, trial=o.trial,
                    interactions=o.interactions, chunks=o.chunks, fragmented_time=o.fragmented_time,
                    parallel_time=o.parallel_time, stabilized=o.stabilized, correct=o.correct)
        for k, v in o.extras or [("", "")]:
            rows.append(CsvRow(**base, extra_key=k, extra_value=v))
    return rows


# ---- scaling table -------------------------------------------------------------

@dataclass
class ScalingTable:
    """One row per (n, seed) trial, with fits over per-n means."""

    protocol: str
    rows: list[TrialOutcome]

    def __post_init__(self):
        ns = [n for n in self.sizes]
        if ns != sorted(set(ns)):
            raise ValueError("n values must be strictly increasing across the sweep")

    @property
    def sizes(self) -> list[int]:
        seen = []
        for r in self.rows:
            if not seen or seen[-1] != r.n:
                seen.append(r.n)
        return seen

    def metric(self, name: str, n: int) -> np.ndarray:
        return np.array([float(getattr(r, name)) for r in self.rows if r.n == n])

    def means(self, name: str) -> list[tuple[int, float]]:
        return [(n, float(self.metric(name, n).mean())) for n in self.sizes]

    def fit(self, name: str, polylog: bool = False) -> Fit:
        pts = self.means(name)
        return fit_polylog(pts) if polylog else fit_exponent(pts)

    def correct_fraction(self, n: int | None = None) -> float:
        sel = [r for r in self.rows if n is None or r.n == n]
        return sum(r.correct for r in sel) / len(sel)

    def report(self) -> str:
        lines = [f"scaling report: {self.protocol}",
                 f"{'n':>8} {'trials':>6} {'correct':>8} {'interactions':>14} {'T':>10} {'T_F':>10} {'T_F/ln n':>9}"]
        for n in self.sizes:
            inter = self.metric("interactions", n)
            lines.append(f"{n:>8} {len(inter):>6} {self.correct_fraction(n):>8.3f} {inter.mean():>14.1f} "
                         f"{self.metric('parallel_time', n).mean():>10.3f} "
                         f"{self.metric('fragmented_time', n).mean():>10.3f} "
                         f"{self.metric('chunks', n).mean():>9.3f}")
        for metric in ("interactions", "parallel_time", "fragmented_time"):
            for poly, label in ((False, "log-log slope"), (True, "polylog slope")):
                try:
                    f = self.fit(metric, poly)
                    lines.append(f"{metric:>16} {label}: {f.slope:.4f} (residual {f.residual:.3g})")
                except SelpopError as exc:
                    lines.append(f"{metric:>16} {label}: {exc}")
        ratios = self.means("chunks")
        if len(ratios) > 1:
            growth = [b / a for (_, a), (_, b) in zip(ratios, ratios[1:]) if a > 0]
            lines.append("T_F/ln n growth per step: " + ", ".join(f"{g:.3f}" for g in growth))
        return "\n".join(lines)
