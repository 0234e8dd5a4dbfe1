"""Check reports and the seeded trial runner used by the verification suites."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

__all__ = ["ScoreReport", "run_trials", "default_threads", "json_safe"]

MAX_STORED_VIOLATIONS = 32


def json_safe(x):
    """Recursively replace non-finite floats with strings for strict JSON."""
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {k: json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [json_safe(v) for v in x]
    return x


@dataclass
class ScoreReport:
    """Outcome of a sampled check: pass iff no violations were found.

    ``violations`` stores at most MAX_STORED_VIOLATIONS entries;
    ``n_violations`` counts them all.
    """

    name: str
    mode: str
    trials: int
    dims: tuple[int, ...]
    violations: list = field(default_factory=list)
    n_violations: int = 0
    max_gap: float = float("-inf")
    kind_counts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.n_violations == 0

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def add_violation(self, entry: dict):
        self.n_violations += 1
        kind = entry.get("kind", "violation")
        self.kind_counts[kind] = self.kind_counts.get(kind, 0) + 1
        if len(self.violations) < MAX_STORED_VIOLATIONS:
            self.violations.append(entry)

    def record_gap(self, gap: float):
        if gap > self.max_gap:
            self.max_gap = gap

    def to_json(self) -> dict:
        return json_safe(
            {
                "name": self.name,
                "mode": self.mode,
                "trials": self.trials,
                "dims": list(self.dims),
                "verdict": self.verdict,
                "max_gap": self.max_gap,
                "n_violations": self.n_violations,
                "kind_counts": dict(sorted(self.kind_counts.items())),
                "violations": self.violations,
            }
        )


def default_threads() -> int:
    """Thread cap from QELICIT_THREADS (default 1)."""
    raw = os.environ.get("QELICIT_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_trials(trials: int, fn, rng=None, threads: int | None = None) -> list:
    """Run fn(index, generator) over independent RNG streams.

    Streams are spawned from one seed so results are identical whatever
    the thread count; outputs are ordered by trial index.  Threads each
    take one contiguous block of trials (per-task overhead would swamp
    these small-matrix workloads otherwise).
    """
    streams = np.random.default_rng(rng).spawn(trials)
    if threads is None:
        threads = default_threads()
    if threads <= 1 or trials <= 1:
        return [fn(i, g) for i, g in enumerate(streams)]

    bounds = np.linspace(0, trials, min(threads, trials) + 1).astype(int)

    def block(lo, hi):
        return [fn(i, streams[i]) for i in range(lo, hi)]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        chunks = pool.map(block, bounds[:-1], bounds[1:])
        return [item for chunk in chunks for item in chunk]
