"""Classical proper scoring rules over finite outcome spaces.

Rules score a reported distribution against a realized outcome and may
take the value -inf (never +inf).  The convex-function construction
turns any convex expected-score function plus a subgradient selection
into a proper rule, and ``properness_check`` probes properness and
strictness by sampling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .extended import EXT_WEIGHT_TOL, NEG_INF, ext_dot
from .reports import ScoreReport, run_trials

__all__ = [
    "PROB_CLIP",
    "PROB_ZERO_TOL",
    "PROPERNESS_MARGIN",
    "DISTINCT_TOL",
    "clean_probs",
    "ClassicalScoringRule",
    "brier_rule",
    "log_rule",
    "linear_rule",
    "from_convex",
    "expected_classical",
    "properness_check",
    "is_permutation_invariant",
    "shannon_entropy",
]

PROB_CLIP = 1e-12        # negative entries in [-PROB_CLIP, 0) are clipped to 0
PROB_ZERO_TOL = 1e-12    # probabilities at or below this count as zero
PROPERNESS_MARGIN = 1e-9
DISTINCT_TOL = 1e-6      # reports farther apart than this count as distinct


def clean_probs(p) -> np.ndarray:
    """Validate a probability vector, absorbing measurement float noise.

    Entries in [-PROB_CLIP, 0) are clipped to zero and the vector is
    renormalized; anything more negative, or a total off 1 by more than
    1e-10, is an error.
    """
    q = np.asarray(p, dtype=np.float64).copy()
    if q.ndim != 1:
        raise ValueError(f"probability vector must be 1-d, got shape {q.shape}")
    if not np.isfinite(q).all():
        raise ValueError("probability vector has non-finite entries")
    low = float(q.min()) if q.size else 0.0
    if low < -PROB_CLIP:
        raise ValueError(f"probability {low:.3e} is negative beyond the clip tolerance")
    np.clip(q, 0.0, None, out=q)
    total = float(q.sum())
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"probabilities sum to {total!r}, expected 1")
    return q / total


@dataclass(frozen=True)
class ClassicalScoringRule:
    """Scoring rule s(report distribution, outcome index) -> R u {-inf}."""

    score: Callable[[np.ndarray, int], float]
    name: str = ""
    domain: Callable[[np.ndarray], bool] | None = None

    def __call__(self, p, y: int) -> float:
        return self.score(np.asarray(p, dtype=np.float64), int(y))


def brier_rule() -> ClassicalScoringRule:
    """Quadratic score s(p, y) = 2 p_y - ||p||^2; finite everywhere."""

    def score(p, y):
        return float(2.0 * p[y] - p @ p)

    return ClassicalScoringRule(score, name="brier")


def log_rule() -> ClassicalScoringRule:
    """Logarithmic score s(p, y) = log p_y, -inf at (numerically) zero mass."""

    def score(p, y):
        py = float(p[y])
        if py <= PROB_ZERO_TOL:
            return NEG_INF
        return float(np.log(py))

    return ClassicalScoringRule(score, name="log")


def linear_rule() -> ClassicalScoringRule:
    """s(p, y) = p_y.  Improper: the expected score is maximized at a vertex."""

    def score(p, y):
        return float(p[y])

    return ClassicalScoringRule(score, name="linear")


def _subgrad_pairing(d, delta) -> float:
    # <d, delta> for an extended vector d against a signed direction delta.
    # -inf entries of d may only meet nonnegative direction components
    # (they sit where the base point has zero mass).
    d = np.asarray(d, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    neg = np.isneginf(d)
    if not neg.any():
        return float(d @ delta)
    if (delta[neg] < -EXT_WEIGHT_TOL).any():
        raise ValueError("-inf subgradient entry paired with a negative direction")
    if (delta[neg] > EXT_WEIGHT_TOL).any():
        return NEG_INF
    keep = ~neg
    return float(d[keep] @ delta[keep])


def from_convex(G, dG, dim: int, rng=None, check_samples: int = 64) -> ClassicalScoringRule:
    """Proper scoring rule s(p, y) = G(p) + <dG(p), 1_y - p>.

    G must be convex on the simplex and dG a consistent (extended)
    subgradient oracle: dG(p) entries live in R u {-inf}, with -inf only
    where p_y = 0.  A sampled self-check of the subgradient inequality
    and midpoint convexity runs at construction and raises on violation.
    """
    rng = np.random.default_rng(rng)
    for _ in range(check_samples):
        p = rng.dirichlet(np.ones(dim))
        q = rng.dirichlet(np.ones(dim))
        gp, gq = float(G(p)), float(G(q))
        if gq < gp + _subgrad_pairing(dG(p), q - p) - PROPERNESS_MARGIN:
            raise ValueError("subgradient inequality violated; G not convex or dG wrong")
        mid = 0.5 * (p + q)
        if float(G(mid)) > 0.5 * (gp + gq) + PROPERNESS_MARGIN:
            raise ValueError("midpoint convexity violated; G is not convex")

    def score(p, y):
        d = np.asarray(dG(p), dtype=np.float64)
        dy = float(d[y])
        if dy == NEG_INF:
            return NEG_INF
        pairing = ext_dot(p, d, zero_tol=EXT_WEIGHT_TOL)
        if pairing == NEG_INF:
            raise ValueError("dG has -inf mass where p is positive; invalid oracle")
        return float(G(p)) + dy - pairing

    return ClassicalScoringRule(score, name="from_convex")


def expected_classical(rule: ClassicalScoringRule, q, p) -> float:
    """Expected score of report q under belief p, in R u {-inf}."""
    q = np.asarray(q, dtype=np.float64)
    p = clean_probs(p)
    values = [rule(q, y) for y in range(len(p))]
    return ext_dot(p, values, zero_tol=EXT_WEIGHT_TOL)


def _sample_report(p, dim, strategy, rng):
    if strategy == 1:  # vertex report; exposes rules maximized at a corner
        q = np.zeros(dim)
        q[rng.integers(dim)] = 1.0
        return q
    if strategy == 2:  # relabeling of the belief
        q = p[rng.permutation(dim)]
    elif strategy == 3:  # belief blended toward a vertex
        lam = rng.uniform(0.0, 0.9)
        q = lam * p
        q[rng.integers(dim)] += 1.0 - lam
    else:
        q = rng.dirichlet(np.ones(dim))
    # reports in (DISTINCT_TOL, ~sqrt(margin)] are distinct by distance yet
    # tie within margin for quadratic scores; sample clear of that window
    if DISTINCT_TOL < float(np.linalg.norm(p - q)) < 1e-4:
        return rng.dirichlet(np.ones(dim))
    return q


def properness_check(
    rule: ClassicalScoringRule,
    trials: int,
    dim: int,
    rng=None,
    mode: str = "strict",
    margin: float = PROPERNESS_MARGIN,
    distinct_tol: float = DISTINCT_TOL,
    threads: int | None = None,
) -> ScoreReport:
    """Sample (belief, report) pairs and flag properness failures.

    Flags expected-score gains above ``margin``; in strict mode also
    flags exact ties (within ``margin``) between distinct reports.
    """
    if mode not in ("weak", "strict"):
        raise ValueError(f"mode must be 'weak' or 'strict', got {mode!r}")
    report = ScoreReport(rule.name or "rule", mode, trials, (dim,))

    def trial(i, g):
        p = g.dirichlet(np.ones(dim))
        q = _sample_report(p, dim, i % 4, g)
        truthful = expected_classical(rule, p, p)
        other = expected_classical(rule, q, p)
        gap = other - truthful if other > NEG_INF else NEG_INF
        tie = abs(gap) <= margin if np.isfinite(gap) else False
        distinct = float(np.linalg.norm(p - q)) > distinct_tol
        out = []
        if gap > margin:
            out.append(("gain", gap, p, q))
        elif mode == "strict" and tie and distinct:
            out.append(("tie", gap, p, q))
        return gap, out

    for gap, found in run_trials(trials, trial, rng, threads):
        if np.isfinite(gap):
            report.record_gap(gap)
        for kind, g, p, q in found:
            report.add_violation(
                {
                    "kind": kind,
                    "gap": float(g),
                    "belief": p.tolist(),
                    "report": q.tolist(),
                }
            )
    return report


def is_permutation_invariant(rule: ClassicalScoringRule, dim: int, trials: int = 32, rng=None) -> bool:
    """Check s(p, y) == s(p relabeled, y relabeled) on random samples."""
    rng = np.random.default_rng(rng)
    for _ in range(trials):
        p = rng.dirichlet(np.ones(dim))
        perm = rng.permutation(dim)
        inv = np.argsort(perm)
        y = int(rng.integers(dim))
        a = rule(p, y)
        b = rule(p[perm], int(inv[y]))
        if a == NEG_INF or b == NEG_INF:
            if a != b:
                return False
            continue
        if abs(a - b) > 1e-10:
            return False
    return True


def shannon_entropy(p) -> float:
    """Shannon entropy (natural log) with the 0 log 0 = 0 convention."""
    q = clean_probs(p)
    pos = q > 0
    return float(-(q[pos] @ np.log(q[pos])))
