"""Multi-agent payoffs: wagering, scoring-rule markets, and a cost-function maker.

Wagering pays each agent their score minus the average of the others',
so payoffs always sum to zero.  The cost-function market maker keeps a
Hermitian share matrix Q; the log-sum-exp of its eigenvalues plays the
role the classical LMSR cost plays for probability vectors, with the
softmax-of-eigenvalues state as the instantaneous price.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .extended import NEG_INF
from .linalg import as_density, as_hermitian, hermitian_part, hs_inner
from .measurement import sample_outcome
from .scores import QuantumScore, expected_score, von_neumann_entropy

__all__ = [
    "WageringRound",
    "wagering_payoffs",
    "trader_payoff",
    "lmsr_cost",
    "market_price_state",
    "bundle_cost",
    "bundle_expected_payoff",
    "MarketState",
]


@dataclass(frozen=True)
class WageringRound:
    """Simultaneous reports scored against one truth.

    The score must use the same measurement for every report: one
    physical measurement settles all agents.
    """

    reports: list
    score: QuantumScore
    truth: np.ndarray

    def __post_init__(self):
        if len(self.reports) < 2:
            raise ValueError("wagering needs at least two agents")
        object.__setattr__(self, "reports", [as_density(r) for r in self.reports])
        object.__setattr__(self, "truth", as_density(self.truth))


def _common_measurement(round_: WageringRound):
    mus = [round_.score.measure(r) for r in round_.reports]
    first = mus[0]
    for i, mu in enumerate(mus[1:], start=1):
        if not first.approx_equal(mu):
            raise ValueError(
                f"report {i} induces a different measurement; wagering requires a fixed one"
            )
    return first


def wagering_payoffs(round_: WageringRound, mode: str = "expected", rng=None, outcome=None) -> np.ndarray:
    """Payoff_i = score_i - mean of the other agents' scores.

    ``expected`` mode scores against the truth state; ``realized`` mode
    draws one shared outcome from the common measurement (or uses the
    given ``outcome``) and applies the scoring function directly.
    Payoffs sum to zero by construction.
    """
    mu = _common_measurement(round_)
    m = len(round_.reports)
    if mode == "expected":
        scores = np.array(
            [expected_score(round_.score, r, round_.truth) for r in round_.reports]
        )
    elif mode == "realized":
        if outcome is None:
            outcome = sample_outcome(mu, round_.truth, rng=rng)
        scores = np.array([round_.score.score(r, int(outcome)) for r in round_.reports])
    else:
        raise ValueError(f"mode must be 'expected' or 'realized', got {mode!r}")
    if not np.isfinite(scores).all():
        raise ValueError("wagering needs finite scores for all reports")
    total = scores.sum()
    return scores - (total - scores) / (m - 1)


def trader_payoff(S, rho_prev, rho_new, truth) -> float:
    """Market-trade payoff: score of the new state minus the old one.

    Telescopes over a trade sequence.  Raises when the previous position
    scores -inf (the difference would be +inf or indeterminate).
    """
    new = expected_score(S, rho_new, truth)
    prev = expected_score(S, rho_prev, truth)
    if prev == NEG_INF:
        raise ValueError("previous position scores -inf; payoff undefined")
    return new - prev


def lmsr_cost(Q) -> float:
    """log sum exp of the eigenvalues, stabilized by max subtraction."""
    w = np.linalg.eigvalsh(as_hermitian(Q))
    top = float(w[-1])
    return top + float(np.log(np.sum(np.exp(w - top))))


def market_price_state(Q) -> np.ndarray:
    """Gradient of the cost: exp(Q) / Tr exp(Q), always a density matrix."""
    Q = as_hermitian(Q)
    w, V = np.linalg.eigh(Q)
    e = np.exp(w - float(w[-1]))
    rho = hermitian_part((V * e) @ V.conj().T)
    return rho / float(np.trace(rho).real)


def bundle_cost(Q, R) -> float:
    """Price of buying bundle R at share state Q."""
    Q = as_hermitian(Q)
    R = as_hermitian(R)
    return lmsr_cost(Q + R) - lmsr_cost(Q)


def bundle_expected_payoff(R, rho) -> float:
    """A bundle pays its overlap with the realized state."""
    return hs_inner(as_hermitian(R), as_density(rho))


@dataclass
class MarketState:
    """Cost-function market maker over Hermitian share bundles.

    Trades mutate the share matrix through ``trade`` only; reads are safe
    between trades.  Worst-case maker loss from Q = 0 is log(dim), the
    entropy of the uniform price.
    """

    dim: int
    cost: str = "lmsr"
    shares: np.ndarray = field(init=False)
    history: list = field(init=False, default_factory=list)

    def __post_init__(self):
        if self.cost != "lmsr":
            raise ValueError(f"unknown cost function {self.cost!r}")
        self.shares = np.zeros((self.dim, self.dim), dtype=np.complex128)

    def trade(self, R) -> float:
        """Execute a bundle purchase; returns the cost charged."""
        R = as_hermitian(R)
        price = bundle_cost(self.shares, R)
        self.shares = hermitian_part(self.shares + R)
        self.history.append({"bundle": R, "cost": price})
        return price

    def price(self) -> np.ndarray:
        return market_price_state(self.shares)

    def maker_loss(self, truth) -> float:
        """Payout owed minus cash collected, given the realized state.

        Equals <Q, rho> - F(Q) + F(0); bounded by log(dim) because the
        cost function dominates <Q, rho> + entropy(rho).
        """
        truth = as_density(truth)
        return (
            hs_inner(self.shares, truth)
            - lmsr_cost(self.shares)
            + float(np.log(self.dim))
        )

    def conjugacy_gap(self) -> float:
        """Residual of cost(Q) = <Q, price> + entropy(price); zero at optimum."""
        rho = self.price()
        return abs(lmsr_cost(self.shares) - hs_inner(self.shares, rho) - von_neumann_entropy(rho))
