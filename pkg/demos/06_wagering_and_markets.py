#!/usr/bin/env python3
"""Group elicitation: wagering payoffs and a cost-function market maker.

Wagering pays each agent their score minus the average of the others':
zero-sum by construction, and truthful whenever the underlying score is.
The market maker sells Hermitian share bundles priced by the log-sum-exp
of the share matrix's eigenvalues; its price state is the softmax of the
eigenvalues and its worst-case loss is log(dim).
"""

import numpy as np

from qelicit import (
    MarketState,
    WageringRound,
    brier_rule,
    bundle_expected_payoff,
    canonical_complete,
    fixed_measurement_score,
    lmsr_cost,
    market_price_state,
    random_density,
    random_hermitian,
    trader_payoff,
    wagering_payoffs,
)

rng = np.random.default_rng(5)

# Wagering needs one shared physical measurement, so use a fixed score.
score = fixed_measurement_score(brier_rule(), canonical_complete(2))
truth = random_density(2, rng=rng)
reports = [random_density(2, rng=rng) for _ in range(3)] + [truth]

pay = wagering_payoffs(WageringRound(reports, score, truth))
print("wagering payoffs:", np.round(pay, 4), "sum:", pay.sum())
print("the honest agent (last) does best:", int(np.argmax(pay)) == 3)

# One shared outcome settles everyone in realized mode.
pay = wagering_payoffs(WageringRound(reports, score, truth), mode="realized", rng=rng)
print("realized payoffs:", np.round(pay, 4), "sum:", pay.sum())

# Scoring-rule market: each trader is paid the score improvement.
prev, new = random_density(2, rng=rng), truth
print("\ntrade toward the truth pays:", trader_payoff(score, prev, new, truth))

# Cost-function market maker over Hermitian bundles.
market = MarketState(2)
print("\ninitial cost (log dim):", lmsr_cost(market.shares))
for _ in range(4):
    bundle = random_hermitian(2, rng=rng)
    cost = market.trade(bundle)
    print(f"  bundle cost {cost:+.4f}, expected payoff {bundle_expected_payoff(bundle, truth):+.4f}")

print("price state:")
print(np.round(market.price(), 4))
print("maker loss:", market.maker_loss(truth), "bounded by", np.log(2))
print("conjugacy residual:", market.conjugacy_gap())

# Prices respond to demand: loading shares on a direction raises its price.
print("\nprice after a big |0><0| purchase:")
print(np.round(market_price_state(np.diag([5.0, 0.0])), 4))
