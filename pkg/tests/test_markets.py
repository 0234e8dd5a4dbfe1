import numpy as np
import pytest

from qelicit.classical import brier_rule
from qelicit.linalg import (
    as_density,
    frob_dist,
    hs_inner,
    random_density,
    random_hermitian,
)
from qelicit.markets import (
    MarketState,
    WageringRound,
    bundle_cost,
    bundle_expected_payoff,
    lmsr_cost,
    market_price_state,
    trader_payoff,
    wagering_payoffs,
)
from qelicit.measurement import canonical_complete
from qelicit.scores import (
    binary_brier,
    expected_score,
    fixed_measurement_score,
    log_spectral,
    von_neumann_entropy,
)


def fixed_brier(dim):
    return fixed_measurement_score(brier_rule(), canonical_complete(dim))


class TestWagering:
    def test_identical_reports_pay_zero(self, rng):
        rho = random_density(2, rng=rng)
        rnd = WageringRound([rho, rho, rho], fixed_brier(2), random_density(2, rng=rng))
        assert np.abs(wagering_payoffs(rnd)).max() <= 1e-12

    def test_two_agent_formula(self, rng):
        S = fixed_brier(2)
        r1, r2 = random_density(2, rng=rng), random_density(2, rng=rng)
        truth = random_density(2, rng=rng)
        pay = wagering_payoffs(WageringRound([r1, r2], S, truth))
        direct = expected_score(S, r1, truth) - expected_score(S, r2, truth)
        assert pay[0] == pytest.approx(direct, abs=1e-12)
        assert pay[1] == pytest.approx(-direct, abs=1e-12)

    def test_budget_balance_random_rounds(self, rng):
        for m in range(2, 7):
            S = fixed_brier(2)
            reports = [random_density(2, rng=rng) for _ in range(m)]
            rnd = WageringRound(reports, S, random_density(2, rng=rng))
            assert abs(wagering_payoffs(rnd).sum()) <= 1e-9
            assert abs(wagering_payoffs(rnd, mode="realized", rng=rng).sum()) <= 1e-9

    def test_realized_mode_uses_shared_outcome(self, rng):
        S = fixed_brier(2)
        reports = [random_density(2, rng=rng) for _ in range(3)]
        rnd = WageringRound(reports, S, random_density(2, rng=rng))
        pay = wagering_payoffs(rnd, mode="realized", outcome=1)
        scores = np.array([S.score(r, 1) for r in reports])
        expected = scores - (scores.sum() - scores) / 2
        assert np.abs(pay - expected).max() <= 1e-12

    def test_report_dependent_measurement_rejected(self, rng):
        reports = [random_density(2, rng=rng) for _ in range(2)]
        rnd = WageringRound(reports, binary_brier(), random_density(2, rng=rng))
        with pytest.raises(ValueError, match="fixed"):
            wagering_payoffs(rnd)

    def test_needs_two_agents(self, rng):
        with pytest.raises(ValueError, match="two"):
            WageringRound([random_density(2, rng=rng)], fixed_brier(2), random_density(2, rng=rng))

    def test_truthful_report_maximizes_expected_payoff(self, rng):
        # others' reports fixed; the agent's payoff is their score plus a constant
        S = fixed_brier(2)
        truth = random_density(2, rng=rng)
        others = [random_density(2, rng=rng) for _ in range(2)]
        honest = wagering_payoffs(WageringRound([truth] + others, S, truth))[0]
        for _ in range(50):
            lie = random_density(2, rank=int(rng.integers(1, 3)), rng=rng)
            dishonest = wagering_payoffs(WageringRound([lie] + others, S, truth))[0]
            assert dishonest <= honest + 1e-9


class TestTraderPayoff:
    def test_no_trade_no_payoff(self, rng):
        S = fixed_brier(2)
        rho = random_density(2, rng=rng)
        assert trader_payoff(S, rho, rho, random_density(2, rng=rng)) == 0.0

    def test_truthful_trade_is_optimal(self, rng):
        S = fixed_brier(2)
        truth = random_density(2, rng=rng)
        prev = random_density(2, rng=rng)
        best = trader_payoff(S, prev, truth, truth)
        for _ in range(50):
            other = random_density(2, rank=int(rng.integers(1, 3)), rng=rng)
            assert trader_payoff(S, prev, other, truth) <= best + 1e-9

    def test_telescoping(self, rng):
        S = fixed_brier(2)
        truth = random_density(2, rng=rng)
        states = [random_density(2, rng=rng) for _ in range(6)]
        total = sum(
            trader_payoff(S, states[i], states[i + 1], truth) for i in range(5)
        )
        direct = expected_score(S, states[-1], truth) - expected_score(S, states[0], truth)
        assert total == pytest.approx(direct, abs=1e-9)

    def test_neg_inf_previous_position_rejected(self, rng):
        S = log_spectral()
        prev = np.diag([1.0, 0.0]).astype(complex)  # scores -inf under mixed truth
        truth = np.eye(2) / 2
        with pytest.raises(ValueError, match="-inf"):
            trader_payoff(S, prev, truth, truth)


class TestLmsr:
    def test_zero_shares_cost_log_n(self):
        for n in (2, 3, 5):
            assert lmsr_cost(np.zeros((n, n))) == pytest.approx(np.log(n), abs=1e-12)

    def test_identity_translation(self, rng):
        Q = random_hermitian(4, rng=rng, scale=3.0)
        assert lmsr_cost(Q + 2.5 * np.eye(4)) == pytest.approx(
            lmsr_cost(Q) + 2.5, abs=1e-10
        )

    def test_price_state_is_density(self, rng):
        for _ in range(20):
            as_density(market_price_state(random_hermitian(3, rng=rng, scale=4.0)))

    def test_price_at_zero_is_maximally_mixed(self):
        assert frob_dist(market_price_state(np.zeros((3, 3))), np.eye(3) / 3) <= 1e-12

    def test_large_diagonal_concentrates(self):
        rho = market_price_state(np.diag([30.0, 0.0, 0.0]))
        assert rho[0, 0].real == pytest.approx(1.0, abs=1e-10)

    def test_conjugacy_identity(self, rng):
        for _ in range(20):
            Q = random_hermitian(4, rng=rng, scale=2.0)
            rho = market_price_state(Q)
            assert lmsr_cost(Q) == pytest.approx(
                hs_inner(Q, rho) + von_neumann_entropy(rho), abs=1e-8
            )

    def test_finite_difference_gradient_is_price(self, rng):
        Q = random_hermitian(3, rng=rng, scale=2.0)
        rho = market_price_state(Q)
        h = 1e-6
        for _ in range(10):
            D = random_hermitian(3, rng=rng)
            fd = (lmsr_cost(Q + h * D) - lmsr_cost(Q - h * D)) / (2 * h)
            assert fd == pytest.approx(hs_inner(rho, D), abs=1e-5)

    def test_overflow_stability(self):
        assert np.isfinite(lmsr_cost(np.diag([1e4, -1e4])))


class TestMarketState:
    def test_trade_costs_match_bundle_cost(self, rng):
        market = MarketState(3)
        R = random_hermitian(3, rng=rng)
        expected = bundle_cost(np.zeros((3, 3)), R)
        assert market.trade(R) == pytest.approx(expected, abs=1e-12)

    def test_maker_loss_bounded_by_log_n(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 5))
            market = MarketState(n)
            for _ in range(int(rng.integers(1, 6))):
                market.trade(random_hermitian(n, rng=rng, scale=2.0))
            truth = random_density(n, rank=int(rng.integers(1, n + 1)), rng=rng)
            assert market.maker_loss(truth) <= np.log(n) + 1e-9

    def test_conjugacy_gap_small(self, rng):
        market = MarketState(3)
        for _ in range(4):
            market.trade(random_hermitian(3, rng=rng))
        assert market.conjugacy_gap() <= 1e-8

    def test_bundle_payoff(self, rng):
        R = random_hermitian(3, rng=rng)
        rho = random_density(3, rng=rng)
        assert bundle_expected_payoff(R, rho) == pytest.approx(hs_inner(R, rho), abs=1e-12)

    def test_rejects_unknown_cost(self):
        with pytest.raises(ValueError, match="cost"):
            MarketState(2, cost="quadratic")
