#include <gtest/gtest.h>

#include <cmath>

#include "nsp/competition.hpp"
#include "nsp/errors.hpp"
#include "oracles.hpp"

using namespace nsp;

namespace {

const ValuationDistribution kUnit = ValuationDistribution::uniform(1.0);

ValuationDistribution triangular() {
    std::vector<PdfSample> s;
    for (int i = 0; i <= 2000; ++i) {
        const double a = i / 2000.0;
        s.push_back({a, std::max(2.0 * (1.0 - a), 1e-9)});
    }
    return ValuationDistribution::tabulated(std::move(s));
}

CournotGame standard() { return CournotGame(kUnit, 2.0, QoSModel::linear(1.0, 0.5)); }

}  // namespace

TEST(MarginalValuations, Values) {
    const auto [a1, a2] = marginal_valuations(kUnit, 0.4, 0.2);
    EXPECT_NEAR(a1, 0.6, 1e-15);
    EXPECT_NEAR(a2, 0.4, 1e-15);
    const auto [b1, b2] = marginal_valuations(kUnit, 0.0, 0.0);
    EXPECT_DOUBLE_EQ(b1, 1.0);
    EXPECT_DOUBLE_EQ(b2, 1.0);
    const auto [c1, c2] = marginal_valuations(triangular(), 0.19, 0.56);
    EXPECT_NEAR(c1, 1.0 - std::sqrt(0.19), 1e-5);
    EXPECT_NEAR(c1, 0.5642, 1e-4);
    EXPECT_NEAR(c2, 1.0 - std::sqrt(0.75), 1e-5);
    EXPECT_NEAR(c2, 0.1340, 1e-4);
}

TEST(InverseDemand, Values) {
    const CournotGame flat(kUnit, 2.0, QoSModel::constant(1.0));
    const auto [p1, p2] = inverse_demand(flat, 0.4, 0.2);
    EXPECT_NEAR(p1, 1.0, 1e-15);
    EXPECT_NEAR(p2, 0.4, 1e-15);

    const CournotGame fig(kUnit, 1.687, QoSModel::linear(1.633, 0.088));
    const auto [z1, z2] = inverse_demand(fig, 0.0, 0.0);
    EXPECT_DOUBLE_EQ(z1, 1.687);
    EXPECT_DOUBLE_EQ(z2, 1.633);
    const auto [f1, f2] = inverse_demand(fig, 0.3, 0.3);
    const double g = 1.633 - 0.088 * 0.3;
    EXPECT_NEAR(f1, 0.7 * (1.687 - g) + 0.4 * g, 1e-14);
    EXPECT_NEAR(f1, 0.69892, 1e-5);
    EXPECT_NEAR(f2, 0.64264, 1e-5);
}

TEST(Revenues, Values) {
    const CournotGame flat(kUnit, 2.0, QoSModel::constant(1.0));
    const auto [r1, r2] = revenues(flat, 0.4, 0.2);
    EXPECT_NEAR(r1, 0.4, 1e-15);
    EXPECT_NEAR(r2, 0.08, 1e-15);
    const auto [i1, i2] = revenues(flat, 0.7, 0.6);
    EXPECT_DOUBLE_EQ(i1, 0.0);
    EXPECT_DOUBLE_EQ(i2, 0.0);
    EXPECT_DOUBLE_EQ(revenues(flat, 0.0, 0.3).first, 0.0);
    EXPECT_DOUBLE_EQ(revenue_of(flat, Player::Entrant, 0.2, 0.4), r2);
}

TEST(BestResponse, ClosedFormValues) {
    EXPECT_NEAR(best_response_closed(2.0, 1.0, 0.5, Player::Incumbent, 0.4), 0.42, 1e-15);
    EXPECT_NEAR(best_response_closed(2.0, 1.0, 0.5, Player::Entrant, 0.5), (0.25 + 1 - std::sqrt(0.8125)) / 1.5, 1e-14);
    EXPECT_NEAR(best_response_closed(2.0, 1.0, 0.5, Player::Entrant, 0.5), 0.23240, 1e-5);
    EXPECT_NEAR(best_response_closed(2.0, 1.0, 0.0, Player::Incumbent, 0.0), 0.5, 1e-15);
    EXPECT_NEAR(best_response_closed(2.0, 1.0, 0.5, Player::Entrant, 1.0 - 1e-12), 0.0, 1e-11);
    EXPECT_NEAR(best_response_closed(2.0, 1.0, 0.0, Player::Entrant, 0.2), 0.4, 1e-15);
}

TEST(BestResponse, NumericAgreesWithClosedForm) {
    const auto game = standard();
    EXPECT_NEAR(best_response(game, Player::Incumbent, 0.4), 0.42, 1e-7);
    EXPECT_NEAR(best_response(game, Player::Entrant, 0.5), 0.232408, 1e-6);
    EXPECT_NEAR(best_response(game, Player::Incumbent, 0.4), oracle::incumbent_reply(2.0, 1.0, 0.5, 0.4), 1e-7);
}

TEST(BestResponse, RejectsIncreasingDensity) {
    const CournotGame game(ValuationDistribution::tabulated({{0.0, 0.5}, {1.0, 1.5}}), 2.0, QoSModel::constant(1.0));
    EXPECT_THROW(best_response(game, Player::Incumbent, 0.2), ModelError);
}

TEST(Supermodularity, UniformAffineAlwaysHolds) {
    EXPECT_TRUE(supermodularity_check(standard()).holds);
    const auto flat = supermodularity_check(CournotGame(kUnit, 2.0, QoSModel::constant(1.0)));
    EXPECT_TRUE(flat.holds);
    EXPECT_NEAR(flat.worst_margin, 1.0, 1e-15);
}

TEST(Supermodularity, SteepTabulatedQosFails) {
    std::vector<QosSample> s;
    for (int i = 0; i <= 50; ++i) {
        const double l = i / 50.0;
        s.push_back({l, std::max(1.0 - 1.8 * l, 0.05 - 0.0001 * l)});
    }
    const CournotGame game(kUnit, 2.0, QoSModel::tabulated(s));
    const auto r = supermodularity_check(game);
    EXPECT_FALSE(r.holds);
    EXPECT_LT(r.worst_margin, 0.0);
}

TEST(Supermodularity, GeneralBranchOnDecreasingDensity) {
    const CournotGame game(triangular(), 2.0, QoSModel::linear(1.0, 0.2));
    EXPECT_TRUE(supermodularity_check(game).holds);
    EXPECT_TRUE(supermodularity_check(standard(), true).holds);
}

TEST(NashSolve, StandardGameMatchesOracle) {
    const auto ne = nash_solve(standard());
    EXPECT_TRUE(ne.verified);
    EXPECT_TRUE(ne.supermodular_check);
    EXPECT_NEAR(ne.lambda1, best_response_closed(2.0, 1.0, 0.5, Player::Incumbent, ne.lambda2), 1e-8);
    EXPECT_NEAR(ne.lambda2, best_response_closed(2.0, 1.0, 0.5, Player::Entrant, ne.lambda1), 1e-8);
    // reply maximizers found by brute force
    EXPECT_NEAR(ne.lambda1, oracle::incumbent_reply(2.0, 1.0, 0.5, ne.lambda2), 1e-7);
    EXPECT_NEAR(ne.lambda2, oracle::entrant_reply(2.0, 1.0, 0.5, ne.lambda1), 1e-7);
    const auto [p1, p2] = inverse_demand(standard(), ne.lambda1, ne.lambda2);
    EXPECT_DOUBLE_EQ(ne.p1, p1);
    EXPECT_DOUBLE_EQ(ne.p2, p2);
    EXPECT_NEAR(ne.r1, ne.lambda1 * ne.p1, 1e-15);
    EXPECT_FALSE(ne.trajectory.empty());
}

TEST(NashSolve, ConstantQosLimit) {
    const auto [o1, o2] = oracle::constant_qos_nash(2.0, 1.0);
    EXPECT_NEAR(o1, 3.0 / 7.0, 1e-15);
    EXPECT_NEAR(o2, 2.0 / 7.0, 1e-15);
    const auto ne = nash_solve(CournotGame(kUnit, 2.0, QoSModel::linear(1.0, 1e-6)));
    EXPECT_NEAR(ne.lambda1, o1, 1e-4);
    EXPECT_NEAR(ne.lambda2, o2, 1e-4);
    const auto exact = nash_solve(CournotGame(kUnit, 2.0, QoSModel::constant(1.0)));
    EXPECT_NEAR(exact.lambda1, o1, 1e-9);
    EXPECT_NEAR(exact.lambda2, o2, 1e-9);
}

TEST(NashSolve, StartingAtEquilibriumStaysPut) {
    const auto ne = nash_solve(standard());
    NashOptions opts;
    opts.start1 = ne.lambda1;
    opts.start2 = ne.lambda2;
    const auto again = nash_solve(standard(), opts);
    EXPECT_EQ(again.iterations, 1u);
    EXPECT_NEAR(again.lambda1, ne.lambda1, 1e-10);
    EXPECT_NEAR(again.lambda2, ne.lambda2, 1e-10);
}

TEST(NashSolve, RoundBudgetExhaustedThrowsWithTrajectory) {
    NashOptions opts;
    opts.max_rounds = 1;
    opts.start1 = 0.0;
    opts.start2 = 0.0;
    try {
        nash_solve(standard(), opts);
        FAIL() << "expected NonConvergence";
    } catch (const NonConvergence& e) {
        EXPECT_FALSE(e.trajectory().empty());
    }
}

TEST(NashSolve, NumericPathOnTabulatedModels) {
    std::vector<QosSample> s;
    for (int i = 0; i <= 20; ++i) {
        const double l = i / 20.0;
        s.push_back({l, 1.2 - 0.2 * l + 0.05 * l * l});
    }
    const CournotGame game(triangular(), 2.0, QoSModel::tabulated(s));
    ASSERT_FALSE(game.has_closed_form());
    const auto ne = nash_solve(game);
    EXPECT_TRUE(ne.verified);
    EXPECT_GT(ne.lambda1, 0.0);
    EXPECT_LT(ne.lambda1, 0.5);
    EXPECT_GT(ne.lambda2, 0.0);
    EXPECT_LT(ne.lambda2, 0.5);
    auto r2 = [&](double l2) { return revenue_of(game, Player::Entrant, l2, ne.lambda1); };
    EXPECT_GE(ne.r2, oracle::argmax(r2, 0.0, 0.5).second - 1e-9);
}

TEST(MultiStart, StartsAgree) {
    const auto ms = nash_multistart(standard());
    ASSERT_EQ(ms.outcomes.size(), 5u);
    EXPECT_TRUE(ms.agree);
    for (const auto& o : ms.outcomes) {
        EXPECT_NEAR(o.lambda1, ms.outcomes[0].lambda1, 1e-8);
        EXPECT_NEAR(o.lambda2, ms.outcomes[0].lambda2, 1e-8);
    }
}

TEST(Property, EquilibriaOfAffineGames) {
    oracle::Gen gen(41);
    for (int trial = 0; trial < 60; ++trial) {
        const double q1 = gen.uniform(1.0, 3.0);
        const double q = gen.uniform(0.2, 0.95) * q1;
        const double c = gen.uniform(0.0, 0.95) * q;
        const CournotGame game(kUnit, q1, QoSModel::linear(q, c));
        const auto ne = nash_solve(game);
        EXPECT_TRUE(ne.verified);
        EXPECT_GT(ne.lambda1, 0.0);
        EXPECT_LT(ne.lambda1, 0.5);
        EXPECT_GT(ne.lambda2, 0.0);
        EXPECT_LT(ne.lambda2, 0.5);
        EXPECT_NEAR(ne.lambda1, oracle::incumbent_reply(q1, q, c, ne.lambda2), 1e-6);
        EXPECT_NEAR(ne.lambda2, oracle::entrant_reply(q1, q, c, ne.lambda1), 1e-6);
        EXPECT_GE(ne.r1, 0.0);
        EXPECT_GE(ne.r2, 0.0);
    }
}
