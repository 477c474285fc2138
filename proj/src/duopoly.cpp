#include "nsp/duopoly.hpp"

#include <algorithm>
#include <cmath>

#include "nsp/errors.hpp"
#include "nsp/numerics.hpp"

namespace nsp {

namespace {

constexpr std::size_t kConditionGrid = 10001;
constexpr double kFixedPointTol = 1e-12;
constexpr double kFeasibilitySlack = 1e-12;

void require_feasible(SharePair s) {
    if (!(s.incumbent >= 0.0 && s.entrant >= 0.0 && s.incumbent + s.entrant <= 1.0 + kFeasibilitySlack)) {
        throw DomainError("duopoly state must satisfy lambda1, lambda2 >= 0 and lambda1 + lambda2 <= 1");
    }
}

// The entrant attracts users only while its price per unit of QoS undercuts
// the incumbent's.
bool entrant_undercuts(const DuopolyMarket& mkt, double g) { return mkt.p1 / mkt.q1 > mkt.p2 / g; }

}  // namespace

DuopolyMarket::DuopolyMarket(ValuationDistribution d, double incumbent_qos, QoSModel entrant_qos,
                             double incumbent_price, double entrant_price)
    : dist(std::move(d)), q1(incumbent_qos), qos2(std::move(entrant_qos)), p1(incumbent_price), p2(entrant_price) {
    validate_against_incumbent(qos2, q1);
    if (!(p1 >= 0.0) || !(p2 >= 0.0) || !std::isfinite(p1) || !std::isfinite(p2)) {
        throw DomainError("duopoly market: prices must be non-negative");
    }
}

SharePair step_duopoly(const DuopolyMarket& mkt, SharePair prev) {
    require_feasible(prev);
    const double entrant_prev = std::min(prev.entrant, 1.0);
    const double g = mkt.qos2.evaluate(entrant_prev);
    if (entrant_undercuts(mkt, g)) {
        const double theta1 = (mkt.p1 - mkt.p2) / (mkt.q1 - g);
        const double theta2 = mkt.p2 / g;
        const double f1 = mkt.dist.cdf(theta1);
        return {1.0 - f1, std::max(0.0, f1 - mkt.dist.cdf(theta2))};
    }
    return {1.0 - mkt.dist.cdf(mkt.p1 / mkt.q1), 0.0};
}

double entrant_map(const DuopolyMarket& mkt, double entrant_prev) {
    return step_duopoly(mkt, SharePair{0.0, entrant_prev}).entrant;
}

DynamicsTrace simulate_duopoly(const DuopolyMarket& mkt, SharePair start, const SimulationOptions& opts) {
    require_feasible(start);
    DynamicsTrace trace;
    trace.incumbent.push_back(start.incumbent);
    trace.entrant.push_back(start.entrant);
    SharePair state = start;
    for (;;) {
        const SharePair next = step_duopoly(mkt, state);
        trace.residual = std::max(std::abs(next.incumbent - state.incumbent), std::abs(next.entrant - state.entrant));
        if (trace.residual < opts.tol) {
            trace.converged = true;
            break;
        }
        if (trace.iterations >= opts.max_iter) break;
        state = next;
        trace.incumbent.push_back(state.incumbent);
        trace.entrant.push_back(state.entrant);
        ++trace.iterations;
    }
    return trace;
}

DuopolyEquilibrium equilibrium_duopoly(const DuopolyMarket& mkt) {
    DuopolyEquilibrium eq;
    if (!entrant_undercuts(mkt, mkt.qos2.evaluate(0.0))) {
        eq.regime = DuopolyEquilibrium::Regime::EntrantShutOut;
        eq.shares = {1.0 - mkt.dist.cdf(mkt.p1 / mkt.q1), 0.0};
        return eq;
    }
    const double entrant =
        numerics::bisect_decreasing([&](double x) { return entrant_map(mkt, x) - x; }, 0.0, 1.0, kFixedPointTol);
    const double g = mkt.qos2.evaluate(entrant);
    eq.regime = DuopolyEquilibrium::Regime::Interior;
    eq.theta1 = (mkt.p1 - mkt.p2) / (mkt.q1 - g);
    eq.theta2 = mkt.p2 / g;
    eq.shares = {1.0 - mkt.dist.cdf(eq.theta1), entrant};
    return eq;
}

ConditionCheck convergence_condition_duopoly(const ValuationDistribution& dist, double q1, const QoSModel& qos2) {
    validate_against_incumbent(qos2, q1);
    const auto term = [&](double x, double slope) {
        const double g = qos2.evaluate(x);
        return (-slope / g) * (q1 / (q1 - g));
    };
    double worst = 0.0;
    for (std::size_t i = 0; i < kConditionGrid; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(kConditionGrid - 1);
        worst = std::max(worst, term(x, qos2.derivative(x)));
    }
    // left-segment slopes at interior nodes of a tabulated model
    const auto s = qos2.samples();
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double slope = (s[i].quality - s[i - 1].quality) / (s[i].share - s[i - 1].share);
        worst = std::max(worst, term(s[i].share, slope));
    }
    ConditionCheck out;
    out.lhs = worst;
    out.rhs = 1.0 / dist.k_constant();
    out.holds = out.lhs < out.rhs;
    return out;
}

std::pair<double, double> bertrand_revenues(const DuopolyMarket& mkt) {
    const auto eq = equilibrium_duopoly(mkt);
    return {mkt.p1 * eq.shares.incumbent, mkt.p2 * eq.shares.entrant};
}

}  // namespace nsp
