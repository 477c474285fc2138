#include "nsp/competition.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>

#include "nsp/errors.hpp"
#include "nsp/numerics.hpp"

namespace nsp {

namespace {

constexpr std::size_t kScanPoints = 2001;
constexpr std::size_t kElasticityGrid = 10001;
constexpr std::size_t kMixedPartialGrid = 101;
constexpr double kFeasibilitySlack = 1e-12;
constexpr double kVerifyTol = 1e-8;
constexpr double kAgreeTol = 1e-7;

bool feasible(double l1, double l2) {
    return l1 >= 0.0 && l2 >= 0.0 && l1 + l2 <= 1.0 + kFeasibilitySlack;
}

void require_feasible(double l1, double l2) {
    if (!feasible(l1, l2)) {
        throw DomainError("share pair must satisfy lambda1, lambda2 >= 0 and lambda1 + lambda2 <= 1");
    }
}

double clamp_unit(double u) { return std::clamp(u, 0.0, 1.0); }

BestResponseRound make_round(const CournotGame& game, std::size_t round, double l1, double l2) {
    const auto [p1, p2] = inverse_demand(game, l1, l2);
    return {round, l1, l2, p1, p2, l1 * p1, l2 * p2};
}

}  // namespace

CournotGame::CournotGame(ValuationDistribution d, double incumbent_qos, QoSModel entrant_qos)
    : dist(std::move(d)), q1(incumbent_qos), qos2(std::move(entrant_qos)) {
    validate_against_incumbent(qos2, q1);
}

bool CournotGame::has_closed_form() const noexcept {
    return dist.kind() == ValuationDistribution::Kind::Uniform && qos2.is_affine();
}

std::pair<double, double> marginal_valuations(const ValuationDistribution& dist, double lambda1, double lambda2) {
    require_feasible(lambda1, lambda2);
    return {dist.quantile(clamp_unit(1.0 - lambda1)), dist.quantile(clamp_unit(1.0 - lambda1 - lambda2))};
}

std::pair<double, double> inverse_demand(const CournotGame& game, double lambda1, double lambda2) {
    const auto [a1, a2] = marginal_valuations(game.dist, lambda1, lambda2);
    const double g = game.qos2.evaluate(std::min(lambda2, 1.0));
    return {a1 * (game.q1 - g) + a2 * g, a2 * g};
}

std::pair<double, double> revenues(const CournotGame& game, double lambda1, double lambda2) {
    if (!feasible(lambda1, lambda2)) return {0.0, 0.0};
    const auto [p1, p2] = inverse_demand(game, lambda1, lambda2);
    return {lambda1 * p1, lambda2 * p2};
}

double revenue_of(const CournotGame& game, Player who, double own, double other) {
    if (who == Player::Incumbent) return revenues(game, own, other).first;
    return revenues(game, other, own).second;
}

double best_response(const CournotGame& game, Player who, double other) {
    if (!game.dist.is_nonincreasing_pdf()) {
        throw ModelError("best_response requires a non-increasing valuation density");
    }
    if (!(other >= 0.0 && other < 1.0)) throw DomainError("best_response: opponent share must lie in [0, 1)");
    const auto objective = [&](double own) { return revenue_of(game, who, own, other); };
    return numerics::scan_then_refine_max(objective, 0.0, 0.5, kScanPoints).x;
}

double best_response_closed(double q1, double q_bar2, double c, Player who, double other) {
    if (!(c >= 0.0 && c < q_bar2 && q_bar2 < q1)) {
        throw ModelError("closed-form best response needs 0 <= c < q_bar2 < q1");
    }
    if (!(other >= 0.0 && other <= 1.0)) throw DomainError("best_response_closed: opponent share must lie in [0, 1]");
    if (who == Player::Incumbent) {
        const double g = q_bar2 - c * other;
        return (q1 - other * g) / (2.0 * q1);
    }
    // (c r + q - sqrt(q^2 + c^2 r^2 - c q r)) / (3c) with r = 1 - lambda1,
    // rationalized; c = 0 gives r / 2.
    const double r = 1.0 - other;
    const double root = std::sqrt(q_bar2 * q_bar2 + c * c * r * r - c * q_bar2 * r);
    return r * q_bar2 / (c * r + q_bar2 + root);
}

SupermodularityReport supermodularity_check(const CournotGame& game, bool force_general) {
    const auto& dist = game.dist;
    const auto& g = game.qos2;
    SupermodularityReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    const auto consider = [&rep](double l1, double l2, double margin) {
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_lambda1 = l1;
            rep.worst_lambda2 = l2;
        }
    };

    if (dist.kind() == ValuationDistribution::Kind::Uniform && !force_general) {
        for (std::size_t i = 0; i < kElasticityGrid; ++i) {
            const double x = 0.5 * static_cast<double>(i) / static_cast<double>(kElasticityGrid - 1);
            consider(0.0, x, g.evaluate(x) + x * g.derivative(x));
        }
        // left-hand slopes at tabulated nodes inside [0, 1/2]
        const auto s = g.samples();
        for (std::size_t i = 1; i < s.size() && s[i].share <= 0.5; ++i) {
            const double slope = (s[i].quality - s[i - 1].quality) / (s[i].share - s[i - 1].share);
            consider(0.0, s[i].share, s[i].quality + s[i].share * slope);
        }
        rep.holds = rep.worst_margin >= 0.0;
        return rep;
    }

    if (!dist.is_nonincreasing_pdf()) {
        throw ModelError("supermodularity check requires a non-increasing valuation density");
    }
    for (std::size_t i = 0; i < kMixedPartialGrid; ++i) {
        const double l1 = 0.5 * static_cast<double>(i) / static_cast<double>(kMixedPartialGrid - 1);
        const double z1 = dist.quantile(1.0 - l1);
        const double f1 = dist.pdf(z1);
        for (std::size_t j = 0; j < kMixedPartialGrid; ++j) {
            const double l2 = 0.5 * static_cast<double>(j) / static_cast<double>(kMixedPartialGrid - 1);
            const double z2 = dist.quantile(clamp_unit(1.0 - l1 - l2));
            const double f2 = dist.pdf(z2);
            const double df2 = dist.pdf_slope(z2);
            const double q = g.evaluate(l2);
            const double dq = g.derivative(l2);
            const double incumbent_cross =
                (1.0 / f2 + l1 * df2 / (f2 * f2 * f2)) * q + (z1 - l1 / f1 - z2 + l1 / f2) * dq;
            const double entrant_cross = (1.0 / f2 + l2 * df2 / (f2 * f2 * f2)) * q + (l2 / f2) * dq;
            consider(l1, l2, std::min(incumbent_cross, entrant_cross));
        }
    }
    rep.holds = rep.worst_margin >= 0.0;
    return rep;
}

NashOutcome nash_solve(const CournotGame& game, const NashOptions& opts) {
    if (!game.dist.is_nonincreasing_pdf()) {
        throw ModelError("nash_solve requires a non-increasing valuation density");
    }
    if (!(opts.start1 >= 0.0 && opts.start1 <= 0.5 && opts.start2 >= 0.0 && opts.start2 <= 0.5)) {
        throw DomainError("nash_solve: start shares must lie in [0, 1/2]");
    }
    const bool closed = game.has_closed_form();
    const auto respond = [&](Player who, double other) {
        if (closed) return best_response_closed(game.q1, game.qos2.q_bar(), game.qos2.slope(), who, other);
        return best_response(game, who, other);
    };

    NashOutcome out;
    out.start1 = opts.start1;
    out.start2 = opts.start2;
    double l1 = opts.start1;
    double l2 = opts.start2;
    out.trajectory.push_back(make_round(game, 0, l1, l2));

    bool converged = false;
    for (std::size_t round = 1; round <= opts.max_rounds; ++round) {
        const double n1 = respond(Player::Incumbent, l2);
        const double n2 = respond(Player::Entrant, n1);
        const double change = std::max(std::abs(n1 - l1), std::abs(n2 - l2));
        l1 = n1;
        l2 = n2;
        out.trajectory.push_back(make_round(game, round, l1, l2));
        out.iterations = round;
        if (change < opts.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NonConvergence("best-response dynamics did not converge within " + std::to_string(opts.max_rounds) +
                                 " rounds",
                             std::move(out.trajectory));
    }

    out.lambda1 = l1;
    out.lambda2 = l2;
    const auto [p1, p2] = inverse_demand(game, l1, l2);
    out.p1 = p1;
    out.p2 = p2;
    out.r1 = l1 * p1;
    out.r2 = l2 * p2;
    const double gain1 = revenue_of(game, Player::Incumbent, best_response(game, Player::Incumbent, l2), l2) - out.r1;
    const double gain2 = revenue_of(game, Player::Entrant, best_response(game, Player::Entrant, l1), l1) - out.r2;
    out.verified = gain1 < kVerifyTol && gain2 < kVerifyTol;
    out.supermodular_check = supermodularity_check(game).holds;
    return out;
}

MultiStartNash nash_multistart(const CournotGame& game, const NashOptions& opts) {
    constexpr std::array<std::pair<double, double>, 5> starts{
        {{0.0, 0.0}, {0.5, 0.5}, {0.0, 0.5}, {0.5, 0.0}, {0.25, 0.25}}};
    MultiStartNash result;
    for (const auto& [s1, s2] : starts) {
        NashOptions o = opts;
        o.start1 = s1;
        o.start2 = s2;
        result.outcomes.push_back(nash_solve(game, o));
    }
    for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
        const auto& a = result.outcomes[i];
        const auto& best = result.outcomes[result.smallest];
        if (std::pair(a.lambda1, a.lambda2) < std::pair(best.lambda1, best.lambda2)) result.smallest = i;
        for (std::size_t j = i + 1; j < result.outcomes.size(); ++j) {
            const auto& b = result.outcomes[j];
            if (std::hypot(a.lambda1 - b.lambda1, a.lambda2 - b.lambda2) >= kAgreeTol) result.agree = false;
        }
    }
    return result;
}

}  // namespace nsp
