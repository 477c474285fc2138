#include "nsp/monopoly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsp/errors.hpp"
#include "nsp/numerics.hpp"

namespace nsp {

namespace {

constexpr std::size_t kConditionGrid = 10001;
constexpr double kFixedPointTol = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_share(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + ": share must lie in [0, 1]");
}

double share_of_threshold(const ValuationDistribution& dist, double threshold) {
    return 1.0 - dist.cdf(threshold);
}

// Threshold update of the switching-cost map given the current threshold and
// the share it induces. Users above the threshold are subscribers.
double switching_threshold_step(const MonopolyMarket& mkt, double cost, double threshold, double share) {
    const double g = mkt.qos.evaluate(share);
    const double stay = (mkt.price - cost) / g;
    const double join = (mkt.price + cost) / g;
    if (join <= threshold) return join;
    if (threshold < stay) return std::min(stay, mkt.dist.beta());
    return threshold;
}

double externality_step(const MonopolyMarket& mkt, const variant::PositiveExternality& v, double share) {
    const double threshold =
        std::max(0.0, (mkt.price + v.delta * share - v.phi * std::pow(share, v.gamma)) / v.q_bar);
    return 1.0 - mkt.dist.cdf(threshold);
}

}  // namespace

MonopolyMarket::MonopolyMarket(ValuationDistribution d, QoSModel q, double p)
    : dist(std::move(d)), qos(std::move(q)), price(p) {
    if (!(price >= 0.0) || !std::isfinite(price)) throw DomainError("monopoly market: price must be non-negative");
}

void validate(const MonopolyVariant& v) {
    std::visit(Overloaded{
                   [](const variant::Synchronous&) {},
                   [](const variant::Partial& p) {
                       if (!(p.epsilon > 0.0 && p.epsilon <= 1.0)) {
                           throw DomainError("partial dynamics: epsilon must lie in (0, 1]");
                       }
                   },
                   [](const variant::SwitchingCost& s) {
                       if (!(s.cost >= 0.0) || !std::isfinite(s.cost)) {
                           throw DomainError("switching cost must be non-negative");
                       }
                   },
                   [](const variant::PositiveExternality& e) {
                       if (!(e.q_bar > 0.0)) throw ModelError("positive externality: q_bar must be positive");
                       if (!(e.delta >= 0.0)) throw ModelError("positive externality: delta must be non-negative");
                       if (!(e.phi >= 0.0)) throw ModelError("positive externality: phi must be non-negative");
                       if (!(e.gamma > 0.0)) throw ModelError("positive externality: gamma must be positive");
                   },
               },
               v);
}

double step(const MonopolyMarket& mkt, double lambda_prev) {
    require_share(lambda_prev, "monopoly step");
    if (mkt.price == 0.0) return 1.0;
    const double threshold = mkt.price / mkt.qos.evaluate(lambda_prev);
    if (threshold >= mkt.dist.beta()) return 0.0;
    return 1.0 - mkt.dist.cdf(threshold);
}

double step_variant(const MonopolyMarket& mkt, const MonopolyVariant& v, double state) {
    validate(v);
    return std::visit(
        Overloaded{
            [&](const variant::Synchronous&) { return step(mkt, state); },
            [&](const variant::Partial& p) {
                require_share(state, "partial step");
                return (1.0 - p.epsilon) * state + p.epsilon * step(mkt, state);
            },
            [&](const variant::SwitchingCost& s) {
                if (!(state >= 0.0 && state <= mkt.dist.beta())) {
                    throw DomainError("switching-cost step: threshold must lie in [0, beta]");
                }
                return switching_threshold_step(mkt, s.cost, state, share_of_threshold(mkt.dist, state));
            },
            [&](const variant::PositiveExternality& e) {
                require_share(state, "externality step");
                return externality_step(mkt, e, state);
            },
        },
        v);
}

DynamicsTrace simulate(const MonopolyMarket& mkt, const MonopolyVariant& v, double lambda0,
                       const SimulationOptions& opts) {
    validate(v);
    require_share(lambda0, "simulate");

    DynamicsTrace trace;
    trace.entrant.push_back(lambda0);

    const auto* switching = std::get_if<variant::SwitchingCost>(&v);
    double threshold = switching ? mkt.dist.quantile(1.0 - lambda0) : 0.0;

    // Stops once the next update would move the share by less than tol; that
    // update is not recorded.
    double share = lambda0;
    for (;;) {
        double next_share;
        double next_threshold = threshold;
        if (switching) {
            next_threshold = switching_threshold_step(mkt, switching->cost, threshold, share);
            next_share = share_of_threshold(mkt.dist, next_threshold);
        } else {
            next_share = step_variant(mkt, v, share);
        }
        trace.residual = std::abs(next_share - share);
        if (trace.residual < opts.tol) {
            trace.converged = true;
            break;
        }
        if (trace.iterations >= opts.max_iter) break;
        share = next_share;
        threshold = next_threshold;
        trace.entrant.push_back(share);
        ++trace.iterations;
    }
    return trace;
}

double equilibrium(const MonopolyMarket& mkt) {
    if (mkt.price == 0.0) return 1.0;
    if (mkt.price >= mkt.dist.beta() * mkt.qos.maximum()) return 0.0;
    return numerics::bisect_decreasing([&](double x) { return step(mkt, x) - x; }, 0.0, 1.0,
                                       kFixedPointTol);
}

double equilibrium_closed_form(const ValuationDistribution& dist, const QoSModel& qos, double price) {
    if (dist.kind() != ValuationDistribution::Kind::Uniform || !qos.is_affine()) {
        throw ModelError("closed-form equilibrium needs uniform valuations and affine QoS");
    }
    if (!(price >= 0.0)) throw ModelError("closed-form equilibrium: price must be non-negative");
    const double beta = dist.beta();
    const double q = qos.q_bar();
    const double c = qos.slope();
    if (price > beta * q) return 0.0;
    // (q + c - sqrt((q - c)^2 + 4cp/beta)) / (2c), rationalized so that c = 0
    // reduces to 1 - p / (beta q) without cancellation.
    const double root = std::sqrt((q - c) * (q - c) + 4.0 * c * price / beta);
    return 2.0 * (q - price / beta) / (q + c + root);
}

double max_relative_degradation(const QoSModel& qos) {
    if (qos.kind() == QoSModel::Kind::Constant) return 0.0;
    if (qos.kind() == QoSModel::Kind::Linear) return qos.slope() / (qos.q_bar() - qos.slope());
    double worst = 0.0;
    for (std::size_t i = 0; i < kConditionGrid; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(kConditionGrid - 1);
        worst = std::max(worst, -qos.derivative(x) / qos.evaluate(x));
    }
    // each segment's steepest relative slope sits at its right end
    const auto s = qos.samples();
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double slope = (s[i].quality - s[i - 1].quality) / (s[i].share - s[i - 1].share);
        worst = std::max(worst, -slope / s[i].quality);
    }
    return worst;
}

MonopolyConvergence convergence_condition(const ValuationDistribution& dist, const QoSModel& qos) {
    const double k = dist.k_constant();
    MonopolyConvergence out;
    out.general.lhs = max_relative_degradation(qos);
    out.general.rhs = 1.0 / k;
    out.general.holds = out.general.lhs < out.general.rhs;
    if (qos.is_affine()) {
        ConditionCheck affine;
        affine.lhs = qos.slope() / qos.q_bar();
        affine.rhs = 1.0 / (1.0 + k);
        affine.holds = affine.lhs < affine.rhs;
        out.affine = affine;
    }
    return out;
}

ConditionCheck convergence_condition_partial(const ValuationDistribution& dist, const QoSModel& qos,
                                             double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("partial condition: epsilon must lie in (0, 1]");
    ConditionCheck out;
    out.lhs = max_relative_degradation(qos);
    out.rhs = 1.0 / (epsilon * dist.k_constant());
    out.holds = out.lhs < out.rhs;
    return out;
}

ConditionCheck convergence_condition_positive_ext(const ValuationDistribution& dist, double q_bar,
                                                  double delta, double phi, double gamma) {
    if (!(gamma >= 1.0)) throw DomainError("positive-externality condition requires gamma >= 1");
    if (!(q_bar > 0.0)) throw ModelError("positive-externality condition: q_bar must be positive");
    ConditionCheck out;
    out.lhs = dist.max_pdf() * (phi * gamma + delta) / q_bar;
    out.rhs = 1.0;
    out.holds = out.lhs < out.rhs;
    return out;
}

std::vector<ThresholdInterval> switching_cost_equilibrium_band(const MonopolyMarket& mkt,
                                                               double switching_cost) {
    if (!(switching_cost >= 0.0)) throw DomainError("switching cost must be non-negative");
    const double beta = mkt.dist.beta();
    const auto quality_at = [&](double a) { return mkt.qos.evaluate(share_of_threshold(mkt.dist, a)); };
    // a - stay(a) is non-decreasing and join(a) - a is decreasing in a, so the
    // fixed thresholds {stay(a) <= a <= join(a)} form one interval.
    const auto above_stay = [&](double a) { return a >= (mkt.price - switching_cost) / quality_at(a); };
    const auto above_join = [&](double a) { return a > (mkt.price + switching_cost) / quality_at(a); };

    const double lo = numerics::bisect_predicate(above_stay, 0.0, beta);
    double hi = above_join(beta) ? numerics::bisect_predicate(above_join, 0.0, beta) : beta;
    hi = std::max(hi, lo);
    return {ThresholdInterval{lo, hi}};
}

}  // namespace nsp
