#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "nsp/qos.hpp"
#include "nsp/trace.hpp"
#include "nsp/valuation.hpp"

namespace nsp {

/// The entrant alone in the market, charging a fixed price.
struct MonopolyMarket {
    ValuationDistribution dist;
    QoSModel qos;
    double price;

    MonopolyMarket(ValuationDistribution d, QoSModel q, double p);
};

namespace variant {

/// Every user re-decides each period.
struct Synchronous {};

/// Only a fraction epsilon of the users re-decide each period.
struct Partial {
    double epsilon;
};

/// Joining and leaving both cost c_s. The state is the valuation threshold
/// a of the subscriber set {alpha >= a}.
struct SwitchingCost {
    double cost;
};

/// Utility alpha * q_bar - delta * lambda + phi * lambda^gamma - p; the
/// market's QoS model is ignored.
struct PositiveExternality {
    double q_bar;
    double delta;
    double phi;
    double gamma;
};

}  // namespace variant

using MonopolyVariant = std::variant<variant::Synchronous, variant::Partial, variant::SwitchingCost,
                                     variant::PositiveExternality>;

/// Throws DomainError/ModelError if the variant's parameters are out of range.
void validate(const MonopolyVariant& v);

/// One period of the synchronous map: 1 - F(p / g(lambda_prev)).
double step(const MonopolyMarket& mkt, double lambda_prev);

/// One period of a dynamics variant. The state is a market share except for
/// SwitchingCost, where it is the subscriber threshold in [0, beta].
double step_variant(const MonopolyMarket& mkt, const MonopolyVariant& v, double state);

/// Iterates the variant from initial share lambda0 until successive shares
/// differ by less than opts.tol. Non-convergence is reported in the trace.
DynamicsTrace simulate(const MonopolyMarket& mkt, const MonopolyVariant& v, double lambda0,
                       const SimulationOptions& opts = {});

/// The unique fixed point of the synchronous map.
double equilibrium(const MonopolyMarket& mkt);

/// Closed-form fixed point for uniform valuations and affine QoS.
/// Throws ModelError for any other model family.
double equilibrium_closed_form(const ValuationDistribution& dist, const QoSModel& qos, double price);

/// max over [0,1] of -g'/g, the QoS degradation elasticity bound.
double max_relative_degradation(const QoSModel& qos);

struct MonopolyConvergence {
    ConditionCheck general;
    /// c/q_bar < 1/(1+K); present for affine QoS only.
    std::optional<ConditionCheck> affine;
};

/// Sufficient condition for global convergence of the synchronous map.
MonopolyConvergence convergence_condition(const ValuationDistribution& dist, const QoSModel& qos);

/// Same check for the partial-update map with rate epsilon.
ConditionCheck convergence_condition_partial(const ValuationDistribution& dist, const QoSModel& qos,
                                             double epsilon);

/// Sufficient condition for the positive-externality map (gamma >= 1);
/// rhs is 1.
ConditionCheck convergence_condition_positive_ext(const ValuationDistribution& dist, double q_bar,
                                                  double delta, double phi, double gamma);

struct ThresholdInterval {
    double lo;
    double hi;
};

/// Thresholds a in [0, beta] left unchanged by the switching-cost map.
std::vector<ThresholdInterval> switching_cost_equilibrium_band(const MonopolyMarket& mkt,
                                                               double switching_cost);

}  // namespace nsp
