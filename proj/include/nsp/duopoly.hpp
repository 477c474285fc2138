#pragma once

#include <utility>

#include "nsp/qos.hpp"
#include "nsp/trace.hpp"
#include "nsp/valuation.hpp"

namespace nsp {

/// Incumbent with constant QoS q1 and an entrant with congestion-degraded
/// QoS g, both charging fixed prices. Construction enforces g < q1.
struct DuopolyMarket {
    ValuationDistribution dist;
    double q1;
    QoSModel qos2;
    double p1;
    double p2;

    DuopolyMarket(ValuationDistribution d, double incumbent_qos, QoSModel entrant_qos, double incumbent_price,
                  double entrant_price);
};

/// Pair of market shares (incumbent, entrant).
struct SharePair {
    double incumbent;
    double entrant;
};

struct DuopolyEquilibrium {
    enum class Regime { EntrantShutOut, Interior };

    SharePair shares;
    Regime regime;
    /// Marginal valuations between the two providers and between the entrant
    /// and no subscription; meaningful only in the interior regime.
    double theta1 = 0.0;
    double theta2 = 0.0;
};

/// One period of the two-provider map. Throws DomainError unless
/// prev is feasible (non-negative, summing to at most one).
SharePair step_duopoly(const DuopolyMarket& mkt, SharePair prev);

/// Entrant component of the map, which does not depend on the incumbent's
/// previous share.
double entrant_map(const DuopolyMarket& mkt, double entrant_prev);

DynamicsTrace simulate_duopoly(const DuopolyMarket& mkt, SharePair start, const SimulationOptions& opts = {});

/// The unique fixed point, solved as the one-dimensional fixed point of the
/// entrant map.
DuopolyEquilibrium equilibrium_duopoly(const DuopolyMarket& mkt);

/// Sufficient condition for global convergence of the two-provider map.
/// Throws ModelError unless g < q1 on [0, 1].
ConditionCheck convergence_condition_duopoly(const ValuationDistribution& dist, double q1, const QoSModel& qos2);

/// (p1 * lambda1*, p2 * lambda2*) at the subscription equilibrium.
std::pair<double, double> bertrand_revenues(const DuopolyMarket& mkt);

}  // namespace nsp
