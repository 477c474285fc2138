#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nsp/duopoly.hpp"
#include "nsp/qos.hpp"
#include "nsp/valuation.hpp"

namespace nsp {

/// Market-share (Cournot) competition between the incumbent (constant QoS
/// q1) and the entrant (QoS g). Each provider picks a share; prices clear
/// the market through the inverse demand.
struct CournotGame {
    ValuationDistribution dist;
    double q1;
    QoSModel qos2;

    CournotGame(ValuationDistribution d, double incumbent_qos, QoSModel entrant_qos);

    /// Uniform valuations with affine entrant QoS: best responses have
    /// closed forms and the equilibrium is unique.
    bool has_closed_form() const noexcept;
};

enum class Player { Incumbent = 1, Entrant = 2 };

/// (F^-1(1 - lambda1), F^-1(1 - lambda1 - lambda2)).
std::pair<double, double> marginal_valuations(const ValuationDistribution& dist, double lambda1, double lambda2);

/// Market-clearing prices (p1, p2) realizing the share pair.
std::pair<double, double> inverse_demand(const CournotGame& game, double lambda1, double lambda2);

/// (lambda1 p1, lambda2 p2); zero for both when the pair is infeasible.
std::pair<double, double> revenues(const CournotGame& game, double lambda1, double lambda2);

/// Revenue of one player at the share pair.
double revenue_of(const CournotGame& game, Player who, double own, double other);

/// Revenue-maximizing share in [0, 1/2] against the other player's share
/// (2,001-point scan, then golden-section). Throws ModelError unless the
/// valuation density is non-increasing.
double best_response(const CournotGame& game, Player who, double other);

/// Closed-form best response for uniform valuations and QoS q_bar - c*lambda
/// with 0 <= c < q_bar < q1.
double best_response_closed(double q1, double q_bar2, double c, Player who, double other);

struct SupermodularityReport {
    bool holds = false;
    double worst_lambda1 = 0.0;
    double worst_lambda2 = 0.0;
    double worst_margin = 0.0;
};

/// Sufficient condition for a pure equilibrium. Uniform valuations use the
/// elasticity reduction g + lambda g' >= 0 on [0, 1/2]; other laws evaluate
/// the two mixed-partial conditions on a 101 x 101 grid over [0, 1/2]^2.
/// `force_general` applies the grid conditions to uniform laws as well.
SupermodularityReport supermodularity_check(const CournotGame& game, bool force_general = false);

struct BestResponseRound {
    std::size_t round;
    double lambda1;
    double lambda2;
    double p1;
    double p2;
    double r1;
    double r2;
};

struct NashOutcome {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    std::size_t iterations = 0;
    bool supermodular_check = false;
    /// Neither player gains more than 1e-8 by re-optimizing.
    bool verified = false;
    double start1 = 0.0;
    double start2 = 0.0;
    std::vector<BestResponseRound> trajectory;
};

struct NashOptions {
    double start1 = 0.25;
    double start2 = 0.25;
    std::size_t max_rounds = 1000;
    double tol = 1e-10;
};

/// Best-response dynamics did not settle within the round budget.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, std::vector<BestResponseRound> trajectory)
        : std::runtime_error(what), trajectory_(std::move(trajectory)) {}
    const std::vector<BestResponseRound>& trajectory() const noexcept { return trajectory_; }

private:
    std::vector<BestResponseRound> trajectory_;
};

/// Alternating best responses (incumbent first, then entrant) from the
/// start pair until the max-norm change drops below tol.
NashOutcome nash_solve(const CournotGame& game, const NashOptions& opts = {});

struct MultiStartNash {
    std::vector<NashOutcome> outcomes;  // in start order
    std::size_t smallest = 0;           // lexicographically smallest equilibrium
    bool agree = true;                  // all pairwise distances below 1e-7
};

/// nash_solve from (0,0), (1/2,1/2), (0,1/2), (1/2,0) and (1/4,1/4).
MultiStartNash nash_multistart(const CournotGame& game, const NashOptions& opts = {});

}  // namespace nsp
