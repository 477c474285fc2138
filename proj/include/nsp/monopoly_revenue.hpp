#pragma once

#include <iosfwd>
#include <span>

#include "nsp/qos.hpp"
#include "nsp/valuation.hpp"

namespace nsp {

/// Revenue-maximizing operating point of the entrant with no incumbent.
/// price = marginal_valuation * g(share), share = 1 - F(marginal_valuation),
/// revenue = price * share.
struct RevenueOptimum {
    double price;
    double marginal_valuation;
    double share;
    double revenue;
};

/// p times the equilibrium share at price p.
double revenue_at_price(const ValuationDistribution& dist, const QoSModel& qos, double price);

/// Price at which the user with valuation alpha is the marginal subscriber:
/// alpha * g(1 - F(alpha)).
double price_from_marginal(const ValuationDistribution& dist, const QoSModel& qos, double alpha);

/// Revenue as a function of the targeted share: F^-1(1 - lambda) g(lambda) lambda.
double revenue_at_share(const ValuationDistribution& dist, const QoSModel& qos, double share);

/// Maximizes revenue over the share in [0, 1] (2,001-point scan, then
/// golden-section refinement around the best node).
RevenueOptimum optimize(const ValuationDistribution& dist, const QoSModel& qos);

/// Closed-form optimum for uniform valuations on [0, beta] and affine QoS
/// q_bar - c * lambda with 0 <= c < q_bar.
RevenueOptimum optimum_closed_form(double beta, double q_bar, double c);

struct RevenueBounds {
    double price_low;
    double price_high;    // exclusive
    double alpha_low;
    double alpha_high;    // exclusive
    double share_low;     // exclusive
    double share_high;
    bool tightened;       // uniform valuations with -g'/g < 1 on [0, 1]
};

/// Bounds on the optimum for a non-increasing valuation density. Throws
/// ModelError otherwise.
RevenueBounds optimum_bounds(const ValuationDistribution& dist, const QoSModel& qos);

/// Writes `lambda,price,revenue` rows for each share in `shares`.
void write_revenue_curve(std::ostream& os, const ValuationDistribution& dist, const QoSModel& qos,
                         std::span<const double> shares);

}  // namespace nsp
