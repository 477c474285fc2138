#include "nsp/monopoly_revenue.hpp"

#include <cmath>
#include <ostream>

#include "nsp/csv_io.hpp"
#include "nsp/errors.hpp"
#include "nsp/monopoly.hpp"
#include "nsp/numerics.hpp"

namespace nsp {

namespace {

constexpr std::size_t kScanPoints = 2001;

}  // namespace

double revenue_at_price(const ValuationDistribution& dist, const QoSModel& qos, double price) {
    if (!(price >= 0.0)) throw DomainError("revenue_at_price: price must be non-negative");
    if (price == 0.0) return 0.0;
    return price * equilibrium(MonopolyMarket(dist, qos, price));
}

double price_from_marginal(const ValuationDistribution& dist, const QoSModel& qos, double alpha) {
    if (!(alpha >= 0.0 && alpha <= dist.beta())) {
        throw DomainError("price_from_marginal: valuation must lie in [0, beta]");
    }
    return alpha * qos.evaluate(1.0 - dist.cdf(alpha));
}

double revenue_at_share(const ValuationDistribution& dist, const QoSModel& qos, double share) {
    return dist.quantile(1.0 - share) * qos.evaluate(share) * share;
}

RevenueOptimum optimize(const ValuationDistribution& dist, const QoSModel& qos) {
    const auto objective = [&](double x) { return revenue_at_share(dist, qos, x); };
    const auto best = numerics::scan_then_refine_max(objective, 0.0, 1.0, kScanPoints);
    RevenueOptimum out;
    out.share = best.x;
    out.marginal_valuation = dist.quantile(1.0 - best.x);
    out.price = out.marginal_valuation * qos.evaluate(best.x);
    out.revenue = out.price * out.share;
    return out;
}

RevenueOptimum optimum_closed_form(double beta, double q_bar, double c) {
    if (!(beta > 0.0) || !(q_bar > 0.0) || !(c >= 0.0 && c < q_bar)) {
        throw ModelError("closed-form optimum needs beta > 0 and 0 <= c < q_bar");
    }
    // (c + q - sqrt(q^2 + c^2 - cq)) / (3c), rationalized; c = 0 gives 1/2.
    const double root = std::sqrt(q_bar * q_bar + c * c - c * q_bar);
    RevenueOptimum out;
    out.share = q_bar / (c + q_bar + root);
    out.marginal_valuation = beta * (1.0 - out.share);
    out.price = out.marginal_valuation * (q_bar - c * out.share);
    out.revenue = out.price * out.share;
    return out;
}

RevenueBounds optimum_bounds(const ValuationDistribution& dist, const QoSModel& qos) {
    if (!dist.is_nonincreasing_pdf()) {
        throw ModelError("revenue bounds require a non-increasing valuation density");
    }
    const double beta = dist.beta();
    const double median = dist.quantile(0.5);
    RevenueBounds b{};
    b.price_low = median * qos.evaluate(0.5);
    b.price_high = beta * qos.evaluate(0.0);
    b.alpha_low = median;
    b.alpha_high = beta;
    b.share_low = 0.0;
    b.share_high = 0.5;
    b.tightened = false;

    if (dist.kind() == ValuationDistribution::Kind::Uniform && max_relative_degradation(qos) < 1.0) {
        const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
        const double share_floor = (3.0 - std::sqrt(5.0)) / 2.0;
        b.price_high = golden * beta * qos.evaluate(share_floor);
        b.alpha_high = golden * beta;
        b.share_low = share_floor;
        b.tightened = true;
    }
    return b;
}

void write_revenue_curve(std::ostream& os, const ValuationDistribution& dist, const QoSModel& qos,
                         std::span<const double> shares) {
    CsvWriter w(os);
    w.row("lambda", "price", "revenue");
    for (double x : shares) {
        const double price = dist.quantile(1.0 - x) * qos.evaluate(x);
        w.row(x, price, price * x);
    }
}

}  // namespace nsp
