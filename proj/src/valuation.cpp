#include "nsp/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsp/errors.hpp"
#include "nsp/numerics.hpp"

namespace nsp {

namespace {

constexpr std::size_t kKGridPoints = 10001;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kQuantileTol = 1e-12;

}  // namespace

ValuationDistribution ValuationDistribution::uniform(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ModelError("uniform valuation: beta must be positive and finite");
    }
    ValuationDistribution d;
    d.kind_ = Kind::Uniform;
    d.beta_ = beta;
    d.k_ = 1.0;
    return d;
}

ValuationDistribution ValuationDistribution::tabulated(std::vector<PdfSample> samples) {
    if (samples.size() < 2) {
        throw ModelError("tabulated valuation: need at least two samples");
    }
    if (samples.front().alpha != 0.0) {
        throw ModelError("tabulated valuation: first sample must be at alpha = 0");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!std::isfinite(s.alpha) || !std::isfinite(s.density)) {
            throw ModelError("tabulated valuation: non-finite sample " + std::to_string(i));
        }
        if (!(s.density > 0.0)) {
            throw ModelError("tabulated valuation: density must be strictly positive (sample " +
                             std::to_string(i) + ")");
        }
        if (i > 0 && !(s.alpha > samples[i - 1].alpha)) {
            throw ModelError("tabulated valuation: alpha must be strictly ascending (sample " +
                             std::to_string(i) + ")");
        }
    }

    double mass = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        mass += 0.5 * (samples[i].density + samples[i - 1].density) *
                (samples[i].alpha - samples[i - 1].alpha);
    }
    for (auto& s : samples) s.density /= mass;

    ValuationDistribution d;
    d.kind_ = Kind::Custom;
    d.beta_ = samples.back().alpha;
    d.cumulative_.resize(samples.size());
    d.cumulative_[0] = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        d.cumulative_[i] = d.cumulative_[i - 1] + 0.5 * (samples[i].density + samples[i - 1].density) *
                                                      (samples[i].alpha - samples[i - 1].alpha);
    }
    d.cumulative_.back() = 1.0;
    d.samples_ = std::move(samples);

    const auto weighted = [&d](double a) { return d.pdf(a) * a; };
    d.k_ = numerics::scan_then_refine_max(weighted, 0.0, d.beta_, kKGridPoints).value;
    return d;
}

std::size_t ValuationDistribution::segment(double alpha) const noexcept {
    // index i such that samples_[i].alpha <= alpha < samples_[i+1].alpha
    auto it = std::upper_bound(samples_.begin(), samples_.end(), alpha,
                               [](double a, const PdfSample& s) { return a < s.alpha; });
    std::size_t idx = static_cast<std::size_t>(it - samples_.begin());
    if (idx == 0) return 0;
    return std::min(idx - 1, samples_.size() - 2);
}

double ValuationDistribution::pdf(double alpha) const noexcept {
    if (alpha < 0.0 || alpha > beta_) return 0.0;
    if (kind_ == Kind::Uniform) return 1.0 / beta_;
    const std::size_t i = segment(alpha);
    const auto& a = samples_[i];
    const auto& b = samples_[i + 1];
    const double w = (alpha - a.alpha) / (b.alpha - a.alpha);
    return a.density + w * (b.density - a.density);
}

double ValuationDistribution::pdf_slope(double alpha) const noexcept {
    if (kind_ == Kind::Uniform || alpha < 0.0 || alpha > beta_) return 0.0;
    const std::size_t i = segment(alpha);
    const auto& a = samples_[i];
    const auto& b = samples_[i + 1];
    return (b.density - a.density) / (b.alpha - a.alpha);
}

double ValuationDistribution::cdf(double alpha) const noexcept {
    if (alpha <= 0.0) return 0.0;
    if (alpha >= beta_) return 1.0;
    if (kind_ == Kind::Uniform) return alpha / beta_;
    const std::size_t i = segment(alpha);
    const auto& a = samples_[i];
    const auto& b = samples_[i + 1];
    const double dx = alpha - a.alpha;
    const double slope = (b.density - a.density) / (b.alpha - a.alpha);
    return std::min(1.0, cumulative_[i] + a.density * dx + 0.5 * slope * dx * dx);
}

double ValuationDistribution::quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw DomainError("quantile: probability must lie in [0, 1]");
    }
    if (u == 0.0) return 0.0;
    if (u == 1.0) return beta_;
    if (kind_ == Kind::Uniform) return beta_ * u;
    return numerics::bisect_predicate([&](double a) { return cdf(a) >= u; }, 0.0, beta_,
                                      kQuantileTol);
}

double ValuationDistribution::k_constant() const { return k_; }

double ValuationDistribution::max_pdf() const noexcept {
    if (kind_ == Kind::Uniform) return 1.0 / beta_;
    double m = 0.0;
    for (const auto& s : samples_) m = std::max(m, s.density);
    return m;
}

bool ValuationDistribution::is_nonincreasing_pdf() const noexcept {
    if (kind_ == Kind::Uniform) return true;
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (samples_[i].density > samples_[i - 1].density + kMonotoneSlack) return false;
    }
    return true;
}

}  // namespace nsp
