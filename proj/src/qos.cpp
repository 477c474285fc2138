#include "nsp/qos.hpp"

#include <algorithm>
#include <cmath>

#include "nsp/errors.hpp"

namespace nsp {

namespace {

constexpr double kMonotoneSlack = 1e-12;

void require_share(double share, const char* op) {
    if (!(share >= 0.0 && share <= 1.0)) {
        throw DomainError(std::string(op) + ": market share must lie in [0, 1]");
    }
}

}  // namespace

QoSModel QoSModel::constant(double q) {
    if (!(q > 0.0) || !std::isfinite(q)) throw ModelError("constant QoS must be positive and finite");
    QoSModel m;
    m.kind_ = Kind::Constant;
    m.q_bar_ = q;
    m.c_ = 0.0;
    return m;
}

QoSModel QoSModel::linear(double q_bar, double c) {
    if (!(q_bar > 0.0) || !std::isfinite(q_bar)) throw ModelError("linear QoS: q_bar must be positive");
    if (!(c >= 0.0 && c < q_bar)) throw ModelError("linear QoS: need 0 <= c < q_bar");
    QoSModel m;
    m.kind_ = Kind::Linear;
    m.q_bar_ = q_bar;
    m.c_ = c;
    return m;
}

QoSModel QoSModel::tabulated(std::vector<QosSample> samples) {
    if (samples.size() < 2) throw ModelError("tabulated QoS: need at least two samples");
    if (samples.front().share != 0.0 || samples.back().share != 1.0) {
        throw ModelError("tabulated QoS: samples must span shares 0 to 1");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!std::isfinite(s.quality) || !(s.quality > 0.0)) {
            throw ModelError("tabulated QoS: quality must be positive (sample " + std::to_string(i) + ")");
        }
        if (i > 0) {
            if (!(s.share > samples[i - 1].share)) {
                throw ModelError("tabulated QoS: shares must be strictly ascending (sample " +
                                 std::to_string(i) + ")");
            }
            if (s.quality > samples[i - 1].quality + kMonotoneSlack) {
                throw ModelError("tabulated QoS: quality must be non-increasing (sample " +
                                 std::to_string(i) + ")");
            }
        }
    }
    QoSModel m;
    m.kind_ = Kind::Tabulated;
    m.samples_ = std::move(samples);
    m.q_bar_ = m.samples_.front().quality;
    m.c_ = 0.0;
    return m;
}

std::size_t QoSModel::segment(double share) const noexcept {
    // right segment at interior nodes, last segment at share = 1
    auto it = std::upper_bound(samples_.begin(), samples_.end(), share,
                               [](double x, const QosSample& s) { return x < s.share; });
    std::size_t idx = static_cast<std::size_t>(it - samples_.begin());
    if (idx == 0) return 0;
    return std::min(idx - 1, samples_.size() - 2);
}

double QoSModel::evaluate(double share) const {
    require_share(share, "QoS evaluate");
    switch (kind_) {
        case Kind::Constant:
            return q_bar_;
        case Kind::Linear:
            return q_bar_ - c_ * share;
        case Kind::Tabulated: {
            const std::size_t i = segment(share);
            const auto& a = samples_[i];
            const auto& b = samples_[i + 1];
            const double w = (share - a.share) / (b.share - a.share);
            return a.quality + w * (b.quality - a.quality);
        }
    }
    return q_bar_;
}

double QoSModel::derivative(double share) const {
    require_share(share, "QoS derivative");
    switch (kind_) {
        case Kind::Constant:
            return 0.0;
        case Kind::Linear:
            return -c_;
        case Kind::Tabulated: {
            const std::size_t i = segment(share);
            const auto& a = samples_[i];
            const auto& b = samples_[i + 1];
            return (b.quality - a.quality) / (b.share - a.share);
        }
    }
    return 0.0;
}

void validate_against_incumbent(const QoSModel& qos, double q1) {
    if (!(q1 > 0.0) || !std::isfinite(q1)) throw ModelError("incumbent QoS q1 must be positive");
    // g is non-increasing, so g(0) is its maximum on [0, 1]
    if (!(qos.maximum() < q1)) {
        throw ModelError("entrant QoS must stay strictly below the incumbent's q1 on [0, 1]");
    }
}

AffineFit fit_affine(std::span<const QosSample> samples) {
    if (samples.size() < 2) throw FitError("fit_affine: need at least two samples");
    const double n = static_cast<double>(samples.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& s : samples) {
        mean_x += s.share;
        mean_y += s.quality;
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& s : samples) {
        sxx += (s.share - mean_x) * (s.share - mean_x);
        sxy += (s.share - mean_x) * (s.quality - mean_y);
    }
    if (!(sxx > 0.0)) throw FitError("fit_affine: sample shares must not all coincide");

    double c = -sxy / sxx;
    double q_bar = mean_y + c * mean_x;
    if (c < 0.0) {
        c = 0.0;
        q_bar = mean_y;
    }
    if (!(q_bar > 0.0) || !(c < q_bar)) {
        throw FitError("fit_affine: fitted line is not a valid linearly-degrading QoS");
    }

    double ss = 0.0;
    for (const auto& s : samples) {
        const double r = s.quality - (q_bar - c * s.share);
        ss += r * r;
    }
    return {QoSModel::linear(q_bar, c), std::sqrt(ss / n)};
}

double average_throughput(double f_outdoor, double t_broadband, double t_macro) {
    if (!(f_outdoor >= 0.0 && f_outdoor <= 1.0)) {
        throw DomainError("average_throughput: outdoor fraction must lie in [0, 1]");
    }
    return (1.0 - f_outdoor) * t_broadband + f_outdoor * t_macro;
}

Technology Technology::not_enter() { return Technology{kNotEnter, std::nullopt, 0.0}; }

Technology Technology::make(std::string name, QoSModel qos, double cost_per_period) {
    if (name == kNotEnter) throw ModelError("technology name 'not-enter' is reserved");
    if (!(cost_per_period >= 0.0) || !std::isfinite(cost_per_period)) {
        throw ModelError("technology '" + name + "': cost per period must be non-negative");
    }
    return Technology{std::move(name), std::move(qos), cost_per_period};
}

}  // namespace nsp
