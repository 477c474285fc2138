#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nsp {

/// One tabulated QoS observation: quality delivered at a given market share.
struct QosSample {
    double share;
    double quality;
};

/// Entrant QoS as a function of its own market share, g(lambda).
///
/// Every model is strictly positive and non-increasing on [0, 1]. Linear
/// models are q_bar - c * lambda with 0 <= c < q_bar; a Linear model with
/// c = 0 and a Constant model describe the same function.
class QoSModel {
public:
    enum class Kind { Constant, Linear, Tabulated };

    static QoSModel constant(double q);
    static QoSModel linear(double q_bar, double c);
    /// Samples must cover [0, 1] (first share 0, last share 1), with
    /// strictly ascending shares and non-increasing positive qualities.
    static QoSModel tabulated(std::vector<QosSample> samples);

    Kind kind() const noexcept { return kind_; }

    /// Intercept g(0).
    double q_bar() const noexcept { return q_bar_; }
    /// Degradation rate c (zero for Constant and Tabulated).
    double slope() const noexcept { return c_; }
    std::span<const QosSample> samples() const noexcept { return samples_; }

    /// True for Constant and Linear models.
    bool is_affine() const noexcept { return kind_ != Kind::Tabulated; }

    double evaluate(double share) const;
    double derivative(double share) const;

    /// Smallest value of g on [0, 1] (g(1), by monotonicity).
    double minimum() const { return evaluate(1.0); }
    double maximum() const { return evaluate(0.0); }

private:
    QoSModel() = default;
    std::size_t segment(double share) const noexcept;

    Kind kind_ = Kind::Constant;
    double q_bar_ = 1.0;
    double c_ = 0.0;
    std::vector<QosSample> samples_;
};

/// Throws ModelError unless 0 < g(lambda) < q1 on [0, 1].
void validate_against_incumbent(const QoSModel& qos, double q1);

struct AffineFit {
    QoSModel model;
    double rms_residual;
};

/// Least-squares line through (share, quality) samples, returned as a
/// Linear model. A fitted positive slope (rising quality) is clamped to a
/// constant at the sample mean.
AffineFit fit_affine(std::span<const QosSample> samples);

/// Time-weighted throughput of a user that is outdoors a fraction f_o of
/// the time: (1 - f_o) * t_broadband + f_o * t_macro.
double average_throughput(double f_outdoor, double t_broadband, double t_macro);

/// An entry option: a QoS model plus its per-period cost. The "not-enter"
/// option carries no QoS and zero cost.
struct Technology {
    std::string name;
    std::optional<QoSModel> qos;
    double cost_per_period = 0.0;

    static Technology not_enter();
    static Technology make(std::string name, QoSModel qos, double cost_per_period);

    bool enters() const noexcept { return qos.has_value(); }
};

inline constexpr const char* kNotEnter = "not-enter";

}  // namespace nsp
