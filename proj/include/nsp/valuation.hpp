#pragma once

#include <span>
#include <vector>

namespace nsp {

/// One node of a tabulated valuation density.
struct PdfSample {
    double alpha;
    double density;
};

/// Law of the users' valuation of QoS, supported on [0, beta] with a
/// strictly positive density there.
///
/// Custom laws are tabulated: the density is the linear interpolant of the
/// samples, and the samples are rescaled at construction so the
/// interpolant integrates to exactly one. Values are immutable.
class ValuationDistribution {
public:
    enum class Kind { Uniform, Custom };

    static ValuationDistribution uniform(double beta);

    /// Samples must start at alpha = 0, be strictly ascending, and carry
    /// strictly positive densities. The last alpha becomes beta.
    static ValuationDistribution tabulated(std::vector<PdfSample> samples);

    Kind kind() const noexcept { return kind_; }
    double beta() const noexcept { return beta_; }
    std::span<const PdfSample> samples() const noexcept { return samples_; }

    /// f(alpha); zero outside [0, beta].
    double pdf(double alpha) const noexcept;

    /// f'(alpha), one-sided at the support endpoints and at interior nodes
    /// (right segment, left segment at beta). Zero for Uniform.
    double pdf_slope(double alpha) const noexcept;

    /// F(alpha), clamped to 0 below and 1 above the support.
    double cdf(double alpha) const noexcept;

    /// F^-1(u) with F^-1(0) = 0 and F^-1(1) = beta. Throws DomainError if
    /// u is outside [0, 1].
    double quantile(double u) const;

    /// K = max over [0, beta] of f(alpha) * alpha.
    double k_constant() const;

    /// max over [0, beta] of f(alpha).
    double max_pdf() const noexcept;

    bool is_nonincreasing_pdf() const noexcept;

private:
    ValuationDistribution() = default;

    std::size_t segment(double alpha) const noexcept;

    Kind kind_ = Kind::Uniform;
    double beta_ = 1.0;
    std::vector<PdfSample> samples_;
    std::vector<double> cumulative_;  // F at each sample
    double k_ = 1.0;
};

}  // namespace nsp
