#pragma once

#include <filesystem>
#include <iosfwd>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "nsp/qos.hpp"
#include "nsp/trace.hpp"
#include "nsp/valuation.hpp"

namespace nsp {

/// Comma-separated writer. Floating-point fields are printed with 12
/// significant digits so output is stable across platforms.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    template <typename... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((write_sep(first), write_field(fields)), ...);
        os_ << '\n';
    }

    /// Bare `# title` line used to label sections in multi-table reports.
    void section(std::string_view title) { os_ << "# " << title << '\n'; }

private:
    void write_sep(bool& first) {
        if (!first) os_ << ',';
        first = false;
    }
    void write_field(double v);
    void write_field(std::string_view v) { os_ << v; }
    void write_field(const std::string& v) { os_ << v; }
    void write_field(const char* v) { os_ << v; }
    void write_field(bool v) { os_ << (v ? "true" : "false"); }
    template <typename I>
        requires(std::is_integral_v<I> && !std::is_same_v<I, bool>)
    void write_field(I v) {
        os_ << v;
    }

    std::ostream& os_;
};

/// Formats a double with 12 significant digits.
std::string format_number(double v);

/// Reads a two-column numeric CSV with the given header. Errors carry the
/// file name and line number.
std::vector<std::pair<double, double>> read_two_column_csv(const std::filesystem::path& path,
                                                           std::string_view col0, std::string_view col1);

/// `alpha,pdf` file -> tabulated valuation law.
ValuationDistribution load_pdf_csv(const std::filesystem::path& path);
void write_pdf_csv(std::ostream& os, const ValuationDistribution& dist);

/// `lambda,qos` file -> tabulated QoS model.
QoSModel load_qos_csv(const std::filesystem::path& path);
std::vector<QosSample> load_qos_samples(const std::filesystem::path& path);
void write_qos_csv(std::ostream& os, std::span<const QosSample> samples);

/// `t,lambda2` for single-provider traces, `t,lambda1,lambda2` otherwise.
void write_trace_csv(std::ostream& os, const DynamicsTrace& trace);

}  // namespace nsp
