#include "nsp/csv_io.hpp"

#include <cstdio>
#include <fstream>

#include "nsp/errors.hpp"

namespace nsp {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view field, const std::string& where) {
    const std::string text(trim(field));
    if (text.empty()) throw ConfigError(where + ": empty field");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(where + ": not a number: '" + text + "'");
    }
    if (used != text.size()) throw ConfigError(where + ": not a number: '" + text + "'");
    return v;
}

}  // namespace

std::string format_number(double v) {
    if (v == 0.0) return "0";  // avoids "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void CsvWriter::write_field(double v) { os_ << format_number(v); }

std::vector<std::pair<double, double>> read_two_column_csv(const std::filesystem::path& path,
                                                           std::string_view col0, std::string_view col1) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open file");
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::pair<double, double>> rows;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = path.string() + ":" + std::to_string(lineno);
        const std::string_view view = trim(line);
        if (view.empty()) continue;
        const auto comma = view.find(',');
        if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
            throw ConfigError(where + ": expected exactly two comma-separated fields");
        }
        const auto a = trim(view.substr(0, comma));
        const auto b = trim(view.substr(comma + 1));
        if (!header_seen) {
            if (a != col0 || b != col1) {
                throw ConfigError(where + ": expected header '" + std::string(col0) + "," +
                                  std::string(col1) + "'");
            }
            header_seen = true;
            continue;
        }
        rows.emplace_back(parse_number(a, where), parse_number(b, where));
    }
    if (!header_seen) throw ConfigError(path.string() + ": empty file");
    return rows;
}

ValuationDistribution load_pdf_csv(const std::filesystem::path& path) {
    const auto rows = read_two_column_csv(path, "alpha", "pdf");
    std::vector<PdfSample> samples;
    samples.reserve(rows.size());
    for (const auto& [a, f] : rows) samples.push_back({a, f});
    try {
        return ValuationDistribution::tabulated(std::move(samples));
    } catch (const ModelError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_pdf_csv(std::ostream& os, const ValuationDistribution& dist) {
    CsvWriter w(os);
    w.row("alpha", "pdf");
    if (dist.kind() == ValuationDistribution::Kind::Uniform) {
        w.row(0.0, dist.pdf(0.0));
        w.row(dist.beta(), dist.pdf(dist.beta()));
        return;
    }
    for (const auto& s : dist.samples()) w.row(s.alpha, s.density);
}

std::vector<QosSample> load_qos_samples(const std::filesystem::path& path) {
    const auto rows = read_two_column_csv(path, "lambda", "qos");
    std::vector<QosSample> samples;
    samples.reserve(rows.size());
    for (const auto& [x, q] : rows) samples.push_back({x, q});
    return samples;
}

QoSModel load_qos_csv(const std::filesystem::path& path) {
    try {
        return QoSModel::tabulated(load_qos_samples(path));
    } catch (const ModelError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_qos_csv(std::ostream& os, std::span<const QosSample> samples) {
    CsvWriter w(os);
    w.row("lambda", "qos");
    for (const auto& s : samples) w.row(s.share, s.quality);
}

void write_trace_csv(std::ostream& os, const DynamicsTrace& trace) {
    CsvWriter w(os);
    if (trace.two_provider()) {
        w.row("t", "lambda1", "lambda2");
        for (std::size_t t = 0; t < trace.entrant.size(); ++t) w.row(t, trace.incumbent[t], trace.entrant[t]);
    } else {
        w.row("t", "lambda2");
        for (std::size_t t = 0; t < trace.entrant.size(); ++t) w.row(t, trace.entrant[t]);
    }
}

}  // namespace nsp
