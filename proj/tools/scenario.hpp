#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsp/monopoly.hpp"
#include "nsp/qos.hpp"
#include "nsp/trace.hpp"
#include "nsp/valuation.hpp"

namespace nsp::cli {

struct DynamicsSpec {
    MonopolyVariant variant = variant::Synchronous{};
    double lambda0_entrant = 0.0;
    double lambda0_incumbent = 0.0;  // two-provider runs only
    bool paired_start = false;
    SimulationOptions options{};
};

/// One market world read from a scenario JSON file. Relative data-file
/// paths are resolved against the scenario's directory.
struct Scenario {
    std::string name;
    std::filesystem::path source;
    ValuationDistribution dist = ValuationDistribution::uniform(1.0);
    std::optional<double> q1;
    std::vector<Technology> technologies;
    std::optional<double> p1;
    std::optional<double> p2;
    std::optional<DynamicsSpec> dynamics;
    nlohmann::json metadata = nlohmann::json::object();

    /// Entering technology by name; the first one when name is empty.
    const Technology& technology(const std::string& name) const;
};

/// Parses and validates a scenario. Throws ConfigError naming the file and
/// the JSON location of the first problem.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace nsp::cli
