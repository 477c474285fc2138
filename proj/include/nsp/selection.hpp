#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsp/competition.hpp"
#include "nsp/qos.hpp"
#include "nsp/valuation.hpp"

namespace nsp {

/// The entrant's long-term choice among technologies, with or without an
/// incumbent (constant QoS q1) already in the market.
struct SelectionProblem {
    std::vector<Technology> technologies;
    std::optional<double> incumbent_q1;
    ValuationDistribution dist;
    NashOptions nash{};

    /// Appends "not-enter" when missing and validates every entering
    /// technology against the incumbent.
    SelectionProblem(std::vector<Technology> techs, std::optional<double> q1, ValuationDistribution d);

    std::vector<const Technology*> entering() const;
};

/// Per-period revenue the entrant earns with this QoS: the monopoly optimum
/// without an incumbent, the Cournot equilibrium revenue with one.
double technology_revenue(const SelectionProblem& problem, const QoSModel& qos);

/// Revenue minus per-period cost; zero for "not-enter".
double technology_profit(const SelectionProblem& problem, const Technology& tech);

struct TechnologyProfit {
    std::string name;
    double revenue;
    double cost;
    double profit;
};

struct SelectionResult {
    std::string chosen;
    std::vector<TechnologyProfit> profits;  // in problem order
};

/// Enumerates every option. "not-enter" wins unless some technology makes a
/// strictly positive profit; ties between technologies go to list order.
SelectionResult select(const SelectionProblem& problem);

struct DecisionMap {
    std::string first_name;
    std::string second_name;
    std::vector<double> first_costs;
    std::vector<double> second_costs;
    /// cells[i][j] is the choice at (first_costs[i], second_costs[j]).
    std::vector<std::vector<std::string>> cells;
};

/// Choice over a grid of per-period costs for the two entering
/// technologies. Revenues are computed once per technology.
DecisionMap decision_map(const SelectionProblem& problem, std::span<const double> first_costs,
                         std::span<const double> second_costs);

/// `k_<first>,k_<second>,choice`, first axis outermost.
void write_decision_map_csv(std::ostream& os, const DecisionMap& map);

}  // namespace nsp
