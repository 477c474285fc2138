#include "nsp/selection.hpp"

#include <algorithm>
#include <ostream>

#include "nsp/csv_io.hpp"
#include "nsp/errors.hpp"
#include "nsp/monopoly_revenue.hpp"

namespace nsp {

namespace {

std::string choose(std::span<const TechnologyProfit> candidates) {
    const TechnologyProfit* best = nullptr;
    for (const auto& c : candidates) {
        if (c.name == kNotEnter) continue;
        if (best == nullptr || c.profit > best->profit) best = &c;
    }
    if (best == nullptr || !(best->profit > 0.0)) return kNotEnter;
    return best->name;
}

}  // namespace

SelectionProblem::SelectionProblem(std::vector<Technology> techs, std::optional<double> q1, ValuationDistribution d)
    : technologies(std::move(techs)), incumbent_q1(q1), dist(std::move(d)) {
    const auto not_enter = std::find_if(technologies.begin(), technologies.end(),
                                        [](const Technology& t) { return t.name == kNotEnter; });
    if (not_enter == technologies.end()) {
        technologies.push_back(Technology::not_enter());
    } else if (not_enter->enters() || not_enter->cost_per_period != 0.0) {
        throw ModelError("'not-enter' must have no QoS model and zero cost");
    }
    if (entering().empty()) throw ModelError("selection needs at least one technology besides 'not-enter'");
    for (const auto* t : entering()) {
        if (incumbent_q1) validate_against_incumbent(*t->qos, *incumbent_q1);
    }
}

std::vector<const Technology*> SelectionProblem::entering() const {
    std::vector<const Technology*> out;
    for (const auto& t : technologies) {
        if (t.enters()) out.push_back(&t);
    }
    return out;
}

double technology_revenue(const SelectionProblem& problem, const QoSModel& qos) {
    if (!problem.incumbent_q1) return optimize(problem.dist, qos).revenue;
    const CournotGame game(problem.dist, *problem.incumbent_q1, qos);
    return nash_solve(game, problem.nash).r2;
}

double technology_profit(const SelectionProblem& problem, const Technology& tech) {
    if (!tech.enters()) return 0.0;
    return technology_revenue(problem, *tech.qos) - tech.cost_per_period;
}

SelectionResult select(const SelectionProblem& problem) {
    SelectionResult out;
    for (const auto& t : problem.technologies) {
        const double revenue = t.enters() ? technology_revenue(problem, *t.qos) : 0.0;
        out.profits.push_back({t.name, revenue, t.cost_per_period, revenue - t.cost_per_period});
    }
    out.chosen = choose(out.profits);
    return out;
}

DecisionMap decision_map(const SelectionProblem& problem, std::span<const double> first_costs,
                         std::span<const double> second_costs) {
    const auto techs = problem.entering();
    if (techs.size() != 2) throw ModelError("decision map needs exactly two entering technologies");
    const auto ascending = [](std::span<const double> v) { return std::is_sorted(v.begin(), v.end()); };
    if (!ascending(first_costs) || !ascending(second_costs)) throw DomainError("cost grids must be ascending");

    DecisionMap map;
    map.first_name = techs[0]->name;
    map.second_name = techs[1]->name;
    map.first_costs.assign(first_costs.begin(), first_costs.end());
    map.second_costs.assign(second_costs.begin(), second_costs.end());

    const double r_first = technology_revenue(problem, *techs[0]->qos);
    const double r_second = technology_revenue(problem, *techs[1]->qos);

    map.cells.resize(first_costs.size());
    for (std::size_t i = 0; i < first_costs.size(); ++i) {
        map.cells[i].reserve(second_costs.size());
        for (double k2 : second_costs) {
            const TechnologyProfit candidates[] = {
                {map.first_name, r_first, first_costs[i], r_first - first_costs[i]},
                {map.second_name, r_second, k2, r_second - k2},
            };
            map.cells[i].push_back(choose(candidates));
        }
    }
    return map;
}

void write_decision_map_csv(std::ostream& os, const DecisionMap& map) {
    CsvWriter w(os);
    w.row("k_" + map.first_name, "k_" + map.second_name, "choice");
    for (std::size_t i = 0; i < map.first_costs.size(); ++i) {
        for (std::size_t j = 0; j < map.second_costs.size(); ++j) {
            w.row(map.first_costs[i], map.second_costs[j], map.cells[i][j]);
        }
    }
}

}  // namespace nsp
