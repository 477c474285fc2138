#pragma once

#include <cstddef>
#include <vector>

namespace nsp {

/// Market shares visited by an iterated subscription map, starting with the
/// initial state. `incumbent` is empty for single-provider traces.
struct DynamicsTrace {
    std::vector<double> entrant;
    std::vector<double> incumbent;
    bool converged = false;
    std::size_t iterations = 0;
    double residual = 0.0;

    bool two_provider() const noexcept { return !incumbent.empty(); }
    double final_entrant() const { return entrant.back(); }
    double final_incumbent() const { return incumbent.back(); }
};

struct SimulationOptions {
    std::size_t max_iter = 10000;
    double tol = 1e-10;
};

/// Verdict of a sufficient-condition check: holds iff lhs < rhs.
struct ConditionCheck {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

}  // namespace nsp
