#include "commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "nsp/competition.hpp"
#include "nsp/csv_io.hpp"
#include "nsp/duopoly.hpp"
#include "nsp/errors.hpp"
#include "nsp/monopoly.hpp"
#include "nsp/monopoly_revenue.hpp"
#include "nsp/selection.hpp"
#include "scenario.hpp"

namespace nsp::cli {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::string out_dir = ".";
};

std::ofstream open_output(const GlobalOptions& g, const std::string& file) {
    fs::create_directories(g.out_dir);
    const fs::path path = fs::path(g.out_dir) / file;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    return os;
}

const char* regime_name(DuopolyEquilibrium::Regime r) {
    return r == DuopolyEquilibrium::Regime::Interior ? "interior" : "entrant-shut-out";
}

std::vector<double> parse_grid(const std::string& text) {
    // lo:hi:n
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) ) {
        throw ConfigError("grid '" + text + "': expected lo:hi:points");
    }
    double lo = 0.0, hi = 0.0;
    long n = 0;
    try {
        lo = std::stod(a);
        hi = std::stod(b);
        n = std::stol(c);
    } catch (const std::exception&) {
        throw ConfigError("grid '" + text + "': expected lo:hi:points");
    }
    if (n < 2 || !(hi > lo)) throw ConfigError("grid '" + text + "': need hi > lo and at least 2 points");
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return grid;
}

double required_price(const std::optional<double>& p, const Scenario& s, const char* which) {
    if (!p) throw ConfigError(s.source.string() + ": /prices/" + which + " is required for this command");
    return *p;
}

// ---- simulate -------------------------------------------------------------

int cmd_simulate(const GlobalOptions& g, const std::string& scenario_path, const std::string& tech_name,
                 std::ostream& out) {
    const Scenario s = load_scenario(scenario_path);
    if (!s.dynamics) throw ConfigError(s.source.string() + ": /dynamics section is required for simulate");
    DynamicsSpec dyn = *s.dynamics;
    if (g.tol) dyn.options.tol = *g.tol;
    if (g.max_iter) dyn.options.max_iter = *g.max_iter;
    const Technology& tech = s.technology(tech_name);

    DynamicsTrace trace;
    if (s.q1) {
        if (!std::holds_alternative<variant::Synchronous>(dyn.variant)) {
            throw ConfigError(s.source.string() + ": two-provider dynamics support only the synchronous variant");
        }
        const DuopolyMarket mkt(s.dist, *s.q1, *tech.qos, required_price(s.p1, s, "p1"), required_price(s.p2, s, "p2"));
        trace = simulate_duopoly(mkt, SharePair{dyn.lambda0_incumbent, dyn.lambda0_entrant}, dyn.options);
    } else {
        const MonopolyMarket mkt(s.dist, *tech.qos, required_price(s.p2, s, "p2"));
        trace = simulate(mkt, dyn.variant, dyn.lambda0_entrant, dyn.options);
    }

    auto os = open_output(g, s.name + "_simulate.csv");
    write_trace_csv(os, trace);

    out << "converged=" << (trace.converged ? "true" : "false") << " iterations=" << trace.iterations;
    if (trace.two_provider()) out << " lambda1=" << format_number(trace.final_incumbent());
    out << " lambda2=" << format_number(trace.final_entrant()) << " residual=" << format_number(trace.residual)
        << '\n';
    return kSuccess;
}

// ---- analyze --------------------------------------------------------------

void analyze_report(const Scenario& s, const Technology& tech, std::ostream& os) {
    CsvWriter w(os);
    const QoSModel& qos = *tech.qos;

    w.section("valuation");
    w.row("kind", "beta", "K", "max_pdf", "nonincreasing_pdf");
    w.row(s.dist.kind() == ValuationDistribution::Kind::Uniform ? "uniform" : "custom", s.dist.beta(),
          s.dist.k_constant(), s.dist.max_pdf(), s.dist.is_nonincreasing_pdf());

    w.section("monopoly_convergence");
    w.row("condition", "holds", "lhs", "rhs");
    const auto conv = convergence_condition(s.dist, qos);
    w.row("general", conv.general.holds, conv.general.lhs, conv.general.rhs);
    if (conv.affine) w.row("affine", conv.affine->holds, conv.affine->lhs, conv.affine->rhs);

    if (!s.q1 && s.p2) {
        const MonopolyMarket mkt(s.dist, qos, *s.p2);
        w.section("monopoly_equilibrium");
        w.row("price", "lambda2", "revenue");
        const double eq = equilibrium(mkt);
        w.row(*s.p2, eq, *s.p2 * eq);
    }

    w.section("revenue_optimum");
    w.row("method", "share", "marginal_valuation", "price", "revenue");
    const RevenueOptimum opt = optimize(s.dist, qos);
    w.row("numeric", opt.share, opt.marginal_valuation, opt.price, opt.revenue);
    if (s.dist.kind() == ValuationDistribution::Kind::Uniform && qos.is_affine()) {
        const RevenueOptimum cf = optimum_closed_form(s.dist.beta(), qos.q_bar(), qos.slope());
        w.row("closed_form", cf.share, cf.marginal_valuation, cf.price, cf.revenue);
    }

    if (s.dist.is_nonincreasing_pdf()) {
        const RevenueBounds b = optimum_bounds(s.dist, qos);
        w.section("revenue_bounds");
        w.row("quantity", "low", "high", "optimum", "within");
        w.row("share", b.share_low, b.share_high, opt.share, opt.share > b.share_low && opt.share <= b.share_high);
        w.row("marginal_valuation", b.alpha_low, b.alpha_high, opt.marginal_valuation,
              opt.marginal_valuation >= b.alpha_low && opt.marginal_valuation < b.alpha_high);
        w.row("price", b.price_low, b.price_high, opt.price, opt.price >= b.price_low && opt.price < b.price_high);
        w.row("tightened", b.tightened ? 1 : 0, "", "", "");
    }

    if (s.q1) {
        w.section("duopoly_convergence");
        w.row("holds", "lhs", "rhs");
        const auto dc = convergence_condition_duopoly(s.dist, *s.q1, qos);
        w.row(dc.holds, dc.lhs, dc.rhs);
        if (s.p1 && s.p2) {
            const DuopolyMarket mkt(s.dist, *s.q1, qos, *s.p1, *s.p2);
            const auto eq = equilibrium_duopoly(mkt);
            const auto [r1, r2] = bertrand_revenues(mkt);
            w.section("duopoly_equilibrium");
            w.row("regime", "lambda1", "lambda2", "theta1", "theta2", "R1", "R2");
            w.row(regime_name(eq.regime), eq.shares.incumbent, eq.shares.entrant, eq.theta1, eq.theta2, r1, r2);
        }
    }
}

int cmd_analyze(const GlobalOptions& g, const std::string& scenario_path, const std::string& tech_name,
                std::ostream& out) {
    const Scenario s = load_scenario(scenario_path);
    const Technology& tech = s.technology(tech_name);
    std::ostringstream report;
    analyze_report(s, tech, report);
    auto os = open_output(g, s.name + "_analyze.csv");
    os << report.str();
    out << report.str();
    return kSuccess;
}

// ---- compete --------------------------------------------------------------

void write_rounds(std::ostream& os, const std::vector<BestResponseRound>& rounds) {
    CsvWriter w(os);
    w.row("round", "lambda1", "lambda2", "p1", "p2", "R1", "R2");
    for (const auto& r : rounds) w.row(r.round, r.lambda1, r.lambda2, r.p1, r.p2, r.r1, r.r2);
}

int cmd_compete(const GlobalOptions& g, const std::string& scenario_path, const std::string& tech_name,
                const std::vector<double>& start, bool multistart, std::ostream& out) {
    const Scenario s = load_scenario(scenario_path);
    if (!s.q1) throw ConfigError(s.source.string() + ": /incumbent is required for compete");
    const Technology& tech = s.technology(tech_name);
    const CournotGame game(s.dist, *s.q1, *tech.qos);

    NashOptions opts;
    if (g.tol) opts.tol = *g.tol;
    if (g.max_iter) opts.max_rounds = *g.max_iter;
    if (!start.empty()) {
        if (start.size() != 2) throw ConfigError("--start expects two values");
        opts.start1 = start[0];
        opts.start2 = start[1];
    }

    try {
        NashOutcome ne;
        std::optional<bool> agree;
        if (multistart) {
            auto ms = nash_multistart(game, opts);
            ne = ms.outcomes[ms.smallest];
            agree = ms.agree;
        } else {
            ne = nash_solve(game, opts);
        }
        auto os = open_output(g, s.name + "_compete.csv");
        write_rounds(os, ne.trajectory);
        out << "technology=" << tech.name << " lambda1=" << format_number(ne.lambda1)
            << " lambda2=" << format_number(ne.lambda2) << " p1=" << format_number(ne.p1)
            << " p2=" << format_number(ne.p2) << " R1=" << format_number(ne.r1) << " R2=" << format_number(ne.r2)
            << " rounds=" << ne.iterations << " supermodular_check=" << (ne.supermodular_check ? "true" : "false")
            << " verified=" << (ne.verified ? "true" : "false");
        if (agree) out << " starts_agree=" << (*agree ? "true" : "false");
        out << '\n';
    } catch (const NonConvergence& e) {
        auto os = open_output(g, s.name + "_compete.csv");
        write_rounds(os, e.trajectory());
        throw;
    }
    return kSuccess;
}

// ---- select ---------------------------------------------------------------

int cmd_select(const GlobalOptions& g, const std::string& scenario_path, const std::string& grid,
               const std::string& grid_second, std::ostream& out) {
    const Scenario s = load_scenario(scenario_path);
    SelectionProblem problem(s.technologies, s.q1, s.dist);
    if (g.tol) problem.nash.tol = *g.tol;
    if (g.max_iter) problem.nash.max_rounds = *g.max_iter;

    const SelectionResult result = select(problem);
    {
        auto os = open_output(g, s.name + "_select.csv");
        CsvWriter w(os);
        w.row("technology", "revenue", "cost", "profit", "chosen");
        for (const auto& p : result.profits) w.row(p.name, p.revenue, p.cost, p.profit, p.name == result.chosen);
    }
    out << "chosen=" << result.chosen << '\n';

    if (!grid.empty()) {
        const auto first = parse_grid(grid);
        const auto second = grid_second.empty() ? first : parse_grid(grid_second);
        const DecisionMap map = decision_map(problem, first, second);
        auto os = open_output(g, s.name + "_select_map.csv");
        write_decision_map_csv(os, map);
    }
    return kSuccess;
}

// ---- fit-qos --------------------------------------------------------------

int cmd_fit_qos(const GlobalOptions& g, const std::string& csv_path, std::ostream& out) {
    const auto samples = load_qos_samples(csv_path);
    const AffineFit fit = fit_affine(samples);
    std::ostringstream text;
    CsvWriter w(text);
    w.row("q_bar", "c", "rms_residual");
    w.row(fit.model.q_bar(), fit.model.slope(), fit.rms_residual);
    auto os = open_output(g, fs::path(csv_path).stem().string() + "_fit-qos.csv");
    os << text.str();
    out << text.str();
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Subscription dynamics, pricing and entry decisions for a two-provider market", "nspmarket"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    double tol = 0.0;
    std::size_t max_iter = 0;
    auto* tol_opt = app.add_option("--tol", tol, "Convergence tolerance")->check(CLI::PositiveNumber);
    auto* iter_opt = app.add_option("--max-iter", max_iter, "Iteration / best-response round budget");
    app.add_option("--out", g.out_dir, "Directory for CSV output");

    std::string scenario;
    std::string tech;
    std::vector<double> start;
    bool multistart = false;
    std::string grid;
    std::string grid_second;
    std::string qos_csv;

    auto* sim = app.add_subcommand("simulate", "Iterate the subscription dynamics");
    auto* ana = app.add_subcommand("analyze", "Equilibria, convergence conditions and revenue optimum");
    auto* cmp = app.add_subcommand("compete", "Cournot equilibrium by best-response dynamics");
    auto* sel = app.add_subcommand("select", "Entry and technology selection");
    auto* fit = app.add_subcommand("fit-qos", "Affine least-squares fit of tabulated QoS");
    for (auto* sub : {sim, ana, cmp, sel}) sub->add_option("scenario", scenario, "Scenario JSON file")->required();
    for (auto* sub : {sim, ana, cmp}) sub->add_option("--tech", tech, "Entering technology (default: first)");
    cmp->add_option("--start", start, "Initial shares lambda1 lambda2")->expected(2);
    cmp->add_flag("--multistart", multistart, "Solve from five starts and report agreement");
    sel->add_option("--k-grid", grid, "Cost grid lo:hi:points for the decision map");
    sel->add_option("--k-grid-second", grid_second, "Cost grid for the second technology (default: --k-grid)");
    fit->add_option("csv", qos_csv, "CSV file with header lambda,qos")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kConfigError;
    }
    if (tol_opt->count() > 0) g.tol = tol;
    if (iter_opt->count() > 0) g.max_iter = max_iter;

    try {
        if (*sim) return cmd_simulate(g, scenario, tech, out);
        if (*ana) return cmd_analyze(g, scenario, tech, out);
        if (*cmp) return cmd_compete(g, scenario, tech, start, multistart, out);
        if (*sel) return cmd_select(g, scenario, grid, grid_second, out);
        if (*fit) return cmd_fit_qos(g, qos_csv, out);
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kConfigError;
}

}  // namespace nsp::cli
