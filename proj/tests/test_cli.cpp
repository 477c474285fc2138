#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "nsp/competition.hpp"
#include "nsp/duopoly.hpp"
#include "oracles.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = NSP_SCENARIO_DIR;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("nsp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Outcome invoke(std::vector<std::string> args) {
        args.insert(args.begin(), {"--out", dir_.string()});
        std::ostringstream out, err;
        const int code = nsp::cli::run(args, out, err);
        return {code, out.str(), err.str()};
    }
    std::string scenario(const std::string& name) const { return (kScenarios / (name + ".json")).string(); }
    std::vector<std::string> lines(const std::string& file) const {
        std::ifstream in(dir_ / file);
        std::vector<std::string> v;
        for (std::string l; std::getline(in, l);) v.push_back(l);
        return v;
    }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name) << text;
        return (dir_ / name).string();
    }

    fs::path dir_;
};

double last_field(const std::string& line) { return std::stod(line.substr(line.rfind(',') + 1)); }

}  // namespace

TEST_F(Cli, SimulateSplitMonopoly) {
    const auto r = invoke({"simulate", scenario("split_monopoly")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("converged=true"), std::string::npos);
    const auto csv = lines("split_monopoly_simulate.csv");
    EXPECT_EQ(csv.front(), "t,lambda2");
    EXPECT_NEAR(last_field(csv.back()), oracle::uniform_linear_equilibrium(1.0, 1.633, 0.088, 1.2), 1e-10);
    EXPECT_NEAR(last_field(csv.back()), 0.2549, 1e-4);
}

TEST_F(Cli, SimulateFreeServiceHasTwoRows) {
    ASSERT_EQ(invoke({"simulate", scenario("free_service")}).code, 0);
    const auto csv = lines("free_service_simulate.csv");
    ASSERT_EQ(csv.size(), 3u);
    EXPECT_EQ(csv[2], "1,1");
}

TEST_F(Cli, SimulateDuopolyMatchesEquilibrium) {
    const auto r = invoke({"simulate", scenario("two_tech_duopoly")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = lines("two_tech_duopoly_simulate.csv");
    EXPECT_EQ(csv.front(), "t,lambda1,lambda2");
    const auto s = nsp::cli::load_scenario(scenario("two_tech_duopoly"));
    const nsp::DuopolyMarket m(s.dist, *s.q1, *s.technologies[0].qos, *s.p1, *s.p2);
    EXPECT_NEAR(last_field(csv.back()), nsp::equilibrium_duopoly(m).shares.entrant, 1e-9);
}

TEST_F(Cli, GlobalFlagsOverrideScenario) {
    const auto r = invoke({"--max-iter", "2", "simulate", scenario("split_monopoly")});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("converged=false"), std::string::npos);
    EXPECT_EQ(lines("split_monopoly_simulate.csv").size(), 4u);
    // flags after the subcommand are accepted too
    EXPECT_EQ(invoke({"simulate", scenario("split_monopoly"), "--tol", "1e-3"}).code, 0);
}

TEST_F(Cli, AnalyzeSplitMonopolySections) {
    const auto r = invoke({"analyze", scenario("split_monopoly")});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* title : {"# valuation", "# monopoly_convergence", "# monopoly_equilibrium", "# revenue_optimum",
                              "# revenue_bounds"})
        EXPECT_NE(r.out.find(title), std::string::npos) << title;
    EXPECT_NE(r.out.find("share,0.38196601125,0.5,0.493081"), std::string::npos);
    EXPECT_NE(r.out.find("\nclosed_form,"), std::string::npos);
    std::ifstream in(dir_ / "split_monopoly_analyze.csv");
    std::stringstream file;
    file << in.rdbuf();
    EXPECT_EQ(file.str(), r.out);
}

TEST_F(Cli, AnalyzeConstantQosExactPrice) {
    const auto r = invoke({"analyze", scenario("constant_qos")});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("closed_form,0.5,0.5,0.5,0.25"), std::string::npos);
}

TEST_F(Cli, AnalyzeDuopolyConditionFails) {
    const auto r = invoke({"analyze", scenario("two_tech_duopoly")});
    ASSERT_EQ(r.code, 0);
    const std::string header = "# duopoly_convergence\nholds,lhs,rhs\n";
    const auto pos = r.out.find(header);
    ASSERT_NE(pos, std::string::npos);
    const auto start = pos + header.size();
    const auto row = r.out.substr(start, r.out.find('\n', start) - start);
    EXPECT_EQ(row.substr(0, 6), "false,");
    EXPECT_NEAR(std::stod(row.substr(6)), 1.684, 0.01);
}

TEST_F(Cli, CompeteUniqueEquilibrium) {
    const auto a = invoke({"compete", scenario("two_tech_duopoly"), "--tech", "split"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_NE(a.out.find("supermodular_check=true"), std::string::npos);
    const auto b = invoke({"compete", scenario("two_tech_duopoly"), "--tech", "split", "--start", "0", "0.5"});
    ASSERT_EQ(b.code, 0);
    auto field = [](const std::string& s, const std::string& key) {
        const auto p = s.find(key + "=") + key.size() + 1;
        return std::stod(s.substr(p, s.find(' ', p) - p));
    };
    EXPECT_NEAR(field(a.out, "lambda1"), field(b.out, "lambda1"), 1e-8);
    EXPECT_NEAR(field(a.out, "lambda2"), field(b.out, "lambda2"), 1e-8);
    EXPECT_LT(field(a.out, "lambda1"), 0.5);
    EXPECT_LT(field(a.out, "lambda2"), 0.5);
    EXPECT_EQ(lines("two_tech_duopoly_compete.csv").front(), "round,lambda1,lambda2,p1,p2,R1,R2");
    const auto m = invoke({"compete", scenario("two_tech_duopoly"), "--multistart"});
    EXPECT_NE(m.out.find("starts_agree=true"), std::string::npos);
}

TEST_F(Cli, CompeteNonConvergenceExitsThreeWithTrajectory) {
    const auto r = invoke({"--max-iter", "1", "compete", scenario("two_tech_duopoly"), "--start", "0", "0"});
    EXPECT_EQ(r.code, 3);
    EXPECT_GE(lines("two_tech_duopoly_compete.csv").size(), 2u);
}

TEST_F(Cli, CompeteNeedsIncumbent) { EXPECT_EQ(invoke({"compete", scenario("split_monopoly")}).code, 2); }

TEST_F(Cli, SelectMapsAndBarrier) {
    ASSERT_EQ(invoke({"select", scenario("two_tech_monopoly"), "--k-grid", "0:0.5:11"}).code, 0);
    ASSERT_EQ(invoke({"select", scenario("two_tech_duopoly"), "--k-grid", "0:0.5:11"}).code, 0);
    const auto mono = lines("two_tech_monopoly_select_map.csv");
    const auto duo = lines("two_tech_duopoly_select_map.csv");
    ASSERT_EQ(mono.size(), 122u);
    ASSERT_EQ(duo.size(), 122u);
    EXPECT_EQ(mono.front(), "k_split,k_common,choice");
    int mono_out = 0, duo_out = 0;
    bool split = false, common = false;
    for (std::size_t i = 1; i < mono.size(); ++i) {
        const bool m_out = mono[i].ends_with(",not-enter");
        const bool d_out = duo[i].ends_with(",not-enter");
        mono_out += m_out;
        duo_out += d_out;
        if (m_out) {
            EXPECT_TRUE(d_out) << mono[i];
        }
        split |= mono[i].ends_with(",split");
        common |= mono[i].ends_with(",common");
    }
    EXPECT_TRUE(split && common && mono_out > 0);
    EXPECT_GT(duo_out, mono_out);
    EXPECT_EQ(lines("two_tech_monopoly_select.csv").front(), "technology,revenue,cost,profit,chosen");
}

TEST_F(Cli, SelectSingleFreeTechnology) {
    const auto path = write("free.json", R"({"distribution": {"kind": "uniform", "beta": 1},
        "technologies": [{"name": "only", "qos": {"type": "constant", "q": 1}, "cost": 0}]})");
    const auto r = invoke({"select", path});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "chosen=only\n");
}

TEST_F(Cli, FitQos) {
    const auto path = write("curve.csv", "lambda,qos\n0,1.633\n0.5,1.589\n1,1.545\n");
    const auto r = invoke({"fit-qos", path});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("q_bar,c,rms_residual\n1.633,0.088,", 0), 0u) << r.out;
    EXPECT_LT(std::stod(r.out.substr(r.out.rfind(',') + 1)), 1e-12);
    EXPECT_EQ(lines("curve_fit-qos.csv").size(), 2u);
}

TEST_F(Cli, TabulatedScenarioRuns) {
    for (const char* cmd : {"simulate", "analyze", "compete", "select"})
        EXPECT_EQ(invoke({cmd, scenario("tabulated_market")}).code, 0) << cmd;
}

TEST_F(Cli, ConfigErrorsExitTwoWithLocation) {
    const auto bad_kind = write("bad.json", R"({"distribution": {"kind": "normal"}, "technologies": []})");
    const auto r = invoke({"analyze", bad_kind});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("/distribution/kind"), std::string::npos) << r.err;

    const auto bad_qos = write("badq.json", R"({"distribution": {"kind": "uniform", "beta": 1},
        "technologies": [{"name": "x", "qos": {"type": "linear", "q_bar": 1, "c": 2}}]})");
    const auto q = invoke({"analyze", bad_qos});
    EXPECT_EQ(q.code, 2);
    EXPECT_NE(q.err.find("/technologies/0/qos"), std::string::npos) << q.err;

    const auto dominated = write("dom.json", R"({"distribution": {"kind": "uniform", "beta": 1},
        "incumbent": {"q1": 1.0}, "technologies": [{"name": "x", "qos": {"type": "constant", "q": 1.2}}]})");
    EXPECT_EQ(invoke({"analyze", dominated}).code, 2);

    const auto missing_file = write("mf.json", R"({"distribution": {"kind": "custom", "pdf_file": "nope.csv"},
        "technologies": [{"name": "x", "qos": {"type": "constant", "q": 1}}]})");
    const auto m = invoke({"analyze", missing_file});
    EXPECT_EQ(m.code, 2);
    EXPECT_NE(m.err.find("nope.csv"), std::string::npos);

    EXPECT_EQ(invoke({"simulate", scenario("two_tech_monopoly")}).code, 2);  // no dynamics section
    EXPECT_EQ(invoke({"analyze", (dir_ / "absent.json").string()}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"select", scenario("two_tech_monopoly"), "--k-grid", "0:1"}).code, 2);
}

TEST_F(Cli, Deterministic) {
    for (const char* cmd : {"simulate", "analyze", "compete", "select"}) {
        const auto a = invoke({cmd, scenario("two_tech_duopoly")});
        std::vector<std::string> first = lines(std::string("two_tech_duopoly_") + cmd + ".csv");
        const auto b = invoke({cmd, scenario("two_tech_duopoly")});
        EXPECT_EQ(a.out, b.out);
        EXPECT_EQ(first, lines(std::string("two_tech_duopoly_") + cmd + ".csv"));
    }
}
