#include "scenario.hpp"

#include <fstream>

#include "nsp/csv_io.hpp"
#include "nsp/errors.hpp"

namespace nsp::cli {

namespace {

using nlohmann::json;

class Reader {
public:
    explicit Reader(std::filesystem::path file) : file_(std::move(file)) {}

    [[noreturn]] void fail(const std::string& where, const std::string& msg) const {
        throw ConfigError(file_.string() + ": " + where + ": " + msg);
    }

    const json& member(const json& obj, const std::string& where, const char* key) const {
        if (!obj.is_object()) fail(where, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) fail(where, std::string("missing required field '") + key + "'");
        return *it;
    }

    double number(const json& obj, const std::string& where, const char* key) const {
        const json& v = member(obj, where, key);
        if (!v.is_number()) fail(where + "/" + key, "expected a number");
        return v.get<double>();
    }

    std::optional<double> optional_number(const json& obj, const std::string& where, const char* key) const {
        if (!obj.contains(key)) return std::nullopt;
        return number(obj, where, key);
    }

    std::string string(const json& obj, const std::string& where, const char* key) const {
        const json& v = member(obj, where, key);
        if (!v.is_string()) fail(where + "/" + key, "expected a string");
        return v.get<std::string>();
    }

    std::filesystem::path data_path(const std::string& rel) const {
        std::filesystem::path p(rel);
        return p.is_absolute() ? p : file_.parent_path() / p;
    }

    template <typename F>
    auto guarded(const std::string& where, F&& build) const {
        try {
            return build();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            fail(where, e.what());
        }
    }

private:
    std::filesystem::path file_;
};

ValuationDistribution read_distribution(const Reader& r, const json& node) {
    const std::string where = "/distribution";
    const std::string kind = r.string(node, where, "kind");
    if (kind == "uniform") {
        const double beta = r.number(node, where, "beta");
        return r.guarded(where, [&] { return ValuationDistribution::uniform(beta); });
    }
    if (kind == "custom") {
        return load_pdf_csv(r.data_path(r.string(node, where, "pdf_file")));
    }
    r.fail(where + "/kind", "expected 'uniform' or 'custom', got '" + kind + "'");
}

QoSModel read_qos(const Reader& r, const json& node, const std::string& where) {
    const std::string type = r.string(node, where, "type");
    if (type == "constant") {
        const double q = r.number(node, where, "q");
        return r.guarded(where, [&] { return QoSModel::constant(q); });
    }
    if (type == "linear") {
        const double q_bar = r.number(node, where, "q_bar");
        const double c = r.number(node, where, "c");
        return r.guarded(where, [&] { return QoSModel::linear(q_bar, c); });
    }
    if (type == "tabulated") {
        return load_qos_csv(r.data_path(r.string(node, where, "file")));
    }
    r.fail(where + "/type", "expected 'constant', 'linear' or 'tabulated', got '" + type + "'");
}

MonopolyVariant read_variant(const Reader& r, const json& node, const std::string& where) {
    const std::string type = r.string(node, where, "type");
    MonopolyVariant v;
    if (type == "synchronous") {
        v = variant::Synchronous{};
    } else if (type == "partial") {
        v = variant::Partial{r.number(node, where, "epsilon")};
    } else if (type == "switching_cost") {
        v = variant::SwitchingCost{r.number(node, where, "cost")};
    } else if (type == "positive_externality") {
        v = variant::PositiveExternality{r.number(node, where, "q_bar"), r.number(node, where, "delta"),
                                         r.number(node, where, "phi"), r.number(node, where, "gamma")};
    } else {
        r.fail(where + "/type", "unknown dynamics variant '" + type + "'");
    }
    r.guarded(where, [&] {
        validate(v);
        return 0;
    });
    return v;
}

DynamicsSpec read_dynamics(const Reader& r, const json& node) {
    const std::string where = "/dynamics";
    DynamicsSpec d;
    if (node.contains("variant")) d.variant = read_variant(r, node.at("variant"), where + "/variant");
    if (node.contains("lambda0")) {
        const json& l0 = node.at("lambda0");
        if (l0.is_number()) {
            d.lambda0_entrant = l0.get<double>();
        } else if (l0.is_array() && l0.size() == 2 && l0[0].is_number() && l0[1].is_number()) {
            d.lambda0_incumbent = l0[0].get<double>();
            d.lambda0_entrant = l0[1].get<double>();
            d.paired_start = true;
        } else {
            r.fail(where + "/lambda0", "expected a number or a [lambda1, lambda2] pair");
        }
    }
    if (node.contains("max_iter")) {
        const json& m = node.at("max_iter");
        if (!m.is_number_integer() || m.get<long long>() < 0) r.fail(where + "/max_iter", "expected a non-negative integer");
        d.options.max_iter = m.get<std::size_t>();
    }
    if (auto tol = r.optional_number(node, where, "tol")) {
        if (!(*tol > 0.0)) r.fail(where + "/tol", "must be positive");
        d.options.tol = *tol;
    }
    return d;
}

}  // namespace

const Technology& Scenario::technology(const std::string& tech_name) const {
    for (const auto& t : technologies) {
        if (t.enters() && (tech_name.empty() || t.name == tech_name)) return t;
    }
    throw ConfigError(source.string() + ": no entering technology named '" + tech_name + "'");
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open scenario file");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    const Reader r(path);
    if (!root.is_object()) r.fail("/", "expected a JSON object");

    Scenario s;
    s.name = path.stem().string();
    s.source = path;
    s.dist = read_distribution(r, r.member(root, "", "distribution"));

    if (root.contains("incumbent")) {
        const double q1 = r.number(root.at("incumbent"), "/incumbent", "q1");
        if (!(q1 > 0.0)) r.fail("/incumbent/q1", "must be positive");
        s.q1 = q1;
    }

    const json& techs = r.member(root, "", "technologies");
    if (!techs.is_array() || techs.empty()) r.fail("/technologies", "expected a non-empty array");
    for (std::size_t i = 0; i < techs.size(); ++i) {
        const std::string where = "/technologies/" + std::to_string(i);
        const json& t = techs[i];
        const std::string name = r.string(t, where, "name");
        if (name == kNotEnter) {
            s.technologies.push_back(Technology::not_enter());
            continue;
        }
        QoSModel qos = read_qos(r, r.member(t, where, "qos"), where + "/qos");
        const double cost = t.contains("cost") ? r.number(t, where, "cost") : 0.0;
        if (s.q1) r.guarded(where + "/qos", [&] {
                validate_against_incumbent(qos, *s.q1);
                return 0;
            });
        s.technologies.push_back(r.guarded(where, [&] { return Technology::make(name, qos, cost); }));
    }

    if (root.contains("prices")) {
        const json& p = root.at("prices");
        s.p1 = r.optional_number(p, "/prices", "p1");
        s.p2 = r.optional_number(p, "/prices", "p2");
        if (s.p1 && !(*s.p1 >= 0.0)) r.fail("/prices/p1", "must be non-negative");
        if (s.p2 && !(*s.p2 >= 0.0)) r.fail("/prices/p2", "must be non-negative");
    }
    if (root.contains("dynamics")) s.dynamics = read_dynamics(r, root.at("dynamics"));
    if (root.contains("metadata")) s.metadata = root.at("metadata");
    return s;
}

}  // namespace nsp::cli
