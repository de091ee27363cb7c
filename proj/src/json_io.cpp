#include "lipiso/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lipiso::io {

namespace fs = std::filesystem;

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational{j.get<long long>()};
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const ParseError& e) {
            throw InputError(e.what());
        }
    }
    if (j.is_number_float()) {
        // Shortest round-trip decimal of the double; strings are preferred.
        std::ostringstream s;
        s.precision(17);
        s << j.get<double>();
        return parse_rational(s.str());
    }
    throw InputError("expected a rational, got " + j.dump());
}

json rational_to_json(const Rational& r) { return to_string(r); }

RawMetric raw_metric_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dist")) throw InputError("metric space needs a \"dist\" matrix");
    RawMetric raw;
    const json& d = j.at("dist");
    if (!d.is_array()) throw InputError("\"dist\" must be an array of rows");
    for (const auto& row : d) {
        if (!row.is_array()) throw InputError("\"dist\" rows must be arrays");
        std::vector<Rational> r;
        for (const auto& v : row) r.push_back(rational_from_json(v));
        raw.dist.push_back(std::move(r));
    }
    if (j.contains("labels")) {
        for (const auto& l : j.at("labels")) {
            if (!l.is_string()) throw InputError("labels must be strings");
            raw.labels.push_back(l.get<std::string>());
        }
    } else {
        for (std::size_t i = 0; i < raw.dist.size(); ++i) raw.labels.push_back(std::to_string(i));
    }
    return raw;
}

json metric_to_json(const FiniteMetricSpace& space) {
    json dist = json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < space.size(); ++j) row.push_back(rational_to_json(space.d(i, j)));
        dist.push_back(std::move(row));
    }
    json out{{"labels", space.labels()}, {"dist", std::move(dist)}};
    if (!space.exact()) {
        out["exact"] = false;
        out["power"] = rational_to_json(space.power());
    }
    return out;
}

json violations_to_json(const FiniteMetricSpace*, const ValidationReport& report, const RawMetric& raw) {
    json list = json::array();
    for (const auto& v : report.violations) {
        json pts = json::array();
        for (std::size_t p : v.points) pts.push_back(p < raw.labels.size() ? raw.labels[p] : std::to_string(p));
        list.push_back({{"kind", to_string(v.kind)}, {"points", std::move(pts)}, {"message", v.message}});
    }
    return list;
}

SpacePtr space_from_json(const json& j, const fs::path& base) {
    if (j.is_string()) {
        const fs::path p = base.empty() ? fs::path(j.get<std::string>()) : base / j.get<std::string>();
        return space_from_json(read_json(p), p.parent_path());
    }
    return std::make_shared<const FiniteMetricSpace>(raw_metric_from_json(j));
}

NormedSpaceSpec value_space_from_json(const json& j) {
    if (!j.is_object()) throw InputError("value space must be an object");
    const std::string norm = j.value("norm", std::string("scalar"));
    const std::size_t dim = j.value("dim", std::size_t{1});
    std::string p;
    if (j.contains("p")) p = j.at("p").is_string() ? j.at("p").get<std::string>() : j.at("p").dump();
    try {
        return NormedSpaceSpec::parse(norm, dim, p);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

json value_space_to_json(const NormedSpaceSpec& e) {
    json out{{"norm", e.name()}, {"dim", e.dim()}};
    if (e.kind() == NormedSpaceSpec::Kind::Lp) out["p"] = rational_to_json(e.p());
    return out;
}

NormedSpaceSpec value_space_from_flag(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream s(text);
    for (std::string part; std::getline(s, part, ':');) parts.push_back(part);
    if (parts.empty()) throw InputError("empty value space");
    try {
        const std::size_t dim = parts.size() > 1 ? std::stoul(parts[1]) : 1;
        return NormedSpaceSpec::parse(parts[0], dim, parts.size() > 2 ? parts[2] : "");
    } catch (const std::invalid_argument& e) {
        throw InputError("value space '" + text + "': " + e.what());
    }
}

json witness_to_json(const FiniteMetricSpace& space, const TypeAWitness& w) {
    json a = json::array();
    json phi = json::object();
    for (std::size_t k = 0; k < w.a.size(); ++k) {
        a.push_back(space.label(w.a[k]));
        phi[space.label(w.a[k])] = space.label(w.phi[k]);
    }
    json out{{"kind", w.alpha ? "alpha" : "plain"}};
    if (w.alpha) out["alpha"] = rational_to_json(*w.alpha);
    out["A"] = std::move(a);
    out["phi"] = std::move(phi);
    return out;
}

namespace {

std::size_t point(const FiniteMetricSpace& space, const json& label) {
    if (!label.is_string()) throw InputError("point labels must be strings");
    const auto idx = space.index_of(label.get<std::string>());
    if (!idx) throw InputError("unknown point '" + label.get<std::string>() + "'");
    return *idx;
}

}  // namespace

TypeAWitness witness_from_json(const FiniteMetricSpace& space, const json& j) {
    TypeAWitness w;
    if (!j.contains("phi") || !j.at("phi").is_object()) throw InputError("witness needs a \"phi\" object");
    std::vector<std::pair<std::size_t, std::size_t>> graph;
    for (const auto& [from, to] : j.at("phi").items()) graph.emplace_back(point(space, json(from)), point(space, to));
    std::sort(graph.begin(), graph.end());
    for (const auto& [x, y] : graph) {
        if (!w.a.empty() && w.a.back() == x) throw InputError("phi lists a point twice");
        w.a.push_back(x);
        w.phi.push_back(y);
    }
    if (j.value("kind", std::string("plain")) == "alpha") {
        if (!j.contains("alpha")) throw InputError("alpha witness needs \"alpha\"");
        w.alpha = rational_from_json(j.at("alpha"));
    }
    return w;
}

json search_to_json(const FiniteMetricSpace& space, const WitnessSearch& search) {
    json ws = json::array();
    for (const auto& w : search.witnesses) ws.push_back(witness_to_json(space, w));
    return {{"holds", !search.witnesses.empty()},
            {"witness_count", search.witnesses.size()},
            {"truncated", search.truncated},
            {"certified", search.certified},
            {"nodes", search.nodes},
            {"witnesses", std::move(ws)}};
}

json partition_to_json(const FiniteMetricSpace& space, const RPartition& p) {
    json blocks = json::array();
    for (const auto& b : p.blocks) {
        json block = json::array();
        for (std::size_t i : b) block.push_back(space.label(i));
        blocks.push_back(std::move(block));
    }
    return blocks;
}

json iso2_to_json(const FiniteMetricSpace& y, const FiniteMetricSpace& x, const Iso2Witness& h) {
    json out = json::object();
    for (std::size_t i = 0; i < h.h.size(); ++i) out[y.label(i)] = x.label(h.h[i]);
    return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        // Normalize -0 so output is byte-stable.
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c) == 0.0 ? 0.0 : m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) throw InputError("matrix must be a nonempty array of rows");
    const std::size_t rows = j.size(), cols = j.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw InputError("matrix rows differ in length");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& v = j[r][c];
            if (!v.is_number()) throw InputError("matrix entries must be numbers");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v.get<double>();
        }
    }
    return m;
}

json operator_to_json(const LipOperator& t) {
    return {{"domain", {{"space", metric_to_json(*t.domain_space())}, {"values", value_space_to_json(t.domain_values())}}},
            {"codomain",
             {{"space", metric_to_json(*t.codomain_space())}, {"values", value_space_to_json(t.codomain_values())}}},
            {"matrix", matrix_to_json(t.matrix())}};
}

LipOperator operator_from_json(const json& j, const fs::path& base) {
    for (const char* key : {"domain", "codomain", "matrix"})
        if (!j.contains(key)) throw InputError(std::string("operator needs \"") + key + "\"");
    auto side = [&](const json& s) {
        if (!s.contains("space")) throw InputError("operator side needs \"space\"");
        return std::make_pair(space_from_json(s.at("space"), base),
                              value_space_from_json(s.value("values", json{{"norm", "scalar"}})));
    };
    auto [x, e] = side(j.at("domain"));
    auto [y, f] = side(j.at("codomain"));
    try {
        return LipOperator(x, e, y, f, matrix_from_json(j.at("matrix")));
    } catch (const ShapeMismatch& err) {
        throw InputError(err.what());
    }
}

json standard_form_to_json(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const StandardForm& form) {
    json j = json::array();
    for (std::size_t b = 0; b < form.j.size(); ++b) {
        json block = json::array();
        for (std::size_t i : form.components.blocks[b]) block.push_back(y.label(i));
        j.push_back({{"component", std::move(block)},
                     {"flavor", to_string(form.j[b].flavor)},
                     {"matrix", matrix_to_json(form.j[b].matrix)}});
    }
    return {{"h", iso2_to_json(y, x, form.h)}, {"j", std::move(j)}};
}

json function_to_json(const LipFunction& f) {
    json values = json::array();
    for (std::size_t x = 0; x < f.space()->size(); ++x) {
        json v = json::array();
        for (double c : f.at(x)) v.push_back(c == 0.0 ? 0.0 : c);
        values.push_back(std::move(v));
    }
    return {{"values", std::move(values)}};
}

json report_to_json(const VerificationReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"skipped", c.skipped}, {"detail", c.detail}});
    json out{{"status", to_string(report.status)},
             {"samples", report.samples},
             {"max_deviation", report.max_deviation},
             {"checks", std::move(checks)}};
    if (report.counterexample) {
        json ce = function_to_json(*report.counterexample);
        ce["source"] = report.counterexample_source;
        out["counterexample"] = std::move(ce);
    } else {
        out["counterexample"] = nullptr;
    }
    return out;
}

}  // namespace lipiso::io
