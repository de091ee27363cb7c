// lipiso: command-line front end. JSON on stdout is the stable contract; text is for humans.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lipiso/json_io.hpp"
#include "lipiso/kernels.hpp"
#include "lipiso/oracle.hpp"

using namespace lipiso;
using io::json;

namespace {

enum Exit { kOk = 0, kInputError = 2, kConditionFailed = 3, kVerificationFailed = 4 };

struct Config {
    std::string command;
    std::vector<std::string> inputs;
    std::string alpha;
    double tol = kOperatorTol;
    std::string seed = "0x5eed";
    std::size_t samples = 1000;
    std::string format = "json";
    std::size_t node_cap = 1'000'000;
    int threads = 0;
    bool meta = false;
    std::string value_space = "scalar";
    std::string codomain_value_space;
    bool nonstandard = false;
    std::string output;
};

struct CommandError {
    int code;
    json body;
};

[[noreturn]] void fail(int code, const std::string& kind, const std::string& message, json extra = json::object()) {
    json body{{"error", kind}, {"message", message}};
    for (auto& [k, v] : extra.items()) body[k] = v;
    throw CommandError{code, std::move(body)};
}

std::uint64_t parse_seed(const std::string& s) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used, 0);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(kInputError, "input_error", "bad --seed '" + s + "'");
    }
}

json config_header(const Config& c) {
    json inputs = c.inputs;
    json out{{"command", c.command},
             {"inputs", std::move(inputs)},
             {"alpha", c.alpha.empty() ? json(nullptr) : json(c.alpha)},
             {"tol", c.tol},
             {"seed", parse_seed(c.seed)},
             {"samples", c.samples},
             {"format", c.format},
             {"node_cap", c.node_cap},
             {"threads", c.threads}};
    if (c.command == "synthesize" || c.command == "classify") {
        out["value_space"] = c.value_space;
        out["codomain_value_space"] = c.codomain_value_space.empty() ? c.value_space : c.codomain_value_space;
    }
    if (c.command == "synthesize") out["nonstandard"] = c.nonstandard;
    return out;
}

SpacePtr load_space(const std::string& path) {
    const json j = io::read_json(path);
    const RawMetric raw = io::raw_metric_from_json(j);
    const ValidationReport report = validate(raw);
    if (!report.valid())
        fail(kInputError, "invalid_metric", path + " is not a metric space",
             {{"violations", io::violations_to_json(nullptr, report, raw)}});
    return std::make_shared<const FiniteMetricSpace>(raw);
}

std::optional<Rational> parse_alpha(const Config& c) {
    if (c.alpha.empty()) return std::nullopt;
    Rational a;
    try {
        a = parse_rational(c.alpha);
    } catch (const ParseError& e) {
        fail(kInputError, "input_error", e.what());
    }
    if (a <= 0 || a >= 1) fail(kInputError, "input_error", "--alpha must lie in (0, 1)");
    return a;
}

SearchOptions search_options(const Config& c) {
    SearchOptions o;
    o.node_cap = c.node_cap;
    return o;
}

VerifyOptions verify_options(const Config& c) {
    VerifyOptions o;
    o.samples = c.samples;
    o.seed = parse_seed(c.seed);
    o.tol = c.tol;
    return o;
}

json cmd_analyze(const Config& c) {
    const SpacePtr x = load_space(c.inputs.at(0));
    const auto alpha = parse_alpha(c);
    const RPartition one = r_components(*x, Rational{1});
    const RPartition two = r_components(*x, Rational{2});
    json out{{"space", {{"size", x->size()}, {"labels", x->labels()}, {"diameter", io::rational_to_json(x->diameter())}}},
             {"components", {{"1", io::partition_to_json(*x, one)}, {"2", io::partition_to_json(*x, two)}}},
             {"connected", {{"1", one.blocks.size() == 1}, {"2", two.blocks.size() == 1}}},
             {"type_a", io::search_to_json(*x, find_type_a_witness(*x, search_options(c)))}};
    if (alpha) {
        SearchOptions o = search_options(c);
        EquivalenceReport eq;
        try {
            eq = check_pesafrank(*x, *alpha, o);
        } catch (const UndecidedComparison& e) {
            fail(kConditionFailed, "undecided_comparison", e.what());
        }
        out["alpha"] = {{"value", io::rational_to_json(*alpha)},
                        {"type_a_alpha", io::search_to_json(*x, eq.type_a_alpha)},
                        {"power_type_a", io::search_to_json(*x, eq.power_type_a)},
                        {"pesafrank", {{"consistent", eq.consistent()}, {"conclusive", eq.conclusive()}}}};
    }
    return out;
}

std::pair<NormedSpaceSpec, NormedSpaceSpec> value_spaces(const Config& c) {
    const NormedSpaceSpec e = io::value_space_from_flag(c.value_space);
    const NormedSpaceSpec f = c.codomain_value_space.empty() ? e : io::value_space_from_flag(c.codomain_value_space);
    return {e, f};
}

std::vector<ValueIsometry> identity_j(const RPartition& comp, const NormedSpaceSpec& e, const NormedSpaceSpec& f) {
    const auto dim = static_cast<Eigen::Index>(e.dim());
    return std::vector<ValueIsometry>(comp.blocks.size(),
                                      make_value_isometry(e, f, Eigen::MatrixXd::Identity(dim, dim)));
}

json cmd_synthesize(const Config& c) {
    const SpacePtr x = load_space(c.inputs.at(0));
    const SpacePtr y = load_space(c.inputs.at(1));
    const auto [e, f] = value_spaces(c);
    SearchOptions first = search_options(c);
    first.mode = SearchMode::First;

    std::optional<TypeAWitness> phi;
    if (c.nonstandard) {
        if (find_type_a_witness(*x, first).witnesses.empty()) fail(kConditionFailed, "condition_failed", "X not type A");
        const WitnessSearch ys = find_type_a_witness(*y, first);
        if (ys.witnesses.empty()) fail(kConditionFailed, "condition_failed", "Y not type A");
        phi = ys.witnesses.front();
    }
    const Iso2Search iso = iso2_search(*y, *x, SearchMode::First, c.node_cap);
    if (iso.witnesses.empty()) fail(kConditionFailed, "condition_failed", "Iso(Y,X) empty");
    if (!e.isometric_to(f)) fail(kConditionFailed, "condition_failed", "E and F not isometric");

    const Iso2Witness& h = iso.witnesses.front();
    LipOperator t = build_standard(h, identity_j(r_components(*y, Rational{2}), e, f), x, e, y, f);
    if (phi) t = compose(build_s_phi(*phi, y, f), t);

    json op = io::operator_to_json(t);
    json provenance{{"h", io::iso2_to_json(*y, *x, h)}, {"standard", !phi}};
    if (phi) provenance["phi"] = io::witness_to_json(*y, *phi);
    op["construction"] = std::move(provenance);
    if (!c.output.empty()) {
        std::ofstream out(c.output);
        if (!out) fail(kInputError, "input_error", "cannot write " + c.output);
        out << op.dump(2) << '\n';
        return {{"written", c.output}, {"construction", op["construction"]}};
    }
    // Top-level operator fields so stdout is itself a valid operator file.
    return op;
}

LipOperator load_operator(const std::string& path) {
    const json j = io::read_json(path);
    try {
        return io::operator_from_json(j, std::filesystem::path(path).parent_path());
    } catch (const InvalidMetric& e) {
        fail(kInputError, "invalid_metric", e.what());
    }
}

json cmd_verify(const Config& c, int& code) {
    const LipOperator t = load_operator(c.inputs.at(0));
    const VerifyOptions o = verify_options(c);
    const VerificationReport iso = verify_isometry(t, o);
    json out{{"isometry", io::report_to_json(iso)}};
    bool ok = iso.passed();
    if (iso.passed()) {
        const VerificationReport st = verify_structure(t, o);
        ok = ok && st.passed();
        out["structure"] = io::report_to_json(st);
        // These two only apply under Property P; PropertyPFails is informative, not a failure.
        const VerificationReport sup = verify_sup_isometry(t, o);
        const VerificationReport sep = verify_biseparating(t, o);
        out["sup_isometry"] = io::report_to_json(sup);
        out["biseparating"] = io::report_to_json(sep);
        for (const auto* r : {&sup, &sep})
            if (r->status == VerificationReport::Status::Fail) ok = false;
    }
    out["passed"] = ok;
    if (!ok) code = kVerificationFailed;
    return out;
}

json cmd_decompose(const Config& c) {
    const LipOperator t = load_operator(c.inputs.at(0));
    const auto& x = *t.domain_space();
    const auto& y = *t.codomain_space();
    try {
        if (check_property_p(t, c.tol).holds) {
            const StandardForm form = extract_standard_form(t, c.tol);
            return {{"kind", "standard"}, {"standard_form", io::standard_form_to_json(x, y, form)}};
        }
        const NonstandardDecomposition d = decompose_nonstandard(t, c.tol);
        const LipOperator rebuilt = compose(build_s_phi(d.phi_witness, t.codomain_space(), t.codomain_values()),
                                            build_standard(d.standard_part, t.domain_space(), t.domain_values(),
                                                           t.codomain_space(), t.codomain_values()));
        return {{"kind", "nonstandard"},
                {"phi", io::witness_to_json(y, d.phi_witness)},
                {"standard_part", io::standard_form_to_json(x, y, d.standard_part)},
                {"reconstruction_error", max_abs_difference(rebuilt, t)}};
    } catch (const NotStandard& e) {
        fail(kConditionFailed, "not_standard", e.what());
    } catch (const NoTypeAStructure& e) {
        fail(kConditionFailed, "no_type_a_structure", e.what());
    } catch (const ResidualNotStandard& e) {
        fail(kConditionFailed, "residual_not_standard", e.what());
    } catch (const NotSurjective& e) {
        fail(kConditionFailed, "not_surjective", e.what());
    }
}

json rational_matrix_json(const RationalMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.n; ++r) {
        json row = json::array();
        for (std::size_t k = 0; k < m.n; ++k) row.push_back(io::rational_to_json(m(r, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json cmd_oracle(const Config& c) {
    const SpacePtr x = load_space(c.inputs.at(0));
    if (x->size() > kSymmetryMaxPoints)
        fail(kInputError, "size_cap", "oracle handles at most " + std::to_string(kSymmetryMaxPoints) + " points");
    const UnitBallPolytope ball = unit_ball(*x);
    const SymmetryGroup group = symmetry_group(ball);
    const ClassificationReport cls = classify_group(x, group, c.tol);
    const NormedSpaceSpec scalar = NormedSpaceSpec::scalar();
    const auto ops = enumerate_isometries(x, x, scalar, scalar);
    const auto nonstandard = static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [](const auto& t) { return !t.standard; }));

    json elements = json::array();
    for (std::size_t k = 0; k < group.elements.size(); ++k)
        elements.push_back({{"matrix", rational_matrix_json(group.elements[k])},
                            {"tag", to_string(cls.elements[k].tag)},
                            {"detail", cls.elements[k].detail}});
    return {{"unit_ball", {{"dimension", ball.n}, {"vertices", ball.vertices.size()}, {"facets", ball.facets.size()}}},
            {"group", {{"order", group.elements.size()}, {"elements", std::move(elements)}}},
            {"classification",
             {{"standard", cls.standard}, {"nonstandard", cls.nonstandard}, {"unexplained", cls.unexplained}}},
            {"enumeration",
             {{"standard", ops.size() - nonstandard},
              {"nonstandard", nonstandard},
              {"matches_group", same_operator_set(group, ops)}}}};
}

json cmd_classify(const Config& c) {
    const SpacePtr x = load_space(c.inputs.at(0));
    const SpacePtr y = load_space(c.inputs.at(1));
    const auto [e, f] = value_spaces(c);
    const Iso2Search iso = iso2_search(*y, *x, SearchMode::First, c.node_cap);
    const bool values = e.isometric_to(f);
    return {{"isometric", !iso.witnesses.empty() && values},
            {"iso2_witness", iso.witnesses.empty() ? json(nullptr) : io::iso2_to_json(*y, *x, iso.witnesses.front())},
            {"iso2_truncated", iso.truncated},
            {"value_spaces_isometric", values},
            {"domain_values", io::value_space_to_json(e)},
            {"codomain_values", io::value_space_to_json(f)}};
}

json cmd_norm(const Config& c) {
    const json j = io::read_json(c.inputs.at(0));
    if (!j.contains("space") || !j.contains("values")) fail(kInputError, "input_error", "function needs \"space\" and \"values\"");
    const SpacePtr x = io::space_from_json(j.at("space"), std::filesystem::path(c.inputs.at(0)).parent_path());
    const NormedSpaceSpec e = io::value_space_from_json(j.value("codomain", json{{"norm", "scalar"}}));
    std::vector<double> values;
    for (const auto& row : j.at("values")) {
        if (row.is_array())
            for (const auto& v : row) values.push_back(v.get<double>());
        else
            values.push_back(row.get<double>());
    }
    if (values.size() != x->size() * e.dim()) fail(kInputError, "input_error", "values do not match the space and codomain");
    const LipFunction fn(x, e, values);
    const NormTriple n = lip_norm(fn);
    const NormTriple nt = lip_norm(LipFunction(std::make_shared<const FiniteMetricSpace>(truncate_metric(*x)), e, values));
    return {{"sup", n.sup}, {"lipschitz", n.lip}, {"lip_norm", n.lipnorm}, {"lip_norm_truncated", nt.lipnorm}};
}

// Indented key/value dump; unstable by design.
void render_text(const json& j, std::ostream& out, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            out << pad << key << ":\n";
            render_text(value, out, indent + 2);
        } else if (value.is_array() && !value.empty() && value.front().is_object()) {
            out << pad << key << ": " << value.size() << " item(s)\n";
            for (const auto& item : value) {
                out << pad << "  -\n";
                render_text(item, out, indent + 4);
            }
        } else {
            out << pad << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surjective linear isometries of vector-valued Lipschitz spaces on finite metric spaces"};
    app.require_subcommand(1);
    Config c;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--tol", c.tol, "tolerance for operator checks")->capture_default_str();
        sub->add_option("--seed", c.seed, "64-bit sampling seed (decimal or 0x hex)")->capture_default_str();
        sub->add_option("--samples", c.samples, "random functions per suite")->capture_default_str();
        sub->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
        sub->add_option("--node-cap", c.node_cap, "backtracking node budget")->capture_default_str();
        sub->add_option("--threads", c.threads, "OpenMP thread cap (0: LIPISO_THREADS or runtime default)");
        sub->add_flag("--meta", c.meta, "append a timestamped meta block");
    };
    auto values = [&](CLI::App* sub) {
        sub->add_option("--value-space", c.value_space, "E: scalar, l2:<dim> or lp:<dim>:<p>")->capture_default_str();
        sub->add_option("--codomain-value-space", c.codomain_value_space, "F when it differs from E");
    };

    auto* analyze = app.add_subcommand("analyze", "components, connectedness and type-A witnesses of a space");
    analyze->add_option("space", c.inputs, "metric space JSON")->required()->expected(1);
    analyze->add_option("--alpha", c.alpha, "also decide type A_alpha and cross-check (X, d^alpha)");
    common(analyze);

    auto* synth = app.add_subcommand("synthesize", "build an isometry Lip(X,E) -> Lip(Y,F)");
    synth->add_option("spaces", c.inputs, "domain and codomain spaces")->required()->expected(2);
    synth->add_flag("--nonstandard", c.nonstandard, "compose with S_phi for a type-A witness of Y");
    synth->add_option("-o,--output", c.output, "write the operator here instead of stdout");
    values(synth);
    common(synth);

    auto* verify = app.add_subcommand("verify", "run the verification suites on an operator");
    verify->add_option("operator", c.inputs, "operator JSON")->required()->expected(1);
    common(verify);

    auto* decompose = app.add_subcommand("decompose", "recover the standard form or S_phi decomposition");
    decompose->add_option("operator", c.inputs, "operator JSON")->required()->expected(1);
    common(decompose);

    auto* oracle = app.add_subcommand("oracle", "unit-ball symmetry group of a small scalar space, classified");
    oracle->add_option("space", c.inputs, "metric space JSON")->required()->expected(1);
    common(oracle);

    auto* classify = app.add_subcommand("classify", "decide whether Lip(X,E) and Lip(Y,F) are isometric");
    classify->add_option("spaces", c.inputs, "two spaces")->required()->expected(2);
    values(classify);
    common(classify);

    auto* norm = app.add_subcommand("norm", "sup, Lipschitz and Lip norms of a function");
    norm->add_option("function", c.inputs, "function JSON")->required()->expected(1);
    common(norm);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }
    c.command = app.get_subcommands().front()->get_name();

    if (c.threads <= 0)
        if (const char* env = std::getenv("LIPISO_THREADS")) c.threads = std::atoi(env);
    set_thread_limit(c.threads);

    int code = kOk;
    json out;
    try {
        json header = config_header(c);
        json body;
        if (c.command == "analyze") body = cmd_analyze(c);
        else if (c.command == "synthesize") body = cmd_synthesize(c);
        else if (c.command == "verify") body = cmd_verify(c, code);
        else if (c.command == "decompose") body = cmd_decompose(c);
        else if (c.command == "oracle") body = cmd_oracle(c);
        else if (c.command == "classify") body = cmd_classify(c);
        else body = cmd_norm(c);
        out = json{{"config", std::move(header)}};
        for (auto& [k, v] : body.items()) out[k] = std::move(v);
    } catch (const CommandError& e) {
        code = e.code;
        out = e.body;
    } catch (const io::InputError& e) {
        code = kInputError;
        out = {{"error", "input_error"}, {"message", e.what()}};
    } catch (const InvalidMetric& e) {
        code = kInputError;
        out = {{"error", "invalid_metric"}, {"message", e.what()}};
    } catch (const SizeCapExceeded& e) {
        code = kInputError;
        out = {{"error", "size_cap"}, {"message", e.what()}};
    } catch (const InfiniteValueGroup& e) {
        code = kConditionFailed;
        out = {{"error", "infinite_value_group"}, {"message", e.what()}};
    } catch (const std::invalid_argument& e) {
        code = kInputError;
        out = {{"error", "input_error"}, {"message", e.what()}};
    } catch (const std::exception& e) {
        code = kConditionFailed;
        out = {{"error", "failed"}, {"message", e.what()}};
    }
    if (c.meta) {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        out["meta"] = {{"unix_time", std::chrono::duration_cast<std::chrono::seconds>(now).count()},
                       {"version", "0.1.0"}};
    }
    if (c.format == "text") render_text(out, std::cout);
    else std::cout << out.dump(2) << '\n';
    return code;
}
