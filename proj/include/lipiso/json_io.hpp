#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lipiso/funcspace.hpp"
#include "lipiso/metric.hpp"
#include "lipiso/operators.hpp"
#include "lipiso/typea.hpp"
#include "lipiso/verify.hpp"

namespace lipiso::io {

using json = nlohmann::ordered_json;

/// Malformed or unreadable input (anything other than a metric-axiom violation).
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

json read_json(const std::filesystem::path& path);

// Rationals travel as strings ("3/2", "0.25") or JSON integers.
Rational rational_from_json(const json& j);
json rational_to_json(const Rational& r);

/// {"labels": [...], "dist": [[...], ...]}; labels default to "0", "1", ...
RawMetric raw_metric_from_json(const json& j);
json metric_to_json(const FiniteMetricSpace& space);
json violations_to_json(const FiniteMetricSpace* space, const ValidationReport& report, const RawMetric& raw);

/// Accepts an inline space object or a path string resolved against `base`.
SpacePtr space_from_json(const json& j, const std::filesystem::path& base = {});

/// {"norm": "scalar" | "l2" | "lp", "dim": n, "p": "3"}
NormedSpaceSpec value_space_from_json(const json& j);
json value_space_to_json(const NormedSpaceSpec& e);
/// Compact flag form: "scalar", "l2:2", "lp:2:3".
NormedSpaceSpec value_space_from_flag(const std::string& text);

json witness_to_json(const FiniteMetricSpace& space, const TypeAWitness& w);
TypeAWitness witness_from_json(const FiniteMetricSpace& space, const json& j);
json search_to_json(const FiniteMetricSpace& space, const WitnessSearch& search);

json partition_to_json(const FiniteMetricSpace& space, const RPartition& p);
/// {"y": "x", ...}
json iso2_to_json(const FiniteMetricSpace& y, const FiniteMetricSpace& x, const Iso2Witness& h);

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);

/// {"domain": {"space", "values"}, "codomain": {...}, "matrix": [[...]]}
json operator_to_json(const LipOperator& t);
LipOperator operator_from_json(const json& j, const std::filesystem::path& base = {});

json standard_form_to_json(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const StandardForm& form);
json function_to_json(const LipFunction& f);
json report_to_json(const VerificationReport& report);

}  // namespace lipiso::io
