#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lipiso/rational.hpp"

namespace lipiso {

/// Raw, unvalidated input for a metric space.
struct RawMetric {
    std::vector<std::string> labels;
    std::vector<std::vector<Rational>> dist;
};

struct MetricViolation {
    enum class Kind { Empty, Shape, DuplicateLabel, NonzeroDiagonal, NonPositive, Asymmetry, Triangle };
    Kind kind;
    std::vector<std::size_t> points;  // offending indices (pair or triple)
    std::string message;
};

const char* to_string(MetricViolation::Kind kind);

struct ValidationReport {
    std::vector<MetricViolation> violations;
    bool valid() const { return violations.empty(); }
};

/// Lists every violated axiom of a raw distance matrix.
ValidationReport validate(const RawMetric& raw);

class InvalidMetric : public std::runtime_error {
  public:
    explicit InvalidMetric(ValidationReport report);
    const ValidationReport& report() const { return report_; }

  private:
    ValidationReport report_;
};

/// A finite metric space with exact rational distances.
///
/// A space produced by power_metric() remembers the exact distances it was
/// derived from, so predicates on it stay exact even though the stored
/// rationals are approximations of d^alpha.
class FiniteMetricSpace {
  public:
    /// Throws InvalidMetric when `raw` fails validation.
    explicit FiniteMetricSpace(const RawMetric& raw);
    FiniteMetricSpace(std::vector<std::string> labels, std::vector<std::vector<Rational>> dist);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    std::optional<std::size_t> index_of(const std::string& label) const;

    /// Stored rational distance (rounded when !exact()).
    const Rational& d(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }
    double d_double(std::size_t i, std::size_t j) const { return dist_double_[i * size() + j]; }
    const std::vector<double>& distances_double() const { return dist_double_; }

    /// Exact distance as base^exponent.
    PowerValue distance(std::size_t i, std::size_t j) const;

    bool exact() const { return exact_; }
    /// Bound on |stored - true| distance; zero for exact spaces.
    const Rational& rounding_bound() const { return rounding_bound_; }
    /// Exponent applied to the base distances (1 unless produced by power_metric).
    const Rational& power() const { return power_; }

    RawMetric raw() const;
    Rational diameter() const;

    bool operator==(const FiniteMetricSpace& other) const;

  private:
    FiniteMetricSpace() = default;
    void finish();

    friend FiniteMetricSpace power_metric(const FiniteMetricSpace&, const Rational&);

    std::vector<std::string> labels_;
    std::vector<Rational> dist_;
    std::vector<double> dist_double_;
    // Exact provenance: true distance = base_^power_.
    std::vector<Rational> base_;
    Rational power_{1};
    bool exact_ = true;
    Rational rounding_bound_{0};
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

/// Partition of the points into R-components.
struct RPartition {
    Rational radius;
    std::vector<std::vector<std::size_t>> blocks;  // each sorted; blocks ordered by least index
    std::vector<std::size_t> block_of;             // point -> block index
};

/// Points share a block iff they are joined by a chain with steps strictly below R.
RPartition r_components(const FiniteMetricSpace& space, const Rational& radius);
bool is_r_connected(const FiniteMetricSpace& space, const Rational& radius);

/// (X, d^alpha) for 0 < alpha <= 1. Exact when every d^alpha is rational.
FiniteMetricSpace power_metric(const FiniteMetricSpace& space, const Rational& alpha);

/// (X, min{2, d}).
FiniteMetricSpace truncate_metric(const FiniteMetricSpace& space);

/// Bijection Y -> X preserving distances < 2 in both directions; h[y] = x.
struct Iso2Witness {
    std::vector<std::size_t> h;

    std::vector<std::size_t> inverse() const;
    bool operator==(const Iso2Witness&) const = default;
    auto operator<=>(const Iso2Witness&) const = default;
};

enum class SearchMode { First, All };

struct Iso2Search {
    std::vector<Iso2Witness> witnesses;
    bool truncated = false;
    std::size_t nodes = 0;
};

/// Backtracking search for Iso(Y, X); witnesses in lexicographic order of h.
Iso2Search iso2_search(const FiniteMetricSpace& y, const FiniteMetricSpace& x, SearchMode mode,
                       std::size_t node_cap = 1'000'000);

/// True when h is a bijection and both h and its inverse preserve distances < 2.
bool is_iso2(const FiniteMetricSpace& y, const FiniteMetricSpace& x, const Iso2Witness& h);

/// Exact distance between two nonempty point sets.
PowerValue set_distance(const FiniteMetricSpace& space, const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b);

}  // namespace lipiso
