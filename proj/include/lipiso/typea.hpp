#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lipiso/metric.hpp"

namespace lipiso {

/// Partition (A, B = X \ A) with a map phi: A -> B certifying type A or type A_alpha.
struct TypeAWitness {
    std::vector<std::size_t> a;    // sorted
    std::vector<std::size_t> phi;  // phi[k] is the image of a[k]
    /// Unset for plain type A; the exponent for type A_alpha.
    std::optional<Rational> alpha;

    std::size_t image(std::size_t x) const;  // phi(x); throws if x is not in A
    bool contains(std::size_t x) const;
    std::vector<std::size_t> b(std::size_t n) const;

    bool operator==(const TypeAWitness&) const = default;
};

/// Canonical order: by sorted A, then by the phi graph.
bool canonical_less(const TypeAWitness& lhs, const TypeAWitness& rhs);

class MalformedWitness : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct WitnessCheck {
    bool valid = true;
    /// 1, 2 or 3 for the violated condition; 0 when valid.
    int condition = 0;
    /// Offending points (x, z) or (x1, x2).
    std::size_t first = 0;
    std::size_t second = 0;
    std::string message;
    /// False when some comparison needed the tolerance override.
    bool certified = true;
};

/// Evaluates the type-A (or type-A_alpha) conditions exactly. Throws
/// MalformedWitness when A is empty, A = X, or phi leaves B.
WitnessCheck check_witness(const FiniteMetricSpace& space, const TypeAWitness& w, const ComparePolicy& policy = {});

struct WitnessSearch {
    std::vector<TypeAWitness> witnesses;  // canonical order
    bool truncated = false;
    std::size_t nodes = 0;
    bool certified = true;
};

struct SearchOptions {
    SearchMode mode = SearchMode::All;
    std::size_t node_cap = 1'000'000;
    ComparePolicy policy;
};

WitnessSearch find_type_a_witness(const FiniteMetricSpace& space, const SearchOptions& options = {});

/// alpha must lie in (0, 1).
WitnessSearch find_type_a_alpha_witness(const FiniteMetricSpace& space, const Rational& alpha,
                                        const SearchOptions& options = {});

/// Cross-check of "(X, d^alpha) is type A" against "(X, d) is type A_alpha".
struct EquivalenceReport {
    Rational alpha;
    WitnessSearch power_type_a;
    WitnessSearch type_a_alpha;
    bool consistent() const {
        return power_type_a.witnesses.empty() == type_a_alpha.witnesses.empty();
    }
    bool conclusive() const { return !power_type_a.truncated && !type_a_alpha.truncated; }
};

/// Throws UndecidedComparison when d^alpha comparisons cannot be certified
/// and `options.policy` carries no tolerance.
EquivalenceReport check_pesafrank(const FiniteMetricSpace& space, const Rational& alpha, SearchOptions options = {});

}  // namespace lipiso
