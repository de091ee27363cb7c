#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "lipiso/metric.hpp"
#include "lipiso/operators.hpp"

namespace lipiso {

using RationalVector = std::vector<Rational>;

/// Dense n x n rational matrix, row-major.
struct RationalMatrix {
    std::size_t n = 0;
    std::vector<Rational> a;

    static RationalMatrix identity(std::size_t n);
    const Rational& operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
    Rational& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }

    RationalVector operator*(const RationalVector& v) const;
    RationalMatrix operator*(const RationalMatrix& other) const;
    Eigen::MatrixXd to_double() const;

    auto operator<=>(const RationalMatrix&) const = default;
    bool operator==(const RationalMatrix&) const = default;
};

/// Gauss-Jordan inverse; nullopt when singular.
std::optional<RationalMatrix> invert(const RationalMatrix& m);

class SizeCapExceeded : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Unit ball of (R^n, ||.||_L) for scalar functions on a finite space:
/// { f : |f(x)| <= 1, |f(x) - f(y)| <= d(x,y) }.
struct UnitBallPolytope {
    std::size_t n = 0;
    std::vector<RationalVector> halfspaces;  // a with a . f <= 1
    std::vector<std::string> halfspace_names;
    std::vector<RationalVector> vertices;    // sorted lexicographically
    std::vector<std::size_t> facets;         // halfspaces that define facets
    std::vector<std::size_t> vertex_degree;  // facets through each vertex
};

inline constexpr std::size_t kUnitBallMaxPoints = 5;
inline constexpr std::size_t kSymmetryMaxPoints = 4;

/// Exact halfspace-to-vertex enumeration by intersecting every n-subset of
/// constraint hyperplanes. Requires an exact space with at most 5 points.
UnitBallPolytope unit_ball(const FiniteMetricSpace& space);

/// Linear maps permuting the vertex set.
struct SymmetryGroup {
    std::size_t n = 0;
    std::vector<RationalMatrix> elements;  // sorted
};

/// Frame matching: fix n independent vertices, try every image frame.
SymmetryGroup symmetry_group(const UnitBallPolytope& ball);

/// Frame search kernels. Both return the same sorted list.
std::vector<RationalMatrix> symmetry_search_serial(const UnitBallPolytope& ball);
std::vector<RationalMatrix> symmetry_search_parallel(const UnitBallPolytope& ball);

struct ClassifiedElement {
    enum class Tag { Standard, Nonstandard, Unexplained };
    Tag tag;
    std::string detail;
};

const char* to_string(ClassifiedElement::Tag tag);

struct ClassificationReport {
    std::size_t order = 0;
    std::size_t standard = 0;
    std::size_t nonstandard = 0;
    std::size_t unexplained = 0;
    std::vector<ClassifiedElement> elements;  // aligned with the group's elements
};

/// Feeds each element to extract_standard_form, else decompose_nonstandard.
ClassificationReport classify_group(const SpacePtr& space, const SymmetryGroup& group, double tol = kOperatorTol);

/// True when the group and the constructive enumeration contain the same matrices.
bool same_operator_set(const SymmetryGroup& group, const std::vector<TaggedOperator>& ops);

}  // namespace lipiso
