#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lipiso/metric.hpp"

namespace lipiso {

class NotStrictlyConvex : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Finite-dimensional real value space with a strictly convex l_p norm.
class NormedSpaceSpec {
  public:
    enum class Kind { Scalar, Euclidean, Lp };

    static NormedSpaceSpec scalar();
    static NormedSpaceSpec euclidean(std::size_t dim);
    /// p = 2 yields the Euclidean spec; p <= 1 is rejected (l_1 is not strictly convex).
    static NormedSpaceSpec lp(std::size_t dim, const Rational& p);
    /// "scalar", "l2", "lp" (with p), "l1"/"linf" rejected.
    static NormedSpaceSpec parse(const std::string& norm, std::size_t dim, const std::string& p = {});

    Kind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    const Rational& p() const { return p_; }
    std::string name() const;  // "scalar", "l2", "lp"

    double norm(std::span<const double> v) const;

    /// E and F are linearly isometric iff dimensions agree and (dim 1 or same p).
    bool isometric_to(const NormedSpaceSpec& other) const;

    bool operator==(const NormedSpaceSpec&) const = default;

  private:
    NormedSpaceSpec(Kind kind, std::size_t dim, Rational p) : kind_(kind), dim_(dim), p_(std::move(p)) {}
    Kind kind_;
    std::size_t dim_;
    Rational p_;
    double p_double_ = 2.0;
};

/// A function X -> E stored point-major: values[x * dim + i].
class LipFunction {
  public:
    LipFunction(SpacePtr space, NormedSpaceSpec codomain, std::vector<double> values);
    LipFunction(SpacePtr space, NormedSpaceSpec codomain);  // zero function

    const SpacePtr& space() const { return space_; }
    const NormedSpaceSpec& codomain() const { return codomain_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    std::span<const double> at(std::size_t x) const { return {values_.data() + x * codomain_.dim(), codomain_.dim()}; }
    std::span<double> at(std::size_t x) { return {values_.data() + x * codomain_.dim(), codomain_.dim()}; }

    LipFunction& operator+=(const LipFunction& other);
    LipFunction& operator*=(double s);
    friend LipFunction operator+(LipFunction a, const LipFunction& b) { return a += b; }
    friend LipFunction operator-(LipFunction a, const LipFunction& b) { return a += b * -1.0; }
    friend LipFunction operator*(LipFunction a, double s) { return a *= s; }

  private:
    SpacePtr space_;
    NormedSpaceSpec codomain_;
    std::vector<double> values_;
};

struct NormTriple {
    double sup = 0;
    double lip = 0;
    double lipnorm = 0;
};

double sup_norm(const LipFunction& f);
double lipschitz_number(const LipFunction& f);
NormTriple lip_norm(const LipFunction& f);

/// Kernels on flat value arrays; `dist` is the row-major n x n distance matrix.
double sup_norm(std::span<const double> values, const NormedSpaceSpec& e, std::size_t n);
double lipschitz_number(std::span<const double> values, const NormedSpaceSpec& e, std::span<const double> dist,
                        std::size_t n);

LipFunction constant_fn(SpacePtr space, const NormedSpaceSpec& e, std::span<const double> value);
LipFunction indicator_fn(SpacePtr space, const NormedSpaceSpec& e, const std::vector<std::size_t>& set,
                         std::span<const double> value);

/// Extremal test functions for the ‖·‖_L geometry.
enum class ProbeKind {
    Bump,     // max{0, 2 - d(x, x0)} e
    Cone,     // max{0, 1 - d(x, x0)/D} e
    Tent,     // max{-1, 1 - 2 d(x, x0)/D} e
    DistCap,  // min{1, d(x, x0)} e
};

const char* to_string(ProbeKind kind);

struct ProbeSpec {
    ProbeKind kind = ProbeKind::Bump;
    std::size_t anchor = 0;
    /// Scale D for Cone/Tent; must be positive. Ignored otherwise.
    double scale = 1.0;
};

LipFunction make_probe(SpacePtr space, const NormedSpaceSpec& e, const ProbeSpec& probe, std::span<const double> direction);

/// Tent anchored at x1 with D = d(x1, x2): value e at x1 and -e at x2.
LipFunction make_tent(SpacePtr space, const NormedSpaceSpec& e, std::size_t x1, std::size_t x2,
                      std::span<const double> direction);

/// Every probe at every anchor in each of the given directions.
std::vector<LipFunction> probe_library(const SpacePtr& space, const NormedSpaceSpec& e);

/// Standard basis vector e_i of the value space.
std::vector<double> basis_vector(const NormedSpaceSpec& e, std::size_t i);

}  // namespace lipiso
