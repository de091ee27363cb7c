#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lipiso/funcspace.hpp"
#include "lipiso/metric.hpp"
#include "lipiso/typea.hpp"

namespace lipiso {

/// Default tolerance for checks on operators read from data.
inline constexpr double kOperatorTol = 1e-9;
/// Tolerance for identities of constructed matrices.
inline constexpr double kConstructionTol = 1e-12;

/// A linear map Lip(X, E) -> Lip(Y, F) as a dense matrix.
///
/// Row index is y * dim F + j, column index is x * dim E + i.
class LipOperator {
  public:
    LipOperator(SpacePtr x, NormedSpaceSpec e, SpacePtr y, NormedSpaceSpec f, Eigen::MatrixXd matrix);

    static LipOperator identity(SpacePtr x, NormedSpaceSpec e);

    const SpacePtr& domain_space() const { return x_; }
    const NormedSpaceSpec& domain_values() const { return e_; }
    const SpacePtr& codomain_space() const { return y_; }
    const NormedSpaceSpec& codomain_values() const { return f_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }

    /// dim F x dim E block coupling output point y to input point x.
    Eigen::MatrixXd block(std::size_t y, std::size_t x) const;

  private:
    SpacePtr x_;
    NormedSpaceSpec e_;
    SpacePtr y_;
    NormedSpaceSpec f_;
    Eigen::MatrixXd matrix_;
};

class ShapeMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class NotSurjective : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

LipFunction apply(const LipOperator& t, const LipFunction& f);
/// t2 after t1; requires codomain(t1) == domain(t2).
LipOperator compose(const LipOperator& t2, const LipOperator& t1);
/// Throws NotSurjective when the matrix is singular.
LipOperator inverse(const LipOperator& t);
double max_abs_difference(const LipOperator& a, const LipOperator& b);

/// A linear isometry E -> F.
struct ValueIsometry {
    enum class Flavor { Orthogonal, SignedPermutation, Sign };
    Eigen::MatrixXd matrix;
    Flavor flavor;
};

const char* to_string(ValueIsometry::Flavor flavor);

class InvalidValueIsometry : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class InfiniteValueGroup : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Flavor of I(E, F); throws InvalidValueIsometry when E and F are not isometric.
ValueIsometry::Flavor value_flavor(const NormedSpaceSpec& e, const NormedSpaceSpec& f);

/// Validates `m` as an element of I(E, F). Signed permutations and signs are snapped to exact entries.
ValueIsometry make_value_isometry(const NormedSpaceSpec& e, const NormedSpaceSpec& f, const Eigen::MatrixXd& m,
                                  double tol = kConstructionTol);

/// All of I(E, F) when finite (signs or signed permutations); sorted.
std::vector<ValueIsometry> value_isometry_group(const NormedSpaceSpec& e, const NormedSpaceSpec& f);

/// Tf(y) = J_y(f(h(y))) with J constant on 2-components of Y.
struct StandardForm {
    Iso2Witness h;
    RPartition components;          // 2-components of Y
    std::vector<ValueIsometry> j;   // one per block of `components`

    const ValueIsometry& j_at(std::size_t y) const { return j[components.block_of[y]]; }
};

class InvalidStandardData : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Throws InvalidStandardData when h is not in Iso(Y, X) or the J list does not match Comp_2(Y).
LipOperator build_standard(const Iso2Witness& h, const std::vector<ValueIsometry>& j, SpacePtr x,
                           const NormedSpaceSpec& e, SpacePtr y, const NormedSpaceSpec& f);
LipOperator build_standard(const StandardForm& form, SpacePtr x, const NormedSpaceSpec& e, SpacePtr y,
                           const NormedSpaceSpec& f);

/// S_phi f = f on B and f(phi(x)) - f(x) on A. Throws MalformedWitness or
/// InvalidStandardData when the witness fails its conditions.
LipOperator build_s_phi(const TypeAWitness& w, SpacePtr x, const NormedSpaceSpec& e);

struct PropertyPResult {
    bool holds = true;
    /// Per output point: index of a basis vector e_i with T(e_i~)(y) != 0.
    std::vector<std::optional<std::size_t>> witness;
};

PropertyPResult check_property_p(const LipOperator& t, double tol = kOperatorTol);

struct ABPartition {
    std::vector<std::size_t> a;  // points where every constant maps to 0
    std::vector<std::size_t> b;
};

ABPartition compute_ab_partition(const LipOperator& t, double tol = kOperatorTol);

class NotStandard : public std::runtime_error {
  public:
    enum class Reason { ResponseCount, NotBijective, InvalidJ, JNotConstant, NotIso2, RoundTrip };
    NotStandard(Reason reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
    Reason reason() const { return reason_; }

  private:
    Reason reason_;
};

/// Recovers (h, J) by probing with the indicator basis. Throws NotStandard.
StandardForm extract_standard_form(const LipOperator& t, double tol = kOperatorTol);

class NoTypeAStructure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ResidualNotStandard : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// T = S_phi o T' with T' standard.
struct NonstandardDecomposition {
    TypeAWitness phi_witness;  // on Y
    StandardForm standard_part;
    Eigen::MatrixXd residual;  // matrix of T' = S_phi o T
};

/// Requires A(T) nonempty. Throws NoTypeAStructure or ResidualNotStandard.
NonstandardDecomposition decompose_nonstandard(const LipOperator& t, double tol = kOperatorTol);

struct TaggedOperator {
    LipOperator op;
    bool standard = true;
};

/// Every surjective linear isometry Lip(X, E) -> Lip(Y, F) by construction:
/// standard ones from Iso(Y, X) x I(E, F)^{Comp_2(Y)}, nonstandard ones as S_phi o standard.
/// Standard operators first, each group sorted by matrix. Throws InfiniteValueGroup.
std::vector<TaggedOperator> enumerate_isometries(const SpacePtr& x, const SpacePtr& y, const NormedSpaceSpec& e,
                                                 const NormedSpaceSpec& f);

/// Entries rounded to 12 decimals; used to compare operator sets.
std::vector<long long> matrix_key(const Eigen::MatrixXd& m);

}  // namespace lipiso
