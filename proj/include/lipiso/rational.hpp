#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace lipiso {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline bool is_zero(const Rational& r) { return r.is_zero(); }

/// Three-way comparison; boost::multiprecision predates operator<=>.
inline std::strong_ordering cmp(const Rational& a, const Rational& b) {
    const int c = a.compare(b);
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parses "3", "-2", "1.25", "7/4" or "1e-3" into an exact rational.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" for integers.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact r^p for integer p >= 0.
Rational pow_int(const Rational& r, unsigned p);

/// Exact r^gamma when it is rational (r >= 0, gamma > 0), otherwise nullopt.
std::optional<Rational> exact_power(const Rational& r, const Rational& gamma);

/// A nonnegative real of the form base^exponent with rational base and exponent.
///
/// This is the exact representation of a distance in (X, d^alpha) when d is
/// rational. Comparisons are decided exactly whenever possible and otherwise
/// by interval separation at high precision.
struct PowerValue {
    Rational base;
    Rational exponent{1};

    static PowerValue of(Rational r) { return {std::move(r), Rational{1}}; }

    bool is_zero() const { return base == 0; }
    std::optional<Rational> exact() const { return exact_power(base, exponent); }
    /// High precision approximation (about 300 significant decimal digits).
    std::string approx_string(int digits = 40) const;
    double approx_double() const;
};

/// Thrown when a comparison cannot be certified and no tolerance override is set.
class UndecidedComparison : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Outcome of a comparison; `certified` is false when a tolerance was used.
struct Comparison {
    std::partial_ordering order = std::partial_ordering::equivalent;
    bool certified = true;
};

/// How to resolve comparisons that interval arithmetic cannot separate.
struct ComparePolicy {
    /// When set, values that agree to within this bound compare equal
    /// (uncertified). When unset, such comparisons throw UndecidedComparison.
    std::optional<double> tolerance;
};

/// Sign of a - t.
Comparison compare(const PowerValue& a, const Rational& t, const ComparePolicy& policy = {});
/// Sign of a - b.
Comparison compare(const PowerValue& a, const PowerValue& b, const ComparePolicy& policy = {});
/// Sign of a - (c + b).
Comparison compare_sum(const PowerValue& a, const Rational& c, const PowerValue& b,
                       const ComparePolicy& policy = {});

/// Rational within 2^-200 of base^exponent; `exact` set when no rounding happened.
struct RationalApprox {
    Rational value;
    bool exact = true;
};
RationalApprox approximate(const PowerValue& v);

/// Upper bound on |approximate(v).value - v| when inexact.
const Rational& approximation_bound();

}  // namespace lipiso
