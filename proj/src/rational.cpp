#include "lipiso/rational.hpp"

#include <cctype>
#include <numeric>

#include <mpfr.h>

namespace lipiso {

namespace {

constexpr mpfr_prec_t kPrecisionBits = 1100;
constexpr long kApproxBits = 200;
// Interval separation threshold, far above accumulated rounding error at kPrecisionBits.
constexpr long kSeparationBits = 900;

class Mpfr {
  public:
    Mpfr() { mpfr_init2(v_, kPrecisionBits); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

  private:
    mpfr_t v_;
};

void split_exponent(const Rational& gamma, unsigned long& p, unsigned long& q) {
    if (gamma <= 0) throw std::invalid_argument("exponent must be positive");
    const Integer num = boost::multiprecision::numerator(gamma);
    const Integer den = boost::multiprecision::denominator(gamma);
    if (num > 1'000'000 || den > 1'000'000)
        throw std::invalid_argument("exponent numerator/denominator too large: " + to_string(gamma));
    p = num.convert_to<unsigned long>();
    q = den.convert_to<unsigned long>();
}

void set_power(Mpfr& out, const PowerValue& v) {
    unsigned long p = 0, q = 0;
    split_exponent(v.exponent, p, q);
    const Rational raised = pow_int(v.base, static_cast<unsigned>(p));
    mpfr_set_q(out.get(), raised.backend().data(), MPFR_RNDN);
    if (q != 1) mpfr_rootn_ui(out.get(), out.get(), q, MPFR_RNDN);
}

std::optional<Integer> exact_root(const Integer& x, unsigned long q) {
    Integer r;
    if (mpz_root(r.backend().data(), x.backend().data(), q) == 0) return std::nullopt;
    return r;
}

std::partial_ordering sign_of(int s) {
    if (s < 0) return std::partial_ordering::less;
    if (s > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
}

// Decides the sign of diff whose magnitude scale is `scale`; falls back to the policy.
Comparison resolve(const Mpfr& diff, const Mpfr& scale, const ComparePolicy& policy) {
    Mpfr bound;
    mpfr_abs(bound.get(), scale.get(), MPFR_RNDU);
    if (mpfr_cmp_ui(bound.get(), 1) < 0) mpfr_set_ui(bound.get(), 1, MPFR_RNDU);
    mpfr_mul_2si(bound.get(), bound.get(), -kSeparationBits, MPFR_RNDU);
    Mpfr mag;
    mpfr_abs(mag.get(), diff.get(), MPFR_RNDN);
    if (mpfr_cmp(mag.get(), bound.get()) > 0) return {sign_of(mpfr_sgn(diff.get())), true};
    if (!policy.tolerance)
        throw UndecidedComparison(
            "comparison of irrational distances could not be certified; pass a tolerance override");
    // Agreement to ~270 digits: treat as equal under the override.
    return {std::partial_ordering::equivalent, false};
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ParseError("empty rational");

    if (auto slash = s.find('/'); slash != std::string::npos) {
        const Rational num = parse_rational(s.substr(0, slash));
        const Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + s + "'");
        return num / den;
    }

    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') negative = (s[i++] == '-');
    Integer mantissa = 0;
    long scale = 0;
    bool digits = false, dot = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mantissa = mantissa * 10 + (c - '0');
            if (dot) --scale;
            digits = true;
        } else if (c == '.' && !dot) {
            dot = true;
        } else {
            break;
        }
    }
    if (!digits) throw ParseError("not a number: '" + s + "'");
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') throw ParseError("not a number: '" + s + "'");
        const std::string exp = s.substr(i + 1);
        if (exp.empty()) throw ParseError("missing exponent in '" + s + "'");
        std::size_t used = 0;
        long e = 0;
        try {
            e = std::stol(exp, &used);
        } catch (const std::exception&) {
            throw ParseError("bad exponent in '" + s + "'");
        }
        if (used != exp.size() || e > 1000 || e < -1000) throw ParseError("bad exponent in '" + s + "'");
        scale += e;
    }
    Rational r{mantissa};
    const Rational ten_pow = pow_int(Rational{10}, static_cast<unsigned>(scale < 0 ? -scale : scale));
    if (scale < 0) r /= ten_pow;
    else r *= ten_pow;
    return negative ? Rational{-r} : r;
}

std::string to_string(const Rational& r) {
    const Integer den = boost::multiprecision::denominator(r);
    if (den == 1) return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational pow_int(const Rational& r, unsigned p) {
    Rational out{1};
    Rational base = r;
    while (p > 0) {
        if (p & 1u) out *= base;
        base *= base;
        p >>= 1u;
    }
    return out;
}

std::optional<Rational> exact_power(const Rational& r, const Rational& gamma) {
    if (r < 0) throw std::invalid_argument("negative base in exact_power");
    if (r == 0 || r == 1 || gamma == 1) return r;
    unsigned long p = 0, q = 0;
    split_exponent(gamma, p, q);
    const Rational raised = pow_int(r, static_cast<unsigned>(p));
    if (q == 1) return raised;
    auto num = exact_root(boost::multiprecision::numerator(raised), q);
    auto den = exact_root(boost::multiprecision::denominator(raised), q);
    if (!num || !den) return std::nullopt;
    return Rational{*num, *den};
}

std::string PowerValue::approx_string(int digits) const {
    Mpfr v;
    set_power(v, *this);
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v.get());
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

double PowerValue::approx_double() const {
    if (auto e = exact()) return to_double(*e);
    Mpfr v;
    set_power(v, *this);
    return mpfr_get_d(v.get(), MPFR_RNDN);
}

Comparison compare(const PowerValue& a, const Rational& t, const ComparePolicy&) {
    if (t < 0) return {std::partial_ordering::greater, true};
    unsigned long p = 0, q = 0;
    split_exponent(a.exponent, p, q);
    // a^(p/q) vs t  <=>  a^p vs t^q on the nonnegative reals.
    const Rational lhs = pow_int(a.base, static_cast<unsigned>(p));
    const Rational rhs = pow_int(t, static_cast<unsigned>(q));
    return {cmp(lhs, rhs), true};
}

Comparison compare(const PowerValue& a, const PowerValue& b, const ComparePolicy&) {
    if (a.exponent == b.exponent) return {cmp(a.base, b.base), true};
    unsigned long pa = 0, qa = 0, pb = 0, qb = 0;
    split_exponent(a.exponent, pa, qa);
    split_exponent(b.exponent, pb, qb);
    const unsigned long l = std::lcm(qa, qb);
    const Rational lhs = pow_int(a.base, static_cast<unsigned>(pa * (l / qa)));
    const Rational rhs = pow_int(b.base, static_cast<unsigned>(pb * (l / qb)));
    return {cmp(lhs, rhs), true};
}

Comparison compare_sum(const PowerValue& a, const Rational& c, const PowerValue& b,
                       const ComparePolicy& policy) {
    if (b.is_zero()) return compare(a, c, policy);
    if (c == 0) return compare(a, b, policy);
    if (auto bx = b.exact()) return compare(a, c + *bx, policy);
    if (auto ax = a.exact()) {
        // a - c - b  has the sign opposite to  b - (a - c).
        const Comparison r = compare(b, *ax - c, policy);
        return {0 <=> r.order, r.certified};
    }
    Mpfr av, bv, diff, scale;
    set_power(av, a);
    set_power(bv, b);
    mpfr_sub(diff.get(), av.get(), bv.get(), MPFR_RNDN);
    mpfr_sub_q(diff.get(), diff.get(), c.backend().data(), MPFR_RNDN);
    mpfr_add(scale.get(), av.get(), bv.get(), MPFR_RNDU);
    return resolve(diff, scale, policy);
}

const Rational& approximation_bound() {
    static const Rational bound{Integer{1}, Integer{1} << kApproxBits};
    return bound;
}

RationalApprox approximate(const PowerValue& v) {
    if (auto e = v.exact()) return {*e, true};
    Mpfr x;
    set_power(x, v);
    mpfr_mul_2si(x.get(), x.get(), kApproxBits, MPFR_RNDN);
    Integer n;
    mpfr_get_z(n.backend().data(), x.get(), MPFR_RNDN);
    return {Rational{n, Integer{1} << kApproxBits}, false};
}

}  // namespace lipiso
