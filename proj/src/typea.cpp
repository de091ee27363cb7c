#include "lipiso/typea.hpp"

#include <algorithm>

namespace lipiso {

std::size_t TypeAWitness::image(std::size_t x) const {
    auto it = std::lower_bound(a.begin(), a.end(), x);
    if (it == a.end() || *it != x) throw std::out_of_range("point is not in A");
    return phi[static_cast<std::size_t>(it - a.begin())];
}

bool TypeAWitness::contains(std::size_t x) const { return std::binary_search(a.begin(), a.end(), x); }

std::vector<std::size_t> TypeAWitness::b(std::size_t n) const {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < n; ++x)
        if (!contains(x)) out.push_back(x);
    return out;
}

bool canonical_less(const TypeAWitness& lhs, const TypeAWitness& rhs) {
    if (lhs.a != rhs.a) return lhs.a < rhs.a;
    return lhs.phi < rhs.phi;
}

namespace {

enum class Flavor { Plain, Alpha };

// Exact evaluation of the pairwise conditions, shared by the checker and the search.
class ConditionTable {
  public:
    ConditionTable(const FiniteMetricSpace& space, Flavor flavor, Rational alpha, const ComparePolicy& policy)
        : space_(space), flavor_(flavor), alpha_(std::move(alpha)), policy_(policy), n_(space.size()),
          unit_(n_ * n_, 0), ab_(n_ * n_ * n_, kUnknown), aa_(n_ * n_, kUnknown) {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (i != j) unit_[i * n_ + j] = note(compare(space_.distance(i, j), Rational{1}, policy_)) == 0;
    }

    bool at_unit_distance(std::size_t x, std::size_t w) const { return unit_[x * n_ + w] != 0; }

    /// Condition number (1 or 2) violated by x in A, phi(x) = w, z in B; 0 when satisfied.
    int ab_violation(std::size_t x, std::size_t w, std::size_t z) {
        signed char& slot = ab_[(x * n_ + w) * n_ + z];
        if (slot == kUnknown) slot = static_cast<signed char>(evaluate_ab(x, w, z));
        return slot;
    }

    /// True when x1, x2 in A with different images satisfy condition 3.
    bool aa_ok(std::size_t x1, std::size_t x2) {
        signed char& slot = aa_[x1 * n_ + x2];
        if (slot == kUnknown) slot = far_apart(x1, x2) ? 1 : 0;
        return slot == 1;
    }

    bool certified() const { return certified_; }

  private:
    static constexpr signed char kUnknown = -1;

    std::partial_ordering note(Comparison c) {
        certified_ = certified_ && c.certified;
        return c.order;
    }

    // d(x1,x2) >= 2 for plain, d^alpha(x1,x2) >= 2 for alpha.
    bool far_apart(std::size_t x1, std::size_t x2) {
        PowerValue d = space_.distance(x1, x2);
        if (flavor_ == Flavor::Alpha) d.exponent *= alpha_;
        return note(compare(d, Rational{2}, policy_)) >= 0;
    }

    int evaluate_ab(std::size_t x, std::size_t w, std::size_t z) {
        if (flavor_ == Flavor::Alpha) {
            if (z == w) return at_unit_distance(x, w) ? 0 : 1;
            return far_apart(x, z) ? 0 : 2;
        }
        const PowerValue dwz = space_.distance(w, z);
        if (note(compare(dwz, Rational{1}, policy_)) < 0)
            return note(compare_sum(space_.distance(x, z), Rational{1}, dwz, policy_)) == 0 ? 0 : 1;
        return far_apart(x, z) ? 0 : 2;
    }

    const FiniteMetricSpace& space_;
    Flavor flavor_;
    Rational alpha_;
    ComparePolicy policy_;
    std::size_t n_;
    std::vector<char> unit_;
    std::vector<signed char> ab_;
    std::vector<signed char> aa_;
    bool certified_ = true;
};

void check_shape(const FiniteMetricSpace& space, const TypeAWitness& w) {
    const std::size_t n = space.size();
    if (w.a.empty()) throw MalformedWitness("witness set A is empty");
    if (w.a.size() != w.phi.size()) throw MalformedWitness("phi must assign one image per point of A");
    if (!std::is_sorted(w.a.begin(), w.a.end()) || std::adjacent_find(w.a.begin(), w.a.end()) != w.a.end())
        throw MalformedWitness("witness set A must be sorted without repeats");
    if (w.a.back() >= n) throw MalformedWitness("witness point out of range");
    if (w.a.size() == n) throw MalformedWitness("witness set A must not be all of X");
    for (std::size_t img : w.phi) {
        if (img >= n) throw MalformedWitness("phi image out of range");
        if (w.contains(img)) throw MalformedWitness("phi maps into A");
    }
}

std::string pair_name(const FiniteMetricSpace& s, std::size_t a, std::size_t b) {
    return "(" + s.label(a) + ", " + s.label(b) + ")";
}

WitnessCheck run_checks(const FiniteMetricSpace& space, const TypeAWitness& w, ConditionTable& table) {
    const std::size_t n = space.size();
    const std::vector<std::size_t> b = w.b(n);
    auto fail = [&](int cond, std::size_t p, std::size_t q, std::string msg) {
        return WitnessCheck{false, cond, p, q, std::move(msg), table.certified()};
    };
    const bool alpha = w.alpha.has_value();
    // Conditions are reported in index order; the alpha variant checks condition 1 for all x first.
    if (alpha) {
        for (std::size_t k = 0; k < w.a.size(); ++k)
            if (!table.at_unit_distance(w.a[k], w.phi[k]))
                return fail(1, w.a[k], w.phi[k], "d" + pair_name(space, w.a[k], w.phi[k]) + " != 1");
    }
    for (std::size_t k = 0; k < w.a.size(); ++k)
        for (std::size_t z : b) {
            const int v = table.ab_violation(w.a[k], w.phi[k], z);
            if (v == 1)
                return fail(1, w.a[k], z,
                            alpha ? "d" + pair_name(space, w.a[k], z) + " != 1"
                                  : "d" + pair_name(space, w.a[k], z) + " != 1 + d" +
                                        pair_name(space, w.phi[k], z));
            if (v == 2)
                return fail(2, w.a[k], z,
                            std::string(alpha ? "d^alpha" : "d") + pair_name(space, w.a[k], z) + " < 2");
        }
    for (std::size_t i = 0; i < w.a.size(); ++i)
        for (std::size_t j = i + 1; j < w.a.size(); ++j)
            if (w.phi[i] != w.phi[j] && !table.aa_ok(w.a[i], w.a[j]))
                return fail(3, w.a[i], w.a[j],
                            std::string(alpha ? "d^alpha" : "d") + pair_name(space, w.a[i], w.a[j]) + " < 2");
    return WitnessCheck{true, 0, 0, 0, "", table.certified()};
}

void check_alpha(const Rational& alpha) {
    if (alpha <= 0 || alpha >= 1) throw std::invalid_argument("alpha must lie in (0,1), got " + to_string(alpha));
}

WitnessSearch search(const FiniteMetricSpace& space, Flavor flavor, const Rational& alpha,
                     const SearchOptions& options) {
    WitnessSearch result;
    const std::size_t n = space.size();
    if (n < 2) return result;
    ConditionTable table(space, flavor, alpha, options.policy);

    std::vector<std::vector<std::size_t>> partners(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t w = 0; w < n; ++w)
            if (w != x && table.at_unit_distance(x, w)) partners[x].push_back(w);

    enum class Role : char { Unassigned, A, B };
    std::vector<Role> role(n, Role::Unassigned);
    std::vector<std::size_t> phi(n, n);
    std::vector<int> forced_b(n, 0);
    bool stop = false;

    auto emit = [&] {
        TypeAWitness w;
        for (std::size_t x = 0; x < n; ++x)
            if (role[x] == Role::A) {
                w.a.push_back(x);
                w.phi.push_back(phi[x]);
            }
        if (w.a.empty()) return;
        if (flavor == Flavor::Alpha) w.alpha = alpha;
        result.witnesses.push_back(std::move(w));
        if (options.mode == SearchMode::First) stop = true;
    };

    auto recurse = [&](auto&& self, std::size_t k) -> void {
        if (stop) return;
        if (k == n) {
            emit();
            return;
        }
        auto tick = [&] {
            if (++result.nodes > options.node_cap) result.truncated = stop = true;
            return !stop;
        };
        // k in B: every earlier A-point must accept k.
        if (!tick()) return;
        bool ok = true;
        for (std::size_t x = 0; x < k && ok; ++x)
            if (role[x] == Role::A) ok = table.ab_violation(x, phi[x], k) == 0;
        if (ok) {
            role[k] = Role::B;
            self(self, k + 1);
            role[k] = Role::Unassigned;
        }
        if (forced_b[k] > 0) return;
        // k in A with image w.
        for (std::size_t w : partners[k]) {
            if (stop || !tick()) return;
            if (role[w] == Role::A) continue;
            ok = true;
            for (std::size_t x = 0; x < k && ok; ++x) {
                if (role[x] == Role::B) ok = table.ab_violation(k, w, x) == 0;
                else if (role[x] == Role::A && phi[x] != w) ok = table.aa_ok(x, k);
            }
            if (!ok) continue;
            role[k] = Role::A;
            phi[k] = w;
            ++forced_b[w];
            self(self, k + 1);
            --forced_b[w];
            phi[k] = n;
            role[k] = Role::Unassigned;
        }
    };
    recurse(recurse, 0);
    std::sort(result.witnesses.begin(), result.witnesses.end(), canonical_less);
    result.certified = table.certified();
    return result;
}

}  // namespace

WitnessCheck check_witness(const FiniteMetricSpace& space, const TypeAWitness& w, const ComparePolicy& policy) {
    check_shape(space, w);
    if (w.alpha) check_alpha(*w.alpha);
    ConditionTable table(space, w.alpha ? Flavor::Alpha : Flavor::Plain, w.alpha.value_or(Rational{1}), policy);
    return run_checks(space, w, table);
}

WitnessSearch find_type_a_witness(const FiniteMetricSpace& space, const SearchOptions& options) {
    return search(space, Flavor::Plain, Rational{1}, options);
}

WitnessSearch find_type_a_alpha_witness(const FiniteMetricSpace& space, const Rational& alpha,
                                        const SearchOptions& options) {
    check_alpha(alpha);
    return search(space, Flavor::Alpha, alpha, options);
}

EquivalenceReport check_pesafrank(const FiniteMetricSpace& space, const Rational& alpha, SearchOptions options) {
    check_alpha(alpha);
    EquivalenceReport report;
    report.alpha = alpha;
    report.power_type_a = find_type_a_witness(power_metric(space, alpha), options);
    report.type_a_alpha = find_type_a_alpha_witness(space, alpha, options);
    return report;
}

}  // namespace lipiso
