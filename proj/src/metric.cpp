#include "lipiso/metric.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace lipiso {

namespace {

std::string describe(const std::vector<std::string>& labels, std::size_t i) {
    return i < labels.size() ? labels[i] : "#" + std::to_string(i);
}

class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

  private:
    std::vector<std::size_t> parent_;
};

}  // namespace

const char* to_string(MetricViolation::Kind kind) {
    switch (kind) {
        case MetricViolation::Kind::Empty: return "empty";
        case MetricViolation::Kind::Shape: return "shape";
        case MetricViolation::Kind::DuplicateLabel: return "duplicate_label";
        case MetricViolation::Kind::NonzeroDiagonal: return "nonzero_diagonal";
        case MetricViolation::Kind::NonPositive: return "nonpositive_distance";
        case MetricViolation::Kind::Asymmetry: return "asymmetry";
        case MetricViolation::Kind::Triangle: return "triangle_violation";
    }
    return "unknown";
}

ValidationReport validate(const RawMetric& raw) {
    using Kind = MetricViolation::Kind;
    ValidationReport report;
    auto& out = report.violations;
    const std::size_t n = raw.labels.size();
    if (n == 0) {
        out.push_back({Kind::Empty, {}, "metric space has no points"});
        return report;
    }
    if (raw.dist.size() != n) {
        out.push_back({Kind::Shape, {}, "distance matrix has " + std::to_string(raw.dist.size()) +
                                            " rows for " + std::to_string(n) + " labels"});
        return report;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (raw.dist[i].size() != n) {
            out.push_back({Kind::Shape, {i}, "row " + std::to_string(i) + " has " +
                                                  std::to_string(raw.dist[i].size()) + " entries"});
            return report;
        }
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i)
        if (!seen.insert(raw.labels[i]).second)
            out.push_back({Kind::DuplicateLabel, {i}, "duplicate label '" + raw.labels[i] + "'"});

    const auto& d = raw.dist;
    const auto& L = raw.labels;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i][i] != 0)
            out.push_back({Kind::NonzeroDiagonal, {i},
                           "d(" + describe(L, i) + "," + describe(L, i) + ") = " + to_string(d[i][i])});
        for (std::size_t j = i + 1; j < n; ++j) {
            if (d[i][j] != d[j][i])
                out.push_back({Kind::Asymmetry, {i, j},
                               "d(" + describe(L, i) + "," + describe(L, j) + ") = " + to_string(d[i][j]) +
                                   " but d(" + describe(L, j) + "," + describe(L, i) + ") = " + to_string(d[j][i])});
            if (d[i][j] <= 0 || d[j][i] <= 0)
                out.push_back({Kind::NonPositive, {i, j},
                               "d(" + describe(L, i) + "," + describe(L, j) + ") must be positive"});
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (i == j || j == k || i >= k) continue;
                // d(i,k) <= d(i,j) + d(j,k), each unordered outer pair once per middle point.
                if (d[i][k] > d[i][j] + d[j][k])
                    out.push_back({Kind::Triangle, {i, j, k},
                                   "d(" + describe(L, i) + "," + describe(L, k) + ") = " + to_string(d[i][k]) +
                                       " > d(" + describe(L, i) + "," + describe(L, j) + ") + d(" + describe(L, j) +
                                       "," + describe(L, k) + ") = " + to_string(d[i][j] + d[j][k])});
            }
    return report;
}

namespace {
std::string summarize(const ValidationReport& report) {
    std::string msg = "invalid metric";
    if (!report.violations.empty()) msg += ": " + report.violations.front().message;
    if (report.violations.size() > 1) msg += " (+" + std::to_string(report.violations.size() - 1) + " more)";
    return msg;
}
}  // namespace

InvalidMetric::InvalidMetric(ValidationReport report)
    : std::runtime_error(summarize(report)), report_(std::move(report)) {}

FiniteMetricSpace::FiniteMetricSpace(const RawMetric& raw) {
    ValidationReport report = validate(raw);
    if (!report.valid()) throw InvalidMetric(std::move(report));
    labels_ = raw.labels;
    const std::size_t n = labels_.size();
    dist_.reserve(n * n);
    for (const auto& row : raw.dist) dist_.insert(dist_.end(), row.begin(), row.end());
    base_ = dist_;
    finish();
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, std::vector<std::vector<Rational>> dist)
    : FiniteMetricSpace(RawMetric{std::move(labels), std::move(dist)}) {}

void FiniteMetricSpace::finish() {
    dist_double_.resize(dist_.size());
    std::transform(dist_.begin(), dist_.end(), dist_double_.begin(), [](const Rational& r) { return to_double(r); });
}

std::optional<std::size_t> FiniteMetricSpace::index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

PowerValue FiniteMetricSpace::distance(std::size_t i, std::size_t j) const {
    return PowerValue{base_[i * size() + j], power_};
}

RawMetric FiniteMetricSpace::raw() const {
    RawMetric raw{labels_, {}};
    const std::size_t n = size();
    raw.dist.assign(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) raw.dist[i][j] = d(i, j);
    return raw;
}

Rational FiniteMetricSpace::diameter() const {
    Rational best{0};
    for (const auto& r : dist_) best = std::max(best, r);
    return best;
}

bool FiniteMetricSpace::operator==(const FiniteMetricSpace& other) const {
    return labels_ == other.labels_ && base_ == other.base_ && power_ == other.power_;
}

RPartition r_components(const FiniteMetricSpace& space, const Rational& radius) {
    if (radius <= 0) throw std::invalid_argument("component radius must be positive");
    const std::size_t n = space.size();
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (compare(space.distance(i, j), radius).order < 0) uf.unite(i, j);

    RPartition part{radius, {}, std::vector<std::size_t>(n)};
    std::vector<std::size_t> root_block(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = uf.find(i);
        if (root_block[r] == n) {
            root_block[r] = part.blocks.size();
            part.blocks.emplace_back();
        }
        part.blocks[root_block[r]].push_back(i);
        part.block_of[i] = root_block[r];
    }
    return part;
}

bool is_r_connected(const FiniteMetricSpace& space, const Rational& radius) {
    return r_components(space, radius).blocks.size() == 1;
}

FiniteMetricSpace power_metric(const FiniteMetricSpace& space, const Rational& alpha) {
    if (alpha <= 0 || alpha > 1) throw std::invalid_argument("power exponent must lie in (0,1], got " + to_string(alpha));
    FiniteMetricSpace out;
    out.labels_ = space.labels_;
    out.base_ = space.base_;
    out.power_ = space.power_ * alpha;
    out.dist_.resize(out.base_.size());
    out.exact_ = true;
    for (std::size_t k = 0; k < out.base_.size(); ++k) {
        RationalApprox a = approximate(PowerValue{out.base_[k], out.power_});
        out.dist_[k] = std::move(a.value);
        out.exact_ = out.exact_ && a.exact;
    }
    out.rounding_bound_ = out.exact_ ? Rational{0} : approximation_bound();
    if (out.exact_) out.base_ = out.dist_, out.power_ = 1;
    out.finish();
    return out;
}

FiniteMetricSpace truncate_metric(const FiniteMetricSpace& space) {
    const Rational two{2};
    const std::size_t n = space.size();
    std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n));
    if (space.exact()) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) dist[i][j] = std::min(two, space.d(i, j));
        return FiniteMetricSpace(space.labels(), std::move(dist));
    }
    // Only an exact rational metric can be truncated exactly.
    throw std::invalid_argument("truncate_metric requires an exact metric");
}

std::vector<std::size_t> Iso2Witness::inverse() const {
    std::vector<std::size_t> inv(h.size());
    for (std::size_t y = 0; y < h.size(); ++y) inv[h[y]] = y;
    return inv;
}

namespace {

// Both-direction preservation of distances < 2 for one pair.
bool pair_compatible(const FiniteMetricSpace& y, const FiniteMetricSpace& x, std::size_t y1, std::size_t y2,
                     std::size_t x1, std::size_t x2) {
    const Rational two{2};
    const PowerValue dy = y.distance(y1, y2);
    const PowerValue dx = x.distance(x1, x2);
    const bool y_short = compare(dy, two).order < 0;
    const bool x_short = compare(dx, two).order < 0;
    if (!y_short && !x_short) return true;
    return compare(dx, dy).order == 0;
}

}  // namespace

bool is_iso2(const FiniteMetricSpace& y, const FiniteMetricSpace& x, const Iso2Witness& w) {
    const std::size_t n = y.size();
    if (x.size() != n || w.h.size() != n) return false;
    std::vector<bool> used(n, false);
    for (std::size_t v : w.h) {
        if (v >= n || used[v]) return false;
        used[v] = true;
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (!pair_compatible(y, x, a, b, w.h[a], w.h[b])) return false;
    return true;
}

Iso2Search iso2_search(const FiniteMetricSpace& y, const FiniteMetricSpace& x, SearchMode mode,
                       std::size_t node_cap) {
    Iso2Search result;
    const std::size_t n = y.size();
    if (x.size() != n) return result;

    // Pair compatibility table: ok[(y1*n+x1)*n*n + y2*n + x2].
    std::vector<char> ok(n * n * n * n, 1);
    for (std::size_t y1 = 0; y1 < n; ++y1)
        for (std::size_t y2 = 0; y2 < n; ++y2) {
            if (y1 == y2) continue;
            for (std::size_t x1 = 0; x1 < n; ++x1)
                for (std::size_t x2 = 0; x2 < n; ++x2)
                    if (x1 != x2)
                        ok[(y1 * n + x1) * n * n + y2 * n + x2] = pair_compatible(y, x, y1, y2, x1, x2) ? 1 : 0;
        }

    std::vector<std::size_t> h(n);
    std::vector<bool> used(n, false);
    bool stop = false;
    auto recurse = [&](auto&& self, std::size_t k) -> void {
        if (stop) return;
        if (k == n) {
            result.witnesses.push_back({h});
            if (mode == SearchMode::First) stop = true;
            return;
        }
        for (std::size_t cand = 0; cand < n && !stop; ++cand) {
            if (used[cand]) continue;
            if (++result.nodes > node_cap) {
                result.truncated = stop = true;
                return;
            }
            bool fits = true;
            for (std::size_t prev = 0; prev < k && fits; ++prev)
                fits = ok[(k * n + cand) * n * n + prev * n + h[prev]] != 0;
            if (!fits) continue;
            h[k] = cand;
            used[cand] = true;
            self(self, k + 1);
            used[cand] = false;
        }
    };
    recurse(recurse, 0);
    return result;
}

PowerValue set_distance(const FiniteMetricSpace& space, const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("set_distance of an empty set");
    std::optional<PowerValue> best;
    for (std::size_t i : a)
        for (std::size_t j : b) {
            PowerValue v = space.distance(i, j);
            if (!best || compare(v, *best).order < 0) best = std::move(v);
        }
    return *best;
}

}  // namespace lipiso
