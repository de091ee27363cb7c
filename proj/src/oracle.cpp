#include "lipiso/oracle.hpp"

#include <algorithm>
#include <map>

namespace lipiso {

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix m{n, std::vector<Rational>(n * n)};
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RationalVector RationalMatrix::operator*(const RationalVector& v) const {
    RationalVector out(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (!is_zero((*this)(r, c)) && !is_zero(v[c])) out[r] += (*this)(r, c) * v[c];
    return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& other) const {
    RationalMatrix out{n, std::vector<Rational>(n * n)};
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) {
            if (is_zero((*this)(r, k))) continue;
            for (std::size_t c = 0; c < n; ++c) out(r, c) += (*this)(r, k) * other(k, c);
        }
    return out;
}

Eigen::MatrixXd RationalMatrix::to_double() const {
    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd m(dim, dim);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = lipiso::to_double((*this)(r, c));
    return m;
}

std::optional<RationalMatrix> invert(const RationalMatrix& m) {
    const std::size_t n = m.n;
    RationalMatrix a = m;
    RationalMatrix inv = RationalMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && is_zero(a(pivot, col))) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != col)
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a(pivot, c), a(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        const Rational p = a(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            a(col, c) /= p;
            inv(col, c) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || is_zero(a(r, col))) continue;
            const Rational factor = a(r, col);
            for (std::size_t c = 0; c < n; ++c) {
                a(r, c) -= factor * a(col, c);
                inv(r, c) -= factor * inv(col, c);
            }
        }
    }
    return inv;
}

namespace {

Rational dot(const RationalVector& a, const RationalVector& b) {
    Rational s{0};
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!is_zero(a[i]) && !is_zero(b[i])) s += a[i] * b[i];
    return s;
}

std::size_t rank_of(std::vector<RationalVector> rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && is_zero(rows[pivot][c])) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (is_zero(rows[r][c])) continue;
            const Rational factor = rows[r][c] / rows[rank][c];
            for (std::size_t k = c; k < cols; ++k) rows[r][k] -= factor * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

// Solves rows * v = 1 for a square system; nullopt when singular.
std::optional<RationalVector> solve_unit_rhs(const std::vector<const RationalVector*>& rows) {
    const std::size_t n = rows.size();
    RationalMatrix m{n, std::vector<Rational>(n * n)};
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = (*rows[r])[c];
    auto inv = invert(m);
    if (!inv) return std::nullopt;
    return *inv * RationalVector(n, Rational{1});
}

}  // namespace

UnitBallPolytope unit_ball(const FiniteMetricSpace& space) {
    const std::size_t n = space.size();
    if (n > kUnitBallMaxPoints)
        throw SizeCapExceeded("unit ball enumeration is capped at " + std::to_string(kUnitBallMaxPoints) + " points");
    if (!space.exact()) throw std::invalid_argument("unit ball enumeration requires exact distances");

    UnitBallPolytope ball;
    ball.n = n;
    for (std::size_t x = 0; x < n; ++x)
        for (int s : {1, -1}) {
            RationalVector a(n);
            a[x] = s;
            ball.halfspaces.push_back(std::move(a));
            ball.halfspace_names.push_back((s > 0 ? "+f(" : "-f(") + space.label(x) + ")");
        }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
            for (int s : {1, -1}) {
                RationalVector a(n);
                a[x] = Rational{s} / space.d(x, y);
                a[y] = Rational{-s} / space.d(x, y);
                ball.halfspaces.push_back(std::move(a));
                ball.halfspace_names.push_back(std::string(s > 0 ? "+" : "-") + "(f(" + space.label(x) + ")-f(" +
                                               space.label(y) + "))/d");
            }

    // Every vertex is the unique solution of n tight, independent constraints.
    const std::size_t m = ball.halfspaces.size();
    std::set<RationalVector> vertices;
    std::vector<std::size_t> pick(n);
    auto recurse = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
        if (depth == n) {
            std::vector<const RationalVector*> rows;
            for (std::size_t k : pick) rows.push_back(&ball.halfspaces[k]);
            auto v = solve_unit_rhs(rows);
            if (!v) return;
            for (const auto& a : ball.halfspaces)
                if (dot(a, *v) > 1) return;
            vertices.insert(std::move(*v));
            return;
        }
        for (std::size_t k = start; k + (n - depth) <= m; ++k) {
            pick[depth] = k;
            self(self, depth + 1, k + 1);
        }
    };
    recurse(recurse, 0, 0);
    ball.vertices.assign(vertices.begin(), vertices.end());

    ball.vertex_degree.assign(ball.vertices.size(), 0);
    for (std::size_t h = 0; h < m; ++h) {
        std::vector<RationalVector> tight;
        std::vector<std::size_t> tight_idx;
        for (std::size_t v = 0; v < ball.vertices.size(); ++v)
            if (dot(ball.halfspaces[h], ball.vertices[v]) == 1) {
                tight.push_back(ball.vertices[v]);
                tight_idx.push_back(v);
            }
        if (rank_of(tight) == n) {
            ball.facets.push_back(h);
            for (std::size_t v : tight_idx) ++ball.vertex_degree[v];
        }
    }
    return ball;
}

namespace {

struct FrameSearch {
    const UnitBallPolytope& ball;
    std::vector<std::size_t> frame;  // vertex indices
    RationalMatrix frame_inverse;    // inverse of the matrix with frame vertices as columns
    std::set<RationalVector> vertex_set;

    explicit FrameSearch(const UnitBallPolytope& b) : ball(b), vertex_set(b.vertices.begin(), b.vertices.end()) {
        const std::size_t n = ball.n;
        std::vector<RationalVector> chosen;
        for (std::size_t v = 0; v < ball.vertices.size() && frame.size() < n; ++v) {
            chosen.push_back(ball.vertices[v]);
            if (rank_of(chosen) == chosen.size()) frame.push_back(v);
            else chosen.pop_back();
        }
        if (frame.size() != n) throw std::runtime_error("degenerate vertex frame");
        RationalMatrix cols{n, std::vector<Rational>(n * n)};
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t r = 0; r < n; ++r) cols(r, c) = ball.vertices[frame[c]][r];
        frame_inverse = *invert(cols);
    }

    // Candidate images for frame slot k share its facet degree.
    std::vector<std::size_t> candidates(std::size_t k) const {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < ball.vertices.size(); ++v)
            if (ball.vertex_degree[v] == ball.vertex_degree[frame[k]]) out.push_back(v);
        return out;
    }

    // Extends a partial image frame; appends each symmetry found.
    void extend(std::vector<std::size_t>& image, std::vector<RationalMatrix>& out) const {
        const std::size_t n = ball.n;
        const std::size_t k = image.size();
        if (k == n) {
            RationalMatrix w{n, std::vector<Rational>(n * n)};
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t r = 0; r < n; ++r) w(r, c) = ball.vertices[image[c]][r];
            RationalMatrix m = w * frame_inverse;
            for (const auto& v : ball.vertices)
                if (!vertex_set.count(m * v)) return;
            out.push_back(std::move(m));
            return;
        }
        for (std::size_t v : candidates(k)) {
            if (std::find(image.begin(), image.end(), v) != image.end()) continue;
            // A linear bijection sends the frame to an independent set.
            std::vector<RationalVector> chosen;
            for (std::size_t u : image) chosen.push_back(ball.vertices[u]);
            chosen.push_back(ball.vertices[v]);
            if (rank_of(chosen) != chosen.size()) continue;
            image.push_back(v);
            extend(image, out);
            image.pop_back();
        }
    }
};

}  // namespace

std::vector<RationalMatrix> symmetry_search_serial(const UnitBallPolytope& ball) {
    FrameSearch search(ball);
    std::vector<RationalMatrix> out;
    std::vector<std::size_t> image;
    search.extend(image, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<RationalMatrix> symmetry_search_parallel(const UnitBallPolytope& ball) {
    const FrameSearch search(ball);
    const std::vector<std::size_t> first = search.candidates(0);
    std::vector<std::vector<RationalMatrix>> per_first(first.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(first.size()); ++i) {
        std::vector<std::size_t> image{first[static_cast<std::size_t>(i)]};
        search.extend(image, per_first[static_cast<std::size_t>(i)]);
    }
    std::vector<RationalMatrix> out;
    for (auto& part : per_first) std::move(part.begin(), part.end(), std::back_inserter(out));
    std::sort(out.begin(), out.end());
    return out;
}

SymmetryGroup symmetry_group(const UnitBallPolytope& ball) {
    if (ball.n > kSymmetryMaxPoints)
        throw SizeCapExceeded("symmetry search is capped at " + std::to_string(kSymmetryMaxPoints) + " points");
    return {ball.n, symmetry_search_parallel(ball)};
}

const char* to_string(ClassifiedElement::Tag tag) {
    switch (tag) {
        case ClassifiedElement::Tag::Standard: return "standard";
        case ClassifiedElement::Tag::Nonstandard: return "nonstandard";
        case ClassifiedElement::Tag::Unexplained: return "unexplained";
    }
    return "?";
}

ClassificationReport classify_group(const SpacePtr& space, const SymmetryGroup& group, double tol) {
    ClassificationReport report;
    report.order = group.elements.size();
    const NormedSpaceSpec scalar = NormedSpaceSpec::scalar();
    for (const auto& g : group.elements) {
        const LipOperator t(space, scalar, space, scalar, g.to_double());
        ClassifiedElement entry{ClassifiedElement::Tag::Unexplained, ""};
        try {
            extract_standard_form(t, tol);
            entry.tag = ClassifiedElement::Tag::Standard;
        } catch (const NotStandard& not_standard) {
            try {
                decompose_nonstandard(t, tol);
                entry.tag = ClassifiedElement::Tag::Nonstandard;
            } catch (const std::exception& err) {
                entry.detail = std::string(not_standard.what()) + "; " + err.what();
            }
        }
        switch (entry.tag) {
            case ClassifiedElement::Tag::Standard: ++report.standard; break;
            case ClassifiedElement::Tag::Nonstandard: ++report.nonstandard; break;
            case ClassifiedElement::Tag::Unexplained: ++report.unexplained; break;
        }
        report.elements.push_back(std::move(entry));
    }
    return report;
}

bool same_operator_set(const SymmetryGroup& group, const std::vector<TaggedOperator>& ops) {
    std::set<std::vector<long long>> a, b;
    for (const auto& g : group.elements) a.insert(matrix_key(g.to_double()));
    for (const auto& t : ops) b.insert(matrix_key(t.op.matrix()));
    return a == b && a.size() == group.elements.size() && b.size() == ops.size();
}

}  // namespace lipiso
