#include "lipiso/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace lipiso {

namespace {

bool same_space(const SpacePtr& a, const SpacePtr& b) { return a == b || *a == *b; }

}  // namespace

LipOperator::LipOperator(SpacePtr x, NormedSpaceSpec e, SpacePtr y, NormedSpaceSpec f, Eigen::MatrixXd matrix)
    : x_(std::move(x)), e_(std::move(e)), y_(std::move(y)), f_(std::move(f)), matrix_(std::move(matrix)) {
    if (!x_ || !y_) throw ShapeMismatch("operator needs domain and codomain spaces");
    const auto rows = static_cast<Eigen::Index>(y_->size() * f_.dim());
    const auto cols = static_cast<Eigen::Index>(x_->size() * e_.dim());
    if (matrix_.rows() != rows || matrix_.cols() != cols)
        throw ShapeMismatch("operator matrix is " + std::to_string(matrix_.rows()) + "x" +
                            std::to_string(matrix_.cols()) + ", expected " + std::to_string(rows) + "x" +
                            std::to_string(cols));
}

LipOperator LipOperator::identity(SpacePtr x, NormedSpaceSpec e) {
    const auto n = static_cast<Eigen::Index>(x->size() * e.dim());
    return LipOperator(x, e, x, e, Eigen::MatrixXd::Identity(n, n));
}

Eigen::MatrixXd LipOperator::block(std::size_t y, std::size_t x) const {
    const auto mf = static_cast<Eigen::Index>(f_.dim());
    const auto me = static_cast<Eigen::Index>(e_.dim());
    return matrix_.block(static_cast<Eigen::Index>(y) * mf, static_cast<Eigen::Index>(x) * me, mf, me);
}

LipFunction apply(const LipOperator& t, const LipFunction& f) {
    if (!same_space(f.space(), t.domain_space()) || !(f.codomain() == t.domain_values()))
        throw ShapeMismatch("function does not live in the operator's domain");
    const Eigen::Map<const Eigen::VectorXd> in(f.values().data(), static_cast<Eigen::Index>(f.values().size()));
    const Eigen::VectorXd out = t.matrix() * in;
    return LipFunction(t.codomain_space(), t.codomain_values(), std::vector<double>(out.data(), out.data() + out.size()));
}

LipOperator compose(const LipOperator& t2, const LipOperator& t1) {
    if (!same_space(t1.codomain_space(), t2.domain_space()) || !(t1.codomain_values() == t2.domain_values()))
        throw ShapeMismatch("compose: codomain of the inner operator differs from the domain of the outer one");
    return LipOperator(t1.domain_space(), t1.domain_values(), t2.codomain_space(), t2.codomain_values(),
                       t2.matrix() * t1.matrix());
}

LipOperator inverse(const LipOperator& t) {
    const auto& m = t.matrix();
    if (m.rows() != m.cols()) throw NotSurjective("operator matrix is not square");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (!lu.isInvertible()) throw NotSurjective("operator matrix is singular");
    return LipOperator(t.codomain_space(), t.codomain_values(), t.domain_space(), t.domain_values(), lu.inverse());
}

double max_abs_difference(const LipOperator& a, const LipOperator& b) {
    if (a.matrix().rows() != b.matrix().rows() || a.matrix().cols() != b.matrix().cols())
        throw ShapeMismatch("operators have different shapes");
    if (a.matrix().size() == 0) return 0.0;
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

const char* to_string(ValueIsometry::Flavor flavor) {
    switch (flavor) {
        case ValueIsometry::Flavor::Orthogonal: return "orthogonal";
        case ValueIsometry::Flavor::SignedPermutation: return "signed_permutation";
        case ValueIsometry::Flavor::Sign: return "sign";
    }
    return "?";
}

ValueIsometry::Flavor value_flavor(const NormedSpaceSpec& e, const NormedSpaceSpec& f) {
    if (!e.isometric_to(f)) throw InvalidValueIsometry("value spaces are not linearly isometric");
    if (f.dim() == 1) return ValueIsometry::Flavor::Sign;
    if (f.kind() == NormedSpaceSpec::Kind::Euclidean) return ValueIsometry::Flavor::Orthogonal;
    return ValueIsometry::Flavor::SignedPermutation;
}

ValueIsometry make_value_isometry(const NormedSpaceSpec& e, const NormedSpaceSpec& f, const Eigen::MatrixXd& m,
                                  double tol) {
    const auto flavor = value_flavor(e, f);
    const auto dim = static_cast<Eigen::Index>(f.dim());
    if (m.rows() != dim || m.cols() != dim)
        throw InvalidValueIsometry("value isometry must be " + std::to_string(dim) + "x" + std::to_string(dim));
    if (!m.allFinite()) throw InvalidValueIsometry("value isometry has non-finite entries");
    if (flavor == ValueIsometry::Flavor::Orthogonal) {
        const double defect = (m.transpose() * m - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
        if (defect > tol)
            throw InvalidValueIsometry("matrix is not orthogonal (|Q^T Q - I| = " + std::to_string(defect) + ")");
        return {m, flavor};
    }
    // Exactly one entry near +-1 per row and column, the rest near 0.
    Eigen::MatrixXd snapped = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<int> col_hits(static_cast<std::size_t>(dim), 0);
    for (Eigen::Index r = 0; r < dim; ++r) {
        int hits = 0;
        for (Eigen::Index c = 0; c < dim; ++c) {
            const double v = m(r, c);
            if (std::abs(v) <= tol) continue;
            if (std::abs(std::abs(v) - 1.0) > tol)
                throw InvalidValueIsometry("entry " + std::to_string(v) + " is neither 0 nor +-1");
            snapped(r, c) = v > 0 ? 1.0 : -1.0;
            ++hits;
            ++col_hits[static_cast<std::size_t>(c)];
        }
        if (hits != 1) throw InvalidValueIsometry("row " + std::to_string(r) + " is not a signed unit vector");
    }
    if (std::any_of(col_hits.begin(), col_hits.end(), [](int h) { return h != 1; }))
        throw InvalidValueIsometry("columns are not signed unit vectors");
    return {snapped, flavor};
}

std::vector<long long> matrix_key(const Eigen::MatrixXd& m) {
    std::vector<long long> key;
    key.reserve(static_cast<std::size_t>(m.size()) + 2);
    key.push_back(m.rows());
    key.push_back(m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            long long v = std::llround(m(r, c) * 1e12);
            key.push_back(v == 0 ? 0 : v);  // fold -0
        }
    return key;
}

std::vector<ValueIsometry> value_isometry_group(const NormedSpaceSpec& e, const NormedSpaceSpec& f) {
    const auto flavor = value_flavor(e, f);
    if (flavor == ValueIsometry::Flavor::Orthogonal)
        throw InfiniteValueGroup("the isometry group of Euclidean space of dimension >= 2 is infinite");
    const std::size_t m = f.dim();
    std::vector<ValueIsometry> out;
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (unsigned signs = 0; signs < (1u << m); ++signs) {
            Eigen::MatrixXd q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
            for (std::size_t r = 0; r < m; ++r)
                q(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(perm[r])) = (signs >> r) & 1u ? -1.0 : 1.0;
            out.push_back({q, flavor});
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(out.begin(), out.end(),
              [](const ValueIsometry& a, const ValueIsometry& b) { return matrix_key(a.matrix) < matrix_key(b.matrix); });
    return out;
}

LipOperator build_standard(const Iso2Witness& h, const std::vector<ValueIsometry>& j, SpacePtr x,
                           const NormedSpaceSpec& e, SpacePtr y, const NormedSpaceSpec& f) {
    if (!is_iso2(*y, *x, h)) throw InvalidStandardData("h is not a bijection preserving distances < 2");
    const RPartition comps = r_components(*y, Rational{2});
    if (j.size() != comps.blocks.size())
        throw InvalidStandardData("expected " + std::to_string(comps.blocks.size()) +
                                  " value isometries (one per 2-component of Y), got " + std::to_string(j.size()));
    std::vector<ValueIsometry> checked;
    checked.reserve(j.size());
    for (const auto& q : j) {
        try {
            checked.push_back(make_value_isometry(e, f, q.matrix, kConstructionTol));
        } catch (const InvalidValueIsometry& err) {
            throw InvalidStandardData(std::string("invalid J: ") + err.what());
        }
    }
    const auto me = static_cast<Eigen::Index>(e.dim());
    const auto mf = static_cast<Eigen::Index>(f.dim());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(y->size()) * mf,
                                              static_cast<Eigen::Index>(x->size()) * me);
    for (std::size_t yi = 0; yi < y->size(); ++yi)
        m.block(static_cast<Eigen::Index>(yi) * mf, static_cast<Eigen::Index>(h.h[yi]) * me, mf, me) =
            checked[comps.block_of[yi]].matrix;
    return LipOperator(std::move(x), e, std::move(y), f, std::move(m));
}

LipOperator build_standard(const StandardForm& form, SpacePtr x, const NormedSpaceSpec& e, SpacePtr y,
                           const NormedSpaceSpec& f) {
    return build_standard(form.h, form.j, std::move(x), e, std::move(y), f);
}

LipOperator build_s_phi(const TypeAWitness& w, SpacePtr x, const NormedSpaceSpec& e) {
    const WitnessCheck check = check_witness(*x, w);
    if (!check.valid) throw InvalidStandardData("S_phi needs a valid type-A witness: " + check.message);
    const auto me = static_cast<Eigen::Index>(e.dim());
    const auto nn = static_cast<Eigen::Index>(x->size()) * me;
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(nn, nn);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(me, me);
    for (std::size_t k = 0; k < w.a.size(); ++k) {
        const auto row = static_cast<Eigen::Index>(w.a[k]) * me;
        m.block(row, row, me, me) = -id;
        m.block(row, static_cast<Eigen::Index>(w.phi[k]) * me, me, me) = id;
    }
    return LipOperator(x, e, x, e, std::move(m));
}

namespace {

// Column sum over input points: matrix of T(e_i~)(y) for each y.
Eigen::MatrixXd constant_images(const LipOperator& t, std::size_t y) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(t.codomain_values().dim()),
                                                static_cast<Eigen::Index>(t.domain_values().dim()));
    for (std::size_t x = 0; x < t.domain_space()->size(); ++x) acc += t.block(y, x);
    return acc;
}

}  // namespace

PropertyPResult check_property_p(const LipOperator& t, double tol) {
    PropertyPResult out;
    const std::size_t ny = t.codomain_space()->size();
    out.witness.resize(ny);
    for (std::size_t y = 0; y < ny; ++y) {
        const Eigen::MatrixXd c = constant_images(t, y);
        for (Eigen::Index i = 0; i < c.cols(); ++i)
            if (c.col(i).cwiseAbs().maxCoeff() > tol) {
                out.witness[y] = static_cast<std::size_t>(i);
                break;
            }
        if (!out.witness[y]) out.holds = false;
    }
    return out;
}

ABPartition compute_ab_partition(const LipOperator& t, double tol) {
    const PropertyPResult p = check_property_p(t, tol);
    ABPartition out;
    for (std::size_t y = 0; y < p.witness.size(); ++y) (p.witness[y] ? out.b : out.a).push_back(y);
    return out;
}

StandardForm extract_standard_form(const LipOperator& t, double tol) {
    using R = NotStandard::Reason;
    const auto& x = *t.domain_space();
    const auto& y = *t.codomain_space();
    if (x.size() != y.size()) throw NotStandard(R::NotBijective, "point counts of X and Y differ");

    StandardForm form;
    form.h.h.resize(y.size());
    std::vector<Eigen::MatrixXd> j_point(y.size());
    for (std::size_t yi = 0; yi < y.size(); ++yi) {
        std::vector<std::size_t> responders;
        for (std::size_t xi = 0; xi < x.size(); ++xi)
            if (t.block(yi, xi).cwiseAbs().maxCoeff() > tol) responders.push_back(xi);
        if (responders.size() != 1)
            throw NotStandard(R::ResponseCount, "point " + y.label(yi) + " responds to " +
                                                    std::to_string(responders.size()) + " input points");
        form.h.h[yi] = responders.front();
        j_point[yi] = t.block(yi, responders.front());
    }
    std::vector<bool> hit(x.size(), false);
    for (std::size_t v : form.h.h) {
        if (hit[v]) throw NotStandard(R::NotBijective, "h is not injective at " + x.label(v));
        hit[v] = true;
    }

    form.components = r_components(y, Rational{2});
    for (const auto& block : form.components.blocks) {
        const Eigen::MatrixXd& ref = j_point[block.front()];
        for (std::size_t yi : block)
            if ((j_point[yi] - ref).cwiseAbs().maxCoeff() > tol)
                throw NotStandard(R::JNotConstant, "J differs between " + y.label(block.front()) + " and " +
                                                       y.label(yi) + " in one 2-component");
        try {
            form.j.push_back(make_value_isometry(t.domain_values(), t.codomain_values(), ref, tol));
        } catch (const InvalidValueIsometry& err) {
            throw NotStandard(R::InvalidJ, std::string("J at ") + y.label(block.front()) + ": " + err.what());
        }
    }
    if (!is_iso2(y, x, form.h)) throw NotStandard(R::NotIso2, "h does not preserve distances < 2");

    const LipOperator rebuilt =
        build_standard(form, t.domain_space(), t.domain_values(), t.codomain_space(), t.codomain_values());
    const double dev = max_abs_difference(rebuilt, t);
    if (dev > tol) throw NotStandard(R::RoundTrip, "rebuilt operator deviates by " + std::to_string(dev));
    return form;
}

NonstandardDecomposition decompose_nonstandard(const LipOperator& t, double tol) {
    const auto& y = *t.codomain_space();
    const ABPartition ab = compute_ab_partition(t, tol);
    if (ab.a.empty()) throw std::invalid_argument("operator satisfies Property P; it has no nonstandard part");
    if (ab.b.empty()) throw NoTypeAStructure("every constant function maps to zero");

    NonstandardDecomposition out;
    out.phi_witness.a = ab.a;
    for (std::size_t y0 : ab.a) {
        std::vector<std::size_t> candidates;
        for (std::size_t z : ab.b)
            if (compare(y.distance(y0, z), Rational{1}).order == 0) candidates.push_back(z);
        if (candidates.size() != 1)
            throw NoTypeAStructure("point " + y.label(y0) + " has " + std::to_string(candidates.size()) +
                                   " points of B(T) at distance 1");
        out.phi_witness.phi.push_back(candidates.front());
    }
    const WitnessCheck check = check_witness(y, out.phi_witness);
    if (!check.valid)
        throw NoTypeAStructure("induced (A(T), B(T), phi) violates condition " + std::to_string(check.condition) +
                               ": " + check.message);

    const LipOperator s_phi = build_s_phi(out.phi_witness, t.codomain_space(), t.codomain_values());
    const LipOperator residual = compose(s_phi, t);
    try {
        out.standard_part = extract_standard_form(residual, tol);
    } catch (const NotStandard& err) {
        throw ResidualNotStandard(std::string("S_phi o T is not standard: ") + err.what());
    }
    out.residual = residual.matrix();
    return out;
}

std::vector<TaggedOperator> enumerate_isometries(const SpacePtr& x, const SpacePtr& y, const NormedSpaceSpec& e,
                                                 const NormedSpaceSpec& f) {
    if (x->size() != y->size() || !e.isometric_to(f)) return {};
    const std::vector<ValueIsometry> group = value_isometry_group(e, f);
    const Iso2Search hs = iso2_search(*y, *x, SearchMode::All);
    if (hs.truncated) throw std::runtime_error("Iso(Y, X) search truncated");
    const std::size_t comps = r_components(*y, Rational{2}).blocks.size();

    std::size_t per_h = 1;
    for (std::size_t c = 0; c < comps; ++c) per_h *= group.size();
    const std::size_t total = hs.witnesses.size() * per_h;

    std::vector<Eigen::MatrixXd> standard(total);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(total); ++idx) {
        std::size_t rest = static_cast<std::size_t>(idx) % per_h;
        const Iso2Witness& h = hs.witnesses[static_cast<std::size_t>(idx) / per_h];
        std::vector<ValueIsometry> j;
        for (std::size_t c = 0; c < comps; ++c) {
            j.push_back(group[rest % group.size()]);
            rest /= group.size();
        }
        standard[static_cast<std::size_t>(idx)] = build_standard(h, j, x, e, y, f).matrix();
    }

    const WitnessSearch ws = find_type_a_witness(*y);
    if (ws.truncated) throw std::runtime_error("type-A witness search truncated");
    std::vector<Eigen::MatrixXd> s_phis;
    for (const auto& w : ws.witnesses) s_phis.push_back(build_s_phi(w, y, f).matrix());

    std::map<std::vector<long long>, TaggedOperator> standard_set, nonstandard_set;
    for (const auto& m : standard) standard_set.try_emplace(matrix_key(m), TaggedOperator{LipOperator(x, e, y, f, m), true});
    for (const auto& s : s_phis)
        for (const auto& m : standard) {
            Eigen::MatrixXd prod = s * m;
            nonstandard_set.try_emplace(matrix_key(prod), TaggedOperator{LipOperator(x, e, y, f, prod), false});
        }

    std::vector<TaggedOperator> out;
    out.reserve(standard_set.size() + nonstandard_set.size());
    for (auto& [key, op] : standard_set) out.push_back(std::move(op));
    for (auto& [key, op] : nonstandard_set) out.push_back(std::move(op));
    return out;
}

}  // namespace lipiso
