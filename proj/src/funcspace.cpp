#include "lipiso/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lipiso {

namespace {

// Neumaier summation of nonnegative terms.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0;
    double comp_ = 0;
};

}  // namespace

NormedSpaceSpec NormedSpaceSpec::scalar() { return {Kind::Scalar, 1, Rational{2}}; }

NormedSpaceSpec NormedSpaceSpec::euclidean(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("value space dimension must be positive");
    return {Kind::Euclidean, dim, Rational{2}};
}

NormedSpaceSpec NormedSpaceSpec::lp(std::size_t dim, const Rational& p) {
    if (dim == 0) throw std::invalid_argument("value space dimension must be positive");
    if (p <= 1) throw NotStrictlyConvex("l_p with p = " + to_string(p) + " is not strictly convex");
    if (p == 2) return euclidean(dim);
    NormedSpaceSpec spec{Kind::Lp, dim, p};
    spec.p_double_ = to_double(p);
    return spec;
}

NormedSpaceSpec NormedSpaceSpec::parse(const std::string& norm, std::size_t dim, const std::string& p) {
    if (norm == "scalar") {
        if (dim != 1) throw std::invalid_argument("scalar value space has dimension 1");
        return scalar();
    }
    if (norm == "l2") return euclidean(dim);
    if (norm == "l1" || norm == "linf")
        throw NotStrictlyConvex("norm '" + norm + "' is not strictly convex");
    if (norm == "lp") {
        if (p.empty()) throw std::invalid_argument("norm 'lp' needs an exponent p");
        return lp(dim, parse_rational(p));
    }
    if (norm.size() > 1 && norm[0] == 'l') return lp(dim, parse_rational(norm.substr(1)));
    throw std::invalid_argument("unknown norm '" + norm + "'");
}

std::string NormedSpaceSpec::name() const {
    switch (kind_) {
        case Kind::Scalar: return "scalar";
        case Kind::Euclidean: return "l2";
        case Kind::Lp: return "lp";
    }
    return "?";
}

double NormedSpaceSpec::norm(std::span<const double> v) const {
    if (kind_ == Kind::Scalar) return std::abs(v[0]);
    double scale = 0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0 || !std::isfinite(scale)) return scale;
    CompensatedSum s;
    if (kind_ == Kind::Euclidean) {
        for (double x : v) {
            const double r = x / scale;
            s.add(r * r);
        }
        return scale * std::sqrt(s.value());
    }
    for (double x : v) s.add(std::pow(std::abs(x) / scale, p_double_));
    return scale * std::pow(s.value(), 1.0 / p_double_);
}

bool NormedSpaceSpec::isometric_to(const NormedSpaceSpec& other) const {
    if (dim_ != other.dim_) return false;
    return dim_ == 1 || p_ == other.p_;
}

LipFunction::LipFunction(SpacePtr space, NormedSpaceSpec codomain, std::vector<double> values)
    : space_(std::move(space)), codomain_(std::move(codomain)), values_(std::move(values)) {
    if (!space_) throw std::invalid_argument("function needs a domain space");
    if (values_.size() != space_->size() * codomain_.dim())
        throw std::invalid_argument("function table has " + std::to_string(values_.size()) + " entries, expected " +
                                    std::to_string(space_->size() * codomain_.dim()));
}

LipFunction::LipFunction(SpacePtr space, NormedSpaceSpec codomain)
    : LipFunction(space, codomain, std::vector<double>(space->size() * codomain.dim(), 0.0)) {}

LipFunction& LipFunction::operator+=(const LipFunction& other) {
    if (other.values_.size() != values_.size()) throw std::invalid_argument("adding functions of different shape");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

LipFunction& LipFunction::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

double sup_norm(std::span<const double> values, const NormedSpaceSpec& e, std::size_t n) {
    const std::size_t m = e.dim();
    double best = 0;
    for (std::size_t x = 0; x < n; ++x) best = std::max(best, e.norm(values.subspan(x * m, m)));
    return best;
}

double lipschitz_number(std::span<const double> values, const NormedSpaceSpec& e, std::span<const double> dist,
                        std::size_t n) {
    const std::size_t m = e.dim();
    double best = 0;
    std::vector<double> diff(m);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            for (std::size_t i = 0; i < m; ++i) diff[i] = values[x * m + i] - values[y * m + i];
            best = std::max(best, e.norm(diff) / dist[x * n + y]);
        }
    return best;
}

double sup_norm(const LipFunction& f) { return sup_norm(f.values(), f.codomain(), f.space()->size()); }

double lipschitz_number(const LipFunction& f) {
    return lipschitz_number(f.values(), f.codomain(), f.space()->distances_double(), f.space()->size());
}

NormTriple lip_norm(const LipFunction& f) {
    NormTriple t{sup_norm(f), lipschitz_number(f), 0};
    t.lipnorm = std::max(t.sup, t.lip);
    return t;
}

namespace {
void check_direction(const NormedSpaceSpec& e, std::span<const double> value) {
    if (value.size() != e.dim())
        throw std::invalid_argument("vector has dimension " + std::to_string(value.size()) + ", value space has " +
                                    std::to_string(e.dim()));
}
}  // namespace

LipFunction constant_fn(SpacePtr space, const NormedSpaceSpec& e, std::span<const double> value) {
    check_direction(e, value);
    LipFunction f(std::move(space), e);
    for (std::size_t x = 0; x < f.space()->size(); ++x) std::copy(value.begin(), value.end(), f.at(x).begin());
    return f;
}

LipFunction indicator_fn(SpacePtr space, const NormedSpaceSpec& e, const std::vector<std::size_t>& set,
                         std::span<const double> value) {
    check_direction(e, value);
    LipFunction f(std::move(space), e);
    for (std::size_t x : set) {
        if (x >= f.space()->size()) throw std::out_of_range("indicator point out of range");
        std::copy(value.begin(), value.end(), f.at(x).begin());
    }
    return f;
}

const char* to_string(ProbeKind kind) {
    switch (kind) {
        case ProbeKind::Bump: return "bump";
        case ProbeKind::Cone: return "cone";
        case ProbeKind::Tent: return "tent";
        case ProbeKind::DistCap: return "dist_cap";
    }
    return "?";
}

LipFunction make_probe(SpacePtr space, const NormedSpaceSpec& e, const ProbeSpec& probe,
                       std::span<const double> direction) {
    check_direction(e, direction);
    if (e.norm(direction) == 0) throw std::invalid_argument("probe direction must be nonzero");
    if (probe.anchor >= space->size()) throw std::out_of_range("probe anchor out of range");
    if ((probe.kind == ProbeKind::Cone || probe.kind == ProbeKind::Tent) && !(probe.scale > 0))
        throw std::invalid_argument("probe scale must be positive");
    LipFunction f(std::move(space), e);
    const auto& s = *f.space();
    for (std::size_t x = 0; x < s.size(); ++x) {
        const double d = s.d_double(x, probe.anchor);
        double c = 0;
        switch (probe.kind) {
            case ProbeKind::Bump: c = std::max(0.0, 2.0 - d); break;
            case ProbeKind::Cone: c = std::max(0.0, 1.0 - d / probe.scale); break;
            case ProbeKind::Tent: c = std::max(-1.0, 1.0 - 2.0 * d / probe.scale); break;
            case ProbeKind::DistCap: c = std::min(1.0, d); break;
        }
        auto out = f.at(x);
        for (std::size_t i = 0; i < e.dim(); ++i) out[i] = c * direction[i];
    }
    return f;
}

LipFunction make_tent(SpacePtr space, const NormedSpaceSpec& e, std::size_t x1, std::size_t x2,
                      std::span<const double> direction) {
    if (x1 == x2) throw std::invalid_argument("tent anchors must differ");
    const double d = space->d_double(x1, x2);
    return make_probe(std::move(space), e, {ProbeKind::Tent, x1, d}, direction);
}

std::vector<double> basis_vector(const NormedSpaceSpec& e, std::size_t i) {
    std::vector<double> v(e.dim(), 0.0);
    v.at(i) = 1.0;
    return v;
}

std::vector<LipFunction> probe_library(const SpacePtr& space, const NormedSpaceSpec& e) {
    std::vector<std::vector<double>> directions;
    for (std::size_t i = 0; i < e.dim(); ++i) directions.push_back(basis_vector(e, i));
    if (e.dim() >= 2) {
        std::vector<double> ones(e.dim(), 1.0), alt(e.dim());
        for (std::size_t i = 0; i < e.dim(); ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
        for (auto* v : {&ones, &alt}) {
            const double nv = e.norm(*v);
            for (double& c : *v) c /= nv;
            directions.push_back(*v);
        }
    }

    const std::size_t n = space->size();
    std::vector<LipFunction> out;
    for (const auto& dir : directions) {
        for (std::size_t a = 0; a < n; ++a) {
            out.push_back(make_probe(space, e, {ProbeKind::Bump, a}, dir));
            out.push_back(make_probe(space, e, {ProbeKind::DistCap, a}, dir));
            std::vector<double> scales{1.0, 2.0};
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t b = 0; b < n; ++b)
                if (b != a) nearest = std::min(nearest, space->d_double(a, b));
            if (std::isfinite(nearest)) scales.push_back(nearest);
            std::sort(scales.begin(), scales.end());
            scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
            for (double D : scales) out.push_back(make_probe(space, e, {ProbeKind::Cone, a, D}, dir));
            for (std::size_t b = 0; b < n; ++b)
                if (b != a) out.push_back(make_tent(space, e, a, b, dir));
        }
    }
    return out;
}

}  // namespace lipiso
