#include "lipiso/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lipiso/kernels.hpp"

namespace lipiso {

const CheckResult* VerificationReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

const char* to_string(VerificationReport::Status status) {
    switch (status) {
        case VerificationReport::Status::Pass: return "pass";
        case VerificationReport::Status::Fail: return "fail";
        case VerificationReport::Status::NotSurjective: return "not_surjective";
        case VerificationReport::Status::PropertyPFails: return "property_p_fails";
    }
    return "?";
}

namespace {

// Uniform double in [0, 1) from the top 53 bits; independent of the standard library's distributions.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

struct Family {
    std::string name;
    std::vector<LipFunction> functions;
};

std::vector<LipFunction> indicator_basis(const SpacePtr& space, const NormedSpaceSpec& e) {
    std::vector<LipFunction> out;
    for (std::size_t x = 0; x < space->size(); ++x)
        for (std::size_t i = 0; i < e.dim(); ++i) out.push_back(indicator_fn(space, e, {x}, basis_vector(e, i)));
    return out;
}

std::vector<Family> sample_families(const SpacePtr& space, const NormedSpaceSpec& e, const VerifyOptions& options) {
    return {{"indicator_basis", indicator_basis(space, e)},
            {"probe_library", probe_library(space, e)},
            {"random_samples", random_functions(space, e, options.samples, options.seed)}};
}

Eigen::MatrixXd as_columns(const std::vector<LipFunction>& fns, std::size_t rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(fns.size()));
    for (std::size_t k = 0; k < fns.size(); ++k)
        m.col(static_cast<Eigen::Index>(k)) =
            Eigen::Map<const Eigen::VectorXd>(fns[k].values().data(), static_cast<Eigen::Index>(rows));
    return m;
}

void finalize(VerificationReport& report) {
    if (report.status != VerificationReport::Status::Pass) return;
    for (const auto& c : report.checks)
        if (!c.passed) report.status = VerificationReport::Status::Fail;
}

// Norm preservation over the sample families; records deviations and the first counterexample.
void run_norm_suite(const LipOperator& t, NormKind kind, const VerifyOptions& options, VerificationReport& report) {
    const std::size_t rows = static_cast<std::size_t>(t.matrix().cols());
    for (const auto& family : sample_families(t.domain_space(), t.domain_values(), options)) {
        CheckResult check{family.name, true, false, ""};
        if (family.functions.empty()) {
            check.skipped = true;
            report.checks.push_back(check);
            continue;
        }
        const Eigen::MatrixXd cols = as_columns(family.functions, rows);
        const std::vector<double> dev = options.parallel ? norm_deviations_parallel(t, cols, kind)
                                                         : norm_deviations_serial(t, cols, kind);
        const auto worst = std::max_element(dev.begin(), dev.end());
        report.samples += dev.size();
        report.max_deviation = std::max(report.max_deviation, *worst);
        check.passed = *worst <= options.tol;
        check.detail = std::to_string(dev.size()) + " functions, max deviation " + fmt(*worst);
        if (!check.passed && !report.counterexample) {
            const auto first = std::find_if(dev.begin(), dev.end(), [&](double d) { return d > options.tol; });
            const auto k = static_cast<std::size_t>(first - dev.begin());
            report.counterexample = family.functions[k];
            report.counterexample_source = family.name + "[" + std::to_string(k) + "]";
        }
        report.checks.push_back(check);
    }
}

bool check_surjective(const LipOperator& t, VerificationReport& report) {
    const auto& m = t.matrix();
    CheckResult check{"surjective", true, false, ""};
    if (m.rows() != m.cols()) {
        check.passed = false;
        check.detail = "matrix is not square";
    } else {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
        check.passed = lu.rank() == m.rows();
        check.detail = "rank " + std::to_string(lu.rank()) + " of " + std::to_string(m.rows());
    }
    report.checks.push_back(check);
    if (!check.passed) report.status = VerificationReport::Status::NotSurjective;
    return check.passed;
}

double point_norm(const LipFunction& f, std::size_t y) { return f.codomain().norm(f.at(y)); }

std::vector<bool> cozero(const LipFunction& f, double tol) {
    std::vector<bool> out(f.space()->size());
    for (std::size_t y = 0; y < out.size(); ++y) out[y] = point_norm(f, y) > tol;
    return out;
}

bool disjoint(const std::vector<bool>& a, const std::vector<bool>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && b[i]) return false;
    return true;
}

}  // namespace

std::vector<LipFunction> random_functions(const SpacePtr& space, const NormedSpaceSpec& e, std::size_t count,
                                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<LipFunction> out;
    out.reserve(count);
    const std::size_t len = space->size() * e.dim();
    while (out.size() < count) {
        std::vector<double> v(len);
        for (double& c : v) c = 2.0 * unit_uniform(rng) - 1.0;
        LipFunction f(space, e, std::move(v));
        const double norm = lip_norm(f).lipnorm;
        if (norm == 0) continue;
        f *= 1.0 / norm;
        out.push_back(std::move(f));
    }
    return out;
}

VerificationReport verify_isometry(const LipOperator& t, const VerifyOptions& options) {
    VerificationReport report;
    if (!check_surjective(t, report)) {
        finalize(report);
        return report;
    }
    run_norm_suite(t, NormKind::Lip, options, report);
    finalize(report);
    return report;
}

VerificationReport verify_sup_isometry(const LipOperator& t, const VerifyOptions& options) {
    VerificationReport report;
    const PropertyPResult p = check_property_p(t, options.tol);
    report.checks.push_back({"property_p", p.holds, false, p.holds ? "" : "A(T) is nonempty"});
    if (!p.holds) {
        report.status = VerificationReport::Status::PropertyPFails;
        return report;
    }
    run_norm_suite(t, NormKind::Sup, options, report);
    finalize(report);
    return report;
}

VerificationReport verify_biseparating(const LipOperator& t, const VerifyOptions& options) {
    VerificationReport report;
    const PropertyPResult p = check_property_p(t, options.tol);
    report.checks.push_back({"property_p", p.holds, false, p.holds ? "" : "A(T) is nonempty"});
    if (!p.holds) {
        report.status = VerificationReport::Status::PropertyPFails;
        return report;
    }
    if (!check_surjective(t, report)) return report;
    const LipOperator inv = inverse(t);

    auto run = [&](const LipOperator& op, const std::string& name, std::uint64_t seed) {
        const SpacePtr& space = op.domain_space();
        const NormedSpaceSpec& e = op.domain_values();
        const std::size_t n = space->size();
        CheckResult check{name, true, false, ""};
        std::size_t pairs = 0;
        auto test_pair = [&](const LipFunction& f, const LipFunction& g) {
            ++pairs;
            if (!check.passed) return;
            if (!disjoint(cozero(apply(op, f), options.tol), cozero(apply(op, g), options.tol))) {
                check.passed = false;
                check.detail = "images of disjointly supported functions overlap (pair " + std::to_string(pairs) + ")";
            }
        };
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (a != b)
                    for (std::size_t i = 0; i < e.dim(); ++i)
                        test_pair(indicator_fn(space, e, {a}, basis_vector(e, i)),
                                  indicator_fn(space, e, {b}, basis_vector(e, (i + 1) % e.dim())));
        std::mt19937_64 rng(seed);
        for (std::size_t k = 0; k < options.samples && n >= 2; ++k) {
            LipFunction f(space, e), g(space, e);
            for (std::size_t x = 0; x < n; ++x) {
                const double r = unit_uniform(rng);
                LipFunction* target = r < 1.0 / 3 ? &f : (r < 2.0 / 3 ? &g : nullptr);
                for (std::size_t i = 0; i < e.dim(); ++i) {
                    const double v = 2.0 * unit_uniform(rng) - 1.0;
                    if (target) target->at(x)[i] = v;
                }
            }
            test_pair(f, g);
        }
        report.samples += 2 * pairs;
        if (check.passed) check.detail = std::to_string(pairs) + " pairs";
        report.checks.push_back(check);
    };
    run(t, "separating", options.seed);
    run(inv, "inverse_separating", options.seed + 1);
    finalize(report);
    return report;
}

namespace {

std::string label_list(const FiniteMetricSpace& s, const std::vector<std::size_t>& pts) {
    std::string out = "{";
    for (std::size_t k = 0; k < pts.size(); ++k) out += (k ? "," : "") + s.label(pts[k]);
    return out + "}";
}

// Matrix whose columns are S(e_i~)(y).
Eigen::MatrixXd constant_response(const LipOperator& s, std::size_t y) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.codomain_values().dim()),
                                                static_cast<Eigen::Index>(s.domain_values().dim()));
    for (std::size_t x = 0; x < s.domain_space()->size(); ++x) acc += s.block(y, x);
    return acc;
}

// Checks that only hold for operators with Property P, run on `s`.
void property_p_checks(const LipOperator& s, const std::string& suffix, const VerifyOptions& options,
                       VerificationReport& report) {
    const auto& x = *s.domain_space();
    const auto& y = *s.codomain_space();
    const auto& e = s.domain_values();
    const auto& f = s.codomain_values();
    const double tol = options.tol;

    // T e~ constant on 1-components of Y with pointwise norm ||e||.
    {
        CheckResult check{"one_component_constancy" + suffix, true, false, ""};
        std::vector<std::vector<double>> directions;
        for (std::size_t i = 0; i < e.dim(); ++i) directions.push_back(basis_vector(e, i));
        std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
        for (int k = 0; k < 8; ++k) {
            std::vector<double> v(e.dim());
            for (double& c : v) c = 2.0 * unit_uniform(rng) - 1.0;
            if (e.norm(v) > 0) directions.push_back(v);
        }
        const RPartition comp1 = r_components(y, Rational{1});
        for (const auto& dir : directions) {
            const LipFunction img = apply(s, constant_fn(s.domain_space(), e, dir));
            const double target = e.norm(dir);
            for (const auto& block : comp1.blocks)
                for (std::size_t yi : block) {
                    double diff = 0;
                    for (std::size_t j = 0; j < f.dim(); ++j)
                        diff = std::max(diff, std::abs(img.at(yi)[j] - img.at(block.front())[j]));
                    const double norm_gap = std::abs(point_norm(img, yi) - target);
                    if ((diff > tol || norm_gap > tol) && check.passed) {
                        check.passed = false;
                        check.detail = "T e~ at " + y.label(yi) + ": variation " + fmt(diff) + ", norm gap " + fmt(norm_gap);
                    }
                }
        }
        report.checks.push_back(check);
    }

    // T(chi_A e~) = chi_{H(A)} T e~ for a bijection H between 1-components.
    {
        CheckResult check{"component_bijection" + suffix, true, false, ""};
        const RPartition cx = r_components(x, Rational{1});
        const RPartition cy = r_components(y, Rational{1});
        std::vector<int> used(cy.blocks.size(), 0);
        if (cx.blocks.size() != cy.blocks.size()) {
            check.passed = false;
            check.detail = "X has " + std::to_string(cx.blocks.size()) + " 1-components, Y has " +
                           std::to_string(cy.blocks.size());
        }
        for (const auto& a : cx.blocks) {
            if (!check.passed) break;
            std::optional<std::size_t> image;
            for (std::size_t i = 0; i < e.dim() && check.passed; ++i) {
                const auto ei = basis_vector(e, i);
                const LipFunction g = apply(s, indicator_fn(s.domain_space(), e, a, ei));
                const LipFunction c = apply(s, constant_fn(s.domain_space(), e, ei));
                const std::vector<bool> support = cozero(g, tol);
                std::optional<std::size_t> block;
                for (std::size_t yi = 0; yi < y.size(); ++yi)
                    if (support[yi]) {
                        if (!block) block = cy.block_of[yi];
                        else if (*block != cy.block_of[yi]) block.reset(), yi = y.size();
                    }
                if (!block || (image && *image != *block)) {
                    check.passed = false;
                    check.detail = "image of chi_" + label_list(x, a) + " is not supported on one 1-component";
                    break;
                }
                image = block;
                for (std::size_t yi = 0; yi < y.size(); ++yi) {
                    const bool inside = cy.block_of[yi] == *block;
                    for (std::size_t j = 0; j < f.dim(); ++j) {
                        const double expect = inside ? c.at(yi)[j] : 0.0;
                        if (std::abs(g.at(yi)[j] - expect) > tol && check.passed) {
                            check.passed = false;
                            check.detail = "T(chi_A e~) differs from chi_H(A) T e~ at " + y.label(yi);
                        }
                    }
                }
            }
            if (image && used[*image]++ && check.passed) {
                check.passed = false;
                check.detail = "H is not injective";
            }
        }
        report.checks.push_back(check);
    }

    // J_y = [T e_i~ (y)] constant on each 2-component of Y and a value isometry.
    {
        CheckResult check{"two_component_j_constancy" + suffix, true, false, ""};
        const RPartition comp2 = r_components(y, Rational{2});
        for (const auto& block : comp2.blocks) {
            const Eigen::MatrixXd ref = constant_response(s, block.front());
            try {
                make_value_isometry(e, f, ref, tol);
            } catch (const InvalidValueIsometry& err) {
                check.passed = false;
                check.detail = "J at " + y.label(block.front()) + ": " + err.what();
                break;
            }
            for (std::size_t yi : block)
                if ((constant_response(s, yi) - ref).cwiseAbs().maxCoeff() > tol) {
                    check.passed = false;
                    check.detail = "J differs between " + y.label(block.front()) + " and " + y.label(yi);
                    break;
                }
            if (!check.passed) break;
        }
        report.checks.push_back(check);
    }
}

}  // namespace

VerificationReport verify_structure(const LipOperator& t, const VerifyOptions& options) {
    VerificationReport report;
    if (!check_surjective(t, report)) return report;
    const double tol = options.tol;
    const auto& y = *t.codomain_space();
    const SpacePtr& xs = t.domain_space();
    const auto& e = t.domain_values();
    const auto& f = t.codomain_values();
    const ABPartition ab = compute_ab_partition(t, tol);
    const bool nonstandard = !ab.a.empty();
    const std::string vacuous = "A(T) is empty";

    // d(A(T), B(T)) >= 1 and d(y0, B(T)) = 1.
    {
        CheckResult dist{"ab_distance", true, !nonstandard, nonstandard ? "" : vacuous};
        CheckResult one{"ab_exact_one", true, !nonstandard, nonstandard ? "" : vacuous};
        if (nonstandard) {
            if (ab.b.empty()) {
                dist.passed = one.passed = false;
                dist.detail = one.detail = "B(T) is empty";
            } else {
                const PowerValue d_ab = set_distance(y, ab.a, ab.b);
                dist.passed = compare(d_ab, Rational{1}).order >= 0;
                dist.detail = "d(A,B) = " + d_ab.approx_string(12);
                for (std::size_t y0 : ab.a) {
                    const PowerValue d0 = set_distance(y, {y0}, ab.b);
                    if (compare(d0, Rational{1}).order != 0) {
                        one.passed = false;
                        one.detail = "d(" + y.label(y0) + ", B) = " + d0.approx_string(12);
                        break;
                    }
                }
            }
        }
        report.checks.push_back(dist);
        report.checks.push_back(one);
    }

    // f = 0 on B(T^-1)  =>  Tf = 0 on B(T).
    {
        CheckResult check{"restriction", true, false, ""};
        const LipOperator inv = inverse(t);
        const ABPartition ab_inv = compute_ab_partition(inv, tol);
        if (ab_inv.a.empty()) {
            check.skipped = true;
            check.detail = "A(T^-1) is empty; only f = 0 qualifies";
        } else {
            std::vector<LipFunction> fns = indicator_basis(xs, e);
            for (auto& p : probe_library(xs, e)) fns.push_back(std::move(p));
            for (auto& r : random_functions(xs, e, options.samples, options.seed + 7)) fns.push_back(std::move(r));
            std::vector<bool> keep(xs->size(), false);
            for (std::size_t x : ab_inv.a) keep[x] = true;
            double worst = 0;
            for (auto& fn : fns) {
                for (std::size_t x = 0; x < xs->size(); ++x)
                    if (!keep[x]) std::fill(fn.at(x).begin(), fn.at(x).end(), 0.0);
                const LipFunction img = apply(t, fn);
                for (std::size_t yb : ab.b) worst = std::max(worst, point_norm(img, yb));
            }
            report.samples += fns.size();
            check.passed = worst <= tol;
            check.detail = std::to_string(fns.size()) + " functions vanishing on B(T^-1), max |Tf| on B(T) " + fmt(worst);
        }
        report.checks.push_back(check);
    }

    if (!nonstandard) {
        property_p_checks(t, "", options, report);
        for (const char* name : {"phi_distance_laws", "two_term_formula", "sign_law"})
            report.checks.push_back({name, true, true, vacuous});
        finalize(report);
        return report;
    }

    std::optional<NonstandardDecomposition> dec;
    try {
        dec = decompose_nonstandard(t, tol);
        report.checks.push_back({"decomposition", true, false, ""});
    } catch (const std::exception& err) {
        report.checks.push_back({"decomposition", false, false, err.what()});
        finalize(report);
        return report;
    }
    const LipOperator residual(xs, e, t.codomain_space(), f, dec->residual);
    property_p_checks(residual, "[standard_part]", options, report);

    const TypeAWitness& w = dec->phi_witness;
    const StandardForm& sf = dec->standard_part;

    // Distance laws tying y0 in A(T) to phi(y0).
    {
        CheckResult check{"phi_distance_laws", true, false, ""};
        const Rational one{1}, two{2};
        for (std::size_t k = 0; k < w.a.size() && check.passed; ++k) {
            const std::size_t y0 = w.a[k], p0 = w.phi[k];
            for (std::size_t z : ab.b) {
                const PowerValue dz = y.distance(z, p0);
                const PowerValue d0 = y.distance(z, y0);
                const bool ok = compare(dz, one).order < 0 ? compare_sum(d0, one, dz).order == 0
                                                            : compare(d0, two).order >= 0;
                if (!ok) {
                    check.passed = false;
                    check.detail = "d(" + y.label(z) + "," + y.label(y0) + ") violates the law relative to phi(" +
                                   y.label(y0) + ") = " + y.label(p0);
                    break;
                }
            }
            for (std::size_t k2 = k + 1; k2 < w.a.size() && check.passed; ++k2)
                if (w.phi[k2] != p0 && compare(y.distance(y0, w.a[k2]), two).order < 0) {
                    check.passed = false;
                    check.detail = "points " + y.label(y0) + ", " + y.label(w.a[k2]) +
                                   " with different images are closer than 2";
                }
        }
        report.checks.push_back(check);
    }

    // Tf(y) = J(phi y)(f(h(phi y))) - J(phi y)(f(h(y))) for y in A(T).
    {
        CheckResult check{"two_term_formula", true, false, ""};
        std::vector<LipFunction> fns = indicator_basis(xs, e);
        for (auto& p : probe_library(xs, e)) fns.push_back(std::move(p));
        for (auto& r : random_functions(xs, e, options.samples, options.seed + 11)) fns.push_back(std::move(r));
        double worst = 0;
        for (const auto& fn : fns) {
            const LipFunction img = apply(t, fn);
            for (std::size_t k = 0; k < w.a.size(); ++k) {
                const std::size_t y0 = w.a[k], p0 = w.phi[k];
                const Eigen::MatrixXd& jb = sf.j_at(p0).matrix;
                const Eigen::Map<const Eigen::VectorXd> far(fn.at(sf.h.h[p0]).data(), static_cast<Eigen::Index>(e.dim()));
                const Eigen::Map<const Eigen::VectorXd> near(fn.at(sf.h.h[y0]).data(), static_cast<Eigen::Index>(e.dim()));
                const Eigen::VectorXd expect = jb * far - jb * near;
                for (std::size_t j = 0; j < f.dim(); ++j)
                    worst = std::max(worst, std::abs(img.at(y0)[j] - expect(static_cast<Eigen::Index>(j))));
            }
        }
        report.samples += fns.size();
        check.passed = worst <= tol;
        check.detail = std::to_string(fns.size()) + " functions, max deviation " + fmt(worst);
        report.checks.push_back(check);
    }

    // J_A y = -J_B phi(y), read directly off T's blocks.
    {
        CheckResult check{"sign_law", true, false, ""};
        for (std::size_t k = 0; k < w.a.size(); ++k) {
            const std::size_t y0 = w.a[k], p0 = w.phi[k];
            const Eigen::MatrixXd ja = t.block(y0, sf.h.h[y0]);
            const Eigen::MatrixXd jb = t.block(p0, sf.h.h[p0]);
            const double gap = (ja + jb).cwiseAbs().maxCoeff();
            if (gap > tol) {
                check.passed = false;
                check.detail = "J_A(" + y.label(y0) + ") + J_B(" + y.label(p0) + ") = " + fmt(gap);
                break;
            }
        }
        report.checks.push_back(check);
    }

    finalize(report);
    return report;
}

}  // namespace lipiso
