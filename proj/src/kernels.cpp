#include "lipiso/kernels.hpp"

#include <cmath>

#include <omp.h>

namespace lipiso {

namespace {

double norm_of(std::span<const double> values, const NormedSpaceSpec& e, const FiniteMetricSpace& space,
               NormKind kind) {
    const double sup = sup_norm(values, e, space.size());
    if (kind == NormKind::Sup) return sup;
    return std::max(sup, lipschitz_number(values, e, space.distances_double(), space.size()));
}

}  // namespace

std::vector<double> norm_deviations_serial(const LipOperator& t, const Eigen::MatrixXd& samples, NormKind kind) {
    std::vector<double> out(static_cast<std::size_t>(samples.cols()));
    for (Eigen::Index k = 0; k < samples.cols(); ++k) {
        const Eigen::VectorXd col = samples.col(k);
        const LipFunction f(t.domain_space(), t.domain_values(), std::vector<double>(col.data(), col.data() + col.size()));
        const LipFunction g = apply(t, f);
        const double nf = kind == NormKind::Lip ? lip_norm(f).lipnorm : sup_norm(f);
        const double ng = kind == NormKind::Lip ? lip_norm(g).lipnorm : sup_norm(g);
        out[static_cast<std::size_t>(k)] = std::abs(ng - nf);
    }
    return out;
}

std::vector<double> norm_deviations_parallel(const LipOperator& t, const Eigen::MatrixXd& samples, NormKind kind) {
    if (samples.rows() != t.matrix().cols()) throw ShapeMismatch("samples do not match the operator's domain");
    const Eigen::MatrixXd images = t.matrix() * samples;
    const auto& x = *t.domain_space();
    const auto& y = *t.codomain_space();
    const auto& e = t.domain_values();
    const auto& f = t.codomain_values();
    std::vector<double> out(static_cast<std::size_t>(samples.cols()));
#pragma omp parallel for schedule(static)
    for (Eigen::Index k = 0; k < samples.cols(); ++k) {
        const std::span<const double> in(samples.col(k).data(), static_cast<std::size_t>(samples.rows()));
        const std::span<const double> im(images.col(k).data(), static_cast<std::size_t>(images.rows()));
        out[static_cast<std::size_t>(k)] = std::abs(norm_of(im, f, y, kind) - norm_of(in, e, x, kind));
    }
    return out;
}

int set_thread_limit(int threads) {
    if (threads > 0) omp_set_num_threads(threads);
    return omp_get_max_threads();
}

int thread_limit() { return omp_get_max_threads(); }

}  // namespace lipiso
