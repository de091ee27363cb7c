#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "lipiso/operators.hpp"

namespace lipiso {

/// Which norm a deviation kernel compares.
enum class NormKind { Lip, Sup };

/// |N(T f_k) - N(f_k)| for every column f_k of `samples` (flattened functions on X).
///
/// The parallel kernel applies T to all samples in one product and evaluates
/// norms across threads; the serial reference goes through apply()/lip_norm()
/// one function at a time. Results agree to rounding.
std::vector<double> norm_deviations_serial(const LipOperator& t, const Eigen::MatrixXd& samples, NormKind kind);
std::vector<double> norm_deviations_parallel(const LipOperator& t, const Eigen::MatrixXd& samples, NormKind kind);

/// Caps OpenMP threads; 0 leaves the runtime default. Returns the effective count.
int set_thread_limit(int threads);
int thread_limit();

}  // namespace lipiso
