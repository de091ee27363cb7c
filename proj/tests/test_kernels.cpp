#include <doctest.h>

#include <random>

#include "lipiso/kernels.hpp"
#include "support.hpp"

using namespace lipiso;

TEST_CASE("parallel and serial norm kernels agree") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1, 1);
    const auto e2 = NormedSpaceSpec::euclidean(2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = lipiso::testing::planted_space(rng, 5);
        // Any matrix works here; the kernels only have to agree.
        Eigen::MatrixXd m(10, 10);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
        const LipOperator t(s, e2, s, e2, m);
        Eigen::MatrixXd samples(10, 64);
        for (Eigen::Index i = 0; i < samples.size(); ++i) samples.data()[i] = u(rng);
        for (const NormKind kind : {NormKind::Lip, NormKind::Sup}) {
            const auto a = norm_deviations_serial(t, samples, kind);
            const auto b = norm_deviations_parallel(t, samples, kind);
            REQUIRE(a.size() == b.size());
            for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-12);
        }
    }
}

TEST_CASE("thread limit") {
    CHECK(set_thread_limit(1) == 1);
    CHECK(thread_limit() == 1);
    CHECK(set_thread_limit(0) >= 1);
}

TEST_CASE("kernel rejects mismatched samples") {
    const auto s = lipiso::testing::two_points("1");
    const LipOperator t = LipOperator::identity(s, NormedSpaceSpec::scalar());
    CHECK_THROWS_AS(norm_deviations_parallel(t, Eigen::MatrixXd::Zero(3, 2), NormKind::Lip), ShapeMismatch);
}
