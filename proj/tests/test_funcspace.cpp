#include <doctest.h>

#include <cmath>
#include <random>

#include "lipiso/funcspace.hpp"
#include "support.hpp"

using namespace lipiso;
using lipiso::testing::make_space;
using lipiso::testing::two_points;

namespace {

const NormedSpaceSpec kScalar = NormedSpaceSpec::scalar();

LipFunction scalar_fn(const SpacePtr& s, std::vector<double> v) { return LipFunction(s, kScalar, std::move(v)); }

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(n);
    for (double& c : v) c = u(rng);
    return v;
}

}  // namespace

TEST_CASE("value space specs") {
    CHECK(NormedSpaceSpec::lp(2, Rational{2}) == NormedSpaceSpec::euclidean(2));
    CHECK_THROWS_AS(NormedSpaceSpec::lp(2, Rational{1}), NotStrictlyConvex);
    CHECK_THROWS_AS(NormedSpaceSpec::parse("l1", 2), NotStrictlyConvex);
    CHECK_THROWS_AS(NormedSpaceSpec::parse("linf", 2), NotStrictlyConvex);
    CHECK(NormedSpaceSpec::parse("l3", 2) == NormedSpaceSpec::lp(2, Rational{3}));
    CHECK(NormedSpaceSpec::parse("lp", 2, "3/2").p() == Rational(3, 2));
    CHECK(NormedSpaceSpec::euclidean(2).isometric_to(NormedSpaceSpec::euclidean(2)));
    CHECK_FALSE(NormedSpaceSpec::euclidean(2).isometric_to(NormedSpaceSpec::lp(2, Rational{3})));
    CHECK(NormedSpaceSpec::lp(1, Rational{3}).isometric_to(kScalar));

    const std::vector<double> v{3, 4};
    CHECK(NormedSpaceSpec::euclidean(2).norm(v) == doctest::Approx(5).epsilon(1e-15));
    CHECK(NormedSpaceSpec::lp(2, Rational{3}).norm(v) == doctest::Approx(std::cbrt(91.0)).epsilon(1e-14));
    CHECK(kScalar.norm(std::vector<double>{-2.5}) == 2.5);
}

TEST_CASE("sup_norm, lipschitz_number and lip_norm examples") {
    const auto d1 = two_points("1");
    CHECK(sup_norm(scalar_fn(d1, {0, 1})) == 1);
    CHECK(sup_norm(LipFunction(d1, kScalar)) == 0);
    CHECK(lipschitz_number(scalar_fn(d1, {0, 1})) == 1);
    CHECK(lipschitz_number(scalar_fn(d1, {5, 5})) == 0);

    const auto path = make_space({"a", "b", "c"}, {{"0", "1", "2"}, {"1", "0", "1"}, {"2", "1", "0"}});
    CHECK(lipschitz_number(scalar_fn(path, {0, 1, 3})) == 2);

    const NormTriple t = lip_norm(scalar_fn(d1, {0, 1}));
    CHECK(t.sup == 1);
    CHECK(t.lip == 1);
    CHECK(t.lipnorm == 1);

    const NormTriple c = lip_norm(constant_fn(d1, kScalar, std::vector<double>{1}));
    CHECK(c.sup == 1);
    CHECK(c.lip == 0);
    CHECK(c.lipnorm == 1);

    const auto single = make_space({"a"}, {{"0"}});
    CHECK(lipschitz_number(scalar_fn(single, {7})) == 0);
}

TEST_CASE("constant and indicator functions") {
    const auto d1 = two_points("1");
    const auto e2 = NormedSpaceSpec::euclidean(2);
    CHECK(sup_norm(constant_fn(d1, e2, std::vector<double>{2, 0})) == 2);
    CHECK(sup_norm(constant_fn(d1, kScalar, std::vector<double>{0})) == 0);
    CHECK_THROWS(constant_fn(d1, e2, std::vector<double>{1}));

    const std::vector<double> one{1};
    const LipFunction ia = indicator_fn(d1, kScalar, {0}, one);
    CHECK(ia.values() == std::vector<double>{1, 0});
    CHECK(lipschitz_number(ia) == 1);
    CHECK(indicator_fn(d1, kScalar, {0, 1}, one).values() == constant_fn(d1, kScalar, one).values());
    CHECK(lipschitz_number(indicator_fn(two_points("1/2"), kScalar, {0}, one)) == 2);
}

TEST_CASE("probes") {
    const std::vector<double> e{1};
    const auto far = two_points("3");
    const LipFunction bump = make_probe(far, kScalar, {ProbeKind::Bump, 0, 1}, e);
    const NormTriple b = lip_norm(bump);
    CHECK(bump.at(0)[0] == 2);
    CHECK(b.sup == 2);
    CHECK(b.lipnorm == 2);
    CHECK(b.lip <= 1);

    const auto d1 = two_points("1");
    const LipFunction tent = make_tent(d1, kScalar, 0, 1, e);
    CHECK(tent.at(0)[0] == 1);
    CHECK(tent.at(1)[0] == -1);
    CHECK(lipschitz_number(tent) == doctest::Approx(2.0));

    const auto half = two_points("1/2");
    const LipFunction tent_half = make_tent(half, kScalar, 0, 1, e);
    CHECK(lipschitz_number(tent_half) == doctest::Approx(4.0));

    const auto s = make_space({"a", "b", "c"}, {{"0", "1/2", "2"}, {"1/2", "0", "3/2"}, {"2", "3/2", "0"}});
    const LipFunction cone = make_probe(s, kScalar, {ProbeKind::Cone, 0, 0.5}, e);
    CHECK(cone.at(0)[0] == 1);
    CHECK(cone.at(1)[0] == 0);
    CHECK(cone.at(2)[0] == 0);

    const LipFunction cap = make_probe(s, kScalar, {ProbeKind::DistCap, 0, 1}, e);
    CHECK(cap.values() == std::vector<double>{0, 0.5, 1});

    CHECK_THROWS_AS(make_probe(s, kScalar, {ProbeKind::Cone, 0, 0.0}, e), std::invalid_argument);
    CHECK_THROWS_AS(make_probe(s, kScalar, {ProbeKind::Bump, 0, 1}, std::vector<double>{0}), std::invalid_argument);
    CHECK_FALSE(probe_library(s, NormedSpaceSpec::euclidean(2)).empty());
}

TEST_CASE("lip norm axioms on samples") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto s = lipiso::testing::random_space(rng, 5, 2, 6);
        for (const auto& e : {kScalar, NormedSpaceSpec::euclidean(2), NormedSpaceSpec::lp(3, Rational{3})}) {
            const LipFunction f(s, e, random_vec(rng, 5 * e.dim()));
            const LipFunction g(s, e, random_vec(rng, 5 * e.dim()));
            const double a = std::uniform_real_distribution<double>(-3, 3)(rng);
            CHECK(lip_norm(f * a).lipnorm == doctest::Approx(std::abs(a) * lip_norm(f).lipnorm).epsilon(1e-12));
            CHECK(lipschitz_number(f * a) == doctest::Approx(std::abs(a) * lipschitz_number(f)).epsilon(1e-12));
            CHECK(lip_norm(f + g).lipnorm <= lip_norm(f).lipnorm + lip_norm(g).lipnorm + 1e-12);
            CHECK(lipschitz_number(f + g) <= lipschitz_number(f) + lipschitz_number(g) + 1e-12);
            CHECK(lip_norm(f).lipnorm > 0);
        }
    }
}

TEST_CASE("strict convexity inequality") {
    std::mt19937_64 rng(9);
    for (const auto& e : {kScalar, NormedSpaceSpec::euclidean(3), NormedSpaceSpec::lp(2, Rational(3, 2)),
                          NormedSpaceSpec::lp(3, Rational{4})}) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto u = random_vec(rng, e.dim());
            const auto v = random_vec(rng, e.dim());
            std::vector<double> sum(e.dim()), diff(e.dim());
            for (std::size_t i = 0; i < e.dim(); ++i) sum[i] = u[i] + v[i], diff[i] = u[i] - v[i];
            const double m = std::max(e.norm(sum), e.norm(diff));
            CHECK(e.norm(u) < m);
            CHECK(e.norm(v) < m);
        }
    }
}

TEST_CASE("lip norm is unchanged by truncating the metric at 2") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = lipiso::testing::random_space(rng, 5, 1, 5);
        const auto t = std::make_shared<const FiniteMetricSpace>(truncate_metric(*s));
        for (int k = 0; k < 50; ++k) {
            const auto v = random_vec(rng, 5);
            CHECK(std::abs(lip_norm(LipFunction(s, kScalar, v)).lipnorm - lip_norm(LipFunction(t, kScalar, v)).lipnorm) <=
                  1e-12);
        }
    }
}
