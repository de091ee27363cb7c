#include <doctest.h>

#include <cmath>
#include <random>

#include "lipiso/operators.hpp"
#include "support.hpp"

using namespace lipiso;
using lipiso::testing::make_space;
using lipiso::testing::two_points;

namespace {

const NormedSpaceSpec kScalar = NormedSpaceSpec::scalar();

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

ValueIsometry sign(double s) { return make_value_isometry(kScalar, kScalar, mat({{s}})); }

LipOperator scalar_op(const SpacePtr& s, Eigen::MatrixXd m) { return LipOperator(s, kScalar, s, kScalar, std::move(m)); }

bool close(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol = kConstructionTol) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

TEST_CASE("apply") {
    const auto d1 = two_points("1");
    const LipFunction f(d1, kScalar, {0, 1});
    CHECK(apply(LipOperator::identity(d1, kScalar), f).values() == f.values());
    CHECK(apply(scalar_op(d1, 2 * Eigen::MatrixXd::Identity(2, 2)), f).values() == std::vector<double>{0, 2});
    const LipOperator swap = build_standard({{1, 0}}, {sign(-1)}, d1, kScalar, d1, kScalar);
    CHECK(apply(swap, LipFunction(d1, kScalar, {3, 5})).values() == std::vector<double>{-5, -3});
    CHECK_THROWS_AS(apply(swap, LipFunction(two_points("2"), NormedSpaceSpec::euclidean(2))), ShapeMismatch);
}

TEST_CASE("build_standard examples") {
    const auto d1 = two_points("1");
    CHECK(close(build_standard({{1, 0}}, {sign(-1)}, d1, kScalar, d1, kScalar).matrix(), mat({{0, -1}, {-1, 0}})));

    const auto d3 = two_points("3");
    CHECK(close(build_standard({{0, 1}}, {sign(1), sign(-1)}, d3, kScalar, d3, kScalar).matrix(), mat({{1, 0}, {0, -1}})));

    const auto one = make_space({"p"}, {{"0"}});
    const auto e2 = NormedSpaceSpec::euclidean(2);
    const double c = std::cos(0.3), s = std::sin(0.3);
    const Eigen::MatrixXd rot = mat({{c, -s}, {s, c}});
    CHECK(close(build_standard({{0}}, {make_value_isometry(e2, e2, rot)}, one, e2, one, e2).matrix(), rot));

    CHECK_THROWS_AS(build_standard({{0, 1}}, {sign(1)}, d3, kScalar, d3, kScalar), InvalidStandardData);
    CHECK_THROWS_AS(build_standard({{0, 1}}, {sign(1)}, d1, kScalar, two_points("3/2"), kScalar), InvalidStandardData);
    CHECK_THROWS_AS(make_value_isometry(kScalar, kScalar, mat({{2}})), InvalidValueIsometry);
    CHECK_THROWS_AS(make_value_isometry(NormedSpaceSpec::lp(2, Rational{3}), NormedSpaceSpec::lp(2, Rational{3}), rot),
                    InvalidValueIsometry);
}

TEST_CASE("S_phi") {
    const auto d1 = two_points("1");
    const TypeAWitness w{{0}, {1}, {}};
    const LipOperator s = build_s_phi(w, d1, kScalar);
    CHECK(close(s.matrix(), mat({{-1, 1}, {0, 1}})));
    CHECK(close(compose(s, s).matrix(), Eigen::MatrixXd::Identity(2, 2)));
    CHECK(compute_ab_partition(s).a == std::vector<std::size_t>{0});
    CHECK_THROWS(build_s_phi({{0}, {1}, {}}, two_points("3/2"), kScalar));
}

TEST_CASE("compose") {
    const auto d1 = two_points("1");
    const LipOperator swap = build_standard({{1, 0}}, {sign(-1)}, d1, kScalar, d1, kScalar);
    CHECK(close(compose(LipOperator::identity(d1, kScalar), swap).matrix(), swap.matrix()));

    const auto path = make_space({"a", "b", "c"}, {{"0", "1", "2"}, {"1", "0", "1"}, {"2", "1", "0"}});
    const LipOperator rev = build_standard({{2, 1, 0}}, {sign(1)}, path, kScalar, path, kScalar);
    const LipOperator neg = build_standard({{0, 1, 2}}, {sign(-1)}, path, kScalar, path, kScalar);
    const LipOperator both = compose(rev, neg);
    const StandardForm sf = extract_standard_form(both);
    CHECK(sf.h.h == std::vector<std::size_t>{2, 1, 0});
    CHECK(sf.j[0].matrix(0, 0) == -1);
    CHECK_THROWS_AS(compose(swap, rev), ShapeMismatch);
}

TEST_CASE("Property P and the A/B partition") {
    const auto d1 = two_points("1");
    const LipOperator swap = build_standard({{1, 0}}, {sign(1)}, d1, kScalar, d1, kScalar);
    CHECK(check_property_p(swap).holds);
    CHECK(compute_ab_partition(swap).a.empty());
    const LipOperator s = build_s_phi({{0}, {1}, {}}, d1, kScalar);
    CHECK_FALSE(check_property_p(s).holds);
    CHECK(compute_ab_partition(compose(s, swap)).a == std::vector<std::size_t>{0});
}

TEST_CASE("extract_standard_form examples") {
    const auto d1 = two_points("1");
    const StandardForm a = extract_standard_form(scalar_op(d1, mat({{0, -1}, {-1, 0}})));
    CHECK(a.h.h == std::vector<std::size_t>{1, 0});
    CHECK(a.j.size() == 1);
    CHECK(a.j[0].matrix(0, 0) == -1);

    try {
        extract_standard_form(build_s_phi({{0}, {1}, {}}, d1, kScalar));
        FAIL("S_phi extracted as standard");
    } catch (const NotStandard& e) {
        CHECK(e.reason() == NotStandard::Reason::ResponseCount);
    }

    const auto d3 = two_points("3");
    const StandardForm b = extract_standard_form(scalar_op(d3, mat({{1, 0}, {0, -1}})));
    CHECK(b.h.h == std::vector<std::size_t>{0, 1});
    REQUIRE(b.j.size() == 2);
    CHECK(b.j[0].matrix(0, 0) == 1);
    CHECK(b.j[1].matrix(0, 0) == -1);

    // J flips sign inside one 2-component.
    CHECK_THROWS_AS(extract_standard_form(scalar_op(d1, mat({{1, 0}, {0, -1}}))), NotStandard);
    CHECK_THROWS_AS(extract_standard_form(scalar_op(d1, mat({{2, 0}, {0, 2}}))), NotStandard);
}

TEST_CASE("decompose_nonstandard examples") {
    const auto d1 = two_points("1");
    const LipOperator s = build_s_phi({{0}, {1}, {}}, d1, kScalar);
    const NonstandardDecomposition ds = decompose_nonstandard(s);
    CHECK(ds.phi_witness.a == std::vector<std::size_t>{0});
    CHECK(close(ds.residual, Eigen::MatrixXd::Identity(2, 2)));

    const NonstandardDecomposition dt = decompose_nonstandard(scalar_op(d1, mat({{1, -1}, {0, -1}})));
    CHECK(dt.phi_witness.phi == std::vector<std::size_t>{1});
    CHECK(close(dt.residual, -Eigen::MatrixXd::Identity(2, 2)));

    CHECK_THROWS_AS(decompose_nonstandard(LipOperator::identity(d1, kScalar)), std::invalid_argument);
    // A(T) = {a} but the residual is not standard.
    CHECK_THROWS(decompose_nonstandard(scalar_op(d1, mat({{0, 0}, {0, 1}}))));
}

TEST_CASE("enumerate_isometries counts") {
    auto count = [](const char* d) {
        const auto s = two_points(d);
        const auto ops = enumerate_isometries(s, s, kScalar, kScalar);
        std::size_t standard = 0;
        for (const auto& t : ops) standard += t.standard;
        return std::make_pair(standard, ops.size() - standard);
    };
    CHECK(count("2") == std::make_pair(std::size_t{8}, std::size_t{0}));
    CHECK(count("1") == std::make_pair(std::size_t{4}, std::size_t{8}));
    CHECK(count("1/2") == std::make_pair(std::size_t{4}, std::size_t{0}));

    const auto one = make_space({"p"}, {{"0"}});
    const auto l3 = NormedSpaceSpec::lp(2, Rational{3});
    CHECK(enumerate_isometries(one, one, l3, l3).size() == 8);
    const auto e2 = NormedSpaceSpec::euclidean(2);
    CHECK_THROWS_AS(enumerate_isometries(one, one, e2, e2), InfiniteValueGroup);
    CHECK(value_isometry_group(l3, l3).size() == 8);
    CHECK(value_isometry_group(NormedSpaceSpec::lp(3, Rational{4}), NormedSpaceSpec::lp(3, Rational{4})).size() == 48);
}

TEST_CASE("enumerated isometries: structure of nonstandard ones") {
    std::mt19937_64 rng(99);
    int nonstandard_seen = 0;
    for (int trial = 0; trial < 15; ++trial) {
        const auto s = lipiso::testing::planted_space(rng, 4);
        for (const auto& t : enumerate_isometries(s, s, kScalar, kScalar)) {
            const ABPartition ab = compute_ab_partition(t.op);
            CHECK(ab.a.empty() == t.standard);
            if (t.standard) {
                CHECK(check_property_p(t.op).holds);
                continue;
            }
            ++nonstandard_seen;
            CHECK(compare(set_distance(*s, ab.a, ab.b), Rational{1}).order >= 0);
            for (std::size_t y0 : ab.a) CHECK(compare(set_distance(*s, {y0}, ab.b), Rational{1}).order == 0);
            const NonstandardDecomposition d = decompose_nonstandard(t.op);
            const LipOperator rebuilt = compose(build_s_phi(d.phi_witness, s, kScalar), build_standard(d.standard_part, s, kScalar, s, kScalar));
            CHECK(max_abs_difference(rebuilt, t.op) <= 1e-9);
        }
    }
    CHECK(nonstandard_seen > 0);
}

TEST_CASE("inverse and round trip through extraction") {
    std::mt19937_64 rng(4);
    const auto l3 = NormedSpaceSpec::lp(2, Rational{3});
    const auto group = value_isometry_group(l3, l3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = lipiso::testing::random_space(rng, 4, 2, 6);
        const auto h = iso2_search(*s, *s, SearchMode::All).witnesses;
        const Iso2Witness& pick = h[rng() % h.size()];
        const RPartition comp = r_components(*s, Rational{2});
        std::vector<ValueIsometry> j;
        for (std::size_t b = 0; b < comp.blocks.size(); ++b) j.push_back(group[rng() % group.size()]);
        const LipOperator t = build_standard(pick, j, s, l3, s, l3);
        const StandardForm back = extract_standard_form(t);
        CHECK(back.h == pick);
        for (std::size_t b = 0; b < j.size(); ++b) CHECK(close(back.j[b].matrix, j[b].matrix));
        CHECK(close(compose(inverse(t), t).matrix(), Eigen::MatrixXd::Identity(8, 8)));
    }
    const auto d1 = two_points("1");
    CHECK_THROWS_AS(inverse(scalar_op(d1, mat({{1, 1}, {1, 1}}))), NotSurjective);
}

TEST_CASE("matrix_key rounds to 12 decimals") {
    CHECK(matrix_key(mat({{1.0}})) == matrix_key(mat({{1.0 + 1e-14}})));
    CHECK(matrix_key(mat({{1.0}})) != matrix_key(mat({{1.0 + 1e-9}})));
}
