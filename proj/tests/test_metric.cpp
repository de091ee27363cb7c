#include <doctest.h>

#include <random>
#include <set>

#include "support.hpp"

using namespace lipiso;
using lipiso::testing::make_space;
using lipiso::testing::two_points;

namespace {

RawMetric raw(std::vector<std::vector<Rational>> d) {
    RawMetric r;
    for (std::size_t i = 0; i < d.size(); ++i) r.labels.push_back(std::string(1, static_cast<char>('a' + i)));
    r.dist = std::move(d);
    return r;
}

bool has(const ValidationReport& rep, MetricViolation::Kind kind) {
    for (const auto& v : rep.violations)
        if (v.kind == kind) return true;
    return false;
}

}  // namespace

TEST_CASE("validate") {
    CHECK(validate(raw({{0, 1}, {1, 0}})).valid());

    const auto tri = validate(raw({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}));
    REQUIRE(has(tri, MetricViolation::Kind::Triangle));
    CHECK(tri.violations.front().points == std::vector<std::size_t>{0, 1, 2});

    CHECK(has(validate(raw({{0, 1}, {2, 0}})), MetricViolation::Kind::Asymmetry));
    CHECK(has(validate(raw({{1, 1}, {1, 0}})), MetricViolation::Kind::NonzeroDiagonal));
    CHECK(has(validate(raw({{0, 0}, {0, 0}})), MetricViolation::Kind::NonPositive));
    CHECK(has(validate(raw({{0, 1}})), MetricViolation::Kind::Shape));
    CHECK(has(validate(RawMetric{}), MetricViolation::Kind::Empty));

    RawMetric dup = raw({{0, 1}, {1, 0}});
    dup.labels = {"x", "x"};
    CHECK(has(validate(dup), MetricViolation::Kind::DuplicateLabel));
    CHECK_THROWS_AS(FiniteMetricSpace{dup}, InvalidMetric);
}

TEST_CASE("r_components uses strict inequality") {
    const auto d1 = two_points("1");
    CHECK(r_components(*d1, Rational{1}).blocks.size() == 2);
    CHECK(r_components(*d1, Rational{2}).blocks.size() == 1);

    const auto chain = make_space({"a", "b", "c"}, {{"0", "1/2", "1"}, {"1/2", "0", "1/2"}, {"1", "1/2", "0"}});
    CHECK(r_components(*chain, Rational{1}).blocks == std::vector<std::vector<std::size_t>>{{0, 1, 2}});
    CHECK(r_components(*chain, Rational(1, 2)).blocks.size() == 3);

    CHECK(is_r_connected(*two_points("1/2"), Rational{1}));
    CHECK_FALSE(is_r_connected(*d1, Rational{1}));
    CHECK(is_r_connected(*d1, Rational{2}));
}

TEST_CASE("r_components: partition and refinement on random spaces") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = lipiso::testing::random_space(rng, 6, 2, 6);
        const RPartition fine = r_components(*s, Rational(3, 2));
        const RPartition coarse = r_components(*s, Rational{2});
        std::set<std::size_t> seen;
        for (const auto& b : fine.blocks) {
            CHECK_FALSE(b.empty());
            for (std::size_t p : b) CHECK(seen.insert(p).second);
            for (std::size_t p : b) CHECK(coarse.block_of[p] == coarse.block_of[b.front()]);
        }
        CHECK(seen.size() == s->size());
    }
}

TEST_CASE("power_metric") {
    const auto four = two_points("4");
    const FiniteMetricSpace half = power_metric(*four, Rational(1, 2));
    CHECK(half.exact());
    CHECK(half.d(0, 1) == 2);
    CHECK(power_metric(*four, Rational{1}) == *four);
    CHECK(power_metric(*two_points("1"), Rational(1, 3)).d(0, 1) == 1);
    CHECK_THROWS_AS(power_metric(*four, Rational{0}), std::invalid_argument);
    CHECK_THROWS_AS(power_metric(*four, Rational(3, 2)), std::invalid_argument);

    const FiniteMetricSpace root2 = power_metric(*two_points("2"), Rational(1, 2));
    CHECK_FALSE(root2.exact());
    CHECK(root2.rounding_bound() > 0);
    CHECK(compare(root2.distance(0, 1), PowerValue{Rational{2}, Rational(1, 2)}).order == 0);
    // Powers compose exactly.
    const FiniteMetricSpace quarter = power_metric(root2, Rational(1, 2));
    CHECK(compare(quarter.distance(0, 1), PowerValue{Rational{2}, Rational(1, 4)}).order == 0);
}

TEST_CASE("power and truncated metrics revalidate") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto s = lipiso::testing::random_space(rng, 5, 3, 12);
        CHECK(validate(truncate_metric(*s).raw()).valid());
        for (const Rational& a : {Rational(1, 3), Rational(1, 2), Rational(2, 3)}) {
            const FiniteMetricSpace p = power_metric(*s, a);
            // Stored values are 2^-200 approximations; the triangle slack of d^alpha dwarfs that.
            CHECK(validate(p.raw()).valid());
        }
    }
}

TEST_CASE("truncate_metric") {
    CHECK(truncate_metric(*two_points("3")).d(0, 1) == 2);
    CHECK(truncate_metric(*two_points("3/2")).d(0, 1) == Rational(3, 2));
    const auto small = make_space({"a", "b", "c"}, {{"0", "1", "2"}, {"1", "0", "1"}, {"2", "1", "0"}});
    CHECK(truncate_metric(*small) == *small);
}

TEST_CASE("iso2_search") {
    const auto d1 = two_points("1");
    CHECK(iso2_search(*d1, *d1, SearchMode::All).witnesses.size() == 2);
    CHECK(iso2_search(*d1, *two_points("3/2"), SearchMode::All).witnesses.empty());
    const auto d3 = two_points("3");
    CHECK(iso2_search(*d3, *d3, SearchMode::All).witnesses.size() == 2);
    const auto three = make_space({"a", "b", "c"}, {{"0", "1", "2"}, {"1", "0", "1"}, {"2", "1", "0"}});
    CHECK(iso2_search(*three, *d1, SearchMode::All).witnesses.empty());
    // Path a-b-c: only the identity and the reversal keep the middle point in the middle.
    CHECK(iso2_search(*three, *three, SearchMode::All).witnesses.size() == 2);
}

TEST_CASE("iso2 witnesses: inverse symmetry and component preservation") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const auto x = lipiso::testing::random_space(rng, 5, 2, 5);
        // A relabelled copy always admits at least one witness.
        std::vector<std::size_t> perm{0, 1, 2, 3, 4};
        std::shuffle(perm.begin(), perm.end(), rng);
        RawMetric r = x->raw();
        RawMetric py = r;
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j) py.dist[i][j] = r.dist[perm[i]][perm[j]];
        const FiniteMetricSpace y{py};

        const auto yx = iso2_search(y, *x, SearchMode::All);
        const auto xy = iso2_search(*x, y, SearchMode::All);
        REQUIRE_FALSE(yx.witnesses.empty());
        std::set<std::vector<std::size_t>> inverted;
        for (const auto& w : yx.witnesses) {
            CHECK(is_iso2(y, *x, w));
            inverted.insert(w.inverse());
        }
        std::set<std::vector<std::size_t>> direct;
        for (const auto& w : xy.witnesses) direct.insert(w.h);
        CHECK(inverted == direct);

        const RPartition cy = r_components(y, Rational{2});
        const RPartition cx = r_components(*x, Rational{2});
        for (const auto& w : yx.witnesses)
            for (const auto& b : cy.blocks) {
                std::set<std::size_t> image;
                for (std::size_t p : b) image.insert(cx.block_of[w.h[p]]);
                CHECK(image.size() == 1);
                CHECK(cx.blocks[*image.begin()].size() == b.size());
            }
    }
}

TEST_CASE("set_distance is exact") {
    const auto s = make_space({"a", "b", "c"}, {{"0", "1", "3"}, {"1", "0", "2"}, {"3", "2", "0"}});
    CHECK(compare(set_distance(*s, {0}, {1, 2}), Rational{1}).order == 0);
    CHECK(compare(set_distance(*s, {2}, {0, 1}), Rational{2}).order == 0);
}
