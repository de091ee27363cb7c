#include <doctest.h>

#include "lipiso/json_io.hpp"
#include "support.hpp"

using namespace lipiso;
using io::json;

TEST_CASE("metric JSON accepts strings and integers") {
    const json j = json::parse(R"({"labels":["a","b","c"],"dist":[[0,"1/2","1.5"],["1/2",0,1],["1.5",1,0]]})");
    const FiniteMetricSpace s{io::raw_metric_from_json(j)};
    CHECK(s.d(0, 2) == Rational(3, 2));
    CHECK(s.label(1) == "b");
    CHECK(FiniteMetricSpace{io::raw_metric_from_json(io::metric_to_json(s))} == s);

    const RawMetric unlabeled = io::raw_metric_from_json(json::parse(R"({"dist":[["0","1"],["1","0"]]})"));
    CHECK(unlabeled.labels == std::vector<std::string>{"0", "1"});
    CHECK_THROWS_AS(io::raw_metric_from_json(json::parse(R"({"labels":["a"]})")), io::InputError);
    CHECK_THROWS_AS(io::raw_metric_from_json(json::parse(R"({"dist":[["0","x"],["1","0"]]})")), io::InputError);
}

TEST_CASE("value space forms") {
    CHECK(io::value_space_from_flag("scalar") == NormedSpaceSpec::scalar());
    CHECK(io::value_space_from_flag("l2:3") == NormedSpaceSpec::euclidean(3));
    CHECK(io::value_space_from_flag("lp:2:3") == NormedSpaceSpec::lp(2, Rational{3}));
    CHECK_THROWS_AS(io::value_space_from_flag("l1:2"), io::InputError);
    const auto l3 = NormedSpaceSpec::lp(2, Rational{3});
    CHECK(io::value_space_from_json(io::value_space_to_json(l3)) == l3);
}

TEST_CASE("witness JSON round trip") {
    const auto s = lipiso::testing::two_points("1");
    const TypeAWitness w{{0}, {1}, {}};
    const json j = io::witness_to_json(*s, w);
    CHECK(j.dump() == R"({"kind":"plain","A":["a"],"phi":{"a":"b"}})");
    CHECK(io::witness_from_json(*s, j) == w);
    const TypeAWitness wa{{1}, {0}, Rational(1, 2)};
    CHECK(io::witness_from_json(*s, io::witness_to_json(*s, wa)) == wa);
    CHECK_THROWS_AS(io::witness_from_json(*s, json::parse(R"({"phi":{"z":"a"}})")), io::InputError);
}

TEST_CASE("operator JSON round trip") {
    const auto s = lipiso::testing::two_points("1");
    const auto e = NormedSpaceSpec::euclidean(2);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
    m(0, 1) = -0.0;
    m(2, 3) = 0.25;
    const LipOperator t(s, e, s, e, m);
    const LipOperator back = io::operator_from_json(io::operator_to_json(t));
    CHECK(back.matrix() == t.matrix());
    CHECK(back.domain_values() == e);
    CHECK(*back.codomain_space() == *s);
    // -0 is normalized for byte-stable output.
    CHECK(io::matrix_to_json(m)[0][1].dump() == "0.0");

    json bad = io::operator_to_json(t);
    bad["matrix"] = json::array({json::array({1.0})});
    CHECK_THROWS_AS(io::operator_from_json(bad), io::InputError);
}

TEST_CASE("report JSON") {
    VerificationReport r;
    r.checks.push_back({"x", true, false, ""});
    const json j = io::report_to_json(r);
    CHECK(j["status"] == "pass");
    CHECK(j["counterexample"].is_null());
}
