// Shared fixtures for unit tests and the acceptance runner.
#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "lipiso/metric.hpp"

namespace lipiso::testing {

inline SpacePtr make_space(std::vector<std::string> labels, std::initializer_list<std::initializer_list<const char*>> rows) {
    RawMetric raw;
    raw.labels = std::move(labels);
    for (const auto& row : rows) {
        std::vector<Rational> r;
        for (const char* v : row) r.push_back(parse_rational(v));
        raw.dist.push_back(std::move(r));
    }
    return std::make_shared<const FiniteMetricSpace>(raw);
}

inline SpacePtr two_points(const char* d) { return make_space({"a", "b"}, {{"0", d}, {d, "0"}}); }

/// Points on the real line with the usual distance.
inline SpacePtr line_space(const std::vector<Rational>& pts) {
    RawMetric raw;
    for (const auto& p : pts) raw.labels.push_back(to_string(p));
    for (const auto& p : pts) {
        std::vector<Rational> row;
        for (const auto& q : pts) row.push_back(p > q ? Rational{p - q} : Rational{q - p});
        raw.dist.push_back(std::move(row));
    }
    return std::make_shared<const FiniteMetricSpace>(raw);
}

/// {-1, 0, 1/k, ..., 1}: a finite piece of the completed example space.
inline SpacePtr grid_space(int k) {
    std::vector<Rational> pts{Rational{-1}, Rational{0}};
    for (int i = 1; i <= k; ++i) pts.emplace_back(i, k);
    return line_space(pts);
}

/// Shortest-path closure of a complete graph with the given edge weights.
inline SpacePtr closure_space(std::vector<std::vector<Rational>> w) {
    const std::size_t n = w.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (w[i][k] + w[k][j] < w[i][j]) w[i][j] = w[i][k] + w[k][j];
    RawMetric raw;
    for (std::size_t i = 0; i < n; ++i) raw.labels.push_back("p" + std::to_string(i));
    raw.dist = std::move(w);
    return std::make_shared<const FiniteMetricSpace>(raw);
}

/// Random metric with edge weights j/den for j in [1, max_num]; unit distances are common
/// when den divides into 1 often, which keeps type-A instances in the mix.
inline SpacePtr random_space(std::mt19937_64& rng, std::size_t n, int den, int max_num) {
    std::uniform_int_distribution<int> num(1, max_num);
    std::vector<std::vector<Rational>> w(n, std::vector<Rational>(n, Rational{0}));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) w[i][j] = w[j][i] = Rational{num(rng), den};
    return closure_space(std::move(w));
}

/// Random metric with planted leaves: some points sit at distance 1 from a partner and,
/// depending on a random spread factor, far enough from the rest that type A_alpha can hold.
inline SpacePtr planted_space(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> num(2, 12);
    std::bernoulli_distribution coin(0.5);
    static constexpr int kSpread[] = {1, 2, 3, 8};
    const int spread = kSpread[rng() % 4];
    std::vector<std::vector<Rational>> w(n, std::vector<Rational>(n, Rational{0}));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) w[i][j] = w[j][i] = Rational{num(rng) * spread, 4};
    const std::size_t leaves = 1 + rng() % (n / 2);
    for (std::size_t l = 0; l < leaves; ++l) {
        const std::size_t leaf = n - 1 - l;
        const std::size_t partner = rng() % (n - leaves);
        for (std::size_t j = 0; j < n; ++j)
            if (j != leaf) w[leaf][j] = w[j][leaf] = coin(rng) ? Rational{num(rng) * spread * 2, 4} : w[partner][j] + 1;
        w[leaf][partner] = w[partner][leaf] = Rational{1};
    }
    return closure_space(std::move(w));
}

}  // namespace lipiso::testing
