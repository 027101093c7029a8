#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fpp/errors.hpp"
#include "fpp/gla.hpp"
#include "oracles.hpp"

using namespace fpp;

namespace {

SiteWeightField random_integer_weights(const LatticeBox& box, std::mt19937_64& rng, int top) {
    std::uniform_int_distribution<int> d(0, top);
    std::vector<double> w(box.size());
    for (auto& x : w) x = d(rng);
    return SiteWeightField(box, w);
}

}  // namespace

TEST_CASE("weight field validation") {
    const LatticeBox box(2, 1);
    CHECK_THROWS_AS(SiteWeightField(box, std::vector<double>(9, -1.0)), DomainError);
    CHECK_THROWS_AS(SiteWeightField(box, std::vector<double>(8, 1.0)), DomainError);
    CHECK_THROWS_AS(SiteWeightField(box, std::vector<double>(9, 3.0), 2.0), DomainError);
    CHECK(WeightModel::bernoulli(0.3).bound() == 1.0);
    CHECK_FALSE(WeightModel::bernoulli_cluster(0.3).bound().has_value());
    CHECK(WeightModel::bernoulli_cluster(0.3, 20.0).bound() == 20.0);
    const auto w = WeightModel::bernoulli_cluster(0.3, 3.0).sample(LatticeBox(2, 20), 4);
    CHECK(w.max_weight() <= 3.0);
}

TEST_CASE("exact animals on the 3x3 fixture") {
    const LatticeBox box(2, 1);
    std::vector<double> w(9);
    for (int i = 0; i < 9; ++i) w[i] = i;
    const SiteWeightField f(box, w);
    const auto one = exact_animal_max(f, 1);
    CHECK(one.weight == 4.0);
    CHECK(one.sites == std::vector<std::size_t>{4});
    for (std::size_t n = 1; n <= 9; ++n) {
        const auto got = exact_animal_max(f, n);
        const auto want = oracle::animal_max(f, n);
        CHECK(got.weight == want.first);
        CHECK(got.sites == want.second);
    }
    CHECK(exact_animal_max(f, 9).weight == 36.0);
}

TEST_CASE("exact animals match the subset oracle on 5x5 fields") {
    const LatticeBox box(2, 2);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 4; ++trial) {
        const auto f = random_integer_weights(box, rng, trial < 2 ? 3 : 9);  // small ranges force ties
        const auto series = exact_animal_series(f, 7);
        for (std::size_t n = 1; n <= 7; ++n) {
            const auto want = oracle::animal_max(f, n);
            const auto got = exact_animal_max(f, n);
            CHECK(got.weight == want.first);
            CHECK(got.sites == want.second);
            CHECK(series[n - 1].weight == want.first);
            CHECK(series[n - 1].sites == want.second);
            if (n > 1) CHECK(series[n - 1].weight >= series[n - 2].weight);
        }
    }
}

TEST_CASE("exact animal counts") {
    // Constant weights: every enumerated animal is a tie, and the count of fixed animals
    // through the root is n times the fixed polyomino count.
    const LatticeBox box(2, 6);
    const SiteWeightField ones(box, std::vector<double>(box.size(), 1.0));
    for (std::size_t n = 1; n <= 6; ++n) CHECK(exact_animal_max(ones, n).weight == static_cast<double>(n));
    CHECK_THROWS_AS((void)exact_animal_max(ones, 13), PreconditionError);
    const LatticeBox cube(3, 2);
    const SiteWeightField c(cube, std::vector<double>(cube.size(), 1.0));
    CHECK_THROWS_AS((void)exact_animal_max(c, 10), PreconditionError);
    CHECK(exact_animal_max(c, 5).weight == 5.0);
}

TEST_CASE("heuristic animals") {
    const LatticeBox box(2, 8);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 6; ++trial) {
        const auto f = random_integer_weights(box, rng, 5);
        for (std::size_t n : {1, 4, 8, 10}) {
            const double exact = exact_animal_max(f, n).weight;
            double prev = -1.0;
            for (int beam : {1, 2, 3, 5, 8}) {
                const auto h = heuristic_animal_max(f, n, beam, 42);
                CHECK(h.weight <= exact);
                CHECK(h.weight >= prev);
                CHECK(is_valid_animal(box, h.sites, n));
                prev = h.weight;
            }
        }
        // Small sizes with a beam wider than the number of animals are exact.
        CHECK(heuristic_animal_max(f, 3, 64, 1).weight == exact_animal_max(f, 3).weight);
        const auto series = heuristic_animal_series(f, 40, 3, 7);
        for (std::size_t m = 1; m < series.size(); ++m) CHECK(series[m] >= series[m - 1]);
    }
    const SiteWeightField flat(box, std::vector<double>(box.size(), 2.5));
    CHECK(heuristic_animal_max(flat, 30, 1, 0).weight == 75.0);
    CHECK_THROWS_AS((void)heuristic_animal_max(SiteWeightField(LatticeBox(2, 1), std::vector<double>(9, 1.0)), 10, 1, 0),
                    DomainError);
    CHECK_THROWS_AS((void)heuristic_animal_max(flat, 3, 0, 0), DomainError);
}

TEST_CASE("animal validity check") {
    const LatticeBox box(2, 2);
    const std::size_t o = box.origin_index();
    CHECK(is_valid_animal(box, std::vector<std::size_t>{o, o + 1}, 2));
    CHECK_FALSE(is_valid_animal(box, std::vector<std::size_t>{o, o + 2}, 2));
    CHECK_FALSE(is_valid_animal(box, std::vector<std::size_t>{o + 1, o + 2}, 2));
    CHECK_FALSE(is_valid_animal(box, std::vector<std::size_t>{o, o}, 2));
}

TEST_CASE("W limit estimates") {
    const std::size_t grid[] = {1, 5, 20};
    const auto constant = estimate_W_limit(WeightModel::constant(1.0), 2, grid, 3, 1);
    for (const auto& row : constant.rows) CHECK(row.mean_ratio == 1.0);
    CHECK(constant.W == 1.0);
    CHECK(constant.rows[0].exact);
    CHECK_FALSE(constant.rows[2].exact);

    const std::size_t one[] = {1};
    const std::uint64_t reps = 4000;
    const auto b = estimate_W_limit(WeightModel::bernoulli(0.3), 2, one, reps, 5);
    CHECK(std::abs(b.W - 0.3) <= 4 * std::sqrt(0.21 / reps));

    AnimalOptions threaded;
    threaded.threads = 3;
    const auto u1 = estimate_W_limit(WeightModel::uniform(2.0), 2, grid, 6, 9);
    const auto u3 = estimate_W_limit(WeightModel::uniform(2.0), 2, grid, 6, 9, threaded);
    for (std::size_t i = 0; i < u1.rows.size(); ++i) CHECK(u1.rows[i].mean_ratio == u3.rows[i].mean_ratio);
}

TEST_CASE("deviation frequency") {
    const auto zero = deviation_frequency(WeightModel::constant(1.0), 2, 6, 1.0, 50, 1);
    CHECK(zero.frequency.hits == 0);
    CHECK(zero.exact);

    const std::uint64_t reps = 4000;
    const auto tail = deviation_frequency(WeightModel::bernoulli(0.3), 2, 1, 0.0, reps, 2);
    CHECK(std::abs(tail.frequency.estimate - 0.3) <= 4 * std::sqrt(0.21 / reps));
    CHECK_THROWS_AS((void)deviation_frequency(WeightModel::bernoulli_cluster(0.3), 2, 5, 1.0, 10, 1),
                    PreconditionError);
}
