#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpp/clusters.hpp"
#include "fpp/coloring.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

// Nonnegative site weights on a box, optionally with a known upper bound y.
class SiteWeightField {
public:
    SiteWeightField(LatticeBox box, std::vector<double> weights, std::optional<double> bound = std::nullopt);

    // Squared color-cluster sizes |C_v|^2 of a decomposition.
    [[nodiscard]] static SiteWeightField squared_cluster_sizes(const ClusterDecomposition& dec);

    [[nodiscard]] const LatticeBox& box() const noexcept { return box_; }
    [[nodiscard]] double operator[](std::size_t idx) const noexcept { return w_[idx]; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return w_; }
    [[nodiscard]] std::optional<double> bound() const noexcept { return bound_; }
    [[nodiscard]] double max_weight() const noexcept { return max_; }

private:
    LatticeBox box_;
    std::vector<double> w_;
    std::optional<double> bound_;
    double max_ = 0.0;
};

// Random weight fields for the animal experiments.
struct WeightModel {
    enum class Kind { constant, bernoulli, uniform, bernoulli_cluster, color_cluster_squared };
    Kind kind = Kind::constant;
    double param = 1.0;  // the constant, theta, or the uniform range y
    std::optional<double> cap;                 // weights become min(w, cap)
    std::optional<ColoringLaw> law;            // color_cluster_squared only

    [[nodiscard]] static WeightModel constant(double c);
    [[nodiscard]] static WeightModel bernoulli(double theta);
    [[nodiscard]] static WeightModel uniform(double y);
    // Weight |C_v| of the occupied Bernoulli(theta) cluster through v, 0 if v is vacant.
    [[nodiscard]] static WeightModel bernoulli_cluster(double theta, std::optional<double> cap = std::nullopt);
    [[nodiscard]] static WeightModel color_cluster_squared(ColoringLaw law, std::optional<double> cap = std::nullopt);

    // Known upper bound y on the weights, if any.
    [[nodiscard]] std::optional<double> bound() const;
    [[nodiscard]] SiteWeightField sample(const LatticeBox& box, std::uint64_t seed) const;
    [[nodiscard]] std::string describe() const;
};

struct AnimalResult {
    double weight = 0.0;
    std::vector<std::size_t> sites;  // ascending flat indices; contains the origin
    bool exact = false;
};

// Exhaustive maximum over connected n-site sets containing the origin (all inside the box).
// Ties go to the lexicographically smallest vertex set. PreconditionError above n = 12 in
// d = 2 or n = 9 in d >= 3.
[[nodiscard]] AnimalResult exact_animal_max(const SiteWeightField& weights, std::size_t n);

// Best weight for every size 1..n from one exhaustive pass (same guard).
[[nodiscard]] std::vector<AnimalResult> exact_animal_series(const SiteWeightField& weights, std::size_t n);

// Lower bound from two searches: a beam search over single-site extensions, run at every
// width 1..beam, and a greedy growth that attaches whole positive-weight components through
// shortest paths. The best of all runs is kept, so the value never decreases as the beam
// widens. DomainError if the box holds fewer than n sites.
[[nodiscard]] AnimalResult heuristic_animal_max(const SiteWeightField& weights, std::size_t n, int beam,
                                                std::uint64_t seed);

// Heuristic best weights for sizes 1..n (index m-1 holds size m).
[[nodiscard]] std::vector<double> heuristic_animal_series(const SiteWeightField& weights, std::size_t n,
                                                          int beam, std::uint64_t seed);

// Structural check: connected, contains the origin, exactly n distinct in-box sites.
[[nodiscard]] bool is_valid_animal(const LatticeBox& box, std::span<const std::size_t> sites, std::size_t n);

struct AnimalSeriesRow {
    std::size_t n;
    double mean_ratio;  // mean of W(n)/n over replicas
    double ci_low;
    double ci_high;
    bool exact;
};

struct AnimalWeightSeries {
    std::vector<AnimalSeriesRow> rows;
    double W = 0.0;                 // mean ratio at the largest n
    double plateau_change = 0.0;    // relative change between the last two grid points
    bool ratios_nonincreasing = false;  // reported, not asserted
};

struct AnimalOptions {
    int beam = 4;
    int threads = 1;
    double z = 1.96;
};

// Monte Carlo means of W(n)/n. Grid sizes within the enumeration guard are exact; larger
// ones use the heuristic search.
[[nodiscard]] AnimalWeightSeries estimate_W_limit(const WeightModel& model, int dim,
                                                  std::span<const std::size_t> n_grid, std::uint64_t replicas,
                                                  std::uint64_t seed, const AnimalOptions& opt = {});

struct DeviationEstimate {
    BinomialEstimate frequency;  // of {W(n)/n >= W_ref + 1}
    bool exact = false;          // false: heuristic values, so the frequency is a lower bound
    double bound_y = 0.0;
};

// PreconditionError for a weight model without a known bound.
[[nodiscard]] DeviationEstimate deviation_frequency(const WeightModel& model, int dim, std::size_t n,
                                                    double W_ref, std::uint64_t replicas, std::uint64_t seed,
                                                    const AnimalOptions& opt = {});

[[nodiscard]] std::size_t enumeration_guard(int dim) noexcept;

}  // namespace fpp
