#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fpp/coloring.hpp"
#include "fpp/config.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

inline constexpr std::uint32_t kNoCluster = 0xFFFFFFFFu;

// Partition of (a subset of) the box into maximal connected classes. A cluster's id is the
// smallest flat index it contains; excluded sites carry kNoCluster and size 0.
class ClusterDecomposition {
public:
    ClusterDecomposition(LatticeBox box, std::vector<std::uint32_t> ids);

    [[nodiscard]] const LatticeBox& box() const noexcept { return box_; }
    [[nodiscard]] std::uint32_t id(std::size_t idx) const noexcept { return id_[idx]; }
    [[nodiscard]] std::span<const std::uint32_t> ids() const noexcept { return id_; }
    // |C_v| (0 for excluded sites).
    [[nodiscard]] std::uint32_t size_at(std::size_t idx) const noexcept;
    [[nodiscard]] std::size_t cluster_count() const noexcept { return count_; }
    // Sizes of all clusters, ordered by id.
    [[nodiscard]] std::vector<std::uint32_t> cluster_sizes() const;

private:
    LatticeBox box_;
    std::vector<std::uint32_t> id_;
    std::vector<std::uint32_t> size_by_id_;
    std::size_t count_ = 0;
};

// Color clusters of a field (union-find over monochromatic edges).
[[nodiscard]] ClusterDecomposition decompose_clusters(const ColorField& field);

// Clusters after identifying every color > S with the merged color S+1.
class TruncatedDecomposition {
public:
    TruncatedDecomposition(const ClusterDecomposition& base, const ColorField& field, std::size_t s);

    [[nodiscard]] std::size_t S() const noexcept { return s_; }
    [[nodiscard]] const ClusterDecomposition& merged() const noexcept { return merged_; }
    // Truncated color of a site: min(X_v, S+1).
    [[nodiscard]] Color truncated_color(std::size_t idx) const noexcept { return colors_[idx]; }
    // |C_v^s| for s in 1..S+1.
    [[nodiscard]] std::uint32_t color_cluster_size(std::size_t idx, Color s) const noexcept;
    // sum_s |C_v^s|, i.e. the size of v's cluster in the truncated coloring.
    [[nodiscard]] std::uint32_t truncated_size(std::size_t idx) const noexcept {
        return merged_.size_at(idx);
    }

private:
    std::size_t s_;
    std::vector<Color> colors_;
    ClusterDecomposition merged_;
};

[[nodiscard]] TruncatedDecomposition truncate_colors(const ClusterDecomposition& dec,
                                                     const ColorField& field, std::size_t s);

// The cluster chain along a self-avoiding path r with |r| = n sites:
//   (1+T(r))/n >= (1/n) sum_v |C_v ∩ r|^{-1} >= [ (1/n) sum_v |C_v ∩ r| ]^{-1}
//              >= [ (1/n) sum_v |C_v| ]^{-1} >= [ (1/n) sum_v sum_s |C_v^s| ]^{-1}.
// The middle sum equals the number of distinct clusters touched. Every link is decided in
// integer arithmetic.
struct ChainReport {
    std::size_t sites = 0;              // n = |r|
    std::uint64_t time = 0;             // T(r)
    std::uint64_t clusters_touched = 0; // distinct cluster ids on r
    double reciprocal_sum = 0.0;        // sum_v |C_v ∩ r|^{-1}, summed directly
    std::uint64_t sum_in_path = 0;      // sum_v |C_v ∩ r|
    std::uint64_t sum_full = 0;         // sum_v |C_v|
    std::uint64_t sum_truncated = 0;    // sum_v sum_s |C_v^s|

    // The four per-site quantities of the chain.
    [[nodiscard]] double time_term() const { return (1.0 + time) / sites; }
    [[nodiscard]] double touched_term() const { return static_cast<double>(clusters_touched) / sites; }
    [[nodiscard]] double jensen_term() const { return static_cast<double>(sites) / sum_in_path; }
    [[nodiscard]] double full_term() const { return static_cast<double>(sites) / sum_full; }
    [[nodiscard]] double truncated_term() const { return static_cast<double>(sites) / sum_truncated; }

    [[nodiscard]] bool time_link() const { return 1 + time >= clusters_touched; }
    [[nodiscard]] bool jensen_link() const {
        return static_cast<unsigned __int128>(clusters_touched) * sum_in_path >=
               static_cast<unsigned __int128>(sites) * sites;
    }
    [[nodiscard]] bool full_link() const { return sum_full >= sum_in_path; }
    [[nodiscard]] bool truncated_link() const { return sum_truncated >= sum_full; }
    // The reciprocal sum and the distinct-id count agree.
    [[nodiscard]] bool counts_agree() const;
    [[nodiscard]] bool holds() const {
        return time_link() && jensen_link() && full_link() && truncated_link() && counts_agree();
    }
};

// DomainError if the path leaves the box or is not self-avoiding.
[[nodiscard]] ChainReport chain_inequality_check(const ColorField& field,
                                                 const ClusterDecomposition& dec,
                                                 const TruncatedDecomposition& trunc,
                                                 const LatticePath& path);
[[nodiscard]] ChainReport chain_inequality_check(const ColorField& field, const LatticePath& path,
                                                 std::size_t s);

struct BernoulliField {
    LatticeBox box;
    double theta;
    std::vector<char> occupied;
    ClusterDecomposition clusters;  // occupied sites only
};

// Occupied iff the site's uniform (domain-separated from colorings) is below theta.
[[nodiscard]] BernoulliField sample_bernoulli_field(const LatticeBox& box, double theta,
                                                    std::uint64_t seed);

// Size of the origin's cluster grown lazily on Z^d, stopping once `stop_at` sites are found.
// `in_class(v)` decides membership; the origin itself must satisfy it or the size is 0.
[[nodiscard]] std::size_t grow_origin_cluster(int dim, std::size_t stop_at,
                                              const std::function<bool(const Vertex&)>& in_class);

struct BinomialEstimate {
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    double estimate = 0.0;
    double ci_low = 0.0;   // Wilson score interval
    double ci_high = 0.0;
    [[nodiscard]] double standard_error() const;
};

[[nodiscard]] BinomialEstimate binomial_estimate(std::uint64_t hits, std::uint64_t trials,
                                                 double z = 1.96);

struct TailRow {
    std::size_t n;
    BinomialEstimate p;  // P(|C_0| >= n)
};

struct TailCurve {
    double theta;
    int dim;
    std::vector<TailRow> rows;
    std::uint64_t capped = 0;        // samples that hit the growth cap
    bool supercritical_warning = false;
};

struct TailOptions {
    std::size_t cap = 1'000'000;
    double z = 1.96;
    int threads = 1;
};

[[nodiscard]] TailCurve cluster_tail_estimate(double theta, int dim, std::span<const std::size_t> n_grid,
                                              std::uint64_t replicas, std::uint64_t seed,
                                              const ModelConfig& cfg, const TailOptions& opt = {});

struct DominationRow {
    Color color;  // s in 1..S+1
    std::size_t m;
    BinomialEstimate colored;    // P(|C_0^s| >= m)
    BinomialEstimate bernoulli;  // P_theta(|C_0| >= m)
    bool violation = false;      // colored exceeds bernoulli beyond 4 combined sigma
};

struct DominationReport {
    std::vector<DominationRow> rows;
    [[nodiscard]] std::size_t violations() const;
};

// PreconditionError unless p lies in E_{theta,S}.
[[nodiscard]] DominationReport marginal_domination_check(const ColoringLaw& p,
                                                         const LawRegionParams& params, int dim,
                                                         std::span<const std::size_t> sizes,
                                                         std::uint64_t replicas, std::uint64_t seed,
                                                         int threads = 1);

// Random self-avoiding path of up to `max_sites` sites inside the box, grown step by step
// until it gets stuck or reaches the requested size.
[[nodiscard]] LatticePath random_self_avoiding_path(const LatticeBox& box, std::size_t max_sites,
                                                    std::uint64_t seed);

}  // namespace fpp
