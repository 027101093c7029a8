#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpp/coloring.hpp"
#include "fpp/config.hpp"
#include "fpp/geometry.hpp"
#include "fpp/passage.hpp"

namespace fpp {

struct EstimatorConfig {
    int dim = 2;
    std::vector<Point> directions;       // empty: default set for the dimension
    std::vector<int> n_schedule{50, 100, 200};
    double margin = 1.5;
    std::optional<int> box_radius;       // default ceil(margin * n_max)
    std::uint64_t replicas = 20;
    std::uint64_t seed = 1;
    std::vector<int> k_list;
    int threads = 1;
    ModelConfig model;

    // Throws DomainError on a bad margin, schedule, direction set or replica count.
    void validate() const;
    // The configured directions or the default: 64 planar, or the level-1 icosphere (42).
    [[nodiscard]] std::vector<Point> direction_set() const;
    [[nodiscard]] int n_max() const { return n_schedule.back(); }
    [[nodiscard]] int radius() const;
};

// Lattice endpoint of the ray n * x: the nearest site of n x.
[[nodiscard]] Vertex ray_endpoint(const Point& x, int n, int dim);

struct TracePoint {
    int n;
    double mean;  // mean of T(0, n x)/n over retained replicas
    double stderr_;
    std::uint64_t retained;
};

struct DirectionEstimate {
    Point x;
    double mean = 0.0;     // at n_max
    double stderr_ = 0.0;  // replica sample standard deviation / sqrt(retained)
    std::uint64_t retained = 0;
    std::uint64_t discarded = 0;
    std::vector<TracePoint> trace;
    // T(0, n_max x) per replica; kUnreached where the sample was discarded.
    std::vector<Time> samples;
};

struct SeminormEstimate {
    int dim = 2;
    int n_max = 0;
    int box_radius = 0;
    std::vector<DirectionEstimate> directions;
};

struct KShortSeminormEstimate {
    SeminormEstimate mu;                        // on the same retained samples
    std::vector<int> ks;                        // ascending
    std::vector<std::vector<DirectionEstimate>> mu_k;  // [k index][direction]
};

// DomainError if every replica of some direction had to be discarded.
[[nodiscard]] SeminormEstimate estimate_mu(const ColoringLaw& law, const EstimatorConfig& cfg);

// The mu estimate and every requested mu^k from one set of fields. A (replica, direction)
// sample is kept only when none of its values is boundary-biased, so the sandwich
// mu^k >= mu^{k'} >= mu (k < k') transfers from every sample to the means.
[[nodiscard]] KShortSeminormEstimate estimate_mu_k(const ColoringLaw& law, const EstimatorConfig& cfg);

enum class Positivity { positive, zero, critical_undecided };
[[nodiscard]] std::string to_string(Positivity p);
[[nodiscard]] Positivity positivity_classify(const ColoringLaw& law, int dim, const ModelConfig& cfg = {});

// Estimated unit ball {mu <= 1}.
class ShapeBall {
public:
    // From an estimate: the hull of x_i / mu(x_i); degenerate if some mu(x_i) <= eps_zero.
    [[nodiscard]] static ShapeBall from_estimate(const SeminormEstimate& est, double eps_zero = 0.02);
    // From explicit points (their hull in d = 2).
    [[nodiscard]] static ShapeBall from_points(int dim, std::vector<Point> pts);
    [[nodiscard]] static ShapeBall from_estimates(int dim, std::span<const Point> dirs,
                                                  std::span<const double> mu, double eps_zero);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] bool degenerate() const noexcept { return degenerate_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    // Hull polygon (d = 2) or the spanning points (d = 3).
    [[nodiscard]] const std::vector<Point>& vertices() const noexcept { return pts_; }
    [[nodiscard]] double support(const Point& u) const;
    [[nodiscard]] double radius() const;  // max vertex norm

private:
    int dim_ = 2;
    bool degenerate_ = false;
    double alpha_ = 0.0;
    std::vector<Point> pts_;
};

[[nodiscard]] ShapeBall build_shape_ball(const SeminormEstimate& est, double eps_zero = 0.02);

struct HausdorffValue {
    double value = 0.0;
    double discretization = 0.0;  // 0 in d = 2, where the value is exact
};

// DomainError for degenerate or mismatched shapes. In d = 3 the support functions are
// compared on a level-3 icosphere and the bound covers the unsampled directions.
[[nodiscard]] HausdorffValue hausdorff_distance(const ShapeBall& a, const ShapeBall& b);

struct SweepRow {
    double sup_distance = 0.0;  // ||q - p||_inf
    double l1_distance = 0.0;
    double gap = 0.0;           // max_x |mu_q(x) - mu_p(x)|
    double gap_stderr = 0.0;    // jackknife over replicas
    double hausdorff = 0.0;     // +inf when the q shape is degenerate
    double hausdorff_stderr = 0.0;  // +inf when a leave-one-out shape is degenerate
    double hausdorff_discretization = 0.0;
    std::uint64_t discarded = 0;  // (replica, direction) samples dropped
};

struct SweepReport {
    ShapeBall p_shape;
    std::vector<SweepRow> rows;
};

// One coupled field per replica serves every law, so differences reflect the law change.
[[nodiscard]] SweepReport continuity_sweep(const ColoringLaw& p, std::span<const ColoringLaw> qs,
                                           const EstimatorConfig& cfg);

struct ShapeRow {
    int t;
    double hausdorff_to_limit;  // mean over retained replicas
    double stderr_;
    double hausdorff_to_previous;  // per-replica distance to the previous grid point, averaged
    std::uint64_t retained;
    std::uint64_t discarded;
};

struct ShapeReport {
    int box_radius = 0;
    int reference_n = 0;
    ShapeBall reference;  // mu estimated on the same fields at reference_n
    std::vector<ShapeRow> rows;
};

// B(t)/t against the estimated limit shape. The box radius is the configured one or
// margin * t_max / alpha, with alpha from a pilot estimate. PreconditionError unless the
// law is classified positive.
[[nodiscard]] ShapeReport shape_theorem_check(const ColoringLaw& law, std::span<const int> t_grid,
                                              const EstimatorConfig& cfg);

// Convex hull of B(t)/t from one passage result (row extremes of the reached set).
[[nodiscard]] ShapeBall reached_shape(const PassageResult& res, Time t);

struct DiagnosticReport {
    std::size_t symmetry_checked = 0, symmetry_violations = 0;
    std::size_t triangle_checked = 0, triangle_violations = 0;
    std::size_t lipschitz_checked = 0, lipschitz_violations = 0;
    std::size_t bound_violations = 0;  // samples outside [0, ||x||_1 + d/n]
};

// Seminorm sanity checks on an estimate: x vs -x within 2 combined standard errors,
// subadditivity over axis pairs and 1-Lipschitz continuity within 3.
[[nodiscard]] DiagnosticReport seminorm_diagnostics(const SeminormEstimate& est);

}  // namespace fpp
