#include "fpp/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpp/errors.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"

namespace fpp {

void EstimatorConfig::validate() const {
    if (dim < 2 || dim > 3) throw DomainError("estimation supports d = 2 and d = 3");
    if (!(margin > 1.0)) throw DomainError("box margin must exceed 1");
    if (n_schedule.empty()) throw DomainError("n schedule must be nonempty");
    for (std::size_t i = 0; i < n_schedule.size(); ++i) {
        if (n_schedule[i] < 1) throw DomainError("ray lengths must be >= 1");
        if (i > 0 && n_schedule[i] <= n_schedule[i - 1]) throw DomainError("n schedule must be strictly increasing");
    }
    if (replicas == 0) throw DomainError("replicas must be >= 1");
    for (const auto& x : directions) {
        if (std::abs(norm(x) - 1.0) > 1e-12) throw DomainError("directions must have unit Euclidean norm");
        for (int a = dim; a < 3; ++a) {
            if (x[a] != 0.0) throw DomainError("direction has coordinates beyond the dimension");
        }
    }
    for (int k : k_list) {
        if (k < 1) throw DomainError("k must be >= 1");
    }
    if (box_radius && *box_radius < n_max()) throw DomainError("box radius is smaller than the longest ray");
    model.validate();
}

std::vector<Point> EstimatorConfig::direction_set() const {
    if (!directions.empty()) return directions;
    return dim == 2 ? circle_directions(64) : icosphere_directions(1);
}

int EstimatorConfig::radius() const {
    return box_radius ? *box_radius : static_cast<int>(std::ceil(margin * n_max()));
}

Vertex ray_endpoint(const Point& x, int n, int dim) {
    std::array<double, 3> y{};
    for (int a = 0; a < dim; ++a) y[a] = n * x[a];
    return nearest_site(std::span<const double>(y.data(), static_cast<std::size_t>(dim)));
}

std::string to_string(Positivity p) {
    switch (p) {
        case Positivity::positive: return "POSITIVE";
        case Positivity::zero: return "ZERO";
        case Positivity::critical_undecided: return "CRITICAL-UNDECIDED";
    }
    return "?";
}

Positivity positivity_classify(const ColoringLaw& law, int dim, const ModelConfig& cfg) {
    const double pc = cfg.pc_for(dim);
    const double sup = law.sup_norm();
    if (std::abs(sup - pc) < cfg.critical_tolerance) return Positivity::critical_undecided;
    return sup < pc ? Positivity::positive : Positivity::zero;
}

namespace {

double l1(const Point& x, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += std::abs(x[a]);
    return s;
}

struct Moments {
    std::uint64_t count = 0;
    std::uint64_t sum = 0;
    long double sumsq = 0;
    void add(Time t) {
        ++count;
        sum += t;
        sumsq += static_cast<long double>(t) * t;
    }
    // Mean and standard error of T / n.
    [[nodiscard]] std::pair<double, double> ratio(int n) const {
        if (count == 0) return {0.0, 0.0};
        const double c = static_cast<double>(count);
        const double mean = static_cast<double>(sum) / (c * n);
        if (count < 2) return {mean, 0.0};
        const long double m = static_cast<long double>(sum) / count;
        const double var = static_cast<double>(std::max<long double>(0, (sumsq - count * m * m) / (count - 1)));
        return {mean, std::sqrt(var / c) / n};
    }
};

void check_sample(Time t, const Point& x, int n, int dim) {
    if (static_cast<double>(t) > n * l1(x, dim) + dim) {
        throw InvariantViolation("passage time exceeds the deterministic path bound");
    }
}

// An in-box time is the whole-lattice one when no path through the outside can beat it.
bool certified(Time t, Time bt_source, Time bt_target) {
    return t != kUnreached && static_cast<std::uint64_t>(t) <= static_cast<std::uint64_t>(bt_source) + bt_target;
}

// Per-replica passage samples: times[dir][n index], kUnreached when boundary-biased.
struct ReplicaSamples {
    std::vector<std::vector<Time>> times;
    std::vector<std::vector<Time>> k_times;  // [dir][k index] at n_max
};

ReplicaSamples sample_replica(const ColorField& field, std::span<const Point> dirs, const EstimatorConfig& cfg,
                              std::span<const int> ks) {
    const auto& box = field.box();
    const int dim = cfg.dim;
    ReplicaSamples out;
    out.times.assign(dirs.size(), std::vector<Time>(cfg.n_schedule.size(), kUnreached));
    if (ks.empty()) {
        const auto res = passage_times_from(field, origin(dim));
        const auto bt = boundary_distances(field);
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            for (std::size_t j = 0; j < cfg.n_schedule.size(); ++j) {
                const int n = cfg.n_schedule[j];
                const std::size_t idx = box.index(ray_endpoint(dirs[i], n, dim));
                if (!certified(res[idx], res.boundary_time(), bt[idx])) continue;
                check_sample(res[idx], dirs[i], n, dim);
                out.times[i][j] = res[idx];
            }
        }
        return out;
    }
    const auto lex = lexicographic_passage_from(field, box.origin_index());
    const auto bt = boundary_distances(field);
    KShortSolver solver(field);
    out.k_times.assign(dirs.size(), std::vector<Time>(ks.size(), kUnreached));
    const std::size_t last = cfg.n_schedule.size() - 1;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        for (std::size_t j = 0; j < cfg.n_schedule.size(); ++j) {
            const int n = cfg.n_schedule[j];
            const std::size_t idx = box.index(ray_endpoint(dirs[i], n, dim));
            if (!certified(lex.time[idx], lex.boundary_time, bt[idx])) continue;
            check_sample(lex.time[idx], dirs[i], n, dim);
            out.times[i][j] = lex.time[idx];
        }
        if (out.times[i][last] == kUnreached) continue;
        const Vertex target = ray_endpoint(dirs[i], cfg.n_max(), dim);
        const auto results = solver.solve(origin(dim), target, ks, &lex);
        bool biased = false;
        const std::size_t tidx = box.index(target);
        for (const auto& r : results) {
            biased = biased || !r.feasible || (r.boundary_touched && !certified(r.time, lex.boundary_time, bt[tidx]));
        }
        if (biased) {
            out.times[i][last] = kUnreached;
            continue;
        }
        for (std::size_t q = 0; q < ks.size(); ++q) {
            if (results[q].time < out.times[i][last]) throw InvariantViolation("T^k fell below T");
            if (q > 0 && results[q].time > results[q - 1].time) throw InvariantViolation("T^k increased with k");
            out.k_times[i][q] = results[q].time;
        }
    }
    return out;
}

std::vector<ReplicaSamples> run_replicas(const ColoringLaw& law, const EstimatorConfig& cfg,
                                         std::span<const Point> dirs, std::span<const int> ks) {
    const LatticeBox box(cfg.dim, cfg.radius());
    std::vector<ReplicaSamples> reps(cfg.replicas);
    parallel_for(cfg.replicas, cfg.threads, [&](std::size_t r) {
        const ColorField field(box, law, replica_seed(cfg.seed, r));
        reps[r] = sample_replica(field, dirs, cfg, ks);
    });
    return reps;
}

SeminormEstimate assemble(const EstimatorConfig& cfg, std::span<const Point> dirs,
                          const std::vector<ReplicaSamples>& reps) {
    SeminormEstimate est;
    est.dim = cfg.dim;
    est.n_max = cfg.n_max();
    est.box_radius = cfg.radius();
    const std::size_t last = cfg.n_schedule.size() - 1;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        DirectionEstimate d;
        d.x = dirs[i];
        for (std::size_t j = 0; j < cfg.n_schedule.size(); ++j) {
            Moments m;
            for (const auto& rep : reps) {
                if (rep.times[i][j] != kUnreached) m.add(rep.times[i][j]);
            }
            const auto [mean, se] = m.ratio(cfg.n_schedule[j]);
            d.trace.push_back({cfg.n_schedule[j], mean, se, m.count});
        }
        d.mean = d.trace.back().mean;
        d.stderr_ = d.trace.back().stderr_;
        d.retained = d.trace.back().retained;
        d.discarded = reps.size() - d.retained;
        for (const auto& rep : reps) d.samples.push_back(rep.times[i][last]);
        if (d.retained == 0) {
            throw DomainError("every replica touched the box boundary in direction " + std::to_string(i) +
                              "; enlarge the box");
        }
        est.directions.push_back(std::move(d));
    }
    return est;
}

}  // namespace

SeminormEstimate estimate_mu(const ColoringLaw& law, const EstimatorConfig& cfg) {
    cfg.validate();
    const auto dirs = cfg.direction_set();
    return assemble(cfg, dirs, run_replicas(law, cfg, dirs, {}));
}

KShortSeminormEstimate estimate_mu_k(const ColoringLaw& law, const EstimatorConfig& cfg) {
    cfg.validate();
    if (cfg.k_list.empty()) throw DomainError("mu^k estimation needs a nonempty k list");
    std::vector<int> ks = cfg.k_list;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    const auto dirs = cfg.direction_set();
    const auto reps = run_replicas(law, cfg, dirs, ks);

    KShortSeminormEstimate out;
    out.mu = assemble(cfg, dirs, reps);
    out.ks = ks;
    const int n = cfg.n_max();
    for (std::size_t q = 0; q < ks.size(); ++q) {
        std::vector<DirectionEstimate> row;
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            Moments m;
            DirectionEstimate d;
            d.x = dirs[i];
            for (const auto& rep : reps) {
                const bool kept = rep.times[i].back() != kUnreached;
                d.samples.push_back(kept ? rep.k_times[i][q] : kUnreached);
                if (kept) m.add(rep.k_times[i][q]);
            }
            std::tie(d.mean, d.stderr_) = m.ratio(n);
            d.retained = m.count;
            d.discarded = reps.size() - m.count;
            d.trace.push_back({n, d.mean, d.stderr_, m.count});
            row.push_back(std::move(d));
        }
        out.mu_k.push_back(std::move(row));
    }
    return out;
}

ShapeBall ShapeBall::from_points(int dim, std::vector<Point> pts) {
    if (dim < 2 || dim > 3) throw DomainError("shapes live in d = 2 or d = 3");
    if (pts.empty()) throw DomainError("a shape needs at least one point");
    ShapeBall s;
    s.dim_ = dim;
    s.pts_ = dim == 2 ? convex_hull_2d(std::move(pts)) : std::move(pts);
    return s;
}

ShapeBall ShapeBall::from_estimates(int dim, std::span<const Point> dirs, std::span<const double> mu,
                                    double eps_zero) {
    if (dirs.size() != mu.size()) throw DomainError("direction and estimate counts differ");
    if (dirs.size() < static_cast<std::size_t>(2 * dim)) throw DomainError("a shape needs at least 2d directions");
    ShapeBall s;
    s.dim_ = dim;
    s.alpha_ = *std::min_element(mu.begin(), mu.end());
    if (s.alpha_ <= eps_zero) {
        s.degenerate_ = true;
        return s;
    }
    std::vector<Point> pts;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        pts.push_back({dirs[i][0] / mu[i], dirs[i][1] / mu[i], dirs[i][2] / mu[i]});
    }
    s.pts_ = dim == 2 ? convex_hull_2d(std::move(pts)) : std::move(pts);
    return s;
}

ShapeBall ShapeBall::from_estimate(const SeminormEstimate& est, double eps_zero) {
    std::vector<Point> dirs;
    std::vector<double> mu;
    for (const auto& d : est.directions) {
        dirs.push_back(d.x);
        mu.push_back(d.mean);
    }
    return from_estimates(est.dim, dirs, mu, eps_zero);
}

double ShapeBall::support(const Point& u) const { return fpp::support(pts_, u); }

double ShapeBall::radius() const {
    double r = 0.0;
    for (const auto& p : pts_) r = std::max(r, norm(p));
    return r;
}

ShapeBall build_shape_ball(const SeminormEstimate& est, double eps_zero) {
    return ShapeBall::from_estimate(est, eps_zero);
}

namespace {

const std::vector<Point>& support_directions() {
    static const std::vector<Point> dirs = icosphere_directions(3);
    return dirs;
}

double support_angle() {
    static const double a = max_neighbour_angle(support_directions());
    return a;
}

}  // namespace

HausdorffValue hausdorff_distance(const ShapeBall& a, const ShapeBall& b) {
    if (a.degenerate() || b.degenerate()) throw DomainError("Hausdorff distance to a degenerate shape is undefined");
    if (a.dim() != b.dim()) throw DomainError("shapes of different dimension");
    if (a.dim() == 2) return {polygon_hausdorff(a.vertices(), b.vertices()), 0.0};
    double d = 0.0;
    for (const auto& u : support_directions()) d = std::max(d, std::abs(a.support(u) - b.support(u)));
    return {d, support_angle() * (a.radius() + b.radius())};
}

ShapeBall reached_shape(const PassageResult& res, Time t) {
    if (t == 0) throw DomainError("B(t)/t needs t >= 1");
    const auto& box = res.box();
    const double td = static_cast<double>(t);
    std::vector<Point> pts;
    if (box.dim() == 2) {
        const std::size_t side = static_cast<std::size_t>(box.side());
        std::vector<long> lo(side, std::numeric_limits<long>::max());
        std::vector<long> hi(side, std::numeric_limits<long>::min());
        for (std::size_t idx = 0; idx < box.size(); ++idx) {
            if (res[idx] > t) continue;
            const std::size_t row = idx / side;
            const long col = static_cast<long>(idx % side);
            lo[row] = std::min(lo[row], col);
            hi[row] = std::max(hi[row], col);
        }
        // Hull in integer coordinates, where collinearity is exact, then scale.
        const long r = box.radius();
        for (std::size_t row = 0; row < side; ++row) {
            if (lo[row] > hi[row]) continue;
            const auto x = static_cast<double>(static_cast<long>(row) - r);
            pts.push_back({x, static_cast<double>(lo[row] - r), 0.0});
            pts.push_back({x, static_cast<double>(hi[row] - r), 0.0});
        }
        auto hull = convex_hull_2d(std::move(pts));
        for (auto& p : hull) p = {p[0] / td, p[1] / td, 0.0};
        return ShapeBall::from_points(2, std::move(hull));
    }
    // d = 3: keep the extreme member along each sampled support direction.
    const auto& dirs = support_directions();
    std::vector<double> best(dirs.size(), -INFINITY);
    std::vector<Point> arg(dirs.size());
    for (std::size_t idx = 0; idx < box.size(); ++idx) {
        if (res[idx] > t) continue;
        const Vertex v = box.vertex(idx);
        const Point p{v[0] / td, v[1] / td, v[2] / td};
        for (std::size_t k = 0; k < dirs.size(); ++k) {
            const double h = dot(p, dirs[k]);
            if (h > best[k]) {
                best[k] = h;
                arg[k] = p;
            }
        }
    }
    std::sort(arg.begin(), arg.end());
    arg.erase(std::unique(arg.begin(), arg.end()), arg.end());
    return ShapeBall::from_points(3, std::move(arg));
}

namespace {

// Jackknife standard error of a statistic of the replica set.
template <typename Stat>
double jackknife(std::size_t replicas, Stat&& leave_out) {
    if (replicas < 2) return 0.0;
    std::vector<double> vals(replicas);
    for (std::size_t r = 0; r < replicas; ++r) {
        vals[r] = leave_out(r);
        if (std::isinf(vals[r])) return vals[r];
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(replicas);
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    return std::sqrt(ss * static_cast<double>(replicas - 1) / static_cast<double>(replicas));
}

}  // namespace

SweepReport continuity_sweep(const ColoringLaw& p, std::span<const ColoringLaw> qs, const EstimatorConfig& cfg) {
    cfg.validate();
    if (positivity_classify(p, cfg.dim, cfg.model) != Positivity::positive) {
        throw PreconditionError("the reference law is not in the positive class; its shape is unbounded");
    }
    const auto dirs = cfg.direction_set();
    const LatticeBox box(cfg.dim, cfg.radius());
    const int n = cfg.n_max();
    std::vector<ColoringLaw> laws{p};
    laws.insert(laws.end(), qs.begin(), qs.end());
    const std::size_t L = laws.size();
    const std::size_t D = dirs.size();
    const std::size_t R = cfg.replicas;

    // times[r][law][dir]; kUnreached marks a boundary-biased sample.
    std::vector<std::vector<std::vector<Time>>> times(R);
    std::vector<std::size_t> endpoint(D);
    for (std::size_t i = 0; i < D; ++i) endpoint[i] = box.index(ray_endpoint(dirs[i], n, cfg.dim));
    parallel_for(R, cfg.threads, [&](std::size_t r) {
        const std::uint64_t rs = replica_seed(cfg.seed, r);
        times[r].assign(L, std::vector<Time>(D, kUnreached));
        for (std::size_t l = 0; l < L; ++l) {
            const ColorField field(box, laws[l], rs);
            const auto res = passage_times_from(field, origin(cfg.dim));
            const auto bt = boundary_distances(field);
            for (std::size_t i = 0; i < D; ++i) {
                if (certified(res[endpoint[i]], res.boundary_time(), bt[endpoint[i]])) {
                    check_sample(res[endpoint[i]], dirs[i], n, cfg.dim);
                    times[r][l][i] = res[endpoint[i]];
                }
            }
        }
    });

    // A (replica, direction) sample counts only if every law kept it.
    std::vector<std::vector<char>> kept(R, std::vector<char>(D, 1));
    std::uint64_t discarded = 0;
    for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t i = 0; i < D; ++i) {
            for (std::size_t l = 0; l < L; ++l) kept[r][i] = kept[r][i] && times[r][l][i] != kUnreached;
            discarded += !kept[r][i];
        }
    }
    // Integer sums per law and direction, so leave-one-out means are exact subtractions.
    std::vector<std::vector<std::uint64_t>> sum(L, std::vector<std::uint64_t>(D, 0));
    std::vector<std::uint64_t> count(D, 0);
    for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t i = 0; i < D; ++i) {
            if (!kept[r][i]) continue;
            ++count[i];
            for (std::size_t l = 0; l < L; ++l) sum[l][i] += times[r][l][i];
        }
    }
    for (std::size_t i = 0; i < D; ++i) {
        if (count[i] == 0) throw DomainError("every replica touched the boundary; enlarge the box");
    }

    auto means = [&](std::size_t l, std::size_t skip) {
        std::vector<double> mu(D);
        for (std::size_t i = 0; i < D; ++i) {
            std::uint64_t s = sum[l][i];
            std::uint64_t c = count[i];
            if (skip < R && kept[skip][i]) {
                s -= times[skip][l][i];
                --c;
            }
            mu[i] = c == 0 ? 0.0 : static_cast<double>(s) / (static_cast<double>(c) * n);
        }
        return mu;
    };
    auto gap_and_shape = [&](std::size_t l, std::size_t skip, bool want_shape) -> std::pair<double, double> {
        const auto mp = means(0, skip);
        const auto mq = means(l, skip);
        double gap = 0.0;
        for (std::size_t i = 0; i < D; ++i) gap = std::max(gap, std::abs(mq[i] - mp[i]));
        if (!want_shape) return {gap, 0.0};
        const auto a = ShapeBall::from_estimates(cfg.dim, dirs, mp, cfg.model.eps_zero);
        const auto b = ShapeBall::from_estimates(cfg.dim, dirs, mq, cfg.model.eps_zero);
        // A degenerate leave-one-out shape makes the spread unbounded.
        if (a.degenerate() || b.degenerate()) return {gap, std::numeric_limits<double>::infinity()};
        return {gap, hausdorff_distance(a, b).value};
    };

    SweepReport report{ShapeBall::from_estimates(cfg.dim, dirs, means(0, R), cfg.model.eps_zero), {}};
    if (report.p_shape.degenerate()) throw PreconditionError("the estimated reference shape is degenerate");
    for (std::size_t l = 1; l < L; ++l) {
        SweepRow row;
        row.sup_distance = sup_distance(p, laws[l]);
        row.l1_distance = l1_law_distance(p, laws[l]);
        const auto q_shape = ShapeBall::from_estimates(cfg.dim, dirs, means(l, R), cfg.model.eps_zero);
        const auto full = gap_and_shape(l, R, false);
        row.gap = full.first;
        row.discarded = discarded;
        row.gap_stderr = jackknife(R, [&](std::size_t r) { return gap_and_shape(l, r, false).first; });
        if (!q_shape.degenerate()) {
            const auto h = hausdorff_distance(report.p_shape, q_shape);
            row.hausdorff = h.value;
            row.hausdorff_discretization = h.discretization;
            row.hausdorff_stderr = jackknife(R, [&](std::size_t r) { return gap_and_shape(l, r, true).second; });
        } else {
            // The q shape is unbounded (R^d), at infinite distance from a bounded one.
            row.hausdorff = std::numeric_limits<double>::infinity();
        }
        report.rows.push_back(row);
    }
    return report;
}

ShapeReport shape_theorem_check(const ColoringLaw& law, std::span<const int> t_grid, const EstimatorConfig& cfg) {
    cfg.validate();
    if (positivity_classify(law, cfg.dim, cfg.model) != Positivity::positive) {
        throw PreconditionError("the law is not in the positive class; B(t)/t has no bounded limit");
    }
    if (t_grid.empty()) throw DomainError("t grid must be nonempty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 1 || (i > 0 && t_grid[i] <= t_grid[i - 1])) {
            throw DomainError("t grid must be positive and strictly increasing");
        }
    }
    const int t_max = t_grid.back();
    const auto dirs = cfg.direction_set();
    int radius = 0;
    if (cfg.box_radius) {
        radius = *cfg.box_radius;
    } else {
        EstimatorConfig pilot = cfg;
        pilot.box_radius.reset();
        const auto est = estimate_mu(law, pilot);
        double alpha = INFINITY;
        for (const auto& d : est.directions) alpha = std::min(alpha, d.mean);
        if (!(alpha > cfg.model.eps_zero)) throw PreconditionError("pilot estimate of mu is degenerate");
        radius = static_cast<int>(std::ceil(cfg.margin * t_max / alpha));
    }
    const int n_ref = std::max(1, static_cast<int>(std::floor(radius / cfg.margin)));
    const LatticeBox box(cfg.dim, radius);
    const std::size_t R = cfg.replicas;
    const std::size_t D = dirs.size();
    std::vector<std::size_t> endpoint(D);
    for (std::size_t i = 0; i < D; ++i) endpoint[i] = box.index(ray_endpoint(dirs[i], n_ref, cfg.dim));

    std::vector<std::vector<Time>> ref(R, std::vector<Time>(D, kUnreached));
    std::vector<std::vector<std::optional<ShapeBall>>> shapes(R, std::vector<std::optional<ShapeBall>>(t_grid.size()));
    parallel_for(R, cfg.threads, [&](std::size_t r) {
        const ColorField field(box, law, replica_seed(cfg.seed, r));
        const auto res = passage_times_from(field, origin(cfg.dim));
        const auto bt = boundary_distances(field);
        for (std::size_t i = 0; i < D; ++i) {
            if (certified(res[endpoint[i]], res.boundary_time(), bt[endpoint[i]])) ref[r][i] = res[endpoint[i]];
        }
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            const auto t = static_cast<Time>(t_grid[j]);
            if (t < res.boundary_time()) shapes[r][j] = reached_shape(res, t);
        }
    });

    ShapeReport report;
    report.box_radius = radius;
    report.reference_n = n_ref;
    std::vector<double> mu(D);
    for (std::size_t i = 0; i < D; ++i) {
        Moments m;
        for (std::size_t r = 0; r < R; ++r) {
            if (ref[r][i] != kUnreached) m.add(ref[r][i]);
        }
        if (m.count == 0) throw DomainError("reference rays all touched the boundary; enlarge the box");
        mu[i] = m.ratio(n_ref).first;
    }
    report.reference = ShapeBall::from_estimates(cfg.dim, dirs, mu, cfg.model.eps_zero);
    if (report.reference.degenerate()) throw PreconditionError("the reference shape is degenerate");

    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        ShapeRow row{t_grid[j], 0.0, 0.0, 0.0, 0, 0};
        std::vector<double> d;
        double prev_sum = 0.0;
        std::size_t prev_count = 0;
        for (std::size_t r = 0; r < R; ++r) {
            if (!shapes[r][j]) {
                ++row.discarded;
                continue;
            }
            d.push_back(hausdorff_distance(*shapes[r][j], report.reference).value);
            if (j > 0 && shapes[r][j - 1]) {
                prev_sum += hausdorff_distance(*shapes[r][j], *shapes[r][j - 1]).value;
                ++prev_count;
            }
        }
        row.retained = d.size();
        if (!d.empty()) {
            double s = 0.0;
            for (double x : d) s += x;
            row.hausdorff_to_limit = s / static_cast<double>(d.size());
            double ss = 0.0;
            for (double x : d) ss += (x - row.hausdorff_to_limit) * (x - row.hausdorff_to_limit);
            if (d.size() > 1) row.stderr_ = std::sqrt(ss / static_cast<double>(d.size() - 1) / static_cast<double>(d.size()));
        } else {
            row.hausdorff_to_limit = std::numeric_limits<double>::quiet_NaN();
        }
        row.hausdorff_to_previous =
            prev_count ? prev_sum / static_cast<double>(prev_count) : std::numeric_limits<double>::quiet_NaN();
        report.rows.push_back(row);
    }
    return report;
}

DiagnosticReport seminorm_diagnostics(const SeminormEstimate& est) {
    DiagnosticReport rep;
    const auto& ds = est.directions;
    const int dim = est.dim;
    auto find = [&](const Point& x) -> const DirectionEstimate* {
        for (const auto& d : ds) {
            if (std::abs(d.x[0] - x[0]) + std::abs(d.x[1] - x[1]) + std::abs(d.x[2] - x[2]) < 1e-9) return &d;
        }
        return nullptr;
    };
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (Time t : ds[i].samples) {
            if (t != kUnreached && static_cast<double>(t) / est.n_max > l1(ds[i].x, dim) + static_cast<double>(dim) / est.n_max) {
                ++rep.bound_violations;
            }
        }
        const auto* opp = find({-ds[i].x[0], -ds[i].x[1], -ds[i].x[2]});
        if (opp && opp > &ds[i]) {
            ++rep.symmetry_checked;
            if (std::abs(ds[i].mean - opp->mean) > 2 * std::hypot(ds[i].stderr_, opp->stderr_)) ++rep.symmetry_violations;
        }
        for (std::size_t j = i + 1; j < ds.size(); ++j) {
            ++rep.lipschitz_checked;
            Point diff{ds[i].x[0] - ds[j].x[0], ds[i].x[1] - ds[j].x[1], ds[i].x[2] - ds[j].x[2]};
            if (std::abs(ds[i].mean - ds[j].mean) > l1(diff, dim) + 3 * std::hypot(ds[i].stderr_, ds[j].stderr_)) {
                ++rep.lipschitz_violations;
            }
        }
    }
    const double h = 1.0 / std::sqrt(2.0);
    for (int a = 0; a < dim; ++a) {
        for (int b = a + 1; b < dim; ++b) {
            for (double sa : {-1.0, 1.0}) {
                for (double sb : {-1.0, 1.0}) {
                    Point ea{}, eb{}, diag{};
                    ea[a] = sa;
                    eb[b] = sb;
                    diag[a] = sa * h;
                    diag[b] = sb * h;
                    const auto* da = find(ea);
                    const auto* db = find(eb);
                    const auto* dd = find(diag);
                    if (!da || !db || !dd) continue;
                    ++rep.triangle_checked;
                    const double lhs = std::sqrt(2.0) * dd->mean;
                    const double se = std::sqrt(2 * dd->stderr_ * dd->stderr_ + da->stderr_ * da->stderr_ +
                                                db->stderr_ * db->stderr_);
                    if (lhs > da->mean + db->mean + 3 * se) ++rep.triangle_violations;
                }
            }
        }
    }
    return rep;
}

}  // namespace fpp
