#include "fpp/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fpp/clusters.hpp"
#include "fpp/errors.hpp"
#include "fpp/estimation.hpp"
#include "fpp/gla.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"
#include "json.hpp"

namespace fpp {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// JSON has no infinities; they become null.
ojson jnum(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ojson shape_json(const ShapeBall& s) {
    ojson j;
    j["degenerate"] = s.degenerate();
    j["alpha"] = jnum(s.alpha());
    j["vertices"] = ojson::array();
    for (const auto& p : s.vertices()) j["vertices"].push_back(std::vector<double>(p.begin(), p.begin() + s.dim()));
    return j;
}

// Everything one run needs to label its outputs.
struct Context {
    const ExperimentManifest& m;
    std::string digest;
    std::string created;
    fs::path out_dir;
    int threads;
    std::vector<fs::path> files;

    [[nodiscard]] std::string header() const {
        std::ostringstream h;
        h << "# fpp " << version() << '\n'
          << "# kind: " << to_string(m.kind) << '\n'
          << "# manifest_digest: " << digest << '\n'
          << "# base_seed: " << m.seed << '\n'
          << "# replicas: " << m.replicas << '\n'
          << "# " << kTimestampKey << ": " << created << '\n';
        return h.str();
    }

    // Leading attribution columns of every row.
    [[nodiscard]] std::string aggregate() const { return digest + ",all," + std::to_string(m.seed); }
    [[nodiscard]] std::string replica(std::uint64_t r) const {
        return digest + ',' + std::to_string(r) + ',' + std::to_string(replica_seed(m.seed, r));
    }

    void write(const std::string& suffix, const std::string& text) {
        const fs::path p = out_dir / (m.stem() + suffix);
        std::ofstream out(p, std::ios::binary);
        out << text;
        if (!out) throw std::runtime_error("cannot write " + p.string());
        files.push_back(p);
    }

    void write_csv(const std::string& suffix, const std::string& columns, const std::string& rows) {
        write(suffix, header() + "digest,replica,replica_seed," + columns + '\n' + rows);
    }

    void write_json(ojson results) {
        ojson j;
        j["fpp_version"] = std::string(version());
        j[kTimestampKey] = created;
        j["kind"] = to_string(m.kind);
        j["manifest_digest"] = digest;
        j["base_seed"] = m.seed;
        j["manifest"] = ojson::parse(m.to_json());
        j["results"] = std::move(results);
        write(".json", j.dump(2) + '\n');
    }
};

struct Laws {
    std::optional<ColoringLaw> law;
    std::vector<ColoringLaw> compare;
    std::optional<ColoringLaw> weight_law;
};

Laws resolve_laws(const ExperimentManifest& m, const fs::path& base) {
    Laws l;
    if (m.law) l.law = m.law->resolve(base);
    for (const auto& q : m.compare) l.compare.push_back(q.resolve(base));
    if (m.weights && m.weights->law) l.weight_law = m.weights->law->resolve(base);
    return l;
}

EstimatorConfig estimator_config(const ExperimentManifest& m, int threads) {
    EstimatorConfig cfg;
    cfg.dim = m.dim;
    cfg.directions = m.directions;
    cfg.n_schedule = m.n_schedule;
    cfg.margin = m.margin;
    cfg.box_radius = m.box_radius;
    cfg.replicas = m.replicas;
    cfg.seed = m.seed;
    cfg.k_list = m.k_list;
    cfg.threads = threads;
    if (m.config) cfg.model = *m.config;
    return cfg;
}

std::string direction_cols(std::size_t i, const Point& x) {
    return std::to_string(i) + ',' + num(x[0]) + ',' + num(x[1]) + ',' + num(x[2]);
}

std::string sample_text(Time t) { return t == kUnreached ? "NA" : std::to_string(t); }

void run_timeconst(Context& ctx, const Laws& laws) {
    const auto cfg = estimator_config(ctx.m, ctx.threads);
    const auto est = estimate_mu(*laws.law, cfg);
    std::string rows, samples;
    for (std::size_t i = 0; i < est.directions.size(); ++i) {
        const auto& d = est.directions[i];
        for (const auto& t : d.trace) {
            rows += ctx.aggregate() + ',' + direction_cols(i, d.x) + ',' + std::to_string(t.n) + ',' + num(t.mean) +
                    ',' + num(t.stderr_) + ',' + std::to_string(t.retained) + ',' +
                    std::to_string(cfg.replicas - t.retained) + '\n';
        }
        for (std::size_t r = 0; r < d.samples.size(); ++r) {
            samples += ctx.replica(r) + ',' + std::to_string(i) + ',' + std::to_string(est.n_max) + ',' +
                       sample_text(d.samples[r]) + '\n';
        }
    }
    ctx.write_csv(".csv", "direction,x,y,z,n,mean,stderr,retained,discarded", rows);
    ctx.write_csv("_samples.csv", "direction,n,passage_time", samples);

    const auto diag = seminorm_diagnostics(est);
    ojson res;
    res["box_radius"] = est.box_radius;
    res["n_max"] = est.n_max;
    res["positivity"] = to_string(positivity_classify(*laws.law, ctx.m.dim, cfg.model));
    res["shape"] = shape_json(ShapeBall::from_estimate(est, cfg.model.eps_zero));
    res["diagnostics"] = {{"symmetry_checked", diag.symmetry_checked},
                          {"symmetry_violations", diag.symmetry_violations},
                          {"triangle_checked", diag.triangle_checked},
                          {"triangle_violations", diag.triangle_violations},
                          {"lipschitz_checked", diag.lipschitz_checked},
                          {"lipschitz_violations", diag.lipschitz_violations},
                          {"bound_violations", diag.bound_violations}};
    ctx.write_json(res);
}

std::size_t run_mu_k(Context& ctx, const Laws& laws) {
    const auto cfg = estimator_config(ctx.m, ctx.threads);
    const auto est = estimate_mu_k(*laws.law, cfg);
    std::string rows, samples;
    std::size_t violations = 0;
    const auto& mu = est.mu.directions;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        rows += ctx.aggregate() + ",0," + direction_cols(i, mu[i].x) + ',' + num(mu[i].mean) + ',' +
                num(mu[i].stderr_) + ',' + std::to_string(mu[i].retained) + '\n';
        for (std::size_t q = 0; q < est.ks.size(); ++q) {
            const auto& d = est.mu_k[q][i];
            rows += ctx.aggregate() + ',' + std::to_string(est.ks[q]) + ',' + direction_cols(i, d.x) + ',' +
                    num(d.mean) + ',' + num(d.stderr_) + ',' + std::to_string(d.retained) + '\n';
        }
        for (std::size_t r = 0; r < mu[i].samples.size(); ++r) {
            if (mu[i].samples[r] == kUnreached) continue;
            Time below = mu[i].samples[r];
            samples += ctx.replica(r) + ',' + std::to_string(i) + ",0," + sample_text(below) + '\n';
            // Walk from the largest k down: each value must dominate the previous one.
            for (std::size_t q = est.ks.size(); q-- > 0;) {
                const Time t = est.mu_k[q][i].samples[r];
                if (t < below) ++violations;
                below = t;
            }
            for (std::size_t q = 0; q < est.ks.size(); ++q) {
                samples += ctx.replica(r) + ',' + std::to_string(i) + ',' + std::to_string(est.ks[q]) + ',' +
                           sample_text(est.mu_k[q][i].samples[r]) + '\n';
            }
        }
    }
    ctx.write_csv(".csv", "k,direction,x,y,z,mean,stderr,retained", rows);
    ctx.write_csv("_samples.csv", "direction,k,passage_time", samples);
    ojson res;
    res["ks"] = est.ks;
    res["n_max"] = est.mu.n_max;
    res["box_radius"] = est.mu.box_radius;
    res["sandwich_violations"] = violations;
    ctx.write_json(res);
    return violations;
}

void run_shape(Context& ctx, const Laws& laws) {
    const auto cfg = estimator_config(ctx.m, ctx.threads);
    const auto rep = shape_theorem_check(*laws.law, ctx.m.t_grid, cfg);
    std::string rows;
    for (const auto& r : rep.rows) {
        rows += ctx.aggregate() + ',' + std::to_string(r.t) + ',' + num(r.hausdorff_to_limit) + ',' + num(r.stderr_) +
                ',' + num(r.hausdorff_to_previous) + ',' + std::to_string(r.retained) + ',' +
                std::to_string(r.discarded) + '\n';
    }
    ctx.write_csv(".csv", "t,hausdorff_to_limit,stderr,hausdorff_to_previous,retained,discarded", rows);
    ojson res;
    res["box_radius"] = rep.box_radius;
    res["reference_n"] = rep.reference_n;
    res["reference_shape"] = shape_json(rep.reference);
    ctx.write_json(res);
}

void run_sweep(Context& ctx, const Laws& laws) {
    const auto cfg = estimator_config(ctx.m, ctx.threads);
    const auto rep = continuity_sweep(*laws.law, laws.compare, cfg);
    std::string rows;
    for (std::size_t j = 0; j < rep.rows.size(); ++j) {
        const auto& r = rep.rows[j];
        rows += ctx.aggregate() + ',' + std::to_string(j) + ',' + num(r.l1_distance) + ',' + num(r.sup_distance) +
                ',' + num(r.gap) + ',' + num(r.gap_stderr) + ',' + num(r.hausdorff) + ',' +
                num(r.hausdorff_stderr) + ',' + num(r.hausdorff_discretization) + ',' +
                std::to_string(r.discarded) + '\n';
    }
    ctx.write_csv(".csv",
                  "q_index,l1_distance,sup_distance,gap,gap_stderr,hausdorff,hausdorff_stderr,"
                  "hausdorff_discretization,discarded",
                  rows);
    ojson res;
    res["p_shape"] = shape_json(rep.p_shape);
    ctx.write_json(res);
}

WeightModel weight_model(const WeightSpec& w, const Laws& laws) {
    if (w.kind == "constant") return WeightModel::constant(w.param);
    if (w.kind == "bernoulli") return WeightModel::bernoulli(w.param);
    if (w.kind == "uniform") return WeightModel::uniform(w.param);
    if (w.kind == "bernoulli_cluster") return WeightModel::bernoulli_cluster(w.param, w.cap);
    if (w.kind == "color_cluster_squared") return WeightModel::color_cluster_squared(*laws.weight_law, w.cap);
    throw DomainError("unknown weight model `" + w.kind + "`");
}

void run_animals(Context& ctx, const Laws& laws) {
    const auto model = weight_model(*ctx.m.weights, laws);
    AnimalOptions opt;
    opt.beam = ctx.m.beam;
    opt.threads = ctx.threads;
    const auto series = estimate_W_limit(model, ctx.m.dim, ctx.m.sizes, ctx.m.replicas, ctx.m.seed, opt);
    std::string rows;
    for (const auto& r : series.rows) {
        rows += ctx.aggregate() + ',' + std::to_string(r.n) + ',' + num(r.mean_ratio) + ',' + num(r.ci_low) + ',' +
                num(r.ci_high) + ',' + (r.exact ? "exact" : "heuristic") + '\n';
    }
    ctx.write_csv(".csv", "n,mean_ratio,ci_low,ci_high,mode", rows);
    ojson res;
    res["weights"] = model.describe();
    res["W"] = series.W;
    res["plateau_change"] = series.plateau_change;
    res["ratios_nonincreasing"] = series.ratios_nonincreasing;
    if (const auto& d = ctx.m.deviation) {
        const double w_ref = d->w_ref > 0.0 ? d->w_ref : series.W;
        const auto dev = deviation_frequency(model, ctx.m.dim, d->n, w_ref, d->replicas,
                                             domain_seed(ctx.m.seed, SeedDomain::weights), opt);
        res["deviation"] = {{"n", d->n},
                            {"w_ref", w_ref},
                            {"bound_y", dev.bound_y},
                            {"hits", dev.frequency.hits},
                            {"trials", dev.frequency.trials},
                            {"frequency", dev.frequency.estimate},
                            {"ci_low", dev.frequency.ci_low},
                            {"ci_high", dev.frequency.ci_high},
                            {"exact", dev.exact}};
    }
    ctx.write_json(res);
}

void run_tail(Context& ctx) {
    TailOptions opt;
    opt.cap = ctx.m.cap;
    opt.threads = ctx.threads;
    const ModelConfig cfg = ctx.m.config.value_or(ModelConfig{});
    const auto curve = cluster_tail_estimate(ctx.m.theta, ctx.m.dim, ctx.m.sizes, ctx.m.replicas, ctx.m.seed, cfg, opt);
    std::string rows;
    for (const auto& r : curve.rows) {
        rows += ctx.aggregate() + ',' + std::to_string(r.n) + ',' + std::to_string(r.p.hits) + ',' +
                std::to_string(r.p.trials) + ',' + num(r.p.estimate) + ',' + num(r.p.ci_low) + ',' +
                num(r.p.ci_high) + '\n';
    }
    ctx.write_csv(".csv", "n,hits,trials,estimate,ci_low,ci_high", rows);
    ojson res;
    res["theta"] = curve.theta;
    res["capped"] = curve.capped;
    res["supercritical_warning"] = curve.supercritical_warning;
    ctx.write_json(res);
}

std::size_t run_chain(Context& ctx, const Laws& laws) {
    const auto& m = ctx.m;
    const LatticeBox box(m.dim, m.box_radius.value_or(static_cast<int>(m.path_sites)));
    std::vector<std::string> per_field(m.replicas);
    std::vector<std::size_t> bad(m.replicas, 0);
    parallel_for(m.replicas, ctx.threads, [&](std::size_t r) {
        const std::uint64_t rs = replica_seed(m.seed, r);
        const ColorField field(box, *laws.law, rs);
        const auto dec = decompose_clusters(field);
        const auto trunc = truncate_colors(dec, field, m.S);
        std::string out;
        for (std::size_t j = 0; j < m.paths; ++j) {
            const auto path = random_self_avoiding_path(box, m.path_sites, replica_seed(rs, j));
            const auto c = chain_inequality_check(field, dec, trunc, path);
            if (!c.holds()) ++bad[r];
            out += ctx.replica(r) + ',' + std::to_string(j) + ',' + std::to_string(c.sites) + ',' +
                   std::to_string(c.time) + ',' + std::to_string(c.clusters_touched) + ',' +
                   std::to_string(c.sum_in_path) + ',' + std::to_string(c.sum_full) + ',' +
                   std::to_string(c.sum_truncated) + ',' + (c.holds() ? "1" : "0") + '\n';
        }
        per_field[r] = std::move(out);
    });
    std::string rows;
    std::size_t violations = 0;
    for (std::size_t r = 0; r < m.replicas; ++r) {
        rows += per_field[r];
        violations += bad[r];
    }
    ctx.write_csv(".csv", "path,sites,time,clusters_touched,sum_in_path,sum_full,sum_truncated,holds", rows);
    ojson res;
    res["fields"] = m.replicas;
    res["paths_per_field"] = m.paths;
    res["box_radius"] = box.radius();
    res["violations"] = violations;
    ctx.write_json(res);
    return violations;
}

void run_domination(Context& ctx, const Laws& laws) {
    const LawRegionParams params{ctx.m.theta, ctx.m.S};
    const auto rep = marginal_domination_check(*laws.law, params, ctx.m.dim, ctx.m.sizes, ctx.m.replicas,
                                               ctx.m.seed, ctx.threads);
    std::string rows;
    for (const auto& r : rep.rows) {
        rows += ctx.aggregate() + ',' + std::to_string(r.color) + ',' + std::to_string(r.m) + ',' +
                num(r.colored.estimate) + ',' + num(r.colored.ci_low) + ',' + num(r.colored.ci_high) + ',' +
                num(r.bernoulli.estimate) + ',' + num(r.bernoulli.ci_low) + ',' + num(r.bernoulli.ci_high) + ',' +
                (r.violation ? "1" : "0") + '\n';
    }
    ctx.write_csv(".csv",
                  "color,m,colored,colored_ci_low,colored_ci_high,bernoulli,bernoulli_ci_low,bernoulli_ci_high,"
                  "violation",
                  rows);
    ojson res;
    res["theta"] = ctx.m.theta;
    res["S"] = ctx.m.S;
    res["violations"] = rep.violations();
    ctx.write_json(res);
}

}  // namespace

RunOutcome run_experiment(ExperimentManifest manifest, const fs::path& base_dir, const RunOptions& opt,
                          std::ostream& log) {
    RunOutcome outcome;
    Laws laws;
    fs::path out_dir;
    try {
        if (opt.seed) manifest.seed = *opt.seed;
        manifest.validate();
        laws = resolve_laws(manifest, base_dir);
        out_dir = opt.out_dir ? *opt.out_dir
                  : manifest.output_dir.empty() ? fs::current_path()
                  : fs::path(manifest.output_dir).is_absolute() ? fs::path(manifest.output_dir)
                                                                 : base_dir / manifest.output_dir;
    } catch (const std::exception& e) {
        outcome.exit_code = kExitParse;
        outcome.message = std::string("invalid manifest: ") + e.what();
        log << outcome.message << '\n';
        return outcome;
    }
    if (opt.threads < 1) {
        outcome.exit_code = kExitParse;
        outcome.message = "--threads must be >= 1";
        log << outcome.message << '\n';
        return outcome;
    }

    Context ctx{manifest, manifest_digest(manifest), timestamp(), out_dir, opt.threads, {}};
    try {
        fs::create_directories(out_dir);
        std::size_t violations = 0;
        switch (manifest.kind) {
            case ExperimentKind::timeconst: run_timeconst(ctx, laws); break;
            case ExperimentKind::mu_k: violations = run_mu_k(ctx, laws); break;
            case ExperimentKind::shape: run_shape(ctx, laws); break;
            case ExperimentKind::hausdorff_sweep: run_sweep(ctx, laws); break;
            case ExperimentKind::animals: run_animals(ctx, laws); break;
            case ExperimentKind::cluster_tail: run_tail(ctx); break;
            case ExperimentKind::chain_check: violations = run_chain(ctx, laws); break;
            case ExperimentKind::domination: run_domination(ctx, laws); break;
        }
        if (violations > 0) {
            throw InvariantViolation(std::to_string(violations) + " pathwise inequality violations");
        }
        outcome.message = to_string(manifest.kind) + " finished, digest " + ctx.digest;
    } catch (const InvariantViolation& e) {
        outcome.exit_code = kExitInvariant;
        outcome.message = std::string("invariant violation: ") + e.what();
    } catch (const PreconditionError& e) {
        outcome.exit_code = kExitPrecondition;
        outcome.message = std::string("precondition failed: ") + e.what();
    } catch (const DomainError& e) {
        outcome.exit_code = kExitPrecondition;
        outcome.message = std::string("precondition failed: ") + e.what();
    } catch (const std::exception& e) {
        outcome.exit_code = kExitFailure;
        outcome.message = std::string("error: ") + e.what();
    }
    outcome.files = std::move(ctx.files);
    log << outcome.message << '\n';
    for (const auto& f : outcome.files) log << "  wrote " << f.string() << '\n';
    return outcome;
}

RunOutcome run_manifest(const fs::path& manifest, const RunOptions& opt, std::ostream& log) {
    ExperimentManifest m;
    try {
        m = ExperimentManifest::load(manifest);
    } catch (const std::exception& e) {
        RunOutcome outcome;
        outcome.exit_code = kExitParse;
        outcome.message = std::string("invalid manifest: ") + e.what();
        log << outcome.message << '\n';
        return outcome;
    }
    return run_experiment(std::move(m), manifest.parent_path(), opt, log);
}

}  // namespace fpp
