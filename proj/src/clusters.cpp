#include "fpp/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "fpp/errors.hpp"
#include "fpp/parallel.hpp"
#include "fpp/passage.hpp"
#include "fpp/rng.hpp"

namespace fpp {

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), 0U);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
};

// Clusters of sites with include[i] != 0, joined across edges where same(i, j).
template <typename Same>
ClusterDecomposition decompose(const LatticeBox& box, const std::vector<char>* include, Same&& same) {
    const std::size_t n = box.size();
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (include && !(*include)[i]) continue;
        box.for_each_neighbor(i, [&](std::size_t j) {
            if (j > i && (!include || (*include)[j]) && same(i, j)) {
                uf.unite(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
            }
        });
    }
    // Relabel each class by its smallest index (the first one met in ascending order).
    std::vector<std::uint32_t> root_label(n, kNoCluster);
    std::vector<std::uint32_t> ids(n, kNoCluster);
    for (std::size_t i = 0; i < n; ++i) {
        if (include && !(*include)[i]) continue;
        const std::uint32_t r = uf.find(static_cast<std::uint32_t>(i));
        if (root_label[r] == kNoCluster) root_label[r] = static_cast<std::uint32_t>(i);
        ids[i] = root_label[r];
    }
    return ClusterDecomposition(box, std::move(ids));
}

}  // namespace

ClusterDecomposition::ClusterDecomposition(LatticeBox box, std::vector<std::uint32_t> ids)
    : box_(box), id_(std::move(ids)), size_by_id_(id_.size(), 0) {
    for (std::uint32_t id : id_) {
        if (id == kNoCluster) continue;
        if (size_by_id_[id]++ == 0) ++count_;
    }
}

std::uint32_t ClusterDecomposition::size_at(std::size_t idx) const noexcept {
    const std::uint32_t id = id_[idx];
    return id == kNoCluster ? 0 : size_by_id_[id];
}

std::vector<std::uint32_t> ClusterDecomposition::cluster_sizes() const {
    std::vector<std::uint32_t> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < id_.size(); ++i) {
        if (id_[i] == i) out.push_back(size_by_id_[i]);
    }
    return out;
}

ClusterDecomposition decompose_clusters(const ColorField& field) {
    if (field.all_distinct()) {
        std::vector<std::uint32_t> ids(field.box().size());
        std::iota(ids.begin(), ids.end(), 0U);
        return ClusterDecomposition(field.box(), std::move(ids));
    }
    const auto colors = field.colors();
    return decompose(field.box(), nullptr, [&](std::size_t i, std::size_t j) { return colors[i] == colors[j]; });
}

TruncatedDecomposition::TruncatedDecomposition(const ClusterDecomposition& base, const ColorField& field,
                                               std::size_t s)
    : s_(s), colors_(field.box().size()), merged_(base) {
    if (s < 1) throw DomainError("truncation needs S >= 1");
    const auto merged_color = static_cast<Color>(s + 1);
    bool any_merged = false;
    for (std::size_t i = 0; i < colors_.size(); ++i) {
        const Color c = field.all_distinct() ? merged_color : field[i];
        colors_[i] = std::min(c, merged_color);
        any_merged = any_merged || c > merged_color;
    }
    // Colors <= S+1 keep their clusters; only an identification of larger colors can merge.
    if (any_merged || field.all_distinct()) {
        merged_ = decompose(field.box(), nullptr,
                            [&](std::size_t i, std::size_t j) { return colors_[i] == colors_[j]; });
    }
}

std::uint32_t TruncatedDecomposition::color_cluster_size(std::size_t idx, Color s) const noexcept {
    return colors_[idx] == s ? merged_.size_at(idx) : 0;
}

TruncatedDecomposition truncate_colors(const ClusterDecomposition& dec, const ColorField& field,
                                       std::size_t s) {
    return TruncatedDecomposition(dec, field, s);
}

bool ChainReport::counts_agree() const {
    const double k = static_cast<double>(clusters_touched);
    return std::abs(reciprocal_sum - k) <= 1e-9 * std::max(1.0, k);
}

ChainReport chain_inequality_check(const ColorField& field, const ClusterDecomposition& dec,
                                   const TruncatedDecomposition& trunc, const LatticePath& path) {
    const auto& box = field.box();
    for (const auto& v : path.vertices()) {
        if (!box.contains(v)) throw DomainError("path site " + v.to_string() + " outside the box");
    }
    if (path.vertex_count() == 0) throw DomainError("chain check needs a nonempty path");
    if (!is_self_avoiding(path)) throw DomainError("chain check needs a self-avoiding path");

    std::vector<std::size_t> idx;
    idx.reserve(path.vertex_count());
    for (const auto& v : path.vertices()) idx.push_back(box.index(v));

    ChainReport r;
    r.sites = idx.size();
    r.time = path_time(field, path);
    std::unordered_map<std::uint32_t, std::uint64_t> on_path;
    for (std::size_t i : idx) ++on_path[dec.id(i)];
    r.clusters_touched = on_path.size();
    for (std::size_t i : idx) {
        const std::uint64_t c = on_path[dec.id(i)];
        r.reciprocal_sum += 1.0 / static_cast<double>(c);
        r.sum_in_path += c;
        r.sum_full += dec.size_at(i);
        r.sum_truncated += trunc.truncated_size(i);
    }
    return r;
}

ChainReport chain_inequality_check(const ColorField& field, const LatticePath& path, std::size_t s) {
    const auto dec = decompose_clusters(field);
    const auto trunc = truncate_colors(dec, field, s);
    return chain_inequality_check(field, dec, trunc, path);
}

BernoulliField sample_bernoulli_field(const LatticeBox& box, double theta, std::uint64_t seed) {
    if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
    const std::uint64_t bseed = domain_seed(seed, SeedDomain::bernoulli);
    std::vector<char> occ(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) occ[i] = site_uniform(bseed, box.vertex(i)) < theta;
    auto clusters = decompose(box, &occ, [](std::size_t, std::size_t) { return true; });
    return BernoulliField{box, theta, std::move(occ), std::move(clusters)};
}

namespace {

struct VertexHash {
    std::size_t operator()(const Vertex& v) const noexcept {
        std::uint64_t h = 0;
        for (int i = 0; i < v.dim(); ++i) h = mix64(h ^ static_cast<std::uint32_t>(v[i]));
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

std::size_t grow_origin_cluster(int dim, std::size_t stop_at,
                                const std::function<bool(const Vertex&)>& in_class) {
    const Vertex o = origin(dim);
    if (stop_at == 0 || !in_class(o)) return 0;
    std::unordered_set<Vertex, VertexHash> seen{o};
    std::vector<Vertex> frontier{o};
    std::size_t size = 1;
    for (std::size_t head = 0; head < frontier.size() && size < stop_at; ++head) {
        const Vertex v = frontier[head];
        for (int axis = 0; axis < dim && size < stop_at; ++axis) {
            for (int step : {-1, 1}) {
                Vertex w = v;
                w[axis] += step;
                if (!seen.insert(w).second) continue;
                if (in_class(w)) {
                    frontier.push_back(w);
                    if (++size >= stop_at) break;
                }
            }
        }
    }
    return size;
}

double BinomialEstimate::standard_error() const {
    if (trials == 0) return 0.0;
    return std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(trials));
}

BinomialEstimate binomial_estimate(std::uint64_t hits, std::uint64_t trials, double z) {
    BinomialEstimate b;
    b.hits = hits;
    b.trials = trials;
    if (trials == 0) return b;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / n;
    b.estimate = p;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    b.ci_low = std::max(0.0, centre - half);
    b.ci_high = std::min(1.0, centre + half);
    return b;
}

TailCurve cluster_tail_estimate(double theta, int dim, std::span<const std::size_t> n_grid,
                                std::uint64_t replicas, std::uint64_t seed, const ModelConfig& cfg,
                                const TailOptions& opt) {
    if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
    if (dim < 2) throw DomainError("dimension must be >= 2");
    if (n_grid.empty()) throw DomainError("tail estimate needs a nonempty n grid");
    TailCurve curve{theta, dim, {}, 0, theta >= cfg.pc_for(dim)};
    const std::size_t max_n = *std::max_element(n_grid.begin(), n_grid.end());
    const std::size_t stop = std::min(max_n, opt.cap);

    std::vector<std::size_t> sizes(replicas);
    parallel_for(replicas, opt.threads, [&](std::size_t r) {
        const std::uint64_t bseed = domain_seed(replica_seed(seed, r), SeedDomain::bernoulli);
        sizes[r] = grow_origin_cluster(dim, stop, [&](const Vertex& v) { return site_uniform(bseed, v) < theta; });
    });
    for (std::size_t s : sizes) {
        if (s >= opt.cap && opt.cap < max_n) ++curve.capped;
    }
    for (std::size_t n : n_grid) {
        std::uint64_t hits = 0;
        for (std::size_t s : sizes) hits += s >= n;
        curve.rows.push_back({n, binomial_estimate(hits, replicas, opt.z)});
    }
    return curve;
}

std::size_t DominationReport::violations() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.violation; }));
}

DominationReport marginal_domination_check(const ColoringLaw& p, const LawRegionParams& params, int dim,
                                           std::span<const std::size_t> sizes, std::uint64_t replicas,
                                           std::uint64_t seed, int threads) {
    if (!is_in_region(p, params)) {
        throw PreconditionError("law is outside E_{theta,S}; the domination premise fails");
    }
    if (p.is_all_distinct()) throw PreconditionError("domination check needs a finite law");
    if (sizes.empty()) throw DomainError("domination check needs a nonempty size list");
    const std::size_t max_m = std::max<std::size_t>(1, *std::max_element(sizes.begin(), sizes.end()));
    const auto merged = static_cast<Color>(params.S + 1);

    struct Sample {
        Color color;
        std::size_t colored;
        std::size_t bernoulli;
    };
    std::vector<Sample> samples(replicas);
    parallel_for(replicas, threads, [&](std::size_t r) {
        const std::uint64_t cseed = replica_seed(seed, r);
        const std::uint64_t bseed = domain_seed(cseed, SeedDomain::bernoulli);
        auto truncated = [&](const Vertex& v) {
            return std::min(color_from_uniform(site_uniform(cseed, v), p), merged);
        };
        const Color c0 = truncated(origin(dim));
        samples[r].color = c0;
        samples[r].colored = grow_origin_cluster(dim, max_m, [&](const Vertex& v) { return truncated(v) == c0; });
        samples[r].bernoulli =
            grow_origin_cluster(dim, max_m, [&](const Vertex& v) { return site_uniform(bseed, v) < params.theta; });
    });

    DominationReport report;
    for (Color s = 1; s <= merged; ++s) {
        for (std::size_t m : sizes) {
            std::uint64_t hc = 0;
            std::uint64_t hb = 0;
            for (const auto& smp : samples) {
                const std::size_t size_s = smp.color == s ? smp.colored : 0;
                hc += size_s >= m;
                hb += smp.bernoulli >= m;
            }
            DominationRow row{s, m, binomial_estimate(hc, replicas), binomial_estimate(hb, replicas), false};
            const double sigma = std::hypot(row.colored.standard_error(), row.bernoulli.standard_error());
            const double floor = 1.0 / static_cast<double>(std::max<std::uint64_t>(1, replicas));
            row.violation = row.colored.estimate - row.bernoulli.estimate > 4.0 * std::max(sigma, floor);
            report.rows.push_back(row);
        }
    }
    return report;
}

LatticePath random_self_avoiding_path(const LatticeBox& box, std::size_t max_sites, std::uint64_t seed) {
    if (max_sites == 0) throw DomainError("path needs at least one site");
    std::mt19937_64 rng(mix64(seed ^ static_cast<std::uint64_t>(SeedDomain::paths)));
    std::uniform_int_distribution<std::size_t> start(0, box.size() - 1);
    std::vector<std::size_t> walk{start(rng)};
    std::unordered_set<std::size_t> used{walk.back()};
    std::vector<std::size_t> options;
    while (walk.size() < max_sites) {
        options.clear();
        box.for_each_neighbor(walk.back(), [&](std::size_t w) {
            if (!used.count(w)) options.push_back(w);
        });
        if (options.empty()) break;
        const std::size_t next = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        walk.push_back(next);
        used.insert(next);
    }
    std::vector<Vertex> verts;
    verts.reserve(walk.size());
    for (std::size_t i : walk) verts.push_back(box.vertex(i));
    return LatticePath(std::move(verts));
}

}  // namespace fpp
