#include "fpp/gla.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fpp/errors.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"

namespace fpp {

SiteWeightField::SiteWeightField(LatticeBox box, std::vector<double> weights, std::optional<double> bound)
    : box_(box), w_(std::move(weights)), bound_(bound) {
    if (w_.size() != box_.size()) throw DomainError("weight count does not match the box");
    for (double w : w_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("weights must be finite and nonnegative");
        if (bound_ && w > *bound_) throw DomainError("weight exceeds the declared bound");
        max_ = std::max(max_, w);
    }
}

SiteWeightField SiteWeightField::squared_cluster_sizes(const ClusterDecomposition& dec) {
    std::vector<double> w(dec.box().size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double s = dec.size_at(i);
        w[i] = s * s;
    }
    return SiteWeightField(dec.box(), std::move(w));
}

WeightModel WeightModel::constant(double c) {
    if (!(c >= 0.0)) throw DomainError("constant weight must be nonnegative");
    return WeightModel{Kind::constant, c, std::nullopt, std::nullopt};
}

WeightModel WeightModel::bernoulli(double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
    return WeightModel{Kind::bernoulli, theta, std::nullopt, std::nullopt};
}

WeightModel WeightModel::uniform(double y) {
    if (!(y > 0.0)) throw DomainError("uniform range must be positive");
    return WeightModel{Kind::uniform, y, std::nullopt, std::nullopt};
}

WeightModel WeightModel::bernoulli_cluster(double theta, std::optional<double> cap) {
    if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
    if (cap && !(*cap > 0.0)) throw DomainError("cap must be positive");
    return WeightModel{Kind::bernoulli_cluster, theta, cap, std::nullopt};
}

WeightModel WeightModel::color_cluster_squared(ColoringLaw law, std::optional<double> cap) {
    if (cap && !(*cap > 0.0)) throw DomainError("cap must be positive");
    return WeightModel{Kind::color_cluster_squared, 0.0, cap, std::move(law)};
}

std::optional<double> WeightModel::bound() const {
    std::optional<double> natural;
    switch (kind) {
        case Kind::constant: natural = param; break;
        case Kind::bernoulli: natural = 1.0; break;
        case Kind::uniform: natural = param; break;
        default: break;
    }
    if (natural && cap) return std::min(*natural, *cap);
    return natural ? natural : cap;
}

SiteWeightField WeightModel::sample(const LatticeBox& box, std::uint64_t seed) const {
    std::vector<double> w(box.size());
    const std::uint64_t wseed = domain_seed(seed, SeedDomain::weights);
    switch (kind) {
        case Kind::constant:
            std::fill(w.begin(), w.end(), param);
            break;
        case Kind::bernoulli:
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = site_uniform(wseed, box.vertex(i)) < param ? 1.0 : 0.0;
            break;
        case Kind::uniform:
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = param * site_uniform(wseed, box.vertex(i));
            break;
        case Kind::bernoulli_cluster: {
            const auto b = sample_bernoulli_field(box, param, seed);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = b.clusters.size_at(i);
            break;
        }
        case Kind::color_cluster_squared: {
            const auto dec = decompose_clusters(ColorField(box, *law, seed));
            for (std::size_t i = 0; i < w.size(); ++i) {
                const double s = dec.size_at(i);
                w[i] = s * s;
            }
            break;
        }
    }
    if (cap) {
        for (double& x : w) x = std::min(x, *cap);
    }
    return SiteWeightField(box, std::move(w), bound());
}

std::string WeightModel::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::constant: os << "constant(" << param << ")"; break;
        case Kind::bernoulli: os << "bernoulli(" << param << ")"; break;
        case Kind::uniform: os << "uniform(0," << param << ")"; break;
        case Kind::bernoulli_cluster: os << "bernoulli_cluster(" << param << ")"; break;
        case Kind::color_cluster_squared: os << "color_cluster_squared"; break;
    }
    if (cap) os << " cap " << *cap;
    return os.str();
}

std::size_t enumeration_guard(int dim) noexcept { return dim == 2 ? 12 : 9; }

bool is_valid_animal(const LatticeBox& box, std::span<const std::size_t> sites, std::size_t n) {
    if (sites.size() != n || n == 0) return false;
    std::unordered_set<std::size_t> in;
    for (std::size_t s : sites) {
        if (s >= box.size() || !in.insert(s).second) return false;
    }
    if (!in.count(box.origin_index())) return false;
    std::unordered_set<std::size_t> seen{box.origin_index()};
    std::vector<std::size_t> stack{box.origin_index()};
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        box.for_each_neighbor(v, [&](std::size_t w) {
            if (in.count(w) && seen.insert(w).second) stack.push_back(w);
        });
    }
    return seen.size() == n;
}

namespace {

void check_witness(const LatticeBox& box, const AnimalResult& r, std::size_t n) {
    if (!is_valid_animal(box, r.sites, n)) throw InvariantViolation("animal witness is not a valid origin animal");
}

// Redelmeier's untried-set growth: every connected in-box set containing the root is
// produced exactly once.
class AnimalEnumerator {
public:
    AnimalEnumerator(const SiteWeightField& w, std::size_t n, bool single_size)
        : w_(w), box_(w.box()), n_(n), single_(single_size), marked_(box_.size(), 0), best_(n) {}

    std::vector<AnimalResult> run() {
        const std::size_t o = box_.origin_index();
        marked_[o] = 1;
        std::vector<std::uint32_t> untried{static_cast<std::uint32_t>(o)};
        grow(untried, 0.0);
        return std::move(best_);
    }

private:
    void offer(double weight) {
        AnimalResult& b = best_[animal_.size() - 1];
        if (!b.sites.empty() && weight < b.weight) return;
        std::vector<std::size_t> sorted(animal_.begin(), animal_.end());
        std::sort(sorted.begin(), sorted.end());
        if (b.sites.empty() || weight > b.weight || sorted < b.sites) {
            b.weight = weight;
            b.sites = std::move(sorted);
            b.exact = true;
        }
    }

    void grow(std::vector<std::uint32_t> untried, double weight) {
        while (!untried.empty()) {
            const std::uint32_t v = untried.back();
            untried.pop_back();
            animal_.push_back(v);
            const double wv = weight + w_[v];
            if (!single_ || animal_.size() == n_) offer(wv);
            const bool prune = single_ && !best_[n_ - 1].sites.empty() &&
                               wv + static_cast<double>(n_ - animal_.size()) * w_.max_weight() < best_[n_ - 1].weight;
            if (animal_.size() < n_ && !prune) {
                const std::size_t added_from = untried.size();
                box_.for_each_neighbor(v, [&](std::size_t u) {
                    if (!marked_[u]) {
                        marked_[u] = 1;
                        untried.push_back(static_cast<std::uint32_t>(u));
                    }
                });
                const std::size_t added = untried.size() - added_from;
                grow(untried, wv);
                for (std::size_t i = 0; i < added; ++i) {
                    marked_[untried.back()] = 0;
                    untried.pop_back();
                }
            }
            animal_.pop_back();
        }
    }

    const SiteWeightField& w_;
    const LatticeBox& box_;
    std::size_t n_;
    bool single_;
    std::vector<char> marked_;
    std::vector<std::uint32_t> animal_;
    std::vector<AnimalResult> best_;
};

void check_guard(const SiteWeightField& weights, std::size_t n) {
    if (n == 0) throw DomainError("animal size must be >= 1");
    if (n > enumeration_guard(weights.box().dim())) {
        throw PreconditionError("animal size " + std::to_string(n) + " exceeds the enumeration guard");
    }
}

struct BeamState {
    std::vector<std::uint32_t> sites;
    std::vector<std::uint32_t> frontier;
    double weight = 0.0;
    std::uint64_t zobrist = 0;
};

std::uint64_t site_key(std::size_t idx) { return mix64(0x5eed5a17ULL ^ (static_cast<std::uint64_t>(idx) << 1)); }

class BeamSearch {
public:
    BeamSearch(const SiteWeightField& w, std::uint64_t seed) : w_(w), box_(w.box()), seed_(seed), stamp_(box_.size(), 0) {}

    // Best weight per size 1..n at a fixed width, plus the final best state.
    std::vector<double> run(std::size_t n, std::size_t width, BeamState& best_final) {
        const auto o = static_cast<std::uint32_t>(box_.origin_index());
        BeamState root;
        root.sites = {o};
        root.weight = w_[o];
        root.zobrist = site_key(o);
        box_.for_each_neighbor(o, [&](std::size_t u) { root.frontier.push_back(static_cast<std::uint32_t>(u)); });
        std::vector<BeamState> beam{std::move(root)};
        std::vector<double> best{beam[0].weight};
        best.reserve(n);

        struct Candidate {
            double weight;
            double lookahead;
            std::uint64_t tiebreak;
            std::uint64_t zobrist;
            std::uint32_t parent;
            std::uint32_t site;
        };
        std::vector<Candidate> cand;
        for (std::size_t size = 2; size <= n; ++size) {
            cand.clear();
            for (std::uint32_t p = 0; p < beam.size(); ++p) {
                mark(beam[p]);
                for (std::uint32_t f : beam[p].frontier) {
                    double look = 0.0;
                    box_.for_each_neighbor(f, [&](std::size_t u) {
                        if (stamp_[u] != tick_) look = std::max(look, w_[u]);
                    });
                    const std::uint64_t z = beam[p].zobrist ^ site_key(f);
                    cand.push_back({beam[p].weight + w_[f], look, mix64(seed_ ^ z), z, p, f});
                }
            }
            std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
                if (a.weight != b.weight) return a.weight > b.weight;
                if (a.lookahead != b.lookahead) return a.lookahead > b.lookahead;
                if (a.tiebreak != b.tiebreak) return a.tiebreak < b.tiebreak;
                return a.zobrist < b.zobrist;
            });
            std::vector<BeamState> next;
            std::unordered_set<std::uint64_t> kept;
            for (const Candidate& c : cand) {
                if (next.size() >= width) break;
                if (!kept.insert(c.zobrist).second) continue;
                next.push_back(extend(beam[c.parent], c.site, c.weight, c.zobrist));
            }
            beam = std::move(next);
            best.push_back(beam[0].weight);
        }
        best_final = std::move(beam[0]);
        return best;
    }

private:
    void mark(const BeamState& s) {
        ++tick_;
        for (std::uint32_t v : s.sites) stamp_[v] = tick_;
        for (std::uint32_t v : s.frontier) stamp_[v] = tick_;
    }

    BeamState extend(const BeamState& parent, std::uint32_t f, double weight, std::uint64_t z) {
        mark(parent);
        BeamState child;
        child.sites = parent.sites;
        child.sites.push_back(f);
        child.weight = weight;
        child.zobrist = z;
        child.frontier.reserve(parent.frontier.size() + 2 * box_.dim());
        for (std::uint32_t v : parent.frontier) {
            if (v != f) child.frontier.push_back(v);
        }
        box_.for_each_neighbor(f, [&](std::size_t u) {
            if (stamp_[u] != tick_) child.frontier.push_back(static_cast<std::uint32_t>(u));
        });
        return child;
    }

    const SiteWeightField& w_;
    const LatticeBox& box_;
    std::uint64_t seed_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t tick_ = 0;
};

// Greedy growth by whole positive-weight components. Each step looks up to kReach new sites
// away from the current animal and attaches the option with the best weight per added site:
// a shortest path ending at a site, or such a path followed by the rest of that site's
// connected component of positive weights. Every prefix of the returned order is an animal.
class ComponentGrowth {
public:
    static constexpr std::size_t kReach = 32;

    explicit ComponentGrowth(const SiteWeightField& w) : w_(w), box_(w.box()), in_(box_.size(), 0) {}

    std::vector<std::uint32_t> run(std::size_t n) {
        const auto o = static_cast<std::uint32_t>(box_.origin_index());
        order_ = {o};
        in_[o] = 1;
        while (order_.size() < n) step(n - order_.size());
        return order_;
    }

private:
    struct Node {
        std::uint32_t depth;
        std::uint32_t parent;  // kNone at depth 1 (adjacent to the animal)
        double path_weight;    // best weight over shortest paths, this site included
    };
    static constexpr std::uint32_t kNone = 0xFFFFFFFFu;
    static constexpr std::uint32_t kLarge = 0xFFFFFFFEu;

    void step(std::size_t remaining) {
        const std::size_t reach = std::min(remaining, kReach);
        std::unordered_map<std::uint32_t, Node> seen;
        std::vector<std::uint32_t> layer, next;
        for (std::uint32_t a : order_) {
            box_.for_each_neighbor(a, [&](std::size_t u) {
                if (in_[u]) return;
                const auto v = static_cast<std::uint32_t>(u);
                if (seen.emplace(v, Node{1, kNone, w_[u]}).second) layer.push_back(v);
            });
        }
        double best_ratio = -1.0;
        std::size_t best_cost = 0;
        std::uint32_t best_site = kNone;
        bool best_whole = false;
        for (std::uint32_t depth = 1; !layer.empty(); ++depth) {
            std::sort(layer.begin(), layer.end());
            for (std::uint32_t v : layer) {
                const Node& node = seen.at(v);
                auto consider = [&](double gain, std::size_t cost, bool whole) {
                    const double ratio = gain / static_cast<double>(cost);
                    if (ratio > best_ratio || (ratio == best_ratio && cost < best_cost)) {
                        best_ratio = ratio;
                        best_cost = cost;
                        best_site = v;
                        best_whole = whole;
                    }
                };
                consider(node.path_weight, depth, false);
                if (w_[v] > 0.0) {
                    const std::uint32_t c = component_of(v, remaining);
                    if (c != kLarge) {
                        double sum = 0.0;
                        std::size_t count = 0;
                        for (std::uint32_t x : comps_[c]) {
                            if (!in_[x]) {
                                sum += w_[x];
                                ++count;
                            }
                        }
                        const std::size_t cost = depth - 1 + count;
                        if (count > 1 && cost <= remaining) consider(node.path_weight - w_[v] + sum, cost, true);
                    }
                }
            }
            if (depth >= reach) break;
            next.clear();
            for (std::uint32_t v : layer) {
                const Node node = seen.at(v);
                box_.for_each_neighbor(v, [&](std::size_t u) {
                    if (in_[u]) return;
                    const auto x = static_cast<std::uint32_t>(u);
                    const double pw = node.path_weight + w_[u];
                    auto [it, fresh] = seen.emplace(x, Node{depth + 1, v, pw});
                    if (fresh) {
                        next.push_back(x);
                    } else if (it->second.depth == depth + 1 && pw > it->second.path_weight) {
                        it->second.parent = v;
                        it->second.path_weight = pw;
                    }
                });
            }
            std::swap(layer, next);
        }
        if (best_site == kNone) throw DomainError("box is too small to grow the animal");

        std::vector<std::uint32_t> path;
        for (std::uint32_t v = best_site; v != kNone; v = seen.at(v).parent) path.push_back(v);
        for (auto it = path.rbegin(); it != path.rend(); ++it) add(*it);
        if (best_whole) {
            // Breadth-first through the component keeps every prefix connected.
            std::vector<std::uint32_t> queue{best_site};
            for (std::size_t head = 0; head < queue.size(); ++head) {
                box_.for_each_neighbor(queue[head], [&](std::size_t u) {
                    if (in_[u] || w_[u] <= 0.0) return;
                    add(static_cast<std::uint32_t>(u));
                    queue.push_back(static_cast<std::uint32_t>(u));
                });
            }
        }
    }

    void add(std::uint32_t v) {
        in_[v] = 1;
        order_.push_back(v);
    }

    // Component id of a positive site, or kLarge once it is known to exceed `limit` sites.
    // Remaining budgets only shrink, so a component too large now stays too large.
    std::uint32_t component_of(std::uint32_t v, std::size_t limit) {
        if (auto it = comp_id_.find(v); it != comp_id_.end()) {
            if (it->second == kLarge || comps_[it->second].size() <= limit + order_.size()) return it->second;
        }
        std::vector<std::uint32_t> members{v};
        std::unordered_set<std::uint32_t> mark{v};
        bool large = false;
        for (std::size_t head = 0; head < members.size() && !large; ++head) {
            box_.for_each_neighbor(members[head], [&](std::size_t u) {
                if (large || w_[u] <= 0.0) return;
                if (mark.insert(static_cast<std::uint32_t>(u)).second) {
                    members.push_back(static_cast<std::uint32_t>(u));
                    if (members.size() > limit + order_.size()) large = true;
                }
            });
        }
        if (large) {
            for (std::uint32_t x : members) comp_id_[x] = kLarge;
            return kLarge;
        }
        const auto id = static_cast<std::uint32_t>(comps_.size());
        for (std::uint32_t x : members) comp_id_[x] = id;
        comps_.push_back(std::move(members));
        return id;
    }

    const SiteWeightField& w_;
    const LatticeBox& box_;
    std::vector<char> in_;
    std::vector<std::uint32_t> order_;
    std::unordered_map<std::uint32_t, std::uint32_t> comp_id_;
    std::vector<std::vector<std::uint32_t>> comps_;
};

void check_heuristic_args(const SiteWeightField& weights, std::size_t n, int beam) {
    if (n == 0) throw DomainError("animal size must be >= 1");
    if (beam < 1) throw DomainError("beam width must be >= 1");
    if (weights.box().size() < n) throw DomainError("box is too small to host " + std::to_string(n) + " sites");
}

}  // namespace

std::vector<AnimalResult> exact_animal_series(const SiteWeightField& weights, std::size_t n) {
    check_guard(weights, n);
    auto out = AnimalEnumerator(weights, n, false).run();
    for (std::size_t m = 1; m <= n; ++m) {
        if (out[m - 1].sites.empty()) throw DomainError("box is too small to host " + std::to_string(m) + " sites");
        check_witness(weights.box(), out[m - 1], m);
    }
    return out;
}

AnimalResult exact_animal_max(const SiteWeightField& weights, std::size_t n) {
    check_guard(weights, n);
    auto out = AnimalEnumerator(weights, n, true).run();
    AnimalResult r = std::move(out[n - 1]);
    if (r.sites.empty()) throw DomainError("box is too small to host " + std::to_string(n) + " sites");
    check_witness(weights.box(), r, n);
    return r;
}

AnimalResult heuristic_animal_max(const SiteWeightField& weights, std::size_t n, int beam, std::uint64_t seed) {
    check_heuristic_args(weights, n, beam);
    BeamSearch search(weights, seed);
    AnimalResult best;
    for (int width = 1; width <= beam; ++width) {
        BeamState final_state;
        const auto series = search.run(n, static_cast<std::size_t>(width), final_state);
        if (best.sites.empty() || series.back() > best.weight) {
            best.weight = series.back();
            best.sites.assign(final_state.sites.begin(), final_state.sites.end());
            std::sort(best.sites.begin(), best.sites.end());
        }
    }
    const auto order = ComponentGrowth(weights).run(n);
    double grown = 0.0;
    for (std::uint32_t v : order) grown += weights[v];
    if (grown > best.weight) {
        best.weight = grown;
        best.sites.assign(order.begin(), order.end());
        std::sort(best.sites.begin(), best.sites.end());
    }
    check_witness(weights.box(), best, n);
    return best;
}

std::vector<double> heuristic_animal_series(const SiteWeightField& weights, std::size_t n, int beam,
                                            std::uint64_t seed) {
    check_heuristic_args(weights, n, beam);
    BeamSearch search(weights, seed);
    std::vector<double> best(n, 0.0);
    for (int width = 1; width <= beam; ++width) {
        BeamState final_state;
        const auto series = search.run(n, static_cast<std::size_t>(width), final_state);
        for (std::size_t m = 0; m < n; ++m) best[m] = std::max(best[m], series[m]);
        std::vector<std::size_t> sites(final_state.sites.begin(), final_state.sites.end());
        if (!is_valid_animal(weights.box(), sites, n)) {
            throw InvariantViolation("beam search produced an invalid animal");
        }
    }
    const auto order = ComponentGrowth(weights).run(n);
    std::vector<std::size_t> sites(order.begin(), order.end());
    if (!is_valid_animal(weights.box(), sites, n)) throw InvariantViolation("component growth produced an invalid animal");
    double grown = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        grown += weights[order[m]];
        best[m] = std::max(best[m], grown);
    }
    return best;
}

namespace {

// W(m) for every m in 1..n on one weight field: exact where enumeration is allowed.
std::vector<std::pair<double, bool>> animal_values(const SiteWeightField& field, std::size_t n,
                                                   const AnimalOptions& opt, std::uint64_t seed) {
    const std::size_t guard = enumeration_guard(field.box().dim());
    std::vector<std::pair<double, bool>> out(n);
    if (n > guard) {
        const auto h = heuristic_animal_series(field, n, opt.beam, seed);
        for (std::size_t m = 0; m < n; ++m) out[m] = {h[m], false};
    }
    const std::size_t exact_upto = std::min(n, guard);
    const auto ex = exact_animal_series(field, exact_upto);
    for (std::size_t m = 0; m < exact_upto; ++m) out[m] = {ex[m].weight, true};
    return out;
}

}  // namespace

AnimalWeightSeries estimate_W_limit(const WeightModel& model, int dim, std::span<const std::size_t> n_grid,
                                    std::uint64_t replicas, std::uint64_t seed, const AnimalOptions& opt) {
    if (n_grid.empty()) throw DomainError("animal series needs a nonempty n grid");
    if (replicas == 0) throw DomainError("replicas must be >= 1");
    if (std::find(n_grid.begin(), n_grid.end(), 0U) != n_grid.end()) throw DomainError("animal sizes must be >= 1");
    const std::size_t max_n = *std::max_element(n_grid.begin(), n_grid.end());
    const LatticeBox box(dim, static_cast<int>(std::max<std::size_t>(max_n, 1)));

    std::vector<std::vector<std::pair<double, bool>>> per_replica(replicas);
    parallel_for(replicas, opt.threads, [&](std::size_t r) {
        const std::uint64_t rs = replica_seed(seed, r);
        per_replica[r] = animal_values(model.sample(box, rs), max_n, opt, rs);
    });

    AnimalWeightSeries s;
    for (std::size_t n : n_grid) {
        double sum = 0.0;
        double sq = 0.0;
        for (const auto& v : per_replica) {
            const double ratio = v[n - 1].first / static_cast<double>(n);
            sum += ratio;
            sq += ratio * ratio;
        }
        const double R = static_cast<double>(replicas);
        const double mean = sum / R;
        const double var = replicas > 1 ? std::max(0.0, (sq - R * mean * mean) / (R - 1)) : 0.0;
        const double half = opt.z * std::sqrt(var / R);
        s.rows.push_back({n, mean, mean - half, mean + half, per_replica[0][n - 1].second});
    }
    s.W = s.rows.back().mean_ratio;
    if (s.rows.size() >= 2) {
        const double prev = s.rows[s.rows.size() - 2].mean_ratio;
        s.plateau_change = prev != 0.0 ? std::abs(s.W - prev) / std::abs(prev) : std::abs(s.W - prev);
    }
    s.ratios_nonincreasing = true;
    for (std::size_t i = 1; i < s.rows.size(); ++i) {
        if (s.rows[i].mean_ratio > s.rows[i - 1].mean_ratio) s.ratios_nonincreasing = false;
    }
    return s;
}

DeviationEstimate deviation_frequency(const WeightModel& model, int dim, std::size_t n, double W_ref,
                                      std::uint64_t replicas, std::uint64_t seed, const AnimalOptions& opt) {
    const auto y = model.bound();
    if (!y) throw PreconditionError("deviation frequency needs a bounded weight model; set a cap");
    if (n == 0) throw DomainError("animal size must be >= 1");
    const LatticeBox box(dim, static_cast<int>(std::max<std::size_t>(n, 1)));
    std::vector<char> hit(replicas, 0);
    parallel_for(replicas, opt.threads, [&](std::size_t r) {
        const std::uint64_t rs = replica_seed(seed, r);
        const auto values = animal_values(model.sample(box, rs), n, opt, rs);
        hit[r] = values[n - 1].first / static_cast<double>(n) >= W_ref + 1.0;
    });
    DeviationEstimate d;
    d.frequency = binomial_estimate(static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), 1)), replicas, opt.z);
    d.exact = n <= enumeration_guard(dim);
    d.bound_y = *y;
    return d;
}

}  // namespace fpp
