#include "fpp/passage.hpp"

#include <algorithm>
#include <deque>
#include <utility>

#include "fpp/errors.hpp"

namespace fpp {

int edge_time(const ColorField& field, const Vertex& u, const Vertex& v) {
    const auto& box = field.box();
    if (!box.contains(u) || !box.contains(v) || l1_distance(u, v) != 1) {
        throw DomainError(u.to_string() + " - " + v.to_string() + " is not an edge of the box");
    }
    if (field.all_distinct()) return 1;
    return field.at(u) == field.at(v) ? 0 : 1;
}

Time path_time(const ColorField& field, const LatticePath& path) {
    Time t = 0;
    const auto& vs = path.vertices();
    for (std::size_t i = 1; i < vs.size(); ++i) t += static_cast<Time>(edge_time(field, vs[i - 1], vs[i]));
    return t;
}

namespace {

Time min_on_boundary(const LatticeBox& box, std::span<const Time> dist) {
    Time best = kUnreached;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i] < best && box.on_boundary(i)) best = dist[i];
    }
    return best;
}

}  // namespace

PassageResult::PassageResult(LatticeBox box, std::size_t source, std::vector<Time> dist,
                             std::vector<std::uint32_t> pred)
    : box_(box), source_(source), dist_(std::move(dist)), pred_(std::move(pred)) {
    boundary_time_ = min_on_boundary(box_, dist_);
}

PassageResult passage_times_from(const ColorField& field, const Vertex& source) {
    const auto& box = field.box();
    const std::size_t s = box.index(source);
    const auto colors = field.colors();
    const bool distinct = field.all_distinct();
    std::vector<Time> dist(box.size(), kUnreached);
    std::vector<std::uint32_t> pred(box.size(), kNoPredecessor);
    std::deque<std::uint32_t> dq;
    dist[s] = 0;
    dq.push_back(static_cast<std::uint32_t>(s));
    while (!dq.empty()) {
        const std::uint32_t u = dq.front();
        dq.pop_front();
        const Time du = dist[u];
        box.for_each_neighbor(u, [&](std::size_t w) {
            const Time cost = (distinct || colors[u] != colors[w]) ? 1 : 0;
            if (du + cost < dist[w]) {
                dist[w] = du + cost;
                pred[w] = u;
                if (cost == 0) {
                    dq.push_front(static_cast<std::uint32_t>(w));
                } else {
                    dq.push_back(static_cast<std::uint32_t>(w));
                }
            }
        });
    }
    return PassageResult(box, s, std::move(dist), std::move(pred));
}

std::vector<Time> boundary_distances(const ColorField& field) {
    const auto& box = field.box();
    const auto colors = field.colors();
    const bool distinct = field.all_distinct();
    std::vector<Time> dist(box.size(), kUnreached);
    std::deque<std::uint32_t> dq;
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (box.on_boundary(i)) {
            dist[i] = 0;
            dq.push_back(static_cast<std::uint32_t>(i));
        }
    }
    while (!dq.empty()) {
        const std::uint32_t u = dq.front();
        dq.pop_front();
        const Time du = dist[u];
        box.for_each_neighbor(u, [&](std::size_t w) {
            const Time cost = (distinct || colors[u] != colors[w]) ? 1 : 0;
            if (du + cost < dist[w]) {
                dist[w] = du + cost;
                if (cost == 0) {
                    dq.push_front(static_cast<std::uint32_t>(w));
                } else {
                    dq.push_back(static_cast<std::uint32_t>(w));
                }
            }
        });
    }
    return dist;
}

Time point_passage_time(const ColorField& field, std::span<const double> x, std::span<const double> y) {
    const Vertex xs = nearest_site(x);
    const Vertex ys = nearest_site(y);
    const auto& box = field.box();
    if (!box.contains(xs) || !box.contains(ys)) {
        throw DomainError("point maps to a site outside the box");
    }
    if (xs == ys) return 0;
    return passage_times_from(field, xs).time(ys);
}

LatticePath extract_route(const PassageResult& res, const Vertex& target) {
    const auto& box = res.box();
    std::size_t cur = box.index(target);
    if (res[cur] == kUnreached) throw DomainError("target " + target.to_string() + " unreached");
    std::vector<Vertex> rev{target};
    while (cur != res.source_index()) {
        cur = res.predecessor(cur);
        rev.push_back(box.vertex(cur));
    }
    std::reverse(rev.begin(), rev.end());
    return LatticePath(std::move(rev));
}

ReachedSet reached_set(const PassageResult& res, Time t) {
    ReachedSet out;
    out.threshold = t;
    const auto dist = res.distances();
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i] <= t) {
            out.members.push_back(i);
            if (!out.boundary_touched && res.box().on_boundary(i)) out.boundary_touched = true;
        }
    }
    return out;
}

namespace {

struct HopState {
    std::uint32_t hops;
    std::uint32_t v;
    friend bool operator<(const HopState& a, const HopState& b) {
        return std::pair(a.hops, a.v) < std::pair(b.hops, b.v);
    }
};

// Pops the smaller-hop head of a sorted candidate list and a FIFO of nondecreasing hops.
class MergeQueue {
public:
    MergeQueue(std::vector<HopState>& sorted, std::vector<HopState>& fifo) : a_(sorted), b_(fifo) {}
    [[nodiscard]] bool empty() const { return i_ == a_.size() && j_ == b_.size(); }
    HopState pop() {
        if (j_ == b_.size() || (i_ < a_.size() && a_[i_].hops <= b_[j_].hops)) return a_[i_++];
        return b_[j_++];
    }

private:
    std::vector<HopState>& a_;
    std::vector<HopState>& b_;
    std::size_t i_ = 0;
    std::size_t j_ = 0;
};

}  // namespace

LexPassage lexicographic_passage_from(const ColorField& field, std::size_t source) {
    const auto& box = field.box();
    const auto colors = field.colors();
    const bool distinct = field.all_distinct();
    LexPassage out;
    out.time.assign(box.size(), kUnreached);
    out.hops.assign(box.size(), kNoPredecessor);
    std::vector<HopState> cand{{0, static_cast<std::uint32_t>(source)}};
    std::vector<HopState> next;
    std::vector<HopState> fifo;
    for (Time tau = 0; !cand.empty(); ++tau) {
        std::sort(cand.begin(), cand.end());
        fifo.clear();
        next.clear();
        MergeQueue q(cand, fifo);
        while (!q.empty()) {
            const HopState st = q.pop();
            if (out.time[st.v] != kUnreached) continue;
            out.time[st.v] = tau;
            out.hops[st.v] = st.hops;
            box.for_each_neighbor(st.v, [&](std::size_t w) {
                if (out.time[w] != kUnreached) return;
                const HopState nx{st.hops + 1, static_cast<std::uint32_t>(w)};
                if (!distinct && colors[st.v] == colors[w]) {
                    fifo.push_back(nx);
                } else {
                    next.push_back(nx);
                }
            });
        }
        std::swap(cand, next);
    }
    out.boundary_time = min_on_boundary(box, out.time);
    return out;
}

KShortSolver::KShortSolver(const ColorField& field)
    : field_(field), hops_(field.box().size(), kNoPredecessor) {}

std::vector<KShortResult> KShortSolver::solve(const Vertex& u, const Vertex& v,
                                              std::span<const int> ks,
                                              const LexPassage* from_source) {
    const auto& box = field_.box();
    const std::size_t s = box.index(u);
    const std::size_t t = box.index(v);
    const long dist = l1_distance(u, v);

    // Any admissible path that leaves the box needs at least this many edges.
    long exit_len = box.radius() + 1L;
    for (int i = 0; i < box.dim(); ++i) exit_len = std::min(exit_len, box.radius() - std::labs(u[i]) + 1L);

    std::vector<KShortResult> out(ks.size());
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] < 1) throw DomainError("k must be a positive integer");
        auto& r = out[i];
        r.source = u;
        r.target = v;
        r.k = ks[i];
        r.budget = static_cast<long>(ks[i]) * dist;
        if (s == t) {
            r.feasible = true;
            r.time = 0;
        } else if (from_source != nullptr && r.budget >= static_cast<long>(from_source->hops[t])) {
            r.feasible = true;
            r.time = from_source->time[t];
        } else {
            open.push_back(i);
        }
    }

    if (!open.empty()) {
        const auto colors = field_.colors();
        const bool distinct = field_.all_distinct();
        auto max_budget = [&] {
            long b = 0;
            for (std::size_t i : open) b = std::max(b, out[i].budget);
            return b;
        };
        long budget = max_budget();
        auto to_target = [&](std::size_t idx) { return l1_distance(box.vertex(idx), v); };
        auto admissible = [&](std::uint32_t h, std::size_t idx) {
            return static_cast<long>(h) + to_target(idx) <= budget;
        };

        std::vector<HopState> cand;
        std::vector<HopState> fifo;
        std::vector<std::uint32_t> changed;
        if (admissible(0, s)) cand.push_back({0, static_cast<std::uint32_t>(s)});
        for (Time tau = 0; !cand.empty() && !open.empty(); ++tau) {
            std::sort(cand.begin(), cand.end());
            fifo.clear();
            changed.clear();
            MergeQueue q(cand, fifo);
            while (!q.empty()) {
                const HopState st = q.pop();
                if (st.hops >= hops_[st.v]) continue;
                if (hops_[st.v] == kNoPredecessor) touched_.push_back(st.v);
                hops_[st.v] = st.hops;
                changed.push_back(st.v);
                box.for_each_neighbor(st.v, [&](std::size_t w) {
                    if (distinct || colors[st.v] != colors[w]) return;
                    if (st.hops + 1 < hops_[w] && admissible(st.hops + 1, w)) {
                        fifo.push_back({st.hops + 1, static_cast<std::uint32_t>(w)});
                    }
                });
            }
            if (hops_[t] != kNoPredecessor) {
                std::erase_if(open, [&](std::size_t i) {
                    if (out[i].budget < static_cast<long>(hops_[t])) return false;
                    out[i].feasible = true;
                    out[i].time = tau;
                    return true;
                });
                if (open.empty()) break;
                budget = max_budget();
            }
            cand.clear();
            for (std::uint32_t w : changed) {
                const std::uint32_t h = hops_[w] + 1;
                box.for_each_neighbor(w, [&](std::size_t x) {
                    if (!distinct && colors[w] == colors[x]) return;
                    if (h < hops_[x] && admissible(h, x)) cand.push_back({h, static_cast<std::uint32_t>(x)});
                });
            }
        }
        for (std::size_t idx : touched_) hops_[idx] = kNoPredecessor;
        touched_.clear();
    }

    for (auto& r : out) {
        if (!r.feasible) continue;
        const bool confined = r.budget < exit_len;
        const bool below_boundary = from_source != nullptr && r.time <= from_source->boundary_time;
        r.boundary_touched = !(confined || below_boundary || s == t);
    }
    return out;
}

KShortResult k_short_passage_time(const ColorField& field, const Vertex& u, const Vertex& v, int k) {
    const LexPassage lex = lexicographic_passage_from(field, field.box().index(u));
    KShortSolver solver(field);
    const int ks[] = {k};
    return solver.solve(u, v, ks, &lex).front();
}

}  // namespace fpp
