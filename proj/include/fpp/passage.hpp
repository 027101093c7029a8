#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "fpp/coloring.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

using Time = std::uint32_t;
inline constexpr Time kUnreached = std::numeric_limits<Time>::max();
inline constexpr std::uint32_t kNoPredecessor = std::numeric_limits<std::uint32_t>::max();

// t({u,v}) = 1 if the colors differ, 0 otherwise. DomainError if {u,v} is not a box edge.
[[nodiscard]] int edge_time(const ColorField& field, const Vertex& u, const Vertex& v);

// Passage time of a path: the number of color changes along it.
[[nodiscard]] Time path_time(const ColorField& field, const LatticePath& path);

// Single-source passage times T(source, .) on the box.
//
// boundary_time is min T(source, b) over boundary sites b. A value T(source, v) <=
// boundary_time cannot be improved by leaving the box, so it equals the passage time on
// the whole lattice; larger values may be truncation-biased.
class PassageResult {
public:
    PassageResult(LatticeBox box, std::size_t source, std::vector<Time> dist,
                  std::vector<std::uint32_t> pred);

    [[nodiscard]] const LatticeBox& box() const noexcept { return box_; }
    [[nodiscard]] Vertex source() const { return box_.vertex(source_); }
    [[nodiscard]] std::size_t source_index() const noexcept { return source_; }
    [[nodiscard]] Time operator[](std::size_t idx) const noexcept { return dist_[idx]; }
    [[nodiscard]] Time time(const Vertex& v) const { return dist_[box_.index(v)]; }
    [[nodiscard]] std::span<const Time> distances() const noexcept { return dist_; }
    [[nodiscard]] std::uint32_t predecessor(std::size_t idx) const noexcept { return pred_[idx]; }
    [[nodiscard]] Time boundary_time() const noexcept { return boundary_time_; }
    [[nodiscard]] bool exact_at(std::size_t idx) const noexcept { return dist_[idx] <= boundary_time_; }

private:
    LatticeBox box_;
    std::size_t source_;
    std::vector<Time> dist_;
    std::vector<std::uint32_t> pred_;
    Time boundary_time_ = kUnreached;
};

// Deque-based 0-1 breadth-first search. Predecessor ties follow the lattice neighbour order.
[[nodiscard]] PassageResult passage_times_from(const ColorField& field, const Vertex& source);

// min over boundary sites b of T_box(v, b), for every v. A path from u to v that leaves
// the box costs at least bt(u) + bt(v), so T_box(u, v) <= bt(u) + bt(v) certifies that the
// in-box value is the whole-lattice one.
[[nodiscard]] std::vector<Time> boundary_distances(const ColorField& field);

// T(x*, y*) for real points.
[[nodiscard]] Time point_passage_time(const ColorField& field, std::span<const double> x,
                                      std::span<const double> y);

// Route from the source to `target` following predecessors. Throws DomainError if the
// target is unreached.
[[nodiscard]] LatticePath extract_route(const PassageResult& res, const Vertex& target);

struct ReachedSet {
    Time threshold = 0;
    std::vector<std::size_t> members;  // ascending flat indices
    bool boundary_touched = false;
};

// B(t) restricted to the box: all sites with T(source, v) <= t.
[[nodiscard]] ReachedSet reached_set(const PassageResult& res, Time t);

// Passage times together with the fewest edges among all time-optimal paths, computed
// in lexicographic (time, hops) order.
struct LexPassage {
    std::vector<Time> time;
    std::vector<std::uint32_t> hops;
    Time boundary_time = kUnreached;
};

[[nodiscard]] LexPassage lexicographic_passage_from(const ColorField& field, std::size_t source);

struct KShortResult {
    Vertex source;
    Vertex target;
    int k = 1;
    long budget = 0;        // floor(k * ||u - v||_1)
    bool feasible = false;  // an admissible in-box path exists
    Time time = kUnreached;
    bool boundary_touched = false;  // the in-box value may exceed the whole-lattice one
};

// Hop-constrained passage times T^k(u, v) = min time over in-box paths of length <= budget.
//
// Per call, the search sweeps time layers tau = 0, 1, ...; layer tau holds for every site
// the fewest hops among paths of time <= tau, i.e. the (hops, time) Pareto frontier read
// one time value at a time. Only sites whose hop count improved in a layer seed the next
// one, and states that cannot reach the target within the budget are pruned.
class KShortSolver {
public:
    explicit KShortSolver(const ColorField& field);

    // Resolves all requested k at once. When `from_source` is the lexicographic search of
    // `u`, every k whose budget admits a time-optimal path is answered without a search.
    [[nodiscard]] std::vector<KShortResult> solve(const Vertex& u, const Vertex& v,
                                                  std::span<const int> ks,
                                                  const LexPassage* from_source = nullptr);

private:
    const ColorField& field_;
    std::vector<std::uint32_t> hops_;
    std::vector<std::size_t> touched_;
};

[[nodiscard]] KShortResult k_short_passage_time(const ColorField& field, const Vertex& u,
                                                const Vertex& v, int k);

}  // namespace fpp
