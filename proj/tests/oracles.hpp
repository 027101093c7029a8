#pragma once

// Test-only brute-force oracles. These deliberately avoid the library's search code paths:
// neighbours are recomputed from coordinates and every quantity is obtained by exhaustive
// enumeration or a naive table.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "fpp/coloring.hpp"
#include "fpp/gla.hpp"
#include "fpp/lattice.hpp"

namespace oracle {

inline constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

// Neighbours of flat index `idx` in a 2D box of side `side`, computed from (row, col).
inline std::vector<int> grid_neighbors(int idx, int side) {
    std::vector<int> out;
    const int r = idx / side;
    const int c = idx % side;
    if (r > 0) out.push_back(idx - side);
    if (r + 1 < side) out.push_back(idx + side);
    if (c > 0) out.push_back(idx - 1);
    if (c + 1 < side) out.push_back(idx + 1);
    return out;
}

// best[len][v]: minimum passage time over self-avoiding paths from `source` to v with
// exactly `len` edges (kInf if none), by exhaustive depth-first enumeration.
struct SawTable {
    std::vector<std::vector<std::uint32_t>> best;

    [[nodiscard]] std::uint32_t min_time(int v) const {
        std::uint32_t m = kInf;
        for (const auto& row : best) m = std::min(m, row[v]);
        return m;
    }
    [[nodiscard]] std::uint32_t min_time_within(int v, long max_len) const {
        std::uint32_t m = kInf;
        for (long len = 0; len < static_cast<long>(best.size()) && len <= max_len; ++len) {
            m = std::min(m, best[len][v]);
        }
        return m;
    }
};

inline SawTable saw_table(const std::vector<std::uint32_t>& colors, int side, int source) {
    const int n = side * side;
    SawTable tab;
    tab.best.assign(n, std::vector<std::uint32_t>(n, kInf));
    std::vector<char> on(n, 0);
    std::vector<std::vector<int>> nb(n);
    for (int i = 0; i < n; ++i) nb[i] = grid_neighbors(i, side);
    struct Rec {
        const std::vector<std::uint32_t>& colors;
        const std::vector<std::vector<int>>& nb;
        std::vector<char>& on;
        SawTable& tab;
        void go(int v, int len, std::uint32_t t) {
            auto& slot = tab.best[len][v];
            slot = std::min(slot, t);
            for (int w : nb[v]) {
                if (on[w]) continue;
                on[w] = 1;
                go(w, len + 1, t + (colors[v] != colors[w] ? 1U : 0U));
                on[w] = 0;
            }
        }
    } rec{colors, nb, on, tab};
    on[source] = 1;
    rec.go(source, 0, 0);
    return tab;
}

// Naive (vertex x hops) table: D[h][v] = min time over walks from source with <= h edges.
inline std::vector<std::vector<std::uint32_t>> hop_table(const std::vector<std::uint32_t>& colors,
                                                         int side, int source, int max_hops) {
    const int n = side * side;
    std::vector<std::vector<std::uint32_t>> d(max_hops + 1, std::vector<std::uint32_t>(n, kInf));
    d[0][source] = 0;
    for (int h = 1; h <= max_hops; ++h) {
        d[h] = d[h - 1];
        for (int v = 0; v < n; ++v) {
            if (d[h - 1][v] == kInf) continue;
            for (int w : grid_neighbors(v, side)) {
                const std::uint32_t t = d[h - 1][v] + (colors[v] != colors[w] ? 1U : 0U);
                d[h][w] = std::min(d[h][w], t);
            }
        }
    }
    return d;
}

inline std::vector<std::uint32_t> random_colors(std::mt19937_64& rng, int n, int palette) {
    std::uniform_int_distribution<std::uint32_t> dist(1, static_cast<std::uint32_t>(palette));
    std::vector<std::uint32_t> c(n);
    for (auto& x : c) x = dist(rng);
    return c;
}

inline bool connected_by_coordinates(const fpp::LatticeBox& box, const std::vector<std::size_t>& sites) {
    std::vector<fpp::Vertex> v;
    for (auto s : sites) v.push_back(box.vertex(s));
    std::vector<char> seen(v.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const auto a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < v.size(); ++b) {
            if (!seen[b] && fpp::l1_distance(v[a], v[b]) == 1) {
                seen[b] = 1;
                ++count;
                stack.push_back(b);
            }
        }
    }
    return count == v.size();
}

// Best (weight, lexicographically smallest set) over all origin-containing connected n-subsets.
inline std::pair<double, std::vector<std::size_t>> animal_max(const fpp::SiteWeightField& w, std::size_t n) {
    const auto& box = w.box();
    const std::size_t o = box.origin_index();
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (i != o) others.push_back(i);
    }
    double best = -1.0;
    std::vector<std::size_t> best_set;
    std::vector<char> pick(others.size(), 0);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(n - 1), 1);
    do {
        std::vector<std::size_t> set{o};
        for (std::size_t i = 0; i < others.size(); ++i) {
            if (pick[i]) set.push_back(others[i]);
        }
        std::sort(set.begin(), set.end());
        if (!connected_by_coordinates(box, set)) continue;
        double total = 0.0;
        for (auto s : set) total += w[s];
        if (total > best || (total == best && set < best_set)) {
            best = total;
            best_set = set;
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return {best, best_set};
}

}  // namespace oracle
