#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fpp/coloring.hpp"
#include "fpp/errors.hpp"
#include "fpp/gla.hpp"
#include "fpp/passage.hpp"
#include "fpp/runner.hpp"

namespace fpp {

namespace {

SelftestCheck config_check(const ModelConfig& cfg) {
    SelftestCheck c{"model configuration", true, "p_c table and tolerances valid"};
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        c.passed = false;
        c.detail = e.what();
    }
    return c;
}

// best[len][v] by walking every self-avoiding walk from `source`.
std::vector<std::vector<Time>> walk_table(const ColorField& f, std::size_t source) {
    const auto& box = f.box();
    std::vector<std::vector<Time>> best(box.size(), std::vector<Time>(box.size(), kUnreached));
    for_each_self_avoiding_walk(box.vertex(source), static_cast<int>(box.size()) - 1, box,
                                [&](std::span<const std::size_t> w) {
                                    Time t = 0;
                                    for (std::size_t i = 1; i < w.size(); ++i) t += f[w[i]] != f[w[i - 1]];
                                    auto& slot = best[w.size() - 1][w.back()];
                                    slot = std::min(slot, t);
                                    return true;
                                });
    return best;
}

std::vector<SelftestCheck> passage_checks() {
    const LatticeBox box(2, 2);
    std::size_t mismatches = 0, k_mismatches = 0, compared = 0;
    const int ks[] = {1, 2, 3, 8};
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
        const ColorField f(box, ColoringLaw::uniform(1 + seed), seed);
        KShortSolver solver(f);
        for (std::size_t s = 0; s < box.size(); ++s) {
            const auto table = walk_table(f, s);
            const auto res = passage_times_from(f, box.vertex(s));
            for (std::size_t v = 0; v < box.size(); ++v) {
                Time best = kUnreached;
                for (const auto& row : table) best = std::min(best, row[v]);
                mismatches += res[v] != best;
                ++compared;
                const auto got = solver.solve(box.vertex(s), box.vertex(v), ks);
                for (std::size_t i = 0; i < 4; ++i) {
                    const long budget = ks[i] * l1_distance(box.vertex(s), box.vertex(v));
                    Time want = kUnreached;
                    for (long len = 0; len <= budget && len < static_cast<long>(table.size()); ++len) {
                        want = std::min(want, table[len][v]);
                    }
                    k_mismatches += got[i].time != want;
                }
            }
        }
    }
    const std::string pairs = std::to_string(compared) + " pairs";
    return {{"0-1 BFS vs self-avoiding path enumeration (5x5)", mismatches == 0,
             std::to_string(mismatches) + " mismatches over " + pairs},
            {"k-short times vs enumeration (5x5, k in 1,2,3,8)", k_mismatches == 0,
             std::to_string(k_mismatches) + " mismatches over " + pairs}};
}

SelftestCheck sentinel_check() {
    const LatticeBox box(2, 6);
    const ColorField f(box, ColoringLaw::all_distinct(), 3);
    const auto res = passage_times_from(f, origin(2));
    std::size_t bad = 0;
    for (std::size_t v = 0; v < box.size(); ++v) bad += res[v] != static_cast<Time>(l1_norm(box.vertex(v)));
    return {"all-distinct law gives the L1 metric", bad == 0, std::to_string(bad) + " sites off"};
}

bool connected(const LatticeBox& box, const std::vector<std::size_t>& set) {
    std::vector<char> seen(set.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const Vertex a = box.vertex(set[stack.back()]);
        stack.pop_back();
        for (std::size_t b = 0; b < set.size(); ++b) {
            if (!seen[b] && l1_distance(a, box.vertex(set[b])) == 1) {
                seen[b] = 1;
                ++count;
                stack.push_back(b);
            }
        }
    }
    return count == set.size();
}

SelftestCheck animal_check() {
    const LatticeBox box(2, 2);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(0, 9);
    std::size_t bad = 0, cases = 0;
    for (int field = 0; field < 3; ++field) {
        std::vector<double> w(box.size());
        for (auto& x : w) x = d(rng);
        const SiteWeightField weights(box, w);
        const std::size_t o = box.origin_index();
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < box.size(); ++i) {
            if (i != o) others.push_back(i);
        }
        for (std::size_t n = 1; n <= 6; ++n) {
            double best = -1.0;
            std::vector<char> pick(others.size(), 0);
            std::fill(pick.begin(), pick.begin() + static_cast<long>(n - 1), 1);
            do {
                std::vector<std::size_t> set{o};
                double total = w[o];
                for (std::size_t i = 0; i < others.size(); ++i) {
                    if (pick[i]) {
                        set.push_back(others[i]);
                        total += w[others[i]];
                    }
                }
                if (total > best && connected(box, set)) best = total;
            } while (std::prev_permutation(pick.begin(), pick.end()));
            bad += exact_animal_max(weights, n).weight != best;
            ++cases;
        }
    }
    return {"exact animals vs subset filter (5x5, n <= 6)", bad == 0,
            std::to_string(bad) + " mismatches over " + std::to_string(cases) + " cases"};
}

// Disagreement measure from the merged breakpoints of both cumulative sums.
double interval_disagreement(const ColoringLaw& p, const ColoringLaw& q) {
    std::set<double> cuts{0.0, 1.0};
    for (double c : p.cumulative()) cuts.insert(c);
    for (double c : q.cumulative()) cuts.insert(c);
    double total = 0.0;
    for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
        const double a = *it;
        const double b = *std::next(it);
        if (b <= a) continue;
        const double mid = 0.5 * (a + b);
        if (color_from_uniform(mid, p) != color_from_uniform(mid, q)) total += b - a;
    }
    return total;
}

SelftestCheck coupling_check() {
    const std::vector<std::pair<ColoringLaw, ColoringLaw>> pairs = {
        {ColoringLaw::from_probabilities({0.5, 0.5}), ColoringLaw::from_probabilities({0.4, 0.6})},
        {ColoringLaw::uniform(3), ColoringLaw::from_probabilities({0.2, 0.3, 0.4, 0.1})},
        {ColoringLaw::uniform(4), ColoringLaw::uniform(4)},
    };
    std::size_t bad = 0;
    for (const auto& [p, q] : pairs) {
        const double exact = disagreement_exact(p, q);
        if (std::abs(exact - interval_disagreement(p, q)) > 1e-12) ++bad;
        if (exact > disagreement_bound(p, q, 2) + 1e-12) ++bad;
        // Coupled fields differ exactly where the shared uniform falls in a disagreement interval.
        const UniformField u(LatticeBox(2, 10), 7);
        const ColorField a(u, p);
        const ColorField b(u, q);
        for (std::size_t i = 0; i < u.box().size(); ++i) {
            if ((a[i] != b[i]) != (color_from_uniform(u[i], p) != color_from_uniform(u[i], q))) ++bad;
        }
    }
    return {"coupling intervals and the disagreement bound", bad == 0, std::to_string(bad) + " failures"};
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const ModelConfig& cfg) {
    std::vector<SelftestCheck> out{config_check(cfg)};
    for (auto& c : passage_checks()) out.push_back(std::move(c));
    out.push_back(sentinel_check());
    out.push_back(animal_check());
    out.push_back(coupling_check());
    return out;
}

}  // namespace fpp
