#include <random>

#include "doctest.h"
#include "fpp/errors.hpp"
#include "fpp/passage.hpp"
#include "oracles.hpp"

using namespace fpp;

namespace {

ColorField random_field(const LatticeBox& box, std::mt19937_64& rng, int palette) {
    std::uniform_int_distribution<Color> dist(1, static_cast<Color>(palette));
    std::vector<Color> c(box.size());
    for (auto& x : c) x = dist(rng);
    return ColorField(box, std::move(c));
}

// Minimum time over monotone (geodesic-length) paths, by explicit recursion over steps.
Time monotone_min(const ColorField& f, const Vertex& u, const Vertex& v) {
    if (u == v) return 0;
    Time best = kUnreached;
    for (int axis = 0; axis < u.dim(); ++axis) {
        if (u[axis] == v[axis]) continue;
        Vertex w = u;
        w[axis] += v[axis] > u[axis] ? 1 : -1;
        const Time rest = monotone_min(f, w, v);
        best = std::min(best, rest + (f.at(u) != f.at(w) ? 1U : 0U));
    }
    return best;
}

}  // namespace

TEST_CASE("edge times") {
    const LatticeBox box(2, 1);
    std::vector<Color> c(9, 3);
    c[box.index({1, 0})] = 5;
    const ColorField f(box, c);
    CHECK(edge_time(f, {0, 0}, {-1, 0}) == 0);
    CHECK(edge_time(f, {0, 0}, {1, 0}) == 1);
    CHECK_THROWS_AS((void)edge_time(f, {0, 0}, {1, 1}), DomainError);
    CHECK_THROWS_AS((void)edge_time(f, {1, 0}, {2, 0}), DomainError);
    const ColorField distinct(box, ColoringLaw::all_distinct(), 1);
    CHECK(edge_time(distinct, {0, 0}, {0, 1}) == 1);
}

TEST_CASE("extreme laws") {
    const LatticeBox box(2, 6);
    const ColorField mono(box, ColoringLaw::single_color(), 3);
    const auto r0 = passage_times_from(mono, {1, -2});
    for (Time t : r0.distances()) CHECK(t == 0);

    const ColorField distinct(box, ColoringLaw::all_distinct(), 3);
    const Vertex s{1, -2};
    const auto r1 = passage_times_from(distinct, s);
    for (std::size_t i = 0; i < box.size(); ++i) CHECK(r1[i] == l1_distance(s, box.vertex(i)));
    for (int k : {1, 2, 5}) {
        CHECK(k_short_passage_time(distinct, s, {-3, 4}, k).time == l1_distance(s, {-3, 4}));
    }
}

TEST_CASE("passage times agree with exhaustive path enumeration on 5x5 boxes") {
    const LatticeBox box(2, 2);
    std::mt19937_64 rng(5);
    for (int field_no = 0; field_no < 6; ++field_no) {
        const auto f = random_field(box, rng, 2 + field_no % 3);
        const std::vector<std::uint32_t> colors(f.colors().begin(), f.colors().end());
        for (std::size_t s = 0; s < box.size(); ++s) {
            const auto tab = oracle::saw_table(colors, box.side(), static_cast<int>(s));
            const auto res = passage_times_from(f, box.vertex(s));
            const auto lex = lexicographic_passage_from(f, s);
            KShortSolver solver(f);
            for (std::size_t v = 0; v < box.size(); ++v) {
                const Time expect = tab.min_time(static_cast<int>(v));
                REQUIRE(res[v] == expect);
                REQUIRE(lex.time[v] == expect);
                const auto route = extract_route(res, box.vertex(v));
                CHECK(path_time(f, route) == expect);
                CHECK(is_self_avoiding(route));
                const int ks[] = {1, 2, 3, 8};
                const auto with_lex = solver.solve(box.vertex(s), box.vertex(v), ks, &lex);
                const auto without = solver.solve(box.vertex(s), box.vertex(v), ks);
                for (std::size_t i = 0; i < 4; ++i) {
                    const long budget = ks[i] * l1_distance(box.vertex(s), box.vertex(v));
                    const Time kexp = tab.min_time_within(static_cast<int>(v), budget);
                    REQUIRE(with_lex[i].feasible);
                    REQUIRE(with_lex[i].time == kexp);
                    REQUIRE(without[i].time == kexp);
                }
            }
        }
    }
}

TEST_CASE("hop-constrained times agree with the naive hop table on a larger box") {
    const LatticeBox box(2, 6);
    std::mt19937_64 rng(17);
    const auto f = random_field(box, rng, 3);
    const std::vector<std::uint32_t> colors(f.colors().begin(), f.colors().end());
    const Vertex s{-2, 1};
    const auto table = oracle::hop_table(colors, box.side(), static_cast<int>(box.index(s)), 80);
    const auto lex = lexicographic_passage_from(f, box.index(s));
    KShortSolver solver(f);
    const int ks[] = {1, 2, 3, 5};
    for (std::size_t v = 0; v < box.size(); ++v) {
        const Vertex tv = box.vertex(v);
        const auto res = solver.solve(s, tv, ks, &lex);
        for (std::size_t i = 0; i < 4; ++i) {
            const long budget = std::min<long>(80, res[i].budget);
            REQUIRE(res[i].time == table[budget][v]);
        }
    }
}

TEST_CASE("k = 1 uses monotone paths only") {
    const LatticeBox box(2, 2);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const auto f = random_field(box, rng, 2);
        KShortSolver solver(f);
        const int ks[] = {1};
        for (std::size_t a = 0; a < box.size(); ++a) {
            for (std::size_t b = 0; b < box.size(); ++b) {
                const auto r = solver.solve(box.vertex(a), box.vertex(b), ks);
                CHECK(r[0].time == monotone_min(f, box.vertex(a), box.vertex(b)));
            }
        }
    }
}

TEST_CASE("metric properties on random fields") {
    const LatticeBox box(2, 12);
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> coord(-12, 12);
    for (int trial = 0; trial < 4; ++trial) {
        const ColorField f(box, ColoringLaw::uniform(3), 100 + trial);
        for (int rep = 0; rep < 10; ++rep) {
            const Vertex u{coord(rng), coord(rng)};
            const Vertex v{coord(rng), coord(rng)};
            const Vertex w{coord(rng), coord(rng)};
            const auto ru = passage_times_from(f, u);
            const auto rv = passage_times_from(f, v);
            CHECK(ru.time(v) == rv.time(u));
            CHECK(ru.time(w) <= ru.time(v) + rv.time(w));
            CHECK(ru.time(v) <= l1_distance(u, v));
            const int ks[] = {1, 2, 3, 4, 6, 8};
            KShortSolver solver(f);
            const auto lex = lexicographic_passage_from(f, box.index(u));
            const auto kr = solver.solve(u, v, ks, &lex);
            for (std::size_t i = 0; i + 1 < kr.size(); ++i) CHECK(kr[i].time >= kr[i + 1].time);
            CHECK(kr.back().time >= ru.time(v));
            // Every edge satisfies the relaxation condition.
            for (std::size_t x = 0; x < box.size(); ++x) {
                box.for_each_neighbor(x, [&](std::size_t y) {
                    const int t = f[x] == f[y] ? 0 : 1;
                    CHECK(std::abs(static_cast<int>(ru[x]) - static_cast<int>(ru[y])) <= t);
                });
            }
        }
    }
}

TEST_CASE("large k recovers the unrestricted passage time") {
    const LatticeBox box(2, 15);
    const ColorField f(box, ColoringLaw::from_probabilities({0.5, 0.5}), 77);
    const Vertex u{0, 0};
    const auto res = passage_times_from(f, u);
    const int diameter = 2 * box.dim() * box.radius();
    for (const Vertex v : {Vertex{7, 3}, Vertex{-15, 2}, Vertex{1, 0}, Vertex{-4, -11}}) {
        const int k = diameter / static_cast<int>(l1_distance(u, v)) + 1;
        CHECK(k_short_passage_time(f, u, v, k).time == res.time(v));
    }
}

TEST_CASE("boundary exactness matches a larger box") {
    // Same seed on nested boxes: sites whose in-box time is certified exact must agree.
    const auto p = ColoringLaw::from_probabilities({0.5, 0.5});
    const LatticeBox small(2, 10);
    const LatticeBox large(2, 40);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ColorField fs(small, p, seed);
        const ColorField fl(large, p, seed);
        const auto rs = passage_times_from(fs, origin(2));
        const auto rl = passage_times_from(fl, origin(2));
        for (std::size_t i = 0; i < small.size(); ++i) {
            const Vertex v = small.vertex(i);
            CHECK(rs[i] >= rl.time(v));
            if (rs.exact_at(i)) CHECK(rs[i] == rl.time(v));
        }
        const auto lex_s = lexicographic_passage_from(fs, small.origin_index());
        const auto lex_l = lexicographic_passage_from(fl, large.origin_index());
        KShortSolver ss(fs);
        KShortSolver sl(fl);
        const int ks[] = {1, 2, 4};
        for (const Vertex v : {Vertex{6, 2}, Vertex{-3, 8}, Vertex{9, -9}}) {
            const auto a = ss.solve(origin(2), v, ks, &lex_s);
            const auto b = sl.solve(origin(2), v, ks, &lex_l);
            for (std::size_t i = 0; i < 3; ++i) {
                CHECK(a[i].time >= b[i].time);
                if (!a[i].boundary_touched) CHECK(a[i].time == b[i].time);
            }
        }
    }
}

TEST_CASE("boundary distance certificate") {
    const LatticeBox small(2, 8);
    const LatticeBox large(2, 40);
    std::size_t certified = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        for (const auto& law : {ColoringLaw::from_probabilities({0.5, 0.5}), ColoringLaw::from_probabilities({0.25, 0.75})}) {
            const ColorField fs(small, law, seed);
            const ColorField fl(large, law, seed);
            const auto bt = boundary_distances(fs);
            const auto rs = passage_times_from(fs, origin(2));
            const auto rl = passage_times_from(fl, origin(2));
            CHECK(bt[small.origin_index()] == rs.boundary_time());
            for (std::size_t i = 0; i < small.size(); ++i) {
                if (small.on_boundary(i)) CHECK(bt[i] == 0);
                if (rs[i] <= rs.boundary_time() + bt[i]) {
                    ++certified;
                    CHECK(rs[i] == rl.time(small.vertex(i)));
                }
            }
        }
    }
    CHECK(certified > 0);
}

TEST_CASE("point passage times") {
    const LatticeBox box(2, 5);
    const ColorField mono(box, ColoringLaw::single_color(), 1);
    const double x[] = {0.4, 0.0};
    const double y[] = {0.6, 0.0};
    CHECK(point_passage_time(mono, x, x) == 0);
    CHECK(point_passage_time(mono, x, y) == 0);
    const ColorField distinct(box, ColoringLaw::all_distinct(), 1);
    const double o[] = {0.0, 0.0};
    const double z[] = {2.5, 0.0};
    CHECK(point_passage_time(distinct, o, z) == 2);
    const double far[] = {7.0, 0.0};
    CHECK_THROWS_AS((void)point_passage_time(distinct, o, far), DomainError);
}

TEST_CASE("routes") {
    const LatticeBox box(2, 4);
    const ColorField mono(box, ColoringLaw::single_color(), 1);
    const auto r = passage_times_from(mono, {0, 0});
    CHECK(extract_route(r, {0, 0}).length() == 0);
    CHECK(path_time(mono, extract_route(r, {3, -2})) == 0);
}

TEST_CASE("reached sets") {
    const LatticeBox box(2, 6);
    const ColorField distinct(box, ColoringLaw::all_distinct(), 1);
    const auto rd = passage_times_from(distinct, origin(2));
    for (Time t = 0; t <= 4; ++t) {
        const auto b = reached_set(rd, t);
        for (std::size_t i = 0; i < box.size(); ++i) {
            const bool in_ball = l1_norm(box.vertex(i)) <= static_cast<long>(t);
            CHECK(std::binary_search(b.members.begin(), b.members.end(), i) == in_ball);
        }
        CHECK_FALSE(b.boundary_touched);
    }
    const auto all = reached_set(rd, 2 * 2 * 6);
    CHECK(all.members.size() == box.size());
    CHECK(all.boundary_touched);

    // B(0) is the color cluster of the origin: check against a flood fill.
    std::mt19937_64 rng(3);
    const auto f = random_field(box, rng, 2);
    const auto r = passage_times_from(f, origin(2));
    const auto b0 = reached_set(r, 0);
    std::vector<char> seen(box.size(), 0);
    std::vector<std::size_t> stack{box.origin_index()};
    seen[box.origin_index()] = 1;
    std::size_t count = 0;
    while (!stack.empty()) {
        const std::size_t x = stack.back();
        stack.pop_back();
        ++count;
        CHECK(std::binary_search(b0.members.begin(), b0.members.end(), x));
        box.for_each_neighbor(x, [&](std::size_t y) {
            if (!seen[y] && f[y] == f[x]) {
                seen[y] = 1;
                stack.push_back(y);
            }
        });
    }
    CHECK(count == b0.members.size());
    // Monotone in t.
    CHECK(reached_set(r, 1).members.size() >= b0.members.size());
}
