#include "fpp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "fpp/errors.hpp"

namespace fpp {

double dot(const Point& a, const Point& b) noexcept { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Point& a) noexcept { return std::sqrt(dot(a, a)); }

namespace {

double cross(const Point& o, const Point& a, const Point& b) noexcept {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double segment_distance(const Point& p, const Point& a, const Point& b) noexcept {
    const double dx = b[0] - a[0];
    const double dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy));
}

Point normalized(const Point& p) {
    const double n = norm(p);
    return {p[0] / n, p[1] / n, p[2] / n};
}

}  // namespace

std::vector<Point> convex_hull_2d(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double point_polygon_distance(const Point& p, std::span<const Point> polygon) {
    if (polygon.empty()) throw DomainError("distance to an empty polygon");
    if (polygon.size() == 1) return std::hypot(p[0] - polygon[0][0], p[1] - polygon[0][1]);
    bool inside = polygon.size() >= 3;
    double best = INFINITY;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const Point& a = polygon[i];
        const Point& b = polygon[(i + 1) % polygon.size()];
        if (cross(a, b, p) < 0) inside = false;
        best = std::min(best, segment_distance(p, a, b));
    }
    return inside ? 0.0 : best;
}

double polygon_hausdorff(std::span<const Point> a, std::span<const Point> b) {
    double d = 0.0;
    for (const auto& p : a) d = std::max(d, point_polygon_distance(p, b));
    for (const auto& p : b) d = std::max(d, point_polygon_distance(p, a));
    return d;
}

double support(std::span<const Point> pts, const Point& u) noexcept {
    double best = -INFINITY;
    for (const auto& p : pts) best = std::max(best, dot(p, u));
    return best;
}

std::vector<Point> circle_directions(std::size_t count) {
    if (count < 3) throw DomainError("need at least 3 planar directions");
    std::vector<Point> out(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
        out[j] = {std::cos(a), std::sin(a), 0.0};
    }
    // Keep exact zeros and unit entries on the axes and diagonals.
    for (auto& p : out) {
        for (auto& c : p) {
            if (std::abs(c) < 1e-15) c = 0.0;
            if (std::abs(std::abs(c) - 1.0) < 1e-15) c = std::copysign(1.0, c);
        }
    }
    return out;
}

std::vector<Point> icosphere_directions(int level) {
    if (level < 0 || level > 6) throw DomainError("icosphere level must lie in 0..6");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Point> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                            {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : v) p = normalized(p);
    std::vector<std::array<std::size_t, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> mid;
        auto midpoint = [&](std::size_t a, std::size_t b) {
            const auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            v.push_back(normalized({v[a][0] + v[b][0], v[a][1] + v[b][1], v[a][2] + v[b][2]}));
            mid.emplace(key, v.size() - 1);
            return v.size() - 1;
        };
        std::vector<std::array<std::size_t, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const std::size_t a = midpoint(f[0], f[1]);
            const std::size_t b = midpoint(f[1], f[2]);
            const std::size_t c = midpoint(f[2], f[0]);
            next.push_back({f[0], a, c});
            next.push_back({f[1], b, a});
            next.push_back({f[2], c, b});
            next.push_back({a, b, c});
        }
        faces = std::move(next);
    }
    return v;
}

double max_neighbour_angle(std::span<const Point> dirs) {
    double worst = 0.0;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        double best = -1.0;
        for (std::size_t j = 0; j < dirs.size(); ++j) {
            if (j != i) best = std::max(best, dot(dirs[i], dirs[j]));
        }
        worst = std::max(worst, std::acos(std::clamp(best, -1.0, 1.0)));
    }
    return worst;
}

}  // namespace fpp
