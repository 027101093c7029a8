#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fpp {

inline constexpr int kMaxDim = 4;

// A site of Z^d. Coordinates beyond `dim()` are always zero.
class Vertex {
public:
    Vertex() = default;
    explicit Vertex(int dim);
    Vertex(std::initializer_list<int> coords);
    explicit Vertex(std::span<const int> coords);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int operator[](int axis) const noexcept { return c_[axis]; }
    [[nodiscard]] int& operator[](int axis) noexcept { return c_[axis]; }

    friend Vertex operator+(Vertex a, const Vertex& b);
    friend Vertex operator-(Vertex a, const Vertex& b);
    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;

    [[nodiscard]] std::string to_string() const;

private:
    int dim_ = 0;
    std::array<int, kMaxDim> c_{};
};

[[nodiscard]] long l1_distance(const Vertex& u, const Vertex& v);
[[nodiscard]] long l1_norm(const Vertex& u);
[[nodiscard]] Vertex origin(int dim);

// Standard basis vector e_axis (axis is 0-based).
[[nodiscard]] Vertex basis(int dim, int axis);

// x* : componentwise nearest integer, exact half-integers go toward -infinity.
[[nodiscard]] Vertex nearest_site(std::span<const double> x);

// The centered cube [-L, L]^d with row-major flat indexing (axis 0 most significant).
class LatticeBox {
public:
    LatticeBox(int dim, int radius);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int radius() const noexcept { return radius_; }
    [[nodiscard]] int side() const noexcept { return side_; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] std::size_t stride(int axis) const noexcept { return stride_[axis]; }

    [[nodiscard]] bool contains(const Vertex& v) const noexcept;
    [[nodiscard]] std::size_t index(const Vertex& v) const;  // DomainError if outside
    [[nodiscard]] Vertex vertex(std::size_t idx) const;
    [[nodiscard]] std::size_t origin_index() const noexcept { return (size_ - 1) / 2; }
    [[nodiscard]] bool on_boundary(std::size_t idx) const noexcept;

    // In-box neighbours in the order (-x_1, +x_1, -x_2, +x_2, ...).
    [[nodiscard]] std::vector<Vertex> neighbors(const Vertex& v) const;

    template <typename F>
    void for_each_neighbor(std::size_t idx, F&& f) const {
        std::size_t rest = idx;
        for (int axis = 0; axis < dim_; ++axis) {
            const std::size_t s = stride_[axis];
            const std::size_t c = rest / s;
            rest -= c * s;
            if (c > 0) f(idx - s);
            if (c + 1 < static_cast<std::size_t>(side_)) f(idx + s);
        }
    }

    friend bool operator==(const LatticeBox&, const LatticeBox&) = default;

private:
    int dim_;
    int radius_;
    int side_;
    std::size_t size_;
    std::array<std::size_t, kMaxDim> stride_{};
};

// Ordered vertex sequence u_1..u_{k+1}; consecutive vertices are lattice neighbours.
class LatticePath {
public:
    LatticePath() = default;
    explicit LatticePath(std::vector<Vertex> vertices);  // DomainError on a non-unit step

    [[nodiscard]] const std::vector<Vertex>& vertices() const noexcept { return v_; }
    [[nodiscard]] std::size_t vertex_count() const noexcept { return v_.size(); }
    // l(gamma): number of edges.
    [[nodiscard]] std::size_t length() const noexcept { return v_.empty() ? 0 : v_.size() - 1; }
    [[nodiscard]] const Vertex& front() const { return v_.front(); }
    [[nodiscard]] const Vertex& back() const { return v_.back(); }

private:
    std::vector<Vertex> v_;
};

[[nodiscard]] bool is_self_avoiding(const LatticePath& path);

inline constexpr int kMaxOracleLength = 16;
inline constexpr std::size_t kSmallBoxVertices = 25;

// Visits every self-avoiding in-box walk starting at `u` with at most `max_len` edges
// (including the trivial walk). The visitor receives the walk as flat indices and
// returns false to stop descending below the current walk.
void for_each_self_avoiding_walk(const Vertex& u, int max_len, const LatticeBox& box,
                                 const std::function<bool(std::span<const std::size_t>)>& visit);

// All self-avoiding in-box paths from u to v of length <= max_len. Refuses max_len above
// kMaxOracleLength unless the box has at most kSmallBoxVertices sites.
[[nodiscard]] std::vector<LatticePath> enumerate_self_avoiding_paths(const Vertex& u,
                                                                     const Vertex& v,
                                                                     int max_len,
                                                                     const LatticeBox& box);

}  // namespace fpp
