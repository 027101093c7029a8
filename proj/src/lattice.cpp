#include "fpp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fpp/errors.hpp"

namespace fpp {

namespace {

void check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw DomainError("dimension " + std::to_string(dim) + " outside [1, " +
                          std::to_string(kMaxDim) + "]");
    }
}

}  // namespace

Vertex::Vertex(int dim) : dim_(dim) { check_dim(dim); }

Vertex::Vertex(std::initializer_list<int> coords) : dim_(static_cast<int>(coords.size())) {
    check_dim(dim_);
    int i = 0;
    for (int c : coords) c_[i++] = c;
}

Vertex::Vertex(std::span<const int> coords) : dim_(static_cast<int>(coords.size())) {
    check_dim(dim_);
    for (int i = 0; i < dim_; ++i) c_[i] = coords[i];
}

Vertex operator+(Vertex a, const Vertex& b) {
    for (int i = 0; i < a.dim_; ++i) a.c_[i] += b.c_[i];
    return a;
}

Vertex operator-(Vertex a, const Vertex& b) {
    for (int i = 0; i < a.dim_; ++i) a.c_[i] -= b.c_[i];
    return a;
}

std::string Vertex::to_string() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << c_[i];
    os << ')';
    return os.str();
}

long l1_distance(const Vertex& u, const Vertex& v) {
    long s = 0;
    for (int i = 0; i < u.dim(); ++i) s += std::labs(static_cast<long>(u[i]) - v[i]);
    return s;
}

long l1_norm(const Vertex& u) { return l1_distance(u, origin(u.dim())); }

Vertex origin(int dim) { return Vertex(dim); }

Vertex basis(int dim, int axis) {
    Vertex e(dim);
    e[axis] = 1;
    return e;
}

Vertex nearest_site(std::span<const double> x) {
    Vertex v(static_cast<int>(x.size()));
    for (int i = 0; i < v.dim(); ++i) {
        // ceil(x - 1/2) is the nearest integer with ties sent down.
        v[i] = static_cast<int>(std::ceil(x[i] - 0.5));
    }
    return v;
}

LatticeBox::LatticeBox(int dim, int radius) : dim_(dim), radius_(radius), side_(2 * radius + 1) {
    check_dim(dim);
    if (dim < 2) throw DomainError("lattice boxes need dimension >= 2");
    if (radius < 1) throw DomainError("box radius must be >= 1");
    std::size_t s = 1;
    for (int axis = dim - 1; axis >= 0; --axis) {
        stride_[axis] = s;
        s *= static_cast<std::size_t>(side_);
    }
    size_ = s;
}

bool LatticeBox::contains(const Vertex& v) const noexcept {
    if (v.dim() != dim_) return false;
    for (int i = 0; i < dim_; ++i) {
        if (v[i] < -radius_ || v[i] > radius_) return false;
    }
    return true;
}

std::size_t LatticeBox::index(const Vertex& v) const {
    if (!contains(v)) throw DomainError("vertex " + v.to_string() + " outside box");
    std::size_t idx = 0;
    for (int i = 0; i < dim_; ++i) idx += static_cast<std::size_t>(v[i] + radius_) * stride_[i];
    return idx;
}

Vertex LatticeBox::vertex(std::size_t idx) const {
    Vertex v(dim_);
    for (int i = 0; i < dim_; ++i) {
        const std::size_t c = idx / stride_[i];
        idx -= c * stride_[i];
        v[i] = static_cast<int>(c) - radius_;
    }
    return v;
}

bool LatticeBox::on_boundary(std::size_t idx) const noexcept {
    for (int i = 0; i < dim_; ++i) {
        const std::size_t c = idx / stride_[i];
        idx -= c * stride_[i];
        if (c == 0 || c + 1 == static_cast<std::size_t>(side_)) return true;
    }
    return false;
}

std::vector<Vertex> LatticeBox::neighbors(const Vertex& v) const {
    const std::size_t idx = index(v);
    std::vector<Vertex> out;
    out.reserve(2 * dim_);
    for_each_neighbor(idx, [&](std::size_t w) { out.push_back(vertex(w)); });
    return out;
}

LatticePath::LatticePath(std::vector<Vertex> vertices) : v_(std::move(vertices)) {
    for (std::size_t i = 1; i < v_.size(); ++i) {
        if (l1_distance(v_[i - 1], v_[i]) != 1) {
            throw DomainError("path step " + v_[i - 1].to_string() + " -> " + v_[i].to_string() +
                              " is not a lattice edge");
        }
    }
}

bool is_self_avoiding(const LatticePath& path) {
    std::vector<Vertex> sorted = path.vertices();
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

namespace {

void check_oracle_length(int max_len, const LatticeBox& box) {
    if (max_len < 0) throw DomainError("max_len must be nonnegative");
    if (max_len > kMaxOracleLength && box.size() > kSmallBoxVertices) {
        throw PreconditionError("self-avoiding path enumeration refused: max_len " +
                                std::to_string(max_len) + " > " +
                                std::to_string(kMaxOracleLength) + " on a box of " +
                                std::to_string(box.size()) + " sites");
    }
}

}  // namespace

void for_each_self_avoiding_walk(const Vertex& u, int max_len, const LatticeBox& box,
                                 const std::function<bool(std::span<const std::size_t>)>& visit) {
    check_oracle_length(max_len, box);
    std::vector<char> on_walk(box.size(), 0);
    std::vector<std::size_t> walk{box.index(u)};
    on_walk[walk.back()] = 1;

    // Explicit stack of (vertex, next neighbour slot) to avoid deep recursion.
    struct Frame {
        std::size_t v;
        int next;
    };
    std::vector<Frame> stack;
    if (!visit(walk)) return;
    stack.push_back({walk.back(), 0});
    std::array<std::size_t, 2 * kMaxDim> nb{};
    while (!stack.empty()) {
        Frame& top = stack.back();
        int count = 0;
        box.for_each_neighbor(top.v, [&](std::size_t w) { nb[count++] = w; });
        if (static_cast<int>(walk.size()) - 1 >= max_len || top.next >= count) {
            on_walk[top.v] = 0;
            walk.pop_back();
            stack.pop_back();
            continue;
        }
        const std::size_t w = nb[top.next++];
        if (on_walk[w]) continue;
        on_walk[w] = 1;
        walk.push_back(w);
        if (visit(walk)) {
            stack.push_back({w, 0});
        } else {
            on_walk[w] = 0;
            walk.pop_back();
        }
    }
}

std::vector<LatticePath> enumerate_self_avoiding_paths(const Vertex& u, const Vertex& v,
                                                       int max_len, const LatticeBox& box) {
    const std::size_t target = box.index(v);
    std::vector<LatticePath> out;
    for_each_self_avoiding_walk(u, max_len, box, [&](std::span<const std::size_t> walk) {
        if (walk.back() == target) {
            std::vector<Vertex> verts;
            verts.reserve(walk.size());
            for (std::size_t w : walk) verts.push_back(box.vertex(w));
            out.emplace_back(std::move(verts));
        }
        return true;
    });
    return out;
}

}  // namespace fpp
