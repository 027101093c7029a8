#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp {

using Color = std::uint32_t;

// A law p on the colors {1, 2, ...}: either a finite probability vector or the
// "all-distinct" sentinel in which every site receives its own color (the |p| -> 0 limit).
// Immutable; copies share storage.
class ColoringLaw {
public:
    static constexpr double kSumTolerance = 1e-12;

    // Validates entries in [0,1] and the total within kSumTolerance of 1.
    static ColoringLaw from_probabilities(std::vector<double> probabilities);
    static ColoringLaw uniform(std::size_t colors);
    static ColoringLaw all_distinct();
    static ColoringLaw single_color() { return uniform(1); }

    [[nodiscard]] bool is_all_distinct() const noexcept { return data_->all_distinct; }
    [[nodiscard]] std::size_t support_size() const noexcept { return data_->p.size(); }
    [[nodiscard]] std::span<const double> probabilities() const noexcept { return data_->p; }
    // Cumulative sums F(1..m); F(m) == 1 exactly.
    [[nodiscard]] std::span<const double> cumulative() const noexcept { return data_->cum; }
    // p_i for a 1-based color; zero beyond the stored support.
    [[nodiscard]] double probability(std::size_t color) const noexcept;

    // |p| = max_i p_i (0 for the all-distinct sentinel).
    [[nodiscard]] double sup_norm() const noexcept;
    // sum_{i > s} p_i
    [[nodiscard]] double tail_mass(std::size_t s) const noexcept;

    // Keeps the first `colors` entries and renormalises.
    [[nodiscard]] ColoringLaw truncated(std::size_t colors) const;

    friend bool operator==(const ColoringLaw& a, const ColoringLaw& b);

private:
    struct Data {
        bool all_distinct = false;
        std::vector<double> p;
        std::vector<double> cum;
    };
    explicit ColoringLaw(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
    std::shared_ptr<const Data> data_;
};

// sup_i |p_i - q_i|. With the all-distinct sentinel as a limit of uniform laws on many colors.
[[nodiscard]] double sup_distance(const ColoringLaw& p, const ColoringLaw& q);
// sum_i |p_i - q_i|, same convention (distance 2 between the sentinel and any finite law).
[[nodiscard]] double l1_law_distance(const ColoringLaw& p, const ColoringLaw& q);

// The i with F(i-1) <= u < F(i). Throws DomainError for u outside [0,1) or the sentinel law.
[[nodiscard]] Color color_from_uniform(double u, const ColoringLaw& law);

// Per-site uniforms U_u on a box, keyed on (seed, coordinates).
class UniformField {
public:
    UniformField(LatticeBox box, std::uint64_t seed);

    [[nodiscard]] const LatticeBox& box() const noexcept { return box_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] double operator[](std::size_t idx) const noexcept { return u_[idx]; }
    [[nodiscard]] double at(const Vertex& v) const { return u_[box_.index(v)]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return u_; }

private:
    LatticeBox box_;
    std::uint64_t seed_;
    std::vector<double> u_;
};

[[nodiscard]] UniformField sample_uniform_field(const LatticeBox& box, std::uint64_t seed);

class ColorField {
public:
    // Coupled construction: X_u = color_from_uniform(U_u, law).
    ColorField(const UniformField& uniforms, const ColoringLaw& law);
    // Direct construction from (box, law, seed); bit-identical to the coupled one.
    ColorField(const LatticeBox& box, const ColoringLaw& law, std::uint64_t seed);
    // Explicit fixture colors (row-major order), no law attached.
    ColorField(const LatticeBox& box, std::vector<Color> colors);

    [[nodiscard]] const LatticeBox& box() const noexcept { return box_; }
    [[nodiscard]] const std::optional<ColoringLaw>& law() const noexcept { return law_; }
    [[nodiscard]] bool all_distinct() const noexcept { return all_distinct_; }
    [[nodiscard]] Color operator[](std::size_t idx) const noexcept { return colors_[idx]; }
    [[nodiscard]] Color at(const Vertex& v) const { return colors_[box_.index(v)]; }
    [[nodiscard]] std::span<const Color> colors() const noexcept { return colors_; }

private:
    LatticeBox box_;
    std::optional<ColoringLaw> law_;
    bool all_distinct_ = false;
    std::vector<Color> colors_;
};

[[nodiscard]] std::vector<ColorField> couple_fields(const UniformField& uniforms,
                                                    std::span<const ColoringLaw> laws);

// Lebesgue measure of {u : color_from_uniform(u,p) != color_from_uniform(u,q)}.
[[nodiscard]] double disagreement_exact(const ColoringLaw& p, const ColoringLaw& q);

// 2 * sum_{i<=S} (S+1-i)|p_i - q_i| + sum_{i>S} p_i
[[nodiscard]] double disagreement_bound(const ColoringLaw& p, const ColoringLaw& q, std::size_t s);

struct LawRegionParams {
    double theta = 0.5;
    std::size_t S = 5;
};

// Membership in E_{theta,S}: |p| < theta and sum_{i>S} p_i < theta.
[[nodiscard]] bool is_in_region(const ColoringLaw& p, const LawRegionParams& params);
void validate(const LawRegionParams& params);

// Law files: {"probabilities": [...]} or {"mode": "all_distinct"}; {"uniform": m} is
// accepted as shorthand for m equiprobable colors.
[[nodiscard]] ColoringLaw parse_law_json(std::string_view text);
[[nodiscard]] ColoringLaw load_law_file(const std::filesystem::path& path);
[[nodiscard]] std::string law_to_json(const ColoringLaw& law);

}  // namespace fpp
