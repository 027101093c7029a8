#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpp/coloring.hpp"
#include "fpp/config.hpp"
#include "fpp/geometry.hpp"

namespace fpp {

[[nodiscard]] std::string_view version() noexcept;

enum class ExperimentKind { timeconst, mu_k, shape, hausdorff_sweep, animals, cluster_tail, chain_check, domination };

[[nodiscard]] std::string to_string(ExperimentKind kind);
// DomainError for an unknown name.
[[nodiscard]] ExperimentKind parse_kind(std::string_view name);

// A law given either as a file path (relative paths resolve against the manifest's
// directory) or inline as a law object. Inline laws are kept in canonical JSON text.
struct LawRef {
    std::string file;
    std::string inline_json;

    [[nodiscard]] ColoringLaw resolve(const std::filesystem::path& base_dir) const;
    friend bool operator==(const LawRef&, const LawRef&) = default;
};

struct WeightSpec {
    std::string kind = "bernoulli_cluster";  // constant | bernoulli | uniform | bernoulli_cluster | color_cluster_squared
    double param = 0.3;
    std::optional<double> cap;
    std::optional<LawRef> law;  // color_cluster_squared only
    friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

struct DeviationSpec {
    std::size_t n = 200;
    double w_ref = 0.0;  // 0 means: use the estimated W from the series
    std::uint64_t replicas = 1000;
    friend bool operator==(const DeviationSpec&, const DeviationSpec&) = default;
};

// One experiment. Only the keys that belong to the kind are accepted when parsing and
// written when serializing, so a parse/serialize round trip reproduces the manifest.
struct ExperimentManifest {
    ExperimentKind kind = ExperimentKind::timeconst;
    std::string name;  // output file stem; defaults to the kind
    int dim = 2;
    std::uint64_t replicas = 20;
    std::uint64_t seed = 1;
    std::string output_dir;
    std::optional<ModelConfig> config;

    // Laws. `compare` holds the q laws of a sweep.
    std::optional<LawRef> law;
    std::vector<LawRef> compare;

    // Estimators (timeconst, mu-k, shape, hausdorff-sweep).
    std::vector<int> n_schedule{50, 100, 200};
    double margin = 1.5;
    std::optional<int> box_radius;  // also the chain-check box
    std::vector<Point> directions;
    std::vector<int> k_list;
    std::vector<int> t_grid;

    // Clusters (cluster-tail, chain-check, domination).
    double theta = 0.3;
    std::size_t S = 5;
    std::vector<std::size_t> sizes;
    std::size_t cap = 1'000'000;
    std::size_t paths = 100;
    std::size_t path_sites = 40;

    // Animals.
    std::optional<WeightSpec> weights;
    int beam = 4;
    std::optional<DeviationSpec> deviation;

    // Throws DomainError on values outside their domains or missing required keys.
    void validate() const;
    [[nodiscard]] std::string stem() const { return name.empty() ? to_string(kind) : name; }

    // Canonical JSON (sorted keys, two-space indent).
    [[nodiscard]] std::string to_json() const;
    // DomainError on malformed JSON, unknown kinds or keys that do not belong to the kind.
    [[nodiscard]] static ExperimentManifest from_json(std::string_view text);
    [[nodiscard]] static ExperimentManifest load(const std::filesystem::path& path);

    friend bool operator==(const ExperimentManifest&, const ExperimentManifest&) = default;
};

// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
[[nodiscard]] std::string manifest_digest(const ExperimentManifest& m);

}  // namespace fpp
