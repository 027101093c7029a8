#include "fpp/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fpp/errors.hpp"
#include "fpp/estimation.hpp"
#include "fpp/lattice.hpp"
#include "json.hpp"

#ifndef FPP_VERSION
#define FPP_VERSION "0.0.0"
#endif

namespace fpp {

using nlohmann::json;

std::string_view version() noexcept { return FPP_VERSION; }

namespace {

constexpr std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::timeconst, "timeconst"},     {ExperimentKind::mu_k, "mu-k"},
    {ExperimentKind::shape, "shape"},             {ExperimentKind::hausdorff_sweep, "hausdorff-sweep"},
    {ExperimentKind::animals, "animals"},         {ExperimentKind::cluster_tail, "cluster-tail"},
    {ExperimentKind::chain_check, "chain-check"}, {ExperimentKind::domination, "domination"},
};

const std::set<std::string> kCommonKeys{"kind", "name", "dim", "replicas", "seed", "output_dir", "config"};

std::set<std::string> kind_keys(ExperimentKind kind) {
    const std::set<std::string> estimator{"law", "n_schedule", "margin", "box_radius", "directions"};
    std::set<std::string> keys;
    switch (kind) {
        case ExperimentKind::timeconst: keys = estimator; break;
        case ExperimentKind::mu_k: keys = estimator; keys.insert("k_list"); break;
        case ExperimentKind::shape: keys = estimator; keys.insert("t_grid"); break;
        case ExperimentKind::hausdorff_sweep: keys = estimator; keys.insert("compare"); break;
        case ExperimentKind::animals: keys = {"weights", "sizes", "beam", "deviation"}; break;
        case ExperimentKind::cluster_tail: keys = {"theta", "sizes", "cap"}; break;
        case ExperimentKind::chain_check: keys = {"law", "box_radius", "paths", "path_sites", "S"}; break;
        case ExperimentKind::domination: keys = {"law", "theta", "S", "sizes"}; break;
    }
    keys.insert(kCommonKeys.begin(), kCommonKeys.end());
    return keys;
}

bool is_estimator(ExperimentKind k) {
    return k == ExperimentKind::timeconst || k == ExperimentKind::mu_k || k == ExperimentKind::shape ||
           k == ExperimentKind::hausdorff_sweep;
}

json law_ref_to_json(const LawRef& ref) {
    if (!ref.file.empty()) return ref.file;
    return json::parse(ref.inline_json);
}

LawRef law_ref_from_json(const json& j) {
    LawRef ref;
    if (j.is_string()) {
        ref.file = j.get<std::string>();
        if (ref.file.empty()) throw DomainError("empty law file path");
    } else if (j.is_object()) {
        ref.inline_json = j.dump();
        (void)parse_law_json(ref.inline_json);
    } else {
        throw DomainError("a law is a file path or a law object");
    }
    return ref;
}

void require_positive(const std::vector<int>& v, const char* what) {
    for (int x : v) {
        if (x < 1) throw DomainError(std::string(what) + " entries must be >= 1");
    }
}

void require_increasing(const std::vector<int>& v, const char* what) {
    if (v.empty()) throw DomainError(std::string(what) + " must not be empty");
    require_positive(v, what);
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] <= v[i - 1]) throw DomainError(std::string(what) + " must be strictly increasing");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DomainError(std::string("bad value for `") + key + "`: " + e.what());
    }
}

template <typename T>
void read(const json& j, const char* key, std::optional<T>& out) {
    if (!j.contains(key)) return;
    T value{};
    read(j, key, value);
    out = value;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

ExperimentKind parse_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (name == n) return k;
    }
    throw DomainError("unknown experiment kind `" + std::string(name) + "`");
}

ColoringLaw LawRef::resolve(const std::filesystem::path& base_dir) const {
    if (file.empty()) return parse_law_json(inline_json);
    std::filesystem::path p(file);
    if (p.is_relative()) p = base_dir / p;
    return load_law_file(p);
}

void ExperimentManifest::validate() const {
    if (dim < 2 || dim > kMaxDim) throw DomainError("dimension must lie in 2.." + std::to_string(kMaxDim));
    if (replicas < 1) throw DomainError("replicas must be >= 1");
    if (config) config->validate();
    const auto keys = kind_keys(kind);
    if (keys.count("law") && !law) throw DomainError(to_string(kind) + " needs a `law`");

    if (is_estimator(kind)) {
        if (dim > 3) throw DomainError("estimators support d = 2 and d = 3");
        EstimatorConfig cfg;
        cfg.dim = dim;
        cfg.directions = directions;
        cfg.n_schedule = n_schedule;
        cfg.margin = margin;
        cfg.box_radius = box_radius;
        cfg.replicas = replicas;
        cfg.k_list = k_list;
        cfg.validate();
    }
    switch (kind) {
        case ExperimentKind::mu_k:
            if (k_list.empty()) throw DomainError("mu-k needs a nonempty `k_list`");
            require_positive(k_list, "k_list");
            break;
        case ExperimentKind::shape: require_increasing(t_grid, "t_grid"); break;
        case ExperimentKind::hausdorff_sweep:
            if (compare.empty()) throw DomainError("hausdorff-sweep needs a nonempty `compare` list");
            break;
        case ExperimentKind::animals:
            if (!weights) throw DomainError("animals needs a `weights` model");
            if (sizes.empty()) throw DomainError("animals needs a nonempty `sizes` grid");
            if (beam < 1) throw DomainError("beam must be >= 1");
            if (weights->kind != "constant" && weights->kind != "bernoulli" && weights->kind != "uniform" &&
                weights->kind != "bernoulli_cluster" && weights->kind != "color_cluster_squared") {
                throw DomainError("unknown weight model `" + weights->kind + "`");
            }
            if (weights->kind == "color_cluster_squared" && !weights->law) {
                throw DomainError("color_cluster_squared weights need a `law`");
            }
            if (deviation && deviation->replicas < 1) throw DomainError("deviation replicas must be >= 1");
            if (deviation && !(deviation->w_ref >= 0.0)) throw DomainError("deviation w_ref must be >= 0");
            break;
        case ExperimentKind::cluster_tail:
        case ExperimentKind::domination:
            if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
            if (sizes.empty()) throw DomainError(to_string(kind) + " needs a nonempty `sizes` grid");
            if (kind == ExperimentKind::domination && S < 1) throw DomainError("S must be >= 1");
            if (kind == ExperimentKind::cluster_tail && cap < 1) throw DomainError("cap must be >= 1");
            break;
        case ExperimentKind::chain_check:
            if (paths < 1 || path_sites < 1) throw DomainError("paths and path_sites must be >= 1");
            if (S < 1) throw DomainError("S must be >= 1");
            if (box_radius && *box_radius < 1) throw DomainError("box_radius must be >= 1");
            break;
        case ExperimentKind::timeconst: break;
    }
    for (std::size_t s : sizes) {
        if (s < 1) throw DomainError("sizes entries must be >= 1");
    }
}

std::string ExperimentManifest::to_json() const {
    const auto keys = kind_keys(kind);
    json j;
    j["kind"] = to_string(kind);
    if (!name.empty()) j["name"] = name;
    j["dim"] = dim;
    j["replicas"] = replicas;
    j["seed"] = seed;
    if (!output_dir.empty()) j["output_dir"] = output_dir;
    if (config) j["config"] = json::parse(config->to_json());
    if (keys.count("law") && law) j["law"] = law_ref_to_json(*law);
    if (keys.count("compare")) {
        j["compare"] = json::array();
        for (const auto& q : compare) j["compare"].push_back(law_ref_to_json(q));
    }
    if (keys.count("n_schedule")) j["n_schedule"] = n_schedule;
    if (keys.count("margin")) j["margin"] = margin;
    if (keys.count("box_radius") && box_radius) j["box_radius"] = *box_radius;
    if (keys.count("directions")) {
        j["directions"] = json::array();
        for (const auto& x : directions) {
            j["directions"].push_back(std::vector<double>(x.begin(), x.begin() + dim));
        }
    }
    if (keys.count("k_list")) j["k_list"] = k_list;
    if (keys.count("t_grid")) j["t_grid"] = t_grid;
    if (keys.count("theta")) j["theta"] = theta;
    if (keys.count("S")) j["S"] = S;
    if (keys.count("sizes")) j["sizes"] = sizes;
    if (keys.count("cap")) j["cap"] = cap;
    if (keys.count("paths")) j["paths"] = paths;
    if (keys.count("path_sites")) j["path_sites"] = path_sites;
    if (keys.count("weights") && weights) {
        json w;
        w["kind"] = weights->kind;
        w["param"] = weights->param;
        if (weights->cap) w["cap"] = *weights->cap;
        if (weights->law) w["law"] = law_ref_to_json(*weights->law);
        j["weights"] = w;
    }
    if (keys.count("beam")) j["beam"] = beam;
    if (keys.count("deviation") && deviation) {
        j["deviation"] = {{"n", deviation->n}, {"w_ref", deviation->w_ref}, {"replicas", deviation->replicas}};
    }
    return j.dump(2);
}

ExperimentManifest ExperimentManifest::from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DomainError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw DomainError("manifest must be a JSON object");
    if (!j.contains("kind") || !j["kind"].is_string()) throw DomainError("manifest needs a string `kind`");

    ExperimentManifest m;
    m.kind = parse_kind(j["kind"].get<std::string>());
    const auto keys = kind_keys(m.kind);
    for (const auto& [key, value] : j.items()) {
        if (!keys.count(key)) throw DomainError("key `" + key + "` does not belong to a " + to_string(m.kind) + " manifest");
    }
    read(j, "name", m.name);
    read(j, "dim", m.dim);
    read(j, "replicas", m.replicas);
    read(j, "seed", m.seed);
    read(j, "output_dir", m.output_dir);
    if (j.contains("config")) m.config = ModelConfig::from_json(j["config"].dump());
    if (j.contains("law")) m.law = law_ref_from_json(j["law"]);
    if (j.contains("compare")) {
        if (!j["compare"].is_array()) throw DomainError("`compare` must be an array of laws");
        for (const auto& q : j["compare"]) m.compare.push_back(law_ref_from_json(q));
    }
    read(j, "n_schedule", m.n_schedule);
    read(j, "margin", m.margin);
    read(j, "box_radius", m.box_radius);
    if (j.contains("directions")) {
        std::vector<std::vector<double>> raw;
        read(j, "directions", raw);
        for (const auto& x : raw) {
            if (x.size() != static_cast<std::size_t>(m.dim)) throw DomainError("direction length must equal dim");
            Point p{};
            std::copy(x.begin(), x.end(), p.begin());
            m.directions.push_back(p);
        }
    }
    read(j, "k_list", m.k_list);
    read(j, "t_grid", m.t_grid);
    read(j, "theta", m.theta);
    read(j, "S", m.S);
    read(j, "sizes", m.sizes);
    read(j, "cap", m.cap);
    read(j, "paths", m.paths);
    read(j, "path_sites", m.path_sites);
    if (j.contains("weights")) {
        const json& w = j["weights"];
        if (!w.is_object()) throw DomainError("`weights` must be an object");
        for (const auto& [key, value] : w.items()) {
            if (key != "kind" && key != "param" && key != "cap" && key != "law") {
                throw DomainError("unknown weights key `" + key + "`");
            }
        }
        WeightSpec spec;
        read(w, "kind", spec.kind);
        read(w, "param", spec.param);
        read(w, "cap", spec.cap);
        if (w.contains("law")) spec.law = law_ref_from_json(w["law"]);
        m.weights = spec;
    }
    read(j, "beam", m.beam);
    if (j.contains("deviation")) {
        const json& d = j["deviation"];
        if (!d.is_object()) throw DomainError("`deviation` must be an object");
        DeviationSpec spec;
        read(d, "n", spec.n);
        read(d, "w_ref", spec.w_ref);
        read(d, "replicas", spec.replicas);
        m.deviation = spec;
    }
    m.validate();
    return m;
}

ExperimentManifest ExperimentManifest::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open manifest " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string manifest_digest(const ExperimentManifest& m) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : m.to_json()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace fpp
