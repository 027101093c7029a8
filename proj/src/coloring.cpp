#include "fpp/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fpp/errors.hpp"
#include "fpp/rng.hpp"
#include "json.hpp"

namespace fpp {

namespace {

// Neumaier-compensated prefix sums; the last entry is pinned to 1.
std::vector<double> cumulative_sums(const std::vector<double>& p) {
    std::vector<double> cum(p.size());
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double t = sum + p[i];
        if (std::abs(sum) >= std::abs(p[i])) {
            comp += (sum - t) + p[i];
        } else {
            comp += (p[i] - t) + sum;
        }
        sum = t;
        cum[i] = std::min(1.0, sum + comp);
    }
    if (!cum.empty()) cum.back() = 1.0;
    return cum;
}

}  // namespace

ColoringLaw ColoringLaw::from_probabilities(std::vector<double> probabilities) {
    if (probabilities.empty()) throw DomainError("coloring law needs at least one color");
    long double total = 0.0L;
    for (double x : probabilities) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw DomainError("coloring law entry " + std::to_string(x) + " outside [0,1]");
        }
        total += x;
    }
    if (std::abs(static_cast<double>(total) - 1.0) > kSumTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "coloring law sums to " << static_cast<double>(total) << ", not 1";
        throw DomainError(os.str());
    }
    auto d = std::make_shared<Data>();
    d->cum = cumulative_sums(probabilities);
    d->p = std::move(probabilities);
    return ColoringLaw(std::move(d));
}

ColoringLaw ColoringLaw::uniform(std::size_t colors) {
    if (colors == 0) throw DomainError("uniform law needs at least one color");
    return from_probabilities(std::vector<double>(colors, 1.0 / static_cast<double>(colors)));
}

ColoringLaw ColoringLaw::all_distinct() {
    auto d = std::make_shared<Data>();
    d->all_distinct = true;
    return ColoringLaw(std::move(d));
}

double ColoringLaw::probability(std::size_t color) const noexcept {
    if (color == 0 || color > data_->p.size()) return 0.0;
    return data_->p[color - 1];
}

double ColoringLaw::sup_norm() const noexcept {
    if (data_->p.empty()) return 0.0;
    return *std::max_element(data_->p.begin(), data_->p.end());
}

double ColoringLaw::tail_mass(std::size_t s) const noexcept {
    double t = 0.0;
    for (std::size_t i = s; i < data_->p.size(); ++i) t += data_->p[i];
    return t;
}

ColoringLaw ColoringLaw::truncated(std::size_t colors) const {
    if (is_all_distinct()) throw DomainError("cannot truncate the all-distinct law");
    if (colors == 0) throw DomainError("truncation needs at least one color");
    std::vector<double> p(data_->p.begin(),
                          data_->p.begin() + static_cast<long>(std::min(colors, data_->p.size())));
    double mass = 0.0;
    for (double x : p) mass += x;
    if (mass <= 0.0) throw DomainError("truncation keeps no probability mass");
    for (double& x : p) x /= mass;
    // Put the rounding residue on the largest entry so the sum check passes.
    long double total = 0.0L;
    for (double x : p) total += x;
    *std::max_element(p.begin(), p.end()) += static_cast<double>(1.0L - total);
    return from_probabilities(std::move(p));
}

bool operator==(const ColoringLaw& a, const ColoringLaw& b) {
    return a.data_->all_distinct == b.data_->all_distinct && a.data_->p == b.data_->p;
}

double sup_distance(const ColoringLaw& p, const ColoringLaw& q) {
    if (p.is_all_distinct() && q.is_all_distinct()) return 0.0;
    if (p.is_all_distinct()) return q.sup_norm();
    if (q.is_all_distinct()) return p.sup_norm();
    const std::size_t m = std::max(p.support_size(), q.support_size());
    double d = 0.0;
    for (std::size_t i = 1; i <= m; ++i) d = std::max(d, std::abs(p.probability(i) - q.probability(i)));
    return d;
}

double l1_law_distance(const ColoringLaw& p, const ColoringLaw& q) {
    if (p.is_all_distinct() && q.is_all_distinct()) return 0.0;
    if (p.is_all_distinct() || q.is_all_distinct()) return 2.0;
    const std::size_t m = std::max(p.support_size(), q.support_size());
    double d = 0.0;
    for (std::size_t i = 1; i <= m; ++i) d += std::abs(p.probability(i) - q.probability(i));
    return d;
}

Color color_from_uniform(double u, const ColoringLaw& law) {
    if (!(u >= 0.0 && u < 1.0)) throw DomainError("uniform value outside [0,1)");
    if (law.is_all_distinct()) throw DomainError("all-distinct law has no uniform partition");
    const auto cum = law.cumulative();
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    return static_cast<Color>(it - cum.begin()) + 1;
}

UniformField::UniformField(LatticeBox box, std::uint64_t seed)
    : box_(box), seed_(seed), u_(box.size()) {
    for (std::size_t i = 0; i < u_.size(); ++i) u_[i] = site_uniform(seed, box_.vertex(i));
}

UniformField sample_uniform_field(const LatticeBox& box, std::uint64_t seed) {
    return UniformField(box, seed);
}

namespace {

std::vector<Color> distinct_colors(std::size_t n) {
    std::vector<Color> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<Color>(i + 1);
    return c;
}

}  // namespace

ColorField::ColorField(const UniformField& uniforms, const ColoringLaw& law)
    : box_(uniforms.box()), law_(law), all_distinct_(law.is_all_distinct()) {
    if (all_distinct_) {
        colors_ = distinct_colors(box_.size());
        return;
    }
    colors_.resize(box_.size());
    for (std::size_t i = 0; i < colors_.size(); ++i) colors_[i] = color_from_uniform(uniforms[i], law);
}

ColorField::ColorField(const LatticeBox& box, const ColoringLaw& law, std::uint64_t seed)
    : box_(box), law_(law), all_distinct_(law.is_all_distinct()) {
    if (all_distinct_) {
        colors_ = distinct_colors(box_.size());
        return;
    }
    colors_.resize(box_.size());
    for (std::size_t i = 0; i < colors_.size(); ++i) {
        colors_[i] = color_from_uniform(site_uniform(seed, box_.vertex(i)), law);
    }
}

ColorField::ColorField(const LatticeBox& box, std::vector<Color> colors)
    : box_(box), colors_(std::move(colors)) {
    if (colors_.size() != box_.size()) {
        throw DomainError("fixture has " + std::to_string(colors_.size()) + " colors for a box of " +
                          std::to_string(box_.size()) + " sites");
    }
}

std::vector<ColorField> couple_fields(const UniformField& uniforms,
                                      std::span<const ColoringLaw> laws) {
    std::vector<ColorField> out;
    out.reserve(laws.size());
    for (const auto& law : laws) out.emplace_back(uniforms, law);
    return out;
}

double disagreement_exact(const ColoringLaw& p, const ColoringLaw& q) {
    if (p.is_all_distinct() || q.is_all_distinct()) {
        return (p.is_all_distinct() && q.is_all_distinct()) ? 0.0 : 1.0;
    }
    const auto cp = p.cumulative();
    const auto cq = q.cumulative();
    std::size_t i = 0;
    std::size_t j = 0;
    double lo = 0.0;
    double measure = 0.0;
    while (i < cp.size() && j < cq.size()) {
        const double hi = std::min(cp[i], cq[j]);
        if (i != j && hi > lo) measure += hi - lo;
        lo = std::max(lo, hi);
        if (cp[i] <= hi) ++i;
        if (cq[j] <= hi) ++j;
    }
    return measure;
}

double disagreement_bound(const ColoringLaw& p, const ColoringLaw& q, std::size_t s) {
    if (s < 1) throw DomainError("disagreement bound needs S >= 1");
    if (p.is_all_distinct() || q.is_all_distinct()) {
        throw DomainError("disagreement bound is defined for finite laws");
    }
    double head = 0.0;
    for (std::size_t i = 1; i <= s; ++i) {
        head += static_cast<double>(s + 1 - i) * std::abs(p.probability(i) - q.probability(i));
    }
    return 2.0 * head + p.tail_mass(s);
}

void validate(const LawRegionParams& params) {
    if (!(params.theta > 0.0 && params.theta < 1.0)) throw DomainError("theta must lie in (0,1)");
    if (params.S < 5) throw DomainError("S must be >= 5");
}

bool is_in_region(const ColoringLaw& p, const LawRegionParams& params) {
    validate(params);
    return p.sup_norm() < params.theta && p.tail_mass(params.S) < params.theta;
}

ColoringLaw parse_law_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("law file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw DomainError("law must be a JSON object");
    if (j.contains("mode")) {
        if (j["mode"] != "all_distinct") throw DomainError("unknown law mode");
        return ColoringLaw::all_distinct();
    }
    if (j.contains("uniform")) return ColoringLaw::uniform(j["uniform"].get<std::size_t>());
    if (!j.contains("probabilities") || !j["probabilities"].is_array()) {
        throw DomainError("law needs a `probabilities` array");
    }
    return ColoringLaw::from_probabilities(j["probabilities"].get<std::vector<double>>());
}

ColoringLaw load_law_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open law file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_law_json(ss.str());
}

std::string law_to_json(const ColoringLaw& law) {
    nlohmann::json j;
    if (law.is_all_distinct()) {
        j["mode"] = "all_distinct";
    } else {
        j["probabilities"] = std::vector<double>(law.probabilities().begin(), law.probabilities().end());
    }
    return j.dump();
}

}  // namespace fpp
