#pragma once

#include <map>
#include <string>

namespace fpp {

// Site-percolation thresholds and classification tolerances. The p_c values are
// literature constants used only as classification thresholds.
struct ModelConfig {
    std::map<int, double> pc{{2, 0.592746}, {3, 0.311608}};
    double critical_tolerance = 1e-6;
    double eps_zero = 0.02;

    // Throws DomainError on a p_c outside (0,1) or a negative tolerance.
    void validate() const;
    // DomainError for an unconfigured dimension.
    [[nodiscard]] double pc_for(int dim) const;

    [[nodiscard]] std::string to_json() const;
    static ModelConfig from_json(const std::string& text);

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

}  // namespace fpp
