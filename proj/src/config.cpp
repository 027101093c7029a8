#include "fpp/config.hpp"

#include "fpp/errors.hpp"
#include "json.hpp"

namespace fpp {

void ModelConfig::validate() const {
    for (const auto& [d, value] : pc) {
        if (d < 2) throw DomainError("p_c configured for dimension " + std::to_string(d) + " < 2");
        if (!(value > 0.0 && value < 1.0)) {
            throw DomainError("p_c(" + std::to_string(d) + ") = " + std::to_string(value) +
                              " outside (0,1)");
        }
    }
    if (!(critical_tolerance >= 0.0)) throw DomainError("critical tolerance must be >= 0");
    if (!(eps_zero >= 0.0)) throw DomainError("eps_zero must be >= 0");
}

double ModelConfig::pc_for(int dim) const {
    const auto it = pc.find(dim);
    if (it == pc.end()) throw DomainError("no p_c configured for dimension " + std::to_string(dim));
    return it->second;
}

std::string ModelConfig::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json table = nlohmann::ordered_json::object();
    for (const auto& [d, value] : pc) table[std::to_string(d)] = value;
    j["pc"] = table;
    j["critical_tolerance"] = critical_tolerance;
    j["eps_zero"] = eps_zero;
    return j.dump(2);
}

ModelConfig ModelConfig::from_json(const std::string& text) {
    ModelConfig cfg;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config is not valid JSON: ") + e.what());
    }
    if (j.contains("pc")) {
        cfg.pc.clear();
        for (const auto& [key, value] : j["pc"].items()) cfg.pc[std::stoi(key)] = value.get<double>();
    }
    if (j.contains("critical_tolerance")) cfg.critical_tolerance = j["critical_tolerance"].get<double>();
    if (j.contains("eps_zero")) cfg.eps_zero = j["eps_zero"].get<double>();
    return cfg;
}

}  // namespace fpp
