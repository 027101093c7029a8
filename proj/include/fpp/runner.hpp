#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fpp/config.hpp"
#include "fpp/manifest.hpp"

namespace fpp {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitParse = 2,
    kExitPrecondition = 3,
    kExitInvariant = 4,
};

struct RunOptions {
    int threads = 1;
    std::optional<std::uint64_t> seed;             // replaces the manifest seed
    std::optional<std::filesystem::path> out_dir;  // replaces the manifest output_dir
};

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;
    std::vector<std::filesystem::path> files;
};

// Output files carry a commented header (version, digest, seeds, one timestamp line) and
// data rows whose first columns are the digest, the replica index ("all" for aggregates)
// and the replica seed (the base seed for aggregates).
[[nodiscard]] RunOutcome run_manifest(const std::filesystem::path& manifest, const RunOptions& opt,
                                      std::ostream& log);
[[nodiscard]] RunOutcome run_experiment(ExperimentManifest manifest, const std::filesystem::path& base_dir,
                                        const RunOptions& opt, std::ostream& log);

// Prefix of the one header line that differs between otherwise identical runs.
inline constexpr const char* kTimestampKey = "created";

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Small-instance oracle suite: BFS and k-short times against path enumeration, exact animals
// against a subset filter, coupling intervals against the exact disagreement, plus validation
// of the model configuration.
[[nodiscard]] std::vector<SelftestCheck> run_selftest(const ModelConfig& cfg);

}  // namespace fpp
