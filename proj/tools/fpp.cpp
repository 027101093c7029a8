#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fpp/manifest.hpp"
#include "fpp/parallel.hpp"
#include "fpp/runner.hpp"
#include "json.hpp"

namespace {

// Reads a model configuration file; an empty path yields the built-in defaults.
fpp::ModelConfig load_config(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return fpp::ModelConfig::from_json(ss.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random coloring first-passage percolation experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(fpp::version()));

    int threads = fpp::default_threads();
    std::uint64_t seed = 0;
    std::string out_dir;
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "Base seed, replacing the manifest seed");
    auto* out_opt = app.add_option("--out", out_dir, "Output directory");

    std::string manifest_path;
    auto* run = app.add_subcommand("run", "Run an experiment manifest");
    run->add_option("manifest", manifest_path, "Manifest JSON file")->required();

    std::string config_path;
    auto* selftest = app.add_subcommand("selftest", "Small-instance oracle suite");
    selftest->add_option("--config", config_path, "Model configuration JSON");

    std::string show_manifest;
    auto* print_config = app.add_subcommand("print-config", "Print the effective configuration");
    print_config->add_option("--config", config_path, "Model configuration JSON");
    print_config->add_option("--manifest", show_manifest, "Also print a manifest in canonical form");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fpp::kExitParse;
    }

    if (run->parsed()) {
        fpp::RunOptions opt;
        opt.threads = threads;
        if (seed_opt->count() > 0) opt.seed = seed;
        if (out_opt->count() > 0) opt.out_dir = out_dir;
        return fpp::run_manifest(manifest_path, opt, std::cerr).exit_code;
    }

    if (selftest->parsed()) {
        fpp::ModelConfig cfg;
        try {
            cfg = load_config(config_path);
        } catch (const std::exception& e) {
            std::cerr << "invalid config: " << e.what() << '\n';
            return fpp::kExitParse;
        }
        bool ok = true;
        for (const auto& c : fpp::run_selftest(cfg)) {
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
            ok = ok && c.passed;
        }
        return ok ? fpp::kExitOk : fpp::kExitFailure;
    }

    try {
        const auto cfg = load_config(config_path);
        nlohmann::ordered_json j;
        j["fpp_version"] = std::string(fpp::version());
        j["threads"] = threads;
        j["model"] = nlohmann::json::parse(cfg.to_json());
        if (!show_manifest.empty()) {
            const auto m = fpp::ExperimentManifest::load(show_manifest);
            j["manifest"] = nlohmann::json::parse(m.to_json());
            j["manifest_digest"] = fpp::manifest_digest(m);
        }
        std::cout << j.dump(2) << '\n';
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return fpp::kExitParse;
    }
    return fpp::kExitOk;
}
