#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlrd/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "Coupled nonlocal reaction-diffusion solver: implicit finite differences on "
        "(0,1) with Dirichlet boundaries, energy-decay diagnostics, CSV output."};

    std::string config_path;
    std::string preset;
    std::string output_dir;
    std::vector<std::string> sets;
    bool verify_flag = false;

    app.add_option("--config", config_path, "Config file (flat key = value lines)");
    app.add_option("--preset", preset, "Parameter preset: extinction or persistence");
    app.add_option("--set", sets, "Override a config key, e.g. --set J=400 (repeatable)");
    app.add_option("--output-dir", output_dir, "Output directory for CSV files");
    app.add_flag("--verify", verify_flag,
                 "Run oracle cross-checks for this configuration instead of simulating");

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<nlrd::KeyValue> file_entries;
        if (!config_path.empty()) file_entries = nlrd::parse_config_file(config_path);

        std::vector<nlrd::KeyValue> overrides;
        if (!preset.empty()) overrides.push_back({"preset", preset});
        for (const auto& s : sets) overrides.push_back(nlrd::parse_assignment(s));
        if (!output_dir.empty()) overrides.push_back({"output_dir", output_dir});
        if (verify_flag) overrides.push_back({"verify", "true"});

        const nlrd::RunConfig cfg = nlrd::resolve_config(file_entries, overrides);
        if (cfg.verify) return nlrd::verify(cfg) ? 0 : 1;
        return nlrd::run(cfg);
    } catch (const nlrd::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
