// balayage-lab: scenario runner and fixture generator over the C API.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "balayage.h"

namespace {

bool write_file(const std::string& path, const char* text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return static_cast<bool>(out);
}

int run_command(const std::string& config_path, const std::string& out_path, const std::string& csv_path,
                const std::uint64_t* seed, bool timing) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "balayage-lab: cannot read " << config_path << "\n";
        return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string base = std::filesystem::path(config_path).parent_path().string();

    int exit_code = 2;
    char* report = nullptr;
    char* csv = nullptr;
    const bl_status st = bl_scenario_run(ss.str().c_str(), base.c_str(), seed != nullptr, seed ? *seed : 0,
                                         timing ? 1 : 0, &exit_code, &report, &csv);
    if (st != BL_OK) {
        std::cerr << "balayage-lab: " << bl_last_error() << "\n";
        return 3;
    }
    if (exit_code != 0) std::cerr << "balayage-lab: " << bl_last_error() << "\n";
    if (out_path.empty()) {
        std::cout << report;
    } else if (!write_file(out_path, report)) {
        std::cerr << "balayage-lab: cannot write " << out_path << "\n";
        exit_code = 2;
    }
    if (!csv_path.empty() && !write_file(csv_path, csv)) {
        std::cerr << "balayage-lab: cannot write " << csv_path << "\n";
        exit_code = 2;
    }
    bl_string_free(report);
    bl_string_free(csv);
    return exit_code;
}

int fixture_command(const std::string& kind, std::uint64_t seed, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (bl_fixture_make(kind.c_str(), seed, out_dir.c_str()) != BL_OK) {
        std::cerr << "balayage-lab: " << bl_last_error() << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for balayage of measures and Poisson-Jensen identities"};
    app.set_version_flag("--version", std::string(bl_version()));
    app.require_subcommand(1);

    std::string config_path, out_path, csv_path;
    std::uint64_t run_seed = 0;
    bool timing = false;
    auto* run = app.add_subcommand("run", "Run a scenario from a JSON config");
    run->add_option("config", config_path, "Scenario config (JSON)")->required();
    run->add_option("--out", out_path, "Report file (default: stdout)");
    auto* seed_opt = run->add_option("--seed", run_seed, "Override the config seed");
    run->add_option("--csv", csv_path, "Write the residual table as CSV");
    run->add_flag("--timing", timing, "Record wall time in the report");

    std::string kind, fixture_dir;
    std::uint64_t fixture_seed = 0;
    auto* fixture = app.add_subcommand("fixture", "Write a deterministic fixture");
    fixture->add_option("kind", kind, "grid-annulus, grid-blob, random-subharmonic, harmonic-measure, scenario-configs")
        ->required();
    fixture->add_option("--seed", fixture_seed, "Seed")->required();
    fixture->add_option("--out", fixture_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*run) return run_command(config_path, out_path, csv_path, seed_opt->count() ? &run_seed : nullptr, timing);
    return fixture_command(kind, fixture_seed, fixture_dir);
}
