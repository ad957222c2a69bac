// SPDX-License-Identifier: Apache-2.0
//
// railsim — run track-monitoring scenarios and manage block-code files.
//
// Exit codes: 0 success, 1 I/O or input parse error, 2 invalid scenario,
// 3 code verification/construction failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "railsafe/railsafe.hpp"

namespace {

int cmd_run(const std::string& scenario_path, const std::string& out_metrics_path,
            const std::string& out_log_path, std::optional<std::uint64_t> seed_override) {
    railsafe::Scenario scenario = railsafe::load_scenario_file(scenario_path);
    if (seed_override) scenario.master_seed = *seed_override;

    const railsafe::RunResult result = railsafe::run(scenario);

    if (!out_metrics_path.empty()) {
        std::ofstream out(out_metrics_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_metrics_path);
        result.metrics.write_csv(out);
    }
    if (!out_log_path.empty()) {
        std::ofstream out(out_log_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_log_path);
        result.log.write_csv(out);
    }

    const std::string stop = result.metrics.stop_pos_m
                                 ? railsafe::fmt_fixed(*result.metrics.stop_pos_m)
                                 : std::string("none");
    std::cout << "alarms=" << result.metrics.alarms << " warns=" << result.metrics.warns
              << " stop_pos_m=" << stop << '\n';
    return 0;
}

int cmd_codec_check(const std::string& code_file_path) {
    std::ifstream in(code_file_path);
    if (!in) throw std::runtime_error("cannot open code file: " + code_file_path);
    try {
        const railsafe::LinearCode code = railsafe::LinearCode::load(in);
        const unsigned d_min = railsafe::min_distance(code);
        std::cout << "n=" << code.n() << " k=" << code.k() << " t=" << code.t()
                  << " d_min=" << d_min << " coverage=" << code.syndrome_entries() << '/'
                  << code.full_coverage_count() << '\n';
        if (d_min < 2 * code.t() + 1) {
            std::cerr << "verification failed: d_min " << d_min << " < " << 2 * code.t() + 1
                      << '\n';
            return 3;
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return 3;
    }
}

int cmd_codec_gen(unsigned n, unsigned k, unsigned t, std::uint64_t seed,
                  const std::string& out_path) {
    try {
        const railsafe::LinearCode code = railsafe::build_code(k, n, t, seed);
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        code.save(out);
        std::cout << "n=" << code.n() << " k=" << code.k() << " t=" << code.t()
                  << " d_min=" << code.d_min() << " file=" << out_path << '\n';
        return 0;
    } catch (const railsafe::ConstructionFailed& e) {
        std::cerr << "construction failed: " << e.what() << '\n';
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"track-monitoring telemetry simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_metrics_path, out_log_path;
    std::optional<std::uint64_t> seed_override;
    auto* run_cmd = app.add_subcommand("run", "run a scenario and report metrics");
    run_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run_cmd->add_option("--out-metrics", out_metrics_path, "metrics CSV output path");
    run_cmd->add_option("--out-log", out_log_path, "event-log CSV output path");
    run_cmd->add_option("--seed", seed_override, "override the scenario's master_seed");

    std::string code_file_path;
    auto* check_cmd = app.add_subcommand("codec-check", "verify a block-code file");
    check_cmd->add_option("--code-file", code_file_path, "code file to verify")->required();

    unsigned gen_n = 29, gen_k = 12, gen_t = 2;
    std::uint64_t gen_seed = 42;
    std::string gen_out;
    auto* gen_cmd = app.add_subcommand("codec-gen", "construct and save a block code");
    gen_cmd->add_option("--n", gen_n, "codeword length in bits");
    gen_cmd->add_option("--k", gen_k, "payload length in bits");
    gen_cmd->add_option("--t", gen_t, "correction capability in bits");
    gen_cmd->add_option("--seed", gen_seed, "construction seed");
    gen_cmd->add_option("--out", gen_out, "output code file path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(scenario_path, out_metrics_path, out_log_path, seed_override);
        if (check_cmd->parsed()) return cmd_codec_check(code_file_path);
        if (gen_cmd->parsed()) return cmd_codec_gen(gen_n, gen_k, gen_t, gen_seed, gen_out);
    } catch (const railsafe::InvalidScenario& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
