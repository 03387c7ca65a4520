// Experiment driver: Henon-Heiles and diamagnetic Kepler fragmentation scans.
//
//   qchaos run --system henon-heiles --shells 30 --hbar 0.01 --lambda 1 --metrics w-exact,w-pt
//   qchaos run --system kepler --max-n 20 --target-shell 10 --metrics w-exact,w-pt
//   qchaos validate --config scan.json
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qchaos/experiment.hpp"

namespace {

using qchaos::experiment::ExperimentConfig;
using nlohmann::json;

struct Flags {
    std::string config_path;
    std::string system;
    double hbar = 0;
    double lambda = 0;
    int shells = 0;
    int shell_min = 0;
    int shell_max = 0;
    int max_n = 0;
    int m = 0;
    int target_shell = 0;
    std::vector<double> gamma;
    double eps_min = 0;
    double eps_max = 0;
    int points = 0;
    std::vector<std::string> metrics;
    std::string selection;
    std::string output;
    std::uint64_t seed = 0;
    int threads = 0;
};

void add_experiment_options(CLI::App& cmd, Flags& f) {
    cmd.add_option("--config", f.config_path, "JSON config file; flags override its values")->check(CLI::ExistingFile);
    cmd.add_option("--system", f.system, "henon-heiles | kepler");
    cmd.add_option("--hbar", f.hbar, "Henon-Heiles hbar");
    cmd.add_option("--lambda", f.lambda, "Henon-Heiles coupling");
    cmd.add_option("--shells", f.shells, "Henon-Heiles oscillator shells in the basis");
    cmd.add_option("--shell-min", f.shell_min, "first Henon-Heiles shell to scan");
    cmd.add_option("--shell-max", f.shell_max, "last Henon-Heiles shell to scan");
    cmd.add_option("--max-n", f.max_n, "Kepler: highest principal quantum number in the basis");
    cmd.add_option("--m", f.m, "Kepler magnetic quantum number (0 only)");
    cmd.add_option("--target-shell", f.target_shell, "Kepler shell whose fragmentation is tracked");
    cmd.add_option("--gamma", f.gamma, "Kepler field strengths (comma separated)")->delimiter(',');
    cmd.add_option("--eps-min", f.eps_min, "Kepler scaled-energy grid start");
    cmd.add_option("--eps-max", f.eps_max, "Kepler scaled-energy grid end");
    cmd.add_option("--points", f.points, "Kepler scaled-energy grid size");
    cmd.add_option("--metrics", f.metrics, "w-exact,w-pt,kappa,strength-function")->delimiter(',');
    cmd.add_option("--selection", f.selection, "exact-average state selection: window | top | dominant | block");
    cmd.add_option("--output", f.output, "output directory");
    cmd.add_option("--seed", f.seed, "seed for the block-unitary invariance spot check");
    cmd.add_option("--threads", f.threads, "worker threads (0: all cores)");
}

ExperimentConfig assemble(const CLI::App& cmd, const Flags& f) {
    json j = json::object();
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw qchaos::ConfigError("cannot parse " + f.config_path + ": " + e.what());
        }
        if (!j.is_object()) throw qchaos::ConfigError(f.config_path + " is not a JSON object");
    }
    if (!j.contains("output"))
        if (const char* dir = std::getenv("QCHAOS_OUTPUT_DIR")) j["output"] = dir;

    auto given = [&](const char* name) { return cmd.count(name) > 0; };
    if (given("--system")) j["system"] = f.system;
    if (given("--hbar")) j["hbar"] = f.hbar;
    if (given("--lambda")) j["lambda"] = f.lambda;
    if (given("--shells")) j["shells"] = f.shells;
    if (given("--shell-min")) j["shell_min"] = f.shell_min;
    if (given("--shell-max")) j["shell_max"] = f.shell_max;
    if (given("--max-n")) j["max_n"] = f.max_n;
    if (given("--m")) j["m"] = f.m;
    if (given("--target-shell")) j["target_shell"] = f.target_shell;
    if (given("--gamma")) j["gamma"] = f.gamma;
    if (given("--eps-min")) j["eps_min"] = f.eps_min;
    if (given("--eps-max")) j["eps_max"] = f.eps_max;
    if (given("--points")) j["points"] = f.points;
    if (given("--metrics")) j["metrics"] = f.metrics;
    if (given("--selection")) j["selection"] = f.selection;
    if (given("--output")) j["output"] = f.output;
    if (given("--seed")) j["seed"] = f.seed;
    if (given("--threads")) j["threads"] = f.threads;
    return qchaos::experiment::from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regularity-to-chaos diagnostics for perturbed integrable quantum systems"};
    app.set_version_flag("--version", qchaos::experiment::kVersion);
    app.require_subcommand(1);

    Flags run_flags, validate_flags;
    auto* run_cmd = app.add_subcommand("run", "run a scan and write curves plus a JSON summary");
    add_experiment_options(*run_cmd, run_flags);
    auto* validate_cmd = app.add_subcommand("validate", "check a config and size the job without running it");
    add_experiment_options(*validate_cmd, validate_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) {
            const auto cfg = assemble(*run_cmd, run_flags);
            const auto manifest = qchaos::experiment::run(cfg);
            std::cout << manifest.summary.dump(2) << '\n';
            for (const auto& f : manifest.files) std::cerr << "wrote " << f.string() << '\n';
        } else {
            const auto cfg = assemble(*validate_cmd, validate_flags);
            const auto diag = qchaos::experiment::validate(cfg);
            std::cout << diag.summary << '\n';
        }
    } catch (const qchaos::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qchaos::InvalidInput& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
