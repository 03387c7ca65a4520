#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "qchaos/chaos_metrics.hpp"
#include "qchaos/errors.hpp"
#include "qchaos/henon_heiles.hpp"
#include "qchaos/kepler.hpp"

namespace qchaos::experiment {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kCsvSchemaVersion = 1;

enum class System { HenonHeiles, Kepler };
enum class Metric { WExact, WPt, Kappa, StrengthFunction };

std::string to_string(System s);
std::string to_string(Metric m);
System parse_system(const std::string& name);
Metric parse_metric(const std::string& name);

struct ExperimentConfig {
    System system = System::HenonHeiles;

    hh::Config hh;
    int shell_min = 1;
    std::optional<int> shell_max;  // defaults to num_shells - 4, below the edge-contaminated top shells

    kepler::Config kepler;  // an empty gamma_grid is filled from the scaled-energy range below
    double eps_min = -1.0;
    double eps_max = -0.25;
    int eps_points = 76;

    std::set<Metric> metrics{Metric::WExact, Metric::WPt};
    std::optional<metrics::Selection> selection;  // per-system default when unset
    std::filesystem::path output_dir = "qchaos-out";
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency

    /// Throws ConfigError.
    void validate() const;

    metrics::Selection effective_selection() const;
    int effective_shell_max() const;
    /// HH: shell numbers; Kepler: ascending gamma values.
    std::vector<double> scan_axis() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Unknown keys are rejected. Missing keys keep the values already in `base`.
ExperimentConfig from_json(const nlohmann::json& j, ExperimentConfig base = {});

struct Diagnostics {
    std::size_t basis_size;
    int num_shells;
    std::size_t scan_points;
    std::size_t memory_bytes;  // dense working set of the largest concurrent matrix builds
    std::string summary;       // e.g. "496 states, 30 shells, 26 scan points, ~8.9 MiB"
};

/// Dry run: checks the config and sizes the job without writing anything.
Diagnostics validate(const ExperimentConfig& cfg);

struct RunManifest {
    nlohmann::json config;
    std::string version;
    std::string timestamp;
    std::vector<std::filesystem::path> files;
    nlohmann::json summary;  // critical values with their bracketing samples
};

/// Runs the scan, writes the curve CSV(s), summary.json and manifest.json.
/// ConfigError for bad configs, ScanError (a NumericalError) for failures at a scan point.
RunManifest run(const ExperimentConfig& cfg);

class ScanError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// 64-bit FNV-1a of the canonical config JSON without output and threads, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Runs fn(0..count-1) on up to `threads` workers. The exception of the lowest
/// failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace qchaos::experiment
