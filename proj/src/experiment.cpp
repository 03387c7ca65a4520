#include "qchaos/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "qchaos/spectral.hpp"

namespace qchaos::experiment {

using nlohmann::json;

std::string to_string(System s) { return s == System::HenonHeiles ? "henon-heiles" : "kepler"; }

std::string to_string(Metric m) {
    switch (m) {
        case Metric::WExact: return "w-exact";
        case Metric::WPt: return "w-pt";
        case Metric::Kappa: return "kappa";
        case Metric::StrengthFunction: return "strength-function";
    }
    return "?";
}

System parse_system(const std::string& name) {
    if (name == "henon-heiles" || name == "hh") return System::HenonHeiles;
    if (name == "kepler") return System::Kepler;
    throw ConfigError("unknown system '" + name + "' (expected henon-heiles or kepler)");
}

Metric parse_metric(const std::string& name) {
    for (Metric m : {Metric::WExact, Metric::WPt, Metric::Kappa, Metric::StrengthFunction})
        if (name == to_string(m)) return m;
    throw ConfigError("unknown metric '" + name + "' (expected w-exact, w-pt, kappa or strength-function)");
}

void ExperimentConfig::validate() const {
    if (metrics.empty()) throw ConfigError("metric set is empty");
    if (threads < 0) throw ConfigError("threads must be non-negative");
    if (system == System::HenonHeiles) {
        hh.validate();
        const int top = effective_shell_max();
        if (shell_min < 0 || shell_min > top)
            throw ConfigError("shell range " + std::to_string(shell_min) + ".." + std::to_string(top) + " is empty");
        if (top > hh.num_shells - 1)
            throw ConfigError("shell_max " + std::to_string(top) + " exceeds the basis (" +
                              std::to_string(hh.num_shells) + " shells)");
    } else {
        kepler.validate();
        if (kepler.gamma_grid.empty()) {
            if (!(eps_min < eps_max) || !(eps_max < 0.0))
                throw ConfigError("scaled-energy range must satisfy eps_min < eps_max < 0");
            if (eps_points < 1) throw ConfigError("scaled-energy grid needs at least one point");
        } else {
            for (std::size_t k = 1; k < kepler.gamma_grid.size(); ++k)
                if (!(kepler.gamma_grid[k] > kepler.gamma_grid[k - 1]))
                    throw ConfigError("gamma grid must be strictly increasing");
        }
    }
}

metrics::Selection ExperimentConfig::effective_selection() const {
    if (selection) return *selection;
    return system == System::HenonHeiles ? metrics::Selection::EnergyWindow : metrics::Selection::TopProjection;
}

int ExperimentConfig::effective_shell_max() const { return shell_max.value_or(hh.num_shells - 4); }

std::vector<double> ExperimentConfig::scan_axis() const {
    std::vector<double> axis;
    if (system == System::HenonHeiles) {
        for (int s = shell_min; s <= effective_shell_max(); ++s) axis.push_back(s);
        return axis;
    }
    if (!kepler.gamma_grid.empty()) return kepler.gamma_grid;
    const double energy = kepler::shell_energy(kepler.target_shell);
    for (int k = 0; k < eps_points; ++k) {
        const double eps =
            eps_points == 1 ? eps_min : eps_min + (eps_max - eps_min) * k / static_cast<double>(eps_points - 1);
        axis.push_back(kepler::gamma_for_scaled_energy(energy, eps));
    }
    return axis;
}

json to_json(const ExperimentConfig& cfg) {
    json metrics = json::array();
    for (Metric m : cfg.metrics) metrics.push_back(to_string(m));
    json j{{"system", to_string(cfg.system)}, {"metrics", metrics},
           {"selection", metrics::to_string(cfg.effective_selection())},
           {"output", cfg.output_dir.string()},
           {"seed", cfg.seed},
           {"threads", cfg.threads}};
    if (cfg.system == System::HenonHeiles) {
        j["hbar"] = cfg.hh.hbar;
        j["lambda"] = cfg.hh.lambda;
        j["shells"] = cfg.hh.num_shells;
        j["shell_min"] = cfg.shell_min;
        j["shell_max"] = cfg.effective_shell_max();
    } else {
        j["max_n"] = cfg.kepler.max_n;
        j["m"] = cfg.kepler.m;
        j["target_shell"] = cfg.kepler.target_shell;
        if (cfg.kepler.gamma_grid.empty()) {
            j["eps_min"] = cfg.eps_min;
            j["eps_max"] = cfg.eps_max;
            j["points"] = cfg.eps_points;
        } else {
            j["gamma"] = cfg.kepler.gamma_grid;
        }
    }
    return j;
}

ExperimentConfig from_json(const json& j, ExperimentConfig cfg) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "system") cfg.system = parse_system(value.get<std::string>());
            else if (key == "hbar") cfg.hh.hbar = value.get<double>();
            else if (key == "lambda") cfg.hh.lambda = value.get<double>();
            else if (key == "shells") cfg.hh.num_shells = value.get<int>();
            else if (key == "shell_min") cfg.shell_min = value.get<int>();
            else if (key == "shell_max") cfg.shell_max = value.get<int>();
            else if (key == "max_n") cfg.kepler.max_n = value.get<int>();
            else if (key == "m") cfg.kepler.m = value.get<int>();
            else if (key == "target_shell") cfg.kepler.target_shell = value.get<int>();
            else if (key == "gamma") cfg.kepler.gamma_grid = value.get<std::vector<double>>();
            else if (key == "eps_min") cfg.eps_min = value.get<double>();
            else if (key == "eps_max") cfg.eps_max = value.get<double>();
            else if (key == "points") cfg.eps_points = value.get<int>();
            else if (key == "metrics") {
                cfg.metrics.clear();
                for (const auto& m : value) cfg.metrics.insert(parse_metric(m.get<std::string>()));
            } else if (key == "selection") cfg.selection = metrics::parse_selection(value.get<std::string>());
            else if (key == "output") cfg.output_dir = value.get<std::string>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "threads") cfg.threads = value.get<int>();
            else throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

std::string config_hash(const ExperimentConfig& cfg) {
    auto j = to_json(cfg);
    j.erase("output");  // where and how fast results are produced does not change them
    j.erase("threads");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));

    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;

    auto work = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            try {
                fn(k);
            } catch (...) {
                std::lock_guard lock(mu);
                if (k < failed_index) {
                    failed_index = k;
                    failure = std::current_exception();
                }
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
}

Diagnostics validate(const ExperimentConfig& cfg) {
    cfg.validate();
    Diagnostics d{};
    d.scan_points = cfg.scan_axis().size();
    std::size_t concurrent = 1;
    if (cfg.system == System::HenonHeiles) {
        d.num_shells = cfg.hh.num_shells;
        d.basis_size = static_cast<std::size_t>(cfg.hh.num_shells) * (cfg.hh.num_shells + 1) / 2;
    } else {
        d.num_shells = cfg.kepler.max_n;
        d.basis_size = static_cast<std::size_t>(cfg.kepler.max_n) * (cfg.kepler.max_n + 1) / 2;
        const std::size_t hw = cfg.threads > 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
        concurrent = std::min(hw, std::max<std::size_t>(d.scan_points, 1));
    }
    // Dense H, its eigenvectors and two working copies per concurrent decomposition.
    d.memory_bytes = 4 * d.basis_size * d.basis_size * sizeof(double) * concurrent;

    std::ostringstream os;
    os << d.basis_size << " states, " << d.num_shells << " shells, " << d.scan_points << " scan points, ~"
       << std::fixed << std::setprecision(1) << d.memory_bytes / (1024.0 * 1024.0) << " MiB";
    d.summary = os.str();
    return d;
}

namespace {

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const ExperimentConfig& cfg, const std::string& schema,
              const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw ConfigError("cannot open " + path.string() + " for writing");
        out_ << "# qchaos " << kVersion << '\n';
        out_ << "# schema " << schema << " v" << kCsvSchemaVersion << '\n';
        out_ << "# config_hash " << config_hash(cfg) << '\n';
        for (std::size_t c = 0; c < columns.size(); ++c) out_ << (c ? "," : "") << columns[c];
        out_ << '\n';
        out_ << std::setprecision(std::numeric_limits<double>::max_digits10);
    }

    template <typename... Ts>
    void row(const Ts&... values) {
        bool first = true;
        ((out_ << (first ? "" : ",") << values, first = false), ...);
        out_ << '\n';
    }

    void row(const std::vector<double>& values) {
        for (std::size_t c = 0; c < values.size(); ++c) out_ << (c ? "," : "") << values[c];
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

json sample_json(const metrics::Sample& s) { return {{"axis", s.axis}, {"value", s.value}}; }

json crossing_json(const metrics::CriticalResult& r) {
    json j{{"axis", r.axis}, {"threshold", r.threshold}};
    if (r.crossing) {
        j["value"] = r.crossing->value;
        j["bracket"] = json::array({sample_json(r.crossing->lower), sample_json(r.crossing->upper)});
    } else {
        j["value"] = nullptr;
        j["bracket"] = nullptr;
    }
    return j;
}

// Maps a crossing found on one axis onto a second quantity sampled at the same points.
std::optional<double> carry_over(const metrics::CriticalResult& r, const std::vector<double>& other) {
    if (!r.crossing) return std::nullopt;
    const auto& c = *r.crossing;
    const double span = c.upper.axis - c.lower.axis;
    const double t = span == 0.0 ? 0.0 : (c.value - c.lower.axis) / span;
    return other[c.lower_index] + t * (other[c.lower_index + 1] - other[c.lower_index]);
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<metrics::Sample> zip(const std::vector<double>& axis, const std::vector<double>& values) {
    std::vector<metrics::Sample> out;
    for (std::size_t k = 0; k < axis.size(); ++k) out.push_back({axis[k], values[k]});
    return out;
}

std::optional<metrics::CriticalResult> critical_if_possible(const std::vector<double>& axis,
                                                            const std::vector<double>& values, const std::string& name,
                                                            double threshold) {
    if (axis.size() < 2) return std::nullopt;
    return metrics::critical_parameter(zip(axis, values), name, threshold);
}

struct Hygiene {
    DecompositionCheck worst;
    std::size_t decompositions = 0;

    void merge(const DecompositionCheck& c) {
        worst.orthogonality = std::max(worst.orthogonality, c.orthogonality);
        worst.residual = std::max(worst.residual, c.residual);
        worst.completeness = std::max(worst.completeness, c.completeness);
        worst.reconstruction = std::max(worst.reconstruction, c.reconstruction);
        worst.ascending = worst.ascending && c.ascending;
        ++decompositions;
    }

    json to_json() const {
        return {{"decompositions", decompositions},
                {"orthogonality", worst.orthogonality},
                {"residual", worst.residual},
                {"completeness", worst.completeness},
                {"reconstruction", worst.reconstruction},
                {"passes", worst.passes()}};
    }
};

template <typename F>
auto at_scan_point(const std::string& module, const std::string& point, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScanError(module + " at " + point + ": " + e.what());
    }
}

std::string format_point(const std::string& name, double value) {
    std::ostringstream os;
    os << name << '=' << std::setprecision(10) << value;
    return os.str();
}

json run_henon_heiles(const ExperimentConfig& cfg, std::vector<std::filesystem::path>& files) {
    const auto& has = cfg.metrics;
    const bool want_pt = has.contains(Metric::WPt);
    const bool want_exact = has.contains(Metric::WExact);
    const bool want_kappa = has.contains(Metric::Kappa);
    const bool want_sf = has.contains(Metric::StrengthFunction);
    const bool need_decomposition = want_exact || want_kappa || want_sf;
    const auto selection = cfg.effective_selection();

    const auto basis = hh::enumerate_basis(cfg.hh);
    const auto& partition = basis.partition;
    const SymmetricMatrix v = hh::build_v(cfg.hh);
    const SymmetricMatrix h = hh::build_h0(cfg.hh).plus_scaled(v, cfg.hh.lambda);

    Hygiene hygiene;
    std::optional<SpectralDecomposition> decomposition;
    if (need_decomposition) {
        decomposition = at_scan_point("spectral-core", "full Hamiltonian", [&] { return eigh(h); });
        hygiene.merge(check_decomposition(h, *decomposition));
    }

    const auto axis = cfg.scan_axis();
    const std::size_t points = axis.size();
    std::vector<double> energy(points), w_pt(points), w_ex(points), ex_energy(points), kappa(points), width(points);
    std::vector<metrics::StrengthFunction> strength(want_sf ? points : 0);

    parallel_for(points, cfg.threads, [&](std::size_t k) {
        const int shell = static_cast<int>(axis[k]);
        at_scan_point("chaos-metrics", format_point("shell", shell), [&] {
            energy[k] = hh::shell_energy(cfg.hh, shell);
            if (want_pt) w_pt[k] = metrics::w_perturbative(v, partition, shell, cfg.hh.lambda);
            if (want_exact) {
                const auto ex = metrics::w_exact(*decomposition, partition, shell, selection);
                w_ex[k] = ex.mean_complement;
                ex_energy[k] = ex.mean_energy;
            }
            if (want_kappa || want_sf) {
                auto sf = metrics::strength_function(*decomposition, partition, shell);
                if (want_kappa) {
                    width[k] = metrics::spreading_width(sf);
                    kappa[k] = metrics::chaoticity(width[k], partition.nearest_gap(shell)).kappa;
                }
                if (want_sf) strength[k] = std::move(sf);
            }
            return 0;
        });
    });

    std::vector<std::string> columns{"shell", "energy"};
    if (want_pt) columns.push_back("w_pt");
    if (want_exact) columns.insert(columns.end(), {"w_exact", "exact_mean_energy"});
    if (want_kappa) columns.insert(columns.end(), {"kappa", "gamma_spr"});
    const auto curve_path = cfg.output_dir / "henon_heiles_curves.csv";
    {
        CsvWriter csv(curve_path, cfg, "henon-heiles-curves", columns);
        for (std::size_t k = 0; k < points; ++k) {
            std::vector<double> row{axis[k], energy[k]};
            if (want_pt) row.push_back(w_pt[k]);
            if (want_exact) row.insert(row.end(), {w_ex[k], ex_energy[k]});
            if (want_kappa) row.insert(row.end(), {kappa[k], width[k]});
            csv.row(row);
        }
    }
    files.push_back(curve_path);

    if (want_sf) {
        const auto path = cfg.output_dir / "henon_heiles_strength.csv";
        CsvWriter csv(path, cfg, "henon-heiles-strength", {"shell", "eigen_index", "eigen_energy", "weight"});
        for (std::size_t k = 0; k < points; ++k)
            for (std::size_t i = 0; i < strength[k].weights.size(); ++i)
                csv.row(static_cast<int>(axis[k]), i, strength[k].energies[i], strength[k].weights[i]);
        files.push_back(path);
    }

    json summary{{"system", "henon-heiles"},
                 {"basis_size", basis.states.size()},
                 {"scan_points", points},
                 {"selection", metrics::to_string(selection)}};
    json critical = json::object();
    if (want_pt) {
        if (auto r = critical_if_possible(energy, w_pt, "energy", 0.5)) {
            critical["w_pt"] = crossing_json(*r);
            summary["pt_critical_energy"] = optional_json(r->crossing ? std::optional(r->crossing->value) : std::nullopt);
        }
        // Spot-check the block-unitary invariance at the first scan shell.
        const int shell = static_cast<int>(axis.front());
        const double w = metrics::w_perturbative(v, partition, shell, cfg.hh.lambda);
        const double gap = metrics::invariance_gap(v, partition, shell, cfg.hh.lambda, cfg.seed);
        summary["invariance_check"] = {{"shell", shell}, {"seed", cfg.seed}, {"w", w}, {"abs_gap", gap}};
    }
    if (want_exact) {
        if (auto r = critical_if_possible(energy, w_ex, "energy", 0.5)) {
            critical["w_exact"] = crossing_json(*r);
            summary["exact_critical_energy"] =
                optional_json(r->crossing ? std::optional(r->crossing->value) : std::nullopt);
            summary["exact_critical_mean_energy"] = optional_json(carry_over(*r, ex_energy));
        }
    }
    if (want_kappa) {
        if (auto r = critical_if_possible(energy, kappa, "energy", 1.0)) {
            critical["kappa"] = crossing_json(*r);
            summary["kappa_critical_energy"] =
                optional_json(r->crossing ? std::optional(r->crossing->value) : std::nullopt);
        }
    }
    summary["critical"] = critical;
    if (need_decomposition) summary["hygiene"] = hygiene.to_json();
    return summary;
}

json run_kepler(const ExperimentConfig& cfg, std::vector<std::filesystem::path>& files) {
    const auto& has = cfg.metrics;
    const bool want_pt = has.contains(Metric::WPt);
    const bool want_exact = has.contains(Metric::WExact);
    const bool want_kappa = has.contains(Metric::Kappa);
    const bool want_sf = has.contains(Metric::StrengthFunction);
    const bool need_decomposition = want_exact || want_kappa || want_sf;
    const auto selection = cfg.effective_selection();
    const int target = cfg.kepler.target_shell;

    const auto basis = kepler::enumerate_parabolic_basis(cfg.kepler);
    const auto& partition = basis.partition;
    const SymmetricMatrix rho2 = at_scan_point("kepler-model", "rho^2 build", [&] { return kepler::build_rho2(cfg.kepler); });
    const double target_energy = kepler::shell_energy(target);

    // W scales as (gamma^2/8)^2, so one raw-basis sum serves the whole grid.
    double w_unit = 0.0;
    if (want_pt) w_unit = metrics::w_perturbative(rho2, partition, target, 1.0);

    const auto gammas = cfg.scan_axis();
    const std::size_t points = gammas.size();
    std::vector<double> eps_pt(points), w_pt(points), w_ex(points), eps_ex(points), kappa(points), width(points);
    std::vector<metrics::StrengthFunction> strength(want_sf ? points : 0);
    std::vector<DecompositionCheck> checks(points);

    parallel_for(points, cfg.threads, [&](std::size_t k) {
        const double gamma = gammas[k];
        eps_pt[k] = kepler::scaled_energy(target_energy, gamma);
        if (want_pt) {
            const double coupling = kepler::diamagnetic_coupling(gamma);
            w_pt[k] = coupling * coupling * w_unit;
        }
        if (!need_decomposition) return;
        at_scan_point("kepler exact scan", format_point("gamma", gamma), [&] {
            const SymmetricMatrix h = kepler::build_h(rho2, partition, gamma);
            const auto d = eigh(h);
            checks[k] = check_decomposition(h, d);
            if (want_exact) {
                const auto ex = metrics::w_exact(d, partition, target, selection);
                w_ex[k] = ex.mean_complement;
                eps_ex[k] = kepler::scaled_energy(ex.mean_energy, gamma);
            }
            if (want_kappa || want_sf) {
                auto sf = metrics::strength_function(d, partition, target);
                if (want_kappa) {
                    width[k] = metrics::spreading_width(sf);
                    kappa[k] = metrics::chaoticity(width[k], partition.nearest_gap(target)).kappa;
                }
                if (want_sf) strength[k] = std::move(sf);
            }
            return 0;
        });
    });

    std::vector<std::string> columns{"gamma", "scaled_energy_pt"};
    if (want_exact) columns.insert(columns.end(), {"scaled_energy_exact", "w_exact"});
    if (want_pt) columns.push_back("w_pt");
    if (want_kappa) columns.insert(columns.end(), {"kappa", "gamma_spr"});
    const auto curve_path = cfg.output_dir / "kepler_curves.csv";
    {
        CsvWriter csv(curve_path, cfg, "kepler-curves", columns);
        for (std::size_t k = 0; k < points; ++k) {
            std::vector<double> row{gammas[k], eps_pt[k]};
            if (want_exact) row.insert(row.end(), {eps_ex[k], w_ex[k]});
            if (want_pt) row.push_back(w_pt[k]);
            if (want_kappa) row.insert(row.end(), {kappa[k], width[k]});
            csv.row(row);
        }
    }
    files.push_back(curve_path);

    if (want_sf) {
        const auto path = cfg.output_dir / "kepler_strength.csv";
        CsvWriter csv(path, cfg, "kepler-strength", {"gamma", "eigen_index", "eigen_energy", "weight"});
        for (std::size_t k = 0; k < points; ++k)
            for (std::size_t i = 0; i < strength[k].weights.size(); ++i)
                csv.row(gammas[k], i, strength[k].energies[i], strength[k].weights[i]);
        files.push_back(path);
    }

    json summary{{"system", "kepler"},
                 {"basis_size", basis.states.size()},
                 {"target_shell", target},
                 {"scan_points", points},
                 {"selection", metrics::to_string(selection)}};
    json critical = json::object();
    if (want_pt) {
        if (auto r = critical_if_possible(eps_pt, w_pt, "scaled_energy", 0.5)) {
            critical["w_pt"] = crossing_json(*r);
            summary["pt_critical_scaled_energy"] =
                optional_json(r->crossing ? std::optional(r->crossing->value) : std::nullopt);
            summary["pt_critical_gamma"] = optional_json(carry_over(*r, gammas));
        }
        summary["w_pt_per_unit_coupling"] = w_unit;
    }
    // Exact energies are not monotone in gamma, so crossings are located on the
    // gamma axis and carried over to the scaled-energy axes.
    if (want_exact) {
        if (auto r = critical_if_possible(gammas, w_ex, "gamma", 0.5)) {
            critical["w_exact"] = crossing_json(*r);
            summary["exact_critical_gamma"] =
                optional_json(r->crossing ? std::optional(r->crossing->value) : std::nullopt);
            summary["exact_critical_scaled_energy"] = optional_json(carry_over(*r, eps_ex));
            summary["exact_critical_scaled_energy_zeroth_order"] = optional_json(carry_over(*r, eps_pt));
        }
    }
    if (want_kappa) {
        if (auto r = critical_if_possible(gammas, kappa, "gamma", 1.0)) {
            critical["kappa"] = crossing_json(*r);
            summary["kappa_critical_gamma"] =
                optional_json(r->crossing ? std::optional(r->crossing->value) : std::nullopt);
            summary["kappa_critical_scaled_energy"] = optional_json(carry_over(*r, eps_pt));
        }
    }
    summary["critical"] = critical;
    if (need_decomposition) {
        Hygiene hygiene;
        for (const auto& c : checks) hygiene.merge(c);
        summary["hygiene"] = hygiene.to_json();
    }
    return summary;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

}  // namespace

RunManifest run(const ExperimentConfig& cfg) {
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());

    RunManifest manifest{to_json(cfg), kVersion, utc_timestamp(), {}, {}};
    manifest.summary =
        cfg.system == System::HenonHeiles ? run_henon_heiles(cfg, manifest.files) : run_kepler(cfg, manifest.files);

    const auto summary_path = cfg.output_dir / "summary.json";
    {
        std::ofstream out(summary_path);
        out << manifest.summary.dump(2) << '\n';
        if (!out) throw ConfigError("cannot write " + summary_path.string());
    }
    manifest.files.push_back(summary_path);

    const auto manifest_path = cfg.output_dir / "manifest.json";
    json files = json::array();
    for (const auto& f : manifest.files) files.push_back(f.string());
    files.push_back(manifest_path.string());
    json j{{"version", manifest.version},
           {"timestamp", manifest.timestamp},
           {"config", manifest.config},
           {"config_hash", config_hash(cfg)},
           {"files", files},
           {"summary", manifest.summary}};
    {
        std::ofstream out(manifest_path);
        out << j.dump(2) << '\n';
        if (!out) throw ConfigError("cannot write " + manifest_path.string());
    }
    manifest.files.push_back(manifest_path);
    return manifest;
}

}  // namespace qchaos::experiment
