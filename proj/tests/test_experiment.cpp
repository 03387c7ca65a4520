#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "json.hpp"
#include "qchaos/experiment.hpp"

using namespace qchaos;
using namespace qchaos::experiment;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("qchaos-test-" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::size_t data_rows(const fs::path& csv) {
    std::istringstream in(slurp(csv));
    std::size_t rows = 0;
    bool header = false;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        ++rows;
    }
    return rows;
}

std::string header_of(const fs::path& csv) {
    std::istringstream in(slurp(csv));
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') return line;
    return {};
}

struct Shell {
    int code;
    std::string out;
    std::string err;
};

Shell cli(const std::string& args) {
    const auto log = scratch("cli-log");
    fs::create_directories(log);
    const std::string cmd = std::string(QCHAOS_CLI_PATH) + " " + args + " > " + (log / "out").string() + " 2> " +
                            (log / "err").string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log / "out"), slurp(log / "err")};
}

ExperimentConfig small_hh(const fs::path& out) {
    ExperimentConfig c;
    c.hh.num_shells = 12;
    c.metrics = {Metric::WExact, Metric::WPt, Metric::Kappa, Metric::StrengthFunction};
    c.output_dir = out;
    return c;
}

ExperimentConfig small_kepler(const fs::path& out) {
    ExperimentConfig c;
    c.system = System::Kepler;
    c.kepler.max_n = 8;
    c.kepler.target_shell = 4;
    c.kepler.gamma_grid = {0.001, 0.003, 0.006, 0.01};
    c.metrics = {Metric::WExact, Metric::WPt, Metric::Kappa, Metric::StrengthFunction};
    c.output_dir = out;
    return c;
}

}  // namespace

TEST_CASE("validate sizes the job without writing") {
    ExperimentConfig hh;
    hh.output_dir = scratch("never-written");
    const auto d = validate(hh);
    CHECK(d.basis_size == 496);
    CHECK(d.summary.find("496 states") != std::string::npos);
    CHECK(d.scan_points == 27);
    CHECK_FALSE(fs::exists(hh.output_dir));

    ExperimentConfig kep;
    kep.system = System::Kepler;
    const auto k = validate(kep);
    CHECK(k.basis_size == 210);
    CHECK(k.summary.find("210 states") != std::string::npos);
    CHECK(k.scan_points == 76);

    hh.hh.num_shells = 0;
    CHECK_THROWS_AS(validate(hh), ConfigError);
}

TEST_CASE("config errors") {
    ExperimentConfig c;
    c.metrics.clear();
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.shell_min = 20;
    c.shell_max = 10;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.shell_max = 31;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.system = System::Kepler;
    c.eps_max = 0.1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.eps_max = -0.25;
    c.kepler.gamma_grid = {0.01, 0.005};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.kepler.gamma_grid.clear();
    c.kepler.m = 2;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    CHECK_THROWS_AS(parse_system("lorenz"), ConfigError);
    CHECK_THROWS_AS(parse_metric("lyapunov"), ConfigError);
}

TEST_CASE("json config round trip") {
    ExperimentConfig c;
    c.hh.num_shells = 20;
    c.hh.lambda = 0.5;
    c.metrics = {Metric::Kappa};
    c.selection = metrics::Selection::TopProjection;
    const auto back = from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(config_hash(back) == config_hash(c));
    CHECK(config_hash(c).size() == 16);

    auto other = c;
    other.hh.lambda = 0.6;
    CHECK(config_hash(other) != config_hash(c));

    CHECK_THROWS_AS(from_json(json{{"shels", 30}}), ConfigError);
    CHECK_THROWS_AS(from_json(json{{"shells", "thirty"}}), ConfigError);
    CHECK_THROWS_AS(from_json(json::array()), ConfigError);
    CHECK(from_json(json{{"system", "kepler"}, {"max_n", 12}}).kepler.max_n == 12);
}

TEST_CASE("parallel_for visits every index and reports the lowest failure") {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, 4, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);

    try {
        parallel_for(50, 8, [](std::size_t i) {
            if (i == 17 || i == 33) throw std::runtime_error("boom " + std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "boom 17");
    }
}

TEST_CASE("uncoupled oscillator run has a flat exact curve and no crossing") {
    ExperimentConfig c;
    c.hh.lambda = 0.0;
    c.hh.num_shells = 12;
    c.metrics = {Metric::WExact};
    c.output_dir = scratch("lambda0");
    const auto m = run(c);
    CHECK(m.summary["exact_critical_energy"].is_null());
    const auto csv = c.output_dir / "henon_heiles_curves.csv";
    CHECK(data_rows(csv) == validate(c).scan_points);
    std::istringstream in(slurp(csv));
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#' || line.rfind("shell", 0) == 0) continue;
        std::istringstream fields(line);
        std::string shell, energy, w;
        std::getline(fields, shell, ',');
        std::getline(fields, energy, ',');
        std::getline(fields, w, ',');
        CHECK(std::stod(w) == 0.0);
    }
}

TEST_CASE("oscillator run writes every artifact with stable headers") {
    const auto c = small_hh(scratch("hh"));
    const auto m = run(c);
    for (const auto& f : m.files) CHECK(fs::exists(f));
    const auto curves = c.output_dir / "henon_heiles_curves.csv";
    CHECK(header_of(curves) == "shell,energy,w_pt,w_exact,exact_mean_energy,kappa,gamma_spr");
    CHECK(data_rows(curves) == 8);  // shells 1..8
    CHECK(slurp(curves).find("# schema henon-heiles-curves v" + std::to_string(kCsvSchemaVersion)) != std::string::npos);
    CHECK(slurp(curves).find(config_hash(c)) != std::string::npos);
    CHECK(m.summary["hygiene"]["passes"].get<bool>());
    CHECK(m.summary["invariance_check"]["abs_gap"].get<double>() <= 1e-10 * m.summary["invariance_check"]["w"].get<double>());

    const auto manifest = json::parse(slurp(c.output_dir / "manifest.json"));
    CHECK(manifest["config_hash"] == config_hash(c));
    CHECK(manifest["files"].size() == m.files.size());
}

TEST_CASE("identical configs give byte-identical csv output regardless of threads") {
    auto a = small_hh(scratch("det-a"));
    auto b = small_hh(scratch("det-b"));
    a.threads = 1;
    b.threads = 4;
    run(a);
    run(b);
    for (const char* f : {"henon_heiles_curves.csv", "henon_heiles_strength.csv"}) {
        const auto ta = slurp(a.output_dir / f);
        const auto tb = slurp(b.output_dir / f);
        CHECK(!ta.empty());
        CHECK(ta == tb);
    }

    auto ka = small_kepler(scratch("kdet-a"));
    auto kb = small_kepler(scratch("kdet-b"));
    ka.threads = 1;
    kb.threads = 3;
    run(ka);
    run(kb);
    for (const char* f : {"kepler_curves.csv", "kepler_strength.csv"})
        CHECK(slurp(ka.output_dir / f) == slurp(kb.output_dir / f));
    CHECK(header_of(ka.output_dir / "kepler_curves.csv") ==
          "gamma,scaled_energy_pt,scaled_energy_exact,w_exact,w_pt,kappa,gamma_spr");
    CHECK(data_rows(ka.output_dir / "kepler_curves.csv") == 4);
}

TEST_CASE("command line: exit codes") {
    auto r = cli("validate --system henon-heiles");
    CHECK(r.code == 0);
    CHECK(r.out.find("496 states") != std::string::npos);

    r = cli("validate --system kepler --max-n 20 --target-shell 10");
    CHECK(r.code == 0);
    CHECK(r.out.find("210 states") != std::string::npos);

    r = cli("validate --system henon-heiles --shells 0");
    CHECK(r.code == 2);
    CHECK(r.err.find("config error") != std::string::npos);

    CHECK(cli("validate --no-such-flag").code == 2);
    CHECK(cli("run --system kepler --m 1").code == 2);
    CHECK(cli("run --metrics w-exact --selection sideways").code == 2);

    // hbar^(3/2) overflows the cubic coupling: a numerical failure, not a config error
    const auto out = scratch("overflow");
    r = cli("run --system henon-heiles --shells 6 --hbar 1e250 --metrics w-exact --output " + out.string());
    CHECK(r.code == 3);
    CHECK(r.err.find("spectral-core") != std::string::npos);
}

TEST_CASE("command line: config file, flag override and output directory") {
    const auto dir = scratch("cfg");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "scan.json");
        f << R"({"system": "henon-heiles", "shells": 12, "metrics": ["w-pt"]})";
    }
    auto r = cli("validate --config " + (dir / "scan.json").string());
    CHECK(r.code == 0);
    CHECK(r.out.find("78 states") != std::string::npos);

    r = cli("validate --config " + (dir / "scan.json").string() + " --shells 10");
    CHECK(r.code == 0);
    CHECK(r.out.find("55 states") != std::string::npos);

    const auto env_out = dir / "from-env";
    r = cli("run --config " + (dir / "scan.json").string());
    const std::string with_env =
        "QCHAOS_OUTPUT_DIR=" + env_out.string() + " " + std::string(QCHAOS_CLI_PATH) + " run --config " +
        (dir / "scan.json").string() + " > /dev/null 2>&1";
    CHECK(std::system(with_env.c_str()) == 0);
    CHECK(fs::exists(env_out / "henon_heiles_curves.csv"));

    const auto flag_out = dir / "from-flag";
    r = cli("run --config " + (dir / "scan.json").string() + " --output " + flag_out.string());
    CHECK(r.code == 0);
    CHECK(fs::exists(flag_out / "summary.json"));
    const auto summary = json::parse(r.out);
    CHECK(summary["pt_critical_energy"].is_number());
}
