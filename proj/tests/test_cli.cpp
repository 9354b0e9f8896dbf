#include "nlclaw/cli.hpp"
#include "nlclaw/errors.hpp"
#include "nlclaw/report_io.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace nlclaw;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = NLCLAW_CONFIG_DIR;

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("nlclaw_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& env, const fs::path& config, const fs::path& out,
            const std::string& extra = "") {
    const std::string cmd = env + " \"" + std::string(NLCLAW_CLI_PATH) + "\" run --config \"" +
                            config.string() + "\" --out \"" + out.string() + "\" --quiet " + extra +
                            " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

fs::path write_config(const fs::path& dir, const nlohmann::json& j) {
    const auto p = dir / "config.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

bool trees_identical(const fs::path& a, const fs::path& b) {
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) {
            continue;
        }
        const auto other = b / fs::relative(e.path(), a);
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
            return false;
        }
        ++files;
    }
    return files > 0;
}

std::vector<double> read_snapshot(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<double> w;
    while (std::getline(in, line)) {
        w.push_back(std::strtod(line.c_str() + line.find(',') + 1, nullptr));
    }
    return w;
}

double translation_error(const fs::path& out_dir, std::size_t n) {
    const Mesh m(-8.0, 8.0, n);
    const DiscreteField w(m, read_snapshot(out_dir / "snapshots" / "snapshot_000010.csv"));
    return l1_distance(w, oracle::translated_bump(m, initial::Bump{0.0, 1.0, 0.6}, 0.5));
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
    const auto c = cli::load_config(kConfigs / "burgers_bump.json");
    CHECK(c.n_cells == 800);
    CHECK(c.flux.name == FluxModel::burgers().name);
    CHECK(c.constraint.M == 1.0);
    CHECK(c.experiment == cli::Experiment::Solve);
    CHECK(c.perturbations.size() == 3);

    auto j = read_json(kConfigs / "zero.json");
    j["flux"] = {{"preset", "no-such-flux"}};
    CHECK_THROWS_AS(cli::parse_config(j), ConfigError);
    j = read_json(kConfigs / "zero.json");
    j.erase("mesh");
    CHECK_THROWS_AS(cli::parse_config(j), ConfigError);
    j = read_json(kConfigs / "zero.json");
    j["constraint"]["epsilon"] = 2.0;
    CHECK_THROWS_AS(cli::parse_config(j), ParameterError);
    j = read_json(kConfigs / "zero.json");
    j["experiment"] = "bogus";
    CHECK_THROWS_AS(cli::parse_config(j), ConfigError);
    CHECK_THROWS_AS(cli::load_config(kConfigs / "missing.json"), ConfigError);

    CHECK(cli::to_string(cli::parse_experiment("refine")) == "refine");
}

TEST_CASE("exit codes") {
    const auto dir = scratch("exit");
    CHECK(run_cli("", kConfigs / "zero.json", dir / "zero") == cli::kExitOk);
    CHECK(fs::exists(dir / "zero" / "diagnostics.csv"));
    CHECK(fs::exists(dir / "zero" / "monitors.json"));
    CHECK(fs::exists(dir / "zero" / "snapshots" / "snapshot_000000.csv"));
    CHECK(run_cli("", kConfigs / "linear_translate.json", dir / "lin") == cli::kExitOk);
    CHECK(run_cli("", kConfigs / "bound_violation.json", dir / "bad") == cli::kExitValidation);
    CHECK(run_cli("", kConfigs / "missing.json", dir / "missing") == cli::kExitConfig);

    auto j = read_json(kConfigs / "zero.json");
    j["delta"] = 0.3;
    CHECK(run_cli("", write_config(dir, j), dir / "delta") == cli::kExitConfig);
}

TEST_CASE("solve artifacts") {
    const auto dir = scratch("solve");
    REQUIRE(run_cli("", kConfigs / "linear_translate.json", dir / "out") == cli::kExitOk);
    const auto diag = slurp(dir / "out" / "diagnostics.csv");
    CHECK(diag.rfind("t,linf,l1,tv,mass,max_entropy_residual,sup_k,lip_x_k,tv_bound_rhs\n", 0) ==
          0);
    const auto monitors = read_json(dir / "out" / "monitors.json");
    REQUIRE(monitors.is_array());
    for (const auto& m : monitors) {
        CHECK(m.at("pass").get<bool>());
        for (const auto& e : m.at("estimates")) {
            CHECK(e.contains("paper_eq"));
            CHECK(e.contains("margin"));
        }
    }
    // snapshot_stride 2 over 10 outer steps.
    std::size_t snaps = 0;
    for (const auto& e : fs::directory_iterator(dir / "out" / "snapshots")) {
        snaps += e.is_regular_file();
    }
    CHECK(snaps == 6);
}

TEST_CASE("linear translation matches the translated data at first order") {
    const auto dir = scratch("translate");
    auto j = read_json(kConfigs / "linear_translate.json");
    REQUIRE(run_cli("", kConfigs / "linear_translate.json", dir / "coarse") == cli::kExitOk);
    j["mesh"]["n_cells"] = 1600;
    REQUIRE(run_cli("", write_config(dir, j), dir / "fine") == cli::kExitOk);
    const double coarse = translation_error(dir / "coarse", 800);
    const double fine = translation_error(dir / "fine", 1600);
    // ||w0||_1 = 0.45
    CHECK(coarse < 0.1);
    CHECK(std::log2(coarse / fine) >= 0.8);
}

TEST_CASE("outputs do not depend on the thread count") {
    const auto dir = scratch("threads");
    auto j = read_json(kConfigs / "burgers_bump.json");
    j["mesh"]["n_cells"] = 400;
    j["delta"] = 0.1;
    j["refine"]["levels"] = 2;

    j["experiment"] = "refine";
    const auto refine_cfg = write_config(dir, j);
    REQUIRE(run_cli("NONLOCAL_CLAW_THREADS=1", refine_cfg, dir / "r1") == cli::kExitOk);
    REQUIRE(run_cli("NONLOCAL_CLAW_THREADS=3", refine_cfg, dir / "r3") == cli::kExitOk);
    CHECK(trees_identical(dir / "r1", dir / "r3"));

    j["experiment"] = "stability";
    const auto stab_cfg = write_config(dir, j);
    REQUIRE(run_cli("NONLOCAL_CLAW_THREADS=1", stab_cfg, dir / "s1") == cli::kExitOk);
    REQUIRE(run_cli("NONLOCAL_CLAW_THREADS=4", stab_cfg, dir / "s4") == cli::kExitOk);
    CHECK(trees_identical(dir / "s1", dir / "s4"));
}

TEST_CASE("experiment override on the command line") {
    const auto dir = scratch("override");
    REQUIRE(run_cli("", kConfigs / "burgers_saturated.json", dir / "out", "--experiment solve") ==
            cli::kExitOk);
    CHECK(fs::exists(dir / "out" / "snapshots"));
    CHECK(!fs::exists(dir / "out" / "regimes.json"));
}

TEST_CASE("convergence table formatting") {
    ConvergenceTable t;
    t.rows.push_back({0.1, 0.04, 400, 0.05, std::nullopt, false});
    t.rows.push_back({0.05, 0.02, 800, 0.025, 1.0, false});
    t.rows.push_back({0.025, 0.01, 1600, 0.0, std::nullopt, true});
    const auto out = emit_convergence_table(t);
    CHECK(out.csv ==
          "level,delta,dx,n_cells,l1_distance,rate\n"
          "0,0.10000000000000001,0.040000000000000001,400,0.050000000000000003,\n"
          "1,0.050000000000000003,0.02,800,0.025000000000000001,1\n"
          "2,0.025000000000000001,0.01,1600,0,\n");
    CHECK(out.text.find("(reference)") != std::string::npos);
    CHECK(out.text.find("1.000") != std::string::npos);

    ConvergenceTable single;
    single.rows.push_back({0.1, 0.04, 400, 0.0, std::nullopt, true});
    CHECK(emit_convergence_table(single).csv ==
          "level,delta,dx,n_cells,l1_distance,rate\n0,0.10000000000000001,0.040000000000000001,400,0,\n");
    CHECK_THROWS_AS(emit_convergence_table(ConvergenceTable{}), ParameterError);
}

TEST_CASE("monitor report json") {
    MonitorReport r{"m", {{"a", "(1)", 1.0, 2.0, 1.0, true}}};
    const auto j = to_json(r);
    CHECK(j.at("monitor") == "m");
    CHECK(j.at("pass") == true);
    CHECK(j.at("estimates").at(0).at("paper_eq") == "(1)");
}

}
