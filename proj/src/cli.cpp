#include "nlclaw/cli.hpp"

#include "nlclaw/constraint_view.hpp"
#include "nlclaw/diagnostics.hpp"
#include "nlclaw/errors.hpp"
#include "nlclaw/nonlocal_stepper.hpp"
#include "nlclaw/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace nlclaw::cli {

namespace fs = std::filesystem;
using nlohmann::json;

Experiment parse_experiment(const std::string& verb) {
    if (verb == "solve") return Experiment::Solve;
    if (verb == "stability") return Experiment::Stability;
    if (verb == "refine") return Experiment::Refine;
    if (verb == "regions") return Experiment::Regions;
    throw ConfigError("unknown experiment '" + verb + "' (solve, stability, refine, regions)");
}

std::string to_string(Experiment e) {
    switch (e) {
    case Experiment::Solve: return "solve";
    case Experiment::Stability: return "stability";
    case Experiment::Refine: return "refine";
    case Experiment::Regions: return "regions";
    }
    return "?";
}

namespace {

FluxModel parse_flux(const json& j) {
    if (j.is_string()) {
        return parse_flux(json{{"preset", j}});
    }
    if (j.contains("coefficients")) {
        return FluxModel::polynomial(j.at("coefficients").get<std::vector<double>>(), 0.0);
    }
    const auto preset = j.at("preset").get<std::string>();
    if (preset == "linear") return FluxModel::linear(j.value("c", 1.0));
    if (preset == "burgers") return FluxModel::burgers();
    if (preset == "cubic") return FluxModel::cubic(0.0);
    throw ConfigError("unknown flux preset '" + preset + "'");
}

initial::Bump parse_bump(const json& j) {
    const double center = j.value("center", 0.0);
    const double height = j.at("height").get<double>();
    if (j.contains("mass")) {
        return initial::Bump::with_mass(center, height, j.at("mass").get<double>());
    }
    const double half_width = j.at("half_width").get<double>();
    if (!(half_width > 0.0)) {
        throw ConfigError("bump half_width must be positive");
    }
    return initial::Bump{center, half_width, height};
}

InitialData parse_initial(const json& j) {
    const auto preset = j.at("preset").get<std::string>();
    if (preset == "zero") return initial::Zero{};
    if (preset == "bump") return parse_bump(j);
    if (preset == "box") {
        return initial::Box{j.at("left").get<double>(), j.at("right").get<double>(),
                            j.at("height").get<double>()};
    }
    if (preset == "riemann") {
        return initial::Riemann{j.at("left").get<double>(), j.at("middle").get<double>(),
                                j.at("right").get<double>(), j.at("w_left").get<double>(),
                                j.at("w_right").get<double>()};
    }
    if (preset == "two_bumps" || preset == "sum_of_bumps") {
        initial::SumOfBumps sum;
        for (const auto& b : j.at("bumps")) {
            sum.bumps.push_back(parse_bump(b));
        }
        if (preset == "two_bumps" && sum.bumps.size() != 2) {
            throw ConfigError("two_bumps needs exactly two bumps");
        }
        return sum;
    }
    throw ConfigError("unknown initial-data preset '" + preset + "'");
}

Scenario build_scenario(const RunConfig& c) {
    return make_scenario(c.flux, c.constraint, c.initial_data, Mesh(c.x_left, c.x_right, c.n_cells),
                         c.horizon_T);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
}

std::string snapshot_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%06zu.csv", index);
    return buf;
}

// Snapshots at outer nodes selected by the stride, plus every stored inner one.
std::vector<std::size_t> snapshots_to_write(const Trajectory& run, std::size_t stride) {
    std::vector<bool> outer(run.snapshots.size(), false);
    for (std::size_t n = 0; n < run.outer_index.size(); ++n) {
        outer[run.outer_index[n]] = true;
    }
    std::vector<std::size_t> picked;
    for (std::size_t n = 0, i = 0; i < run.snapshots.size(); ++i) {
        if (outer[i]) {
            if (n % stride == 0 || n + 1 == run.outer_index.size()) {
                picked.push_back(i);
            }
            ++n;
        } else {
            picked.push_back(i);
        }
    }
    return picked;
}

void write_trajectory(const RunConfig& c, const Trajectory& run, const fs::path& dir) {
    fs::create_directories(dir / "snapshots");
    for (std::size_t i : snapshots_to_write(run, c.outputs.snapshot_stride)) {
        std::ofstream out(dir / "snapshots" / snapshot_name(i), std::ios::binary);
        write_field_csv(out, run.snapshots[i]);
    }
    if (c.outputs.emit_diagnostics) {
        std::ofstream out(dir / "diagnostics.csv", std::ios::binary);
        write_diagnostics_csv(out, run);
    }
}

void write_regions(const Trajectory& run, const Scenario& s, const RunConfig& c,
                   const std::vector<std::size_t>& which, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    write_regions_csv_header(out);
    for (std::size_t i : which) {
        const auto map = classify_regions(run.snapshots[i], s.constraint, c.tol_J);
        write_regions_csv_rows(out, run.snapshots[i], map);
    }
}

bool report_monitors(const std::vector<MonitorReport>& reports, const fs::path& path,
                     std::ostream& log, bool quiet) {
    json all = json::array();
    bool ok = true;
    for (const auto& r : reports) {
        all.push_back(to_json(r));
        ok = ok && r.pass();
        if (!quiet) {
            for (const auto& check : r.checks) {
                log << (check.pass ? "  pass  " : "  FAIL  ") << r.monitor << '.' << check.name
                    << "  lhs=" << check.lhs << " rhs=" << check.rhs << '\n';
            }
        }
    }
    write_text(path, all.dump(2) + "\n");
    return ok;
}

int run_solve(const RunConfig& c, const Scenario& s, std::ostream& log, bool quiet) {
    const auto sp = SplittingParameters::for_horizon(c.horizon_T, c.delta, c.cfl_safety);
    SolveOptions opt;
    opt.snapshot_stride = c.outputs.inner_stride;
    const Trajectory run = solve(s, sp, opt);
    write_trajectory(c, run, c.outputs.out_dir);
    if (c.outputs.emit_regions && s.constraint.epsilon) {
        write_regions(run, s, c, snapshots_to_write(run, c.outputs.snapshot_stride),
                      c.outputs.out_dir / "regions.csv");
    }
    const bool ok = report_monitors({solution_estimates_monitor(run, s), splitting_monitor(run, s)},
                                    c.outputs.out_dir / "monitors.json", log, quiet);
    return ok ? kExitOk : kExitMonitor;
}

int run_stability(const RunConfig& c, const Scenario& s, std::ostream& log, bool quiet) {
    const auto sp = SplittingParameters::for_horizon(c.horizon_T, c.delta, c.cfl_safety);
    const auto support = support_cells(s.w0);
    const Mesh& mesh = s.w0.mesh();
    initial::Bump shape{0.5 * (mesh.x_left() + mesh.x_right()), 0.25 * mesh.length(), 1.0};
    if (support) {
        const double lo = mesh.interface_position(support->first);
        const double hi = mesh.interface_position(support->second + 1);
        // Off-center so that v0 - w0 changes sign.
        shape = initial::Bump{lo + 0.65 * (hi - lo), 0.25 * (hi - lo) + mesh.dx(), 1.0};
    }

    json results = json::array();
    std::ostringstream csv;
    csv << std::setprecision(17) << "rho,t,psi,bound\n";
    bool ok = true;
    for (double rho : c.perturbations) {
        const DiscreteField v0 = perturbed_data(s.w0, rho, shape);
        const auto outcome = stability_experiment(s, s.w0, v0, sp);
        const auto dep = continuous_dependence_worst(outcome.w_run, outcome.v_run, s.constraint);
        const auto& rec = outcome.record;
        for (std::size_t n = 0; n < rec.times.size(); ++n) {
            csv << rho << ',' << rec.times[n] << ',' << rec.psi[n] << ','
                << std::exp(rec.bound_C * rec.times[n]) * rec.psi0 << '\n';
        }
        results.push_back({{"rho", rho}, {"stability", to_json(rec)}, {"dependence", to_json(dep)}});
        ok = ok && rec.bound_holds && dep.pass;
        if (!quiet) {
            log << "  rho=" << rho << "  growth_exponent=" << rec.growth_exponent
                << "  bound_C=" << rec.bound_C << "  worst dependence residual=" << dep.residual
                << (rec.bound_holds && dep.pass ? "  pass" : "  FAIL") << '\n';
        }
    }
    write_text(c.outputs.out_dir / "stability.csv", csv.str());
    write_text(c.outputs.out_dir / "stability.json", results.dump(2) + "\n");
    return ok ? kExitOk : kExitMonitor;
}

int run_refine(const RunConfig& c, const Scenario& s, std::ostream& log, bool quiet) {
    std::vector<double> deltas;
    std::vector<double> dxs;
    for (std::size_t i = 0; i <= c.refine_levels; ++i) {
        const double scale = std::ldexp(1.0, -static_cast<int>(i));
        deltas.push_back(c.delta * scale);
        dxs.push_back(s.w0.mesh().dx() * scale);
    }
    SolveOptions opt;
    opt.check_entropy = false;
    const auto table = refine_delta(s, deltas, dxs, opt, c.cfl_safety);
    const auto text = emit_convergence_table(table);
    write_text(c.outputs.out_dir / "convergence.csv", text.csv);
    write_text(c.outputs.out_dir / "convergence.txt", text.text);
    if (!quiet) {
        log << text.text;
    }
    bool ok = true;
    for (std::size_t i = 1; i + 1 < table.rows.size(); ++i) {
        ok = ok && table.rows[i].l1_distance < table.rows[i - 1].l1_distance;
        ok = ok && table.rows[i].rate && *table.rows[i].rate > 0.0;
    }
    return ok ? kExitOk : kExitMonitor;
}

int run_regions(const RunConfig& c, const Scenario& s, std::ostream& log, bool quiet) {
    const auto sp = SplittingParameters::for_horizon(c.horizon_T, c.delta, c.cfl_safety);
    SolveOptions opt;
    opt.snapshot_stride = c.outputs.inner_stride == 0 ? 1 : c.outputs.inner_stride;
    const Trajectory run = solve(s, sp, opt);

    std::vector<double> times = c.map_times;
    if (times.empty()) {
        for (std::size_t n = 0; n <= run.n_outer(); ++n) {
            times.push_back(run.at_outer(n).time());
        }
    }
    const auto report = regime_equation_residual(run, s, times, c.tol_J);

    std::vector<std::size_t> which;
    for (double t : times) {
        std::size_t idx = 0;
        for (std::size_t i = 1; i < run.snapshots.size(); ++i) {
            if (std::abs(run.snapshots[i].time() - t) < std::abs(run.snapshots[idx].time() - t)) {
                idx = i;
            }
        }
        which.push_back(idx);
    }
    fs::create_directories(c.outputs.out_dir);
    write_regions(run, s, c, which, c.outputs.out_dir / "regions.csv");
    write_text(c.outputs.out_dir / "regimes.json", to_json(report).dump(2) + "\n");
    if (c.outputs.emit_diagnostics) {
        std::ofstream out(c.outputs.out_dir / "diagnostics.csv", std::ios::binary);
        write_diagnostics_csv(out, run);
    }
    if (!quiet) {
        log << "  regime residuals: max_I=" << report.max_I << " max_K=" << report.max_K
            << " max_J_gap=" << report.max_J_gap << '\n';
    }
    const bool ok = report_monitors({solution_estimates_monitor(run, s), splitting_monitor(run, s)},
                                    c.outputs.out_dir / "monitors.json", log, quiet);
    return ok ? kExitOk : kExitMonitor;
}

} // namespace

RunConfig parse_config(const json& j) {
    try {
        RunConfig c;
        c.flux = parse_flux(j.at("flux"));
        const auto& con = j.at("constraint");
        c.constraint = make_truncation_g(con.at("M").get<double>(), con.at("epsilon").get<double>());
        c.initial_data = parse_initial(j.at("initial_data"));
        const auto& mesh = j.at("mesh");
        c.x_left = mesh.at("x_left").get<double>();
        c.x_right = mesh.at("x_right").get<double>();
        const auto cells = mesh.at("n_cells").get<long long>();
        if (cells < 2) {
            throw ConfigError("mesh.n_cells must be at least 2");
        }
        c.n_cells = static_cast<std::size_t>(cells);
        c.horizon_T = j.at("horizon_T").get<double>();
        c.delta = j.at("delta").get<double>();
        c.cfl_safety = j.value("cfl_safety", 0.9);
        if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0)) {
            throw ConfigError("cfl_safety must lie in (0, 1]");
        }
        if (j.contains("outputs")) {
            const auto& o = j.at("outputs");
            c.outputs.out_dir = o.value("out_dir", std::string("out"));
            const auto stride = o.value("snapshot_stride", 1LL);
            const auto inner = o.value("inner_stride", 0LL);
            if (stride < 1 || inner < 0) {
                throw ConfigError("outputs.snapshot_stride must be >= 1, inner_stride >= 0");
            }
            c.outputs.snapshot_stride = static_cast<std::size_t>(stride);
            c.outputs.inner_stride = static_cast<std::size_t>(inner);
            c.outputs.emit_regions = o.value("emit_regions", false);
            c.outputs.emit_diagnostics = o.value("emit_diagnostics", true);
        }
        c.experiment = parse_experiment(j.value("experiment", std::string("solve")));
        if (j.contains("stability")) {
            const auto& st = j.at("stability");
            if (st.contains("perturbations")) {
                c.perturbations = st.at("perturbations").get<std::vector<double>>();
            } else if (st.contains("perturbation")) {
                c.perturbations = {st.at("perturbation").get<double>()};
            }
        }
        if (j.contains("refine")) {
            const auto levels = j.at("refine").value("levels", 4LL);
            if (levels < 1) {
                throw ConfigError("refine.levels must be >= 1");
            }
            c.refine_levels = static_cast<std::size_t>(levels);
        }
        if (j.contains("regions")) {
            const auto& r = j.at("regions");
            if (r.contains("tol_J")) {
                c.tol_J = r.at("tol_J").get<double>();
            }
            c.map_times = r.value("map_times", std::vector<double>{});
        }
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    try {
        return parse_config(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

int run(const RunConfig& config, std::ostream& log, bool quiet) {
    std::optional<Scenario> built;
    try {
        built = build_scenario(config);
    } catch (const Error& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    const Scenario& s = *built;

    const auto report = validate_scenario(s);
    if (!report.ok()) {
        for (const auto& v : report.violations) {
            log << "violated assumption " << v.assumption << ": " << v.detail << '\n';
        }
        return kExitValidation;
    }

    try {
        SplittingParameters::for_horizon(config.horizon_T, config.delta, config.cfl_safety);
        fs::create_directories(config.outputs.out_dir);
    } catch (const std::exception& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    if (!quiet) {
        log << "experiment " << to_string(config.experiment) << ": " << s.flux.name << " flux, "
            << s.w0.mesh().n_cells() << " cells, T = " << config.horizon_T
            << ", delta = " << config.delta << '\n';
    }
    try {
        switch (config.experiment) {
        case Experiment::Solve: return run_solve(config, s, log, quiet);
        case Experiment::Stability: return run_stability(config, s, log, quiet);
        case Experiment::Refine: return run_refine(config, s, log, quiet);
        case Experiment::Regions: return run_regions(config, s, log, quiet);
        }
    } catch (const Error& e) {
        log << "solver error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}

} // namespace nlclaw::cli
