#include "nlclaw/nonlocal_stepper.hpp"

#include "nlclaw/errors.hpp"
#include "nlclaw/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlclaw {

SplittingParameters SplittingParameters::for_horizon(double horizon_T, double delta,
                                                     double cfl_safety) {
    if (!(horizon_T > 0.0) || !(delta > 0.0)) {
        throw ParameterError("horizon_T and delta must be positive");
    }
    const double ratio = horizon_T / delta;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(n * delta - horizon_T) > 1e-12 * horizon_T) {
        throw ParameterError("delta = " + std::to_string(delta) +
                             " does not divide horizon_T = " + std::to_string(horizon_T));
    }
    return SplittingParameters{delta, static_cast<std::size_t>(n), cfl_safety};
}

double tv_growth_constant(const FluxModel& flux, const ConstraintFunction& g, double l1_w0) {
    const double M = g.M;
    const double a = M * (g.lip_g * flux.lip_f_prime + flux.sup_f_second);
    const double b = M * M * flux.lip_f_second * l1_w0;
    return std::max(a, b);
}

namespace {

StepRecord record_for(const DiscreteField& w, const FrozenCoefficient& k, double tv0, double C) {
    StepRecord r;
    r.t = w.time();
    r.linf = linf_norm(w);
    r.l1 = l1_norm(w);
    r.tv = total_variation(w);
    r.mass = mass(w);
    r.sup_k = k.sup_abs;
    r.lip_x_k = k.lip_x_k;
    r.tv_bound_rhs = (1.0 + tv0) * std::exp(C * r.t);
    return r;
}

void check_boundary(const DiscreteField& w, double M, std::size_t outer) {
    const double tol = 1e-12 * std::max(M, 1.0);
    if (std::abs(w[0]) > tol || std::abs(w[w.size() - 1]) > tol) {
        throw MarginError("outer step " + std::to_string(outer) +
                          ": solution reached the truncated domain boundary");
    }
}

} // namespace

Trajectory solve(const Scenario& s, const SplittingParameters& p, const SolveOptions& opt) {
    if (p.n_outer == 0 || !(p.delta > 0.0)) {
        throw ParameterError("solve: splitting parameters need n_outer >= 1 and delta > 0");
    }
    if (std::abs(static_cast<double>(p.n_outer) * p.delta - s.horizon_T) >
        1e-12 * s.horizon_T) {
        throw ParameterError("solve: n_outer * delta differs from horizon_T");
    }
    const ConstraintFunction& g = s.constraint;
    const double dx = s.w0.mesh().dx();
    std::vector<double> levels = opt.entropy_levels;
    if (levels.empty()) {
        levels = {-0.5 * g.M, 0.0, 0.5 * g.M};
    }

    Trajectory traj;
    traj.tv_growth_constant = tv_growth_constant(s.flux, g, l1_norm(s.w0));
    const double tv0 = total_variation(s.w0);

    DiscreteField w = s.w0.at_time(0.0);
    traj.snapshots.push_back(w);
    traj.outer_index.push_back(0);
    traj.coefficients.push_back(build_coefficient(w, s.flux));
    traj.diagnostics.push_back(record_for(w, traj.coefficients.back(), tv0, traj.tv_growth_constant));

    for (std::size_t n = 0; n < p.n_outer; ++n) {
        const FrozenCoefficient& k = traj.coefficients[n];
        const double t_start = static_cast<double>(n) * p.delta;
        const double t_end = static_cast<double>(n + 1) * p.delta;
        double entropy_max = 0.0;
        std::size_t steps = 0;
        try {
            StepParameters sp{0.0, dx, p.cfl_safety};
            const double dt_max = opt.fixed_dt ? *opt.fixed_dt
                                               : admissible_dt(k, g, dx, p.cfl_safety);
            steps = substep_count(p.delta, dt_max);
            if (opt.fixed_dt && std::abs(static_cast<double>(steps) * *opt.fixed_dt - p.delta) >
                                    1e-12 * p.delta) {
                throw ParameterError("fixed_dt does not divide delta");
            }
            sp.dt = opt.fixed_dt ? *opt.fixed_dt : p.delta / static_cast<double>(steps);

            w = w.at_time(t_start);
            for (std::size_t i = 0; i < steps; ++i) {
                DiscreteField next = step(w, k, sp, g);
                if (opt.check_entropy) {
                    for (double c : levels) {
                        const auto r = discrete_entropy_residual(w, next, k, sp, g, c);
                        entropy_max = std::max(entropy_max, *std::max_element(r.begin(), r.end()));
                    }
                }
                w = std::move(next);
                if (opt.snapshot_stride > 0 && (i + 1) % opt.snapshot_stride == 0 &&
                    i + 1 < steps) {
                    traj.snapshots.push_back(w);
                }
            }
            w = w.at_time(t_end);
            check_boundary(w, g.M, n);
        } catch (const CflError& e) {
            throw CflError("outer step " + std::to_string(n) + ": " + e.what(), e.admissible_dt());
        } catch (const MarginError&) {
            throw;
        } catch (const Error& e) {
            throw Error("outer step " + std::to_string(n) + ": " + e.what());
        }

        traj.snapshots.push_back(w);
        traj.outer_index.push_back(traj.snapshots.size() - 1);
        traj.coefficients.push_back(build_coefficient(w, s.flux));
        StepRecord rec = record_for(w, traj.coefficients.back(), tv0, traj.tv_growth_constant);
        rec.max_entropy_residual = entropy_max;
        rec.inner_steps = steps;
        traj.diagnostics.push_back(rec);
    }
    return traj;
}

ConvergenceTable refine_delta(const Scenario& s, std::span<const double> deltas,
                              std::span<const double> dx_list, const SolveOptions& opt,
                              double cfl_safety) {
    if (deltas.empty() || deltas.size() != dx_list.size()) {
        throw ParameterError("refine_delta: need equally many deltas and dx values");
    }
    for (std::size_t i = 1; i < deltas.size(); ++i) {
        if (!(deltas[i] <= deltas[i - 1]) || !(dx_list[i] < dx_list[i - 1])) {
            throw ParameterError("refine_delta: deltas and dx values must decrease");
        }
    }
    const Mesh& base = s.w0.mesh();
    std::vector<Mesh> meshes;
    for (double dx : dx_list) {
        const double cells = base.length() / dx;
        const double rounded = std::round(cells);
        if (rounded < 2.0 || std::abs(cells - rounded) > 1e-9 * rounded) {
            throw ParameterError("refine_delta: dx = " + std::to_string(dx) +
                                 " does not divide the domain");
        }
        meshes.emplace_back(base.x_left(), base.x_right(), static_cast<std::size_t>(rounded));
    }

    const std::size_t levels = deltas.size();
    std::vector<std::optional<DiscreteField>> finals(levels);
    parallel_for(levels, [&](std::size_t i) {
        const Scenario si = remesh(s, meshes[i]);
        const auto sp = SplittingParameters::for_horizon(s.horizon_T, deltas[i], cfl_safety);
        SolveOptions o = opt;
        o.snapshot_stride = 0;
        finals[i] = solve(si, sp, o).final_state();
    });

    ConvergenceTable table;
    const DiscreteField& reference = *finals.back();
    for (std::size_t i = 0; i < levels; ++i) {
        ConvergenceRow row;
        row.delta = deltas[i];
        row.dx = meshes[i].dx();
        row.n_cells = meshes[i].n_cells();
        row.reference = i + 1 == levels;
        row.l1_distance = row.reference ? 0.0
                                        : l1_distance(*finals[i], restrict_to(reference, meshes[i]));
        if (i > 0 && !row.reference) {
            const ConvergenceRow& prev = table.rows.back();
            if (prev.l1_distance > 0.0 && row.l1_distance > 0.0) {
                row.rate = std::log(prev.l1_distance / row.l1_distance) / std::log(prev.dx / row.dx);
            }
        }
        table.rows.push_back(row);
    }
    return table;
}

} // namespace nlclaw
