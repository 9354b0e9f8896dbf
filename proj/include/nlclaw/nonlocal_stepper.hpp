#pragma once

#include "nlclaw/frozen_solver.hpp"
#include "nlclaw/mesh_field.hpp"
#include "nlclaw/model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nlclaw {

/// Outer freezing interval delta with n_outer * delta = T.
struct SplittingParameters {
    double delta = 0.0;
    std::size_t n_outer = 0;
    double cfl_safety = 0.9;

    /// Throws ParameterError unless delta divides horizon_T.
    static SplittingParameters for_horizon(double horizon_T, double delta,
                                           double cfl_safety = 0.9);
};

struct SolveOptions {
    /// 0 stores outer nodes only; s > 0 also stores every s-th inner step.
    std::size_t snapshot_stride = 0;
    bool check_entropy = true;
    /// Entropy levels c; empty means {-M/2, 0, M/2}.
    std::vector<double> entropy_levels;
    /// Inner step to use on every interval instead of the CFL-derived one.
    /// Must divide delta.
    std::optional<double> fixed_dt;
};

/// Diagnostics at outer node t_n. sup_k and lip_x_k describe the coefficient
/// frozen at t_n; max_entropy_residual and inner_steps describe the interval
/// that ends at t_n (zero at t_0).
struct StepRecord {
    double t = 0.0;
    double linf = 0.0;
    double l1 = 0.0;
    double tv = 0.0;
    double mass = 0.0;
    double max_entropy_residual = 0.0;
    double sup_k = 0.0;
    double lip_x_k = 0.0;
    double tv_bound_rhs = 0.0;
    std::size_t inner_steps = 0;
};

struct Trajectory {
    std::vector<DiscreteField> snapshots;
    /// snapshots[outer_index[n]] is the solution at t_n (left limit).
    std::vector<std::size_t> outer_index;
    std::vector<StepRecord> diagnostics;
    /// coefficients[n] is frozen on [t_n, t_{n+1}); one extra entry for t_N.
    std::vector<FrozenCoefficient> coefficients;
    /// Growth rate C of the bound TV(w(t)) <= (1 + TV(w0)) e^{C t}.
    double tv_growth_constant = 0.0;

    std::size_t n_outer() const { return outer_index.empty() ? 0 : outer_index.size() - 1; }
    const DiscreteField& at_outer(std::size_t n) const { return snapshots[outer_index[n]]; }
    const DiscreteField& final_state() const { return snapshots.back(); }
};

/// C = max(M (lip_g lip_f' + sup|f''|), M^2 lip_f'' ||w0||_1).
///
/// Over one frozen interval the shift-by-h comparison of the solution with
/// itself gives, after dividing by h,
///   d/dt TV <= lip_g lip_f' M TV + M (lip_f'' M ||w0||_1 + sup|f''| TV),
/// i.e. TV' <= A TV + B with A = M (lip_g lip_f' + sup|f''|) and
/// B = M^2 lip_f'' ||w0||_1. Bounding both by C (1 + TV) and applying Gronwall
/// to 1 + TV gives the exponential bound.
double tv_growth_constant(const FluxModel& flux, const ConstraintFunction& g, double l1_w0);

/// Coefficient-freezing construction: on each [t_n, t_{n+1}) freeze
/// k = f'(int w(t_n-)) and evolve with the frozen solver.
/// Errors from the inner solver are rethrown with the outer step index.
Trajectory solve(const Scenario& s, const SplittingParameters& p, const SolveOptions& opt = {});

struct ConvergenceRow {
    double delta = 0.0;
    double dx = 0.0;
    std::size_t n_cells = 0;
    /// L1 distance at T to the reference run, measured on this row's mesh.
    double l1_distance = 0.0;
    /// Observed order against the previous row; absent on the first row and
    /// on the reference row.
    std::optional<double> rate;
    bool reference = false;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
};

/// Runs every (delta, dx) pair and compares each final state with the last,
/// finest pair. Both lists must have equal length and be decreasing; dx values
/// must divide the domain and nest with integer ratios.
ConvergenceTable refine_delta(const Scenario& s, std::span<const double> deltas,
                              std::span<const double> dx_list, const SolveOptions& opt = {},
                              double cfl_safety = 0.9);

} // namespace nlclaw
