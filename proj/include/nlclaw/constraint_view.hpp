#pragma once

#include "nlclaw/mesh_field.hpp"
#include "nlclaw/model.hpp"
#include "nlclaw/nonlocal_stepper.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace nlclaw {

/// Primitive u = int_{-inf}^x w at the interfaces.
struct ReconstructedState {
    Mesh mesh;
    std::vector<double> u_values;
    double time = 0.0;
    double sup_abs_u = 0.0;
    /// max_j |u_{j+1/2} - u_{j-1/2}| / dx, i.e. max_j |w_j|.
    double sup_slope = 0.0;

    double cell_center_value(std::size_t j) const { return 0.5 * (u_values[j] + u_values[j + 1]); }
};

ReconstructedState reconstruct(const DiscreteField& w);

enum class Region : char { I = 'I', J = 'J', K = 'K' };

/// I: |w| <= M - eps (unconstrained conservation law),
/// J: |w| >= M - tol_J (saturated gradient), K: the transition layer.
struct RegionMap {
    std::vector<Region> labels;
    double epsilon = 0.0;
    double tol_J = 0.0;

    std::size_t count(Region r) const;
};

/// tol_J defaults to 1e-6 M. Throws ParameterError for a g without epsilon.
RegionMap classify_regions(const DiscreteField& w, const ConstraintFunction& c,
                           std::optional<double> tol_J = std::nullopt);

struct RegimeResidual {
    double time = 0.0;
    std::size_t count_I = 0;
    std::size_t count_J = 0;
    std::size_t count_K = 0;
    /// max |u_t + f(u)_x| over I cells
    double max_I = 0.0;
    /// sum |u_t + f(u)_x| dx over I cells
    double l1_I = 0.0;
    /// max |u_t + h(w) f(u)_x| over K cells
    double max_K = 0.0;
    double l1_K = 0.0;
    /// max ||w| - M| over J cells
    double max_J_gap = 0.0;
};

struct RegimeReport {
    std::vector<RegimeResidual> entries;
    double max_I = 0.0;
    double max_K = 0.0;
    double l1_I = 0.0;
    double l1_K = 0.0;
    double max_J_gap = 0.0;
};

/// Residuals of the regime equations for the reconstructed primitive at the
/// snapshots nearest to each requested time. u_t is differenced across
/// neighbouring snapshots (centered where both exist), f(u)_x across the
/// interfaces of each cell. Needs at least two snapshots.
RegimeReport regime_equation_residual(const Trajectory& run, const Scenario& s,
                                      std::span<const double> map_times,
                                      std::optional<double> tol_J = std::nullopt);

/// Rows `t,x,label,w,u` with u at the cell center.
void write_regions_csv_header(std::ostream& out);
void write_regions_csv_rows(std::ostream& out, const DiscreteField& w, const RegionMap& map);

} // namespace nlclaw
