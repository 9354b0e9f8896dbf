#pragma once

#include "nlclaw/mesh_field.hpp"
#include "nlclaw/model.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace nlclaw {

/// Velocity k sampled at the n_cells + 1 interfaces, held fixed in time.
/// Outside the mesh k is extended by its end values.
struct FrozenCoefficient {
    std::vector<double> values;
    /// max_j |k_{j+1/2} - k_{j-1/2}| / dx
    double lip_x_k = 0.0;
    /// Total variation of the difference quotient of k (zero outside the mesh).
    double tv_dx_k = 0.0;
    double sup_abs = 0.0;
    /// max_j |k_{j+1/2} - k_{j-1/2}|
    double max_jump = 0.0;

    static FrozenCoefficient from_values(std::vector<double> values, double dx);
    static FrozenCoefficient constant(double k, const Mesh& mesh);
};

/// k_{j+1/2} = f'(U_{j+1/2}) with U the prefix integral of w.
FrozenCoefficient build_coefficient(const DiscreteField& w, const FluxModel& flux);

struct StepParameters {
    double dt = 0.0;
    double dx = 0.0;
    double cfl_safety = 0.9;

    double lambda() const { return dt / dx; }
};

/// Largest dt keeping the Rusanov update monotone with margin cfl_safety:
///   (dt/dx) lip_g (max(sup|k|, 1) + max_jump / 2) <= cfl_safety.
double admissible_dt(const FrozenCoefficient& k, const ConstraintFunction& g, double dx,
                     double cfl_safety);

/// Local Lax-Friedrichs flux for s -> k g(s) with viscosity |k| lip_g.
inline double numerical_flux(double k_iface, double w_left, double w_right,
                             const ConstraintFunction& g) {
    const double alpha = std::abs(k_iface) * g.lip_g;
    return 0.5 * k_iface * (g(w_left) + g(w_right)) - 0.5 * alpha * (w_right - w_left);
}

/// One conservative explicit step with zero ghost values on both sides.
/// Throws CflError when dt is not admissible and ParameterError when
/// dx (lip_x_k + 1) > 1.
DiscreteField step(const DiscreteField& w, const FrozenCoefficient& k, const StepParameters& p,
                   const ConstraintFunction& g);

/// Advances by exactly t_span using ceil(t_span / p.dt) equal steps.
DiscreteField evolve(const DiscreteField& w, const FrozenCoefficient& k, double t_span,
                     const StepParameters& p, const ConstraintFunction& g);

/// Number of equal substeps evolve uses for t_span.
std::size_t substep_count(double t_span, double dt_max);

/// Per-cell discrete Kruzhkov residual of one step for the entropy level c:
///   (|w'_j - c| - |w_j - c|)/dt + (Q_{j+1/2} - Q_{j-1/2})/dx
///     + (k_{j+1/2} - k_{j-1/2})/dx g(c) sign(w'_j - c)
/// with Q(a, b) = F(a v c, b v c) - F(a ^ c, b ^ c). Nonpositive up to
/// round-off whenever the step was monotone.
std::vector<double> discrete_entropy_residual(const DiscreteField& w_before,
                                              const DiscreteField& w_after,
                                              const FrozenCoefficient& k, const StepParameters& p,
                                              const ConstraintFunction& g, double c);

} // namespace nlclaw
