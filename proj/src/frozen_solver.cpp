#include "nlclaw/frozen_solver.hpp"

#include "nlclaw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nlclaw {

FrozenCoefficient FrozenCoefficient::from_values(std::vector<double> values, double dx) {
    if (values.size() < 2) {
        throw ParameterError("coefficient needs at least two interface values");
    }
    FrozenCoefficient k;
    k.values = std::move(values);
    const auto& v = k.values;
    double prev_slope = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw ModelError("coefficient value at interface " + std::to_string(i) +
                             " is not finite");
        }
        k.sup_abs = std::max(k.sup_abs, std::abs(v[i]));
        if (i + 1 < v.size()) {
            const double jump = v[i + 1] - v[i];
            const double slope = jump / dx;
            k.max_jump = std::max(k.max_jump, std::abs(jump));
            k.tv_dx_k += std::abs(slope - prev_slope);
            prev_slope = slope;
        }
    }
    k.tv_dx_k += std::abs(prev_slope);
    k.lip_x_k = k.max_jump / dx;
    return k;
}

FrozenCoefficient FrozenCoefficient::constant(double value, const Mesh& mesh) {
    return from_values(std::vector<double>(mesh.n_cells() + 1, value), mesh.dx());
}

FrozenCoefficient build_coefficient(const DiscreteField& w, const FluxModel& flux) {
    std::vector<double> u = prefix_integral(w);
    for (double& x : u) {
        x = flux.f_prime(x);
    }
    return FrozenCoefficient::from_values(std::move(u), w.mesh().dx());
}

double admissible_dt(const FrozenCoefficient& k, const ConstraintFunction& g, double dx,
                     double cfl_safety) {
    const double speed = g.lip_g * (std::max(k.sup_abs, 1.0) + 0.5 * k.max_jump);
    if (speed == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return cfl_safety * dx / speed;
}

namespace {

void check_step_inputs(const DiscreteField& w, const FrozenCoefficient& k,
                       const StepParameters& p, const ConstraintFunction& g) {
    const Mesh& mesh = w.mesh();
    if (k.values.size() != mesh.n_cells() + 1) {
        throw MeshMismatch("coefficient has " + std::to_string(k.values.size()) +
                           " interface values, mesh has " + std::to_string(mesh.n_cells() + 1));
    }
    if (std::abs(p.dx - mesh.dx()) > 1e-14 * mesh.dx()) {
        throw MeshMismatch("step parameters dx differs from the mesh dx");
    }
    if (!(p.cfl_safety > 0.0 && p.cfl_safety <= 1.0)) {
        throw ParameterError("cfl_safety must lie in (0, 1]");
    }
    const double dt_max = admissible_dt(k, g, mesh.dx(), p.cfl_safety);
    if (!(p.dt > 0.0) || p.dt > dt_max * (1.0 + 1e-12)) {
        throw CflError("dt = " + std::to_string(p.dt) + " violates the CFL restriction; " +
                           "admissible dt <= " + std::to_string(dt_max),
                       dt_max);
    }
    if (mesh.dx() * (k.lip_x_k + 1.0) > 1.0) {
        throw ParameterError("mesh too coarse for the coefficient: dx (lip_x_k + 1) = " +
                             std::to_string(mesh.dx() * (k.lip_x_k + 1.0)) + " > 1");
    }
}

} // namespace

DiscreteField step(const DiscreteField& w, const FrozenCoefficient& k, const StepParameters& p,
                   const ConstraintFunction& g) {
    check_step_inputs(w, k, p, g);
    const std::size_t n = w.size();
    const auto wv = w.values();
    const auto& kv = k.values;

    // g at cells 0..n-1 and at the zero ghost.
    std::vector<double> gv(n);
    for (std::size_t j = 0; j < n; ++j) {
        gv[j] = g(wv[j]);
    }
    const double g_ghost = g(0.0);

    // F_i lives at interface i, between cells i-1 and i.
    std::vector<double> flux(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double wl = i == 0 ? 0.0 : wv[i - 1];
        const double wr = i == n ? 0.0 : wv[i];
        const double gl = i == 0 ? g_ghost : gv[i - 1];
        const double gr = i == n ? g_ghost : gv[i];
        const double alpha = std::abs(kv[i]) * g.lip_g;
        flux[i] = 0.5 * kv[i] * (gl + gr) - 0.5 * alpha * (wr - wl);
    }

    const double lambda = p.lambda();
    std::vector<double> next(n);
    for (std::size_t j = 0; j < n; ++j) {
        next[j] = wv[j] - lambda * (flux[j + 1] - flux[j]);
    }
    return DiscreteField(w.mesh(), std::move(next), w.time() + p.dt);
}

std::size_t substep_count(double t_span, double dt_max) {
    if (t_span <= 0.0) {
        return 0;
    }
    const double ratio = t_span / dt_max;
    const double nearest = std::round(ratio);
    if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * nearest) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(ratio));
}

DiscreteField evolve(const DiscreteField& w, const FrozenCoefficient& k, double t_span,
                     const StepParameters& p, const ConstraintFunction& g) {
    if (t_span < 0.0) {
        throw ParameterError("evolve: negative time span");
    }
    const std::size_t steps = substep_count(t_span, p.dt);
    if (steps == 0) {
        return w;
    }
    StepParameters sub = p;
    sub.dt = t_span / static_cast<double>(steps);
    DiscreteField cur = w;
    for (std::size_t s = 0; s < steps; ++s) {
        cur = step(cur, k, sub, g);
    }
    return cur.at_time(w.time() + t_span);
}

std::vector<double> discrete_entropy_residual(const DiscreteField& w_before,
                                              const DiscreteField& w_after,
                                              const FrozenCoefficient& k, const StepParameters& p,
                                              const ConstraintFunction& g, double c) {
    if (!(w_before.mesh() == w_after.mesh())) {
        throw MeshMismatch("entropy residual: before/after fields on different meshes");
    }
    const std::size_t n = w_before.size();
    if (k.values.size() != n + 1) {
        throw MeshMismatch("entropy residual: coefficient does not match the mesh");
    }
    if (!(p.dt > 0.0)) {
        throw ParameterError("entropy residual: dt must be positive");
    }
    const auto wv = w_before.values();
    const auto wn = w_after.values();
    const auto& kv = k.values;
    const double dx = w_before.mesh().dx();

    std::vector<double> q(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double a = i == 0 ? 0.0 : wv[i - 1];
        const double b = i == n ? 0.0 : wv[i];
        q[i] = numerical_flux(kv[i], std::max(a, c), std::max(b, c), g) -
               numerical_flux(kv[i], std::min(a, c), std::min(b, c), g);
    }

    const double gc = g(c);
    std::vector<double> r(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double diff = wn[j] - c;
        const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
        r[j] = (std::abs(diff) - std::abs(wv[j] - c)) / p.dt + (q[j + 1] - q[j]) / dx +
               (kv[j + 1] - kv[j]) / dx * gc * sign;
    }
    return r;
}

} // namespace nlclaw
