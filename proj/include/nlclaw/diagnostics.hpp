#pragma once

#include "nlclaw/model.hpp"
#include "nlclaw/nonlocal_stepper.hpp"

#include <string>
#include <vector>

namespace nlclaw {

/// One inequality lhs <= rhs checked against a run.
struct EstimateCheck {
    std::string name;
    std::string paper_eq;
    double lhs = 0.0;
    double rhs = 0.0;
    /// rhs - lhs
    double margin = 0.0;
    bool pass = false;
};

struct MonitorReport {
    std::string monitor;
    std::vector<EstimateCheck> checks;

    bool pass() const;
    const EstimateCheck* find(const std::string& name) const;
};

/// Sup norm bound by M, L1 bound by ||w0||_1 and the exponential TV bound,
/// evaluated on every snapshot. Margins are reported at the worst snapshot.
MonitorReport solution_estimates_monitor(const Trajectory& run, const Scenario& s);

/// Node-by-node monitors of a coefficient-freezing run: sup norm, L1
/// nonincrease between outer nodes, TV bound, mass conservation and the
/// largest discrete entropy residual.
MonitorReport splitting_monitor(const Trajectory& run, const Scenario& s);

struct StabilityRecord {
    std::vector<double> times;
    std::vector<double> psi;
    double psi0 = 0.0;
    /// Least C with psi(t_n) <= e^{C t_n} psi0 over the recorded nodes
    /// (0 when psi0 = 0).
    double growth_exponent = 0.0;
    double bound_C = 0.0;
    /// psi0 = 0 but the runs separated.
    bool uniqueness_violation = false;
    /// growth_exponent <= bound_C and psi(t_n) <= e^{bound_C t_n} psi0 at every node.
    bool bound_holds = false;
};

struct StabilityOutcome {
    StabilityRecord record;
    Trajectory w_run;
    Trajectory v_run;
};

/// Stability rate for two runs of the nonlocal problem:
///   a(T) = lip_g lip_f' min(Theta_w(T), Theta_v(T))
///        + M (lip_f'' min(||w0||_1, ||v0||_1) + sup|f''|),
/// from ||k - l||_inf <= lip_f' psi, TV(k - l) <= psi (lip_f'' min||.||_1 + sup|f''|)
/// and the TV bound Theta. Gronwall then gives psi(t) <= e^{a(T) t} psi(0) on [0, T].
double stability_constant(const FluxModel& flux, const ConstraintFunction& g,
                          const DiscreteField& w0, const DiscreteField& v0, double horizon_T);

/// Theta(tau, w0) = (TV(w0) + tau sup|f''| ||w0||_1) e^{M lip_g sup|f''| tau}.
double tv_envelope(const FluxModel& flux, const ConstraintFunction& g, const DiscreteField& w0,
                   double tau);

/// (1 - rho) w0 + rho ||w0||_inf phi with phi the unit-height hump `shape`;
/// keeps |v0| <= M whenever |w0| <= M.
DiscreteField perturbed_data(const DiscreteField& w0, double rho, const initial::Bump& shape);

/// Runs the scenario from w0 and v0 on identical discretizations and
/// compares psi(t) = ||w(t) - v(t)||_1 against e^{bound_C t} psi(0).
StabilityOutcome stability_experiment(const Scenario& s, const DiscreteField& w0,
                                      const DiscreteField& v0, const SplittingParameters& p,
                                      const SolveOptions& opt = {});

/// Integrand ingredients of the continuous dependence estimate on one frozen
/// interval [t_n, t_{n+1}).
struct DependenceTerms {
    double sup_k_minus_l = 0.0;
    double tv_k_minus_l = 0.0;
    double tv_w = 0.0;
    double tv_v = 0.0;
    double theta_w = 0.0;
    double theta_v = 0.0;
};

DependenceTerms dependence_terms(const Trajectory& w_run, const Trajectory& v_run,
                                 std::size_t n, const FluxModel& flux,
                                 const ConstraintFunction& g);

struct DependenceReport {
    double t1 = 0.0;
    double t2 = 0.0;
    double psi_t1 = 0.0;
    double psi_t2 = 0.0;
    double rhs = 0.0;
    /// rhs - psi(t2); the estimate holds when this is >= -1e-8.
    double residual = 0.0;
    bool pass = false;
};

/// psi(t2) <= psi(t1) + int_{t1}^{t2} lip_g ||k - l||_inf min(TV w, TV v) + M TV(k - l),
/// with the coefficients frozen per interval and TV integrated by the
/// trapezoid rule over outer nodes. t1 <= t2 must be outer node times.
DependenceReport continuous_dependence_check(const Trajectory& w_run, const Trajectory& v_run,
                                             const ConstraintFunction& g, double t1, double t2);

/// The same check over every pair of outer nodes; returns the worst pair.
DependenceReport continuous_dependence_worst(const Trajectory& w_run, const Trajectory& v_run,
                                             const ConstraintFunction& g);

} // namespace nlclaw
