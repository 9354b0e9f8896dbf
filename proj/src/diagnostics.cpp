#include "nlclaw/diagnostics.hpp"

#include "nlclaw/errors.hpp"
#include "nlclaw/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace nlclaw {

namespace {

constexpr double kSupTolerance = 1e-12;
constexpr double kL1Tolerance = 1e-10;
constexpr double kTvRelativeSlack = 1e-6;
constexpr double kMassTolerance = 1e-11;
constexpr double kEntropyTolerance = 1e-10;
constexpr double kDependenceTolerance = 1e-8;
constexpr double kUniquenessTolerance = 1e-10;
// Round-off allowance when comparing two runs that are contractive in exact
// arithmetic.
constexpr double kPsiRelativeSlack = 1e-12;
constexpr double kExponentSlack = 1e-9;

EstimateCheck make_check(std::string name, std::string eq, double lhs, double rhs, bool pass) {
    return EstimateCheck{std::move(name), std::move(eq), lhs, rhs, rhs - lhs, pass};
}

EstimateCheck tv_check(const Trajectory& run, const Scenario& s) {
    const double tv0 = total_variation(s.w0);
    const double C = tv_growth_constant(s.flux, s.constraint, l1_norm(s.w0));
    EstimateCheck worst = make_check("tv_bound", "(350)", 0.0, 1.0 + tv0, true);
    double worst_ratio = -1.0;
    for (const auto& w : run.snapshots) {
        const double lhs = total_variation(w);
        const double rhs = (1.0 + tv0) * std::exp(C * w.time());
        const double ratio = lhs / rhs;
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            worst = make_check("tv_bound", "(350)", lhs, rhs, lhs <= rhs * (1.0 + kTvRelativeSlack));
        }
    }
    return worst;
}

double psi_at(const Trajectory& w_run, const Trajectory& v_run, std::size_t n) {
    return l1_distance(w_run.at_outer(n), v_run.at_outer(n));
}

double difference_sup(const std::vector<double>& k, const std::vector<double>& l) {
    double m = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        m = std::max(m, std::abs(k[i] - l[i]));
    }
    return m;
}

// Both coefficients equal f'(0) left of the mesh, so the difference starts
// from zero there; right of the mesh it stays at its last value.
double difference_tv(const std::vector<double>& k, const std::vector<double>& l) {
    double tv = std::abs(k.front() - l.front());
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        tv += std::abs((k[i + 1] - l[i + 1]) - (k[i] - l[i]));
    }
    return tv;
}

void require_matching(const Trajectory& w_run, const Trajectory& v_run) {
    if (w_run.n_outer() != v_run.n_outer() || w_run.n_outer() == 0) {
        throw MeshMismatch("trajectories have different outer node counts");
    }
    if (!(w_run.at_outer(0).mesh() == v_run.at_outer(0).mesh())) {
        throw MeshMismatch("trajectories live on different meshes");
    }
    for (std::size_t n = 0; n <= w_run.n_outer(); ++n) {
        if (std::abs(w_run.at_outer(n).time() - v_run.at_outer(n).time()) > 1e-12) {
            throw MeshMismatch("trajectories have different outer node times");
        }
    }
}

std::size_t node_index(const Trajectory& run, double t) {
    for (std::size_t n = 0; n <= run.n_outer(); ++n) {
        if (std::abs(run.at_outer(n).time() - t) <= 1e-9 * std::max(1.0, std::abs(t))) {
            return n;
        }
    }
    throw MeshMismatch("time " + std::to_string(t) + " is not an outer node");
}

// Integral of the estimate's right-hand side over [t_n, t_{n+1}].
double interval_increment(const Trajectory& w_run, const Trajectory& v_run, std::size_t n,
                          const ConstraintFunction& g) {
    const auto& k = w_run.coefficients[n].values;
    const auto& l = v_run.coefficients[n].values;
    const double dt = w_run.at_outer(n + 1).time() - w_run.at_outer(n).time();
    const double tv_min0 =
        std::min(total_variation(w_run.at_outer(n)), total_variation(v_run.at_outer(n)));
    const double tv_min1 =
        std::min(total_variation(w_run.at_outer(n + 1)), total_variation(v_run.at_outer(n + 1)));
    return dt * (g.lip_g * difference_sup(k, l) * 0.5 * (tv_min0 + tv_min1) +
                 g.M * difference_tv(k, l));
}

} // namespace

bool MonitorReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const EstimateCheck& c) { return c.pass; });
}

const EstimateCheck* MonitorReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

MonitorReport solution_estimates_monitor(const Trajectory& run, const Scenario& s) {
    MonitorReport report{"solution_estimates", {}};
    const double M = s.constraint.M;
    const double l1_0 = l1_norm(s.w0);
    double sup = 0.0;
    double l1_max = 0.0;
    for (const auto& w : run.snapshots) {
        sup = std::max(sup, linf_norm(w));
        l1_max = std::max(l1_max, l1_norm(w));
    }
    report.checks.push_back(make_check("linf_bound", "(40)", sup, M, sup <= M + kSupTolerance));
    report.checks.push_back(
        make_check("l1_bound", "(60)", l1_max, l1_0, l1_max <= l1_0 + kL1Tolerance));
    EstimateCheck tv = tv_check(run, s);
    tv.paper_eq = "(65)";
    report.checks.push_back(tv);
    return report;
}

MonitorReport splitting_monitor(const Trajectory& run, const Scenario& s) {
    MonitorReport report{"splitting", {}};
    const double M = s.constraint.M;
    double sup = 0.0;
    for (const auto& w : run.snapshots) {
        sup = std::max(sup, linf_norm(w));
    }
    report.checks.push_back(make_check("linf_bound", "(360)", sup, M, sup <= M + kSupTolerance));

    double worst_increase = -std::numeric_limits<double>::infinity();
    double mass_drift = 0.0;
    double entropy = 0.0;
    const double mass0 = run.diagnostics.front().mass;
    for (std::size_t n = 1; n < run.diagnostics.size(); ++n) {
        worst_increase =
            std::max(worst_increase, run.diagnostics[n].l1 - run.diagnostics[n - 1].l1);
        mass_drift = std::max(mass_drift, std::abs(run.diagnostics[n].mass - mass0));
        entropy = std::max(entropy, run.diagnostics[n].max_entropy_residual);
    }
    if (run.diagnostics.size() < 2) {
        worst_increase = 0.0;
    }
    report.checks.push_back(make_check("l1_nonincrease", "(370)", worst_increase, kL1Tolerance,
                                       worst_increase <= kL1Tolerance));
    report.checks.push_back(tv_check(run, s));
    const double mass_tol = kMassTolerance * (1.0 + std::abs(mass0));
    report.checks.push_back(
        make_check("mass_conservation", "", mass_drift, mass_tol, mass_drift <= mass_tol));
    report.checks.push_back(
        make_check("entropy_residual", "", entropy, kEntropyTolerance, entropy <= kEntropyTolerance));
    return report;
}

double tv_envelope(const FluxModel& flux, const ConstraintFunction& g, const DiscreteField& w0,
                   double tau) {
    return (total_variation(w0) + tau * flux.sup_f_second * l1_norm(w0)) *
           std::exp(g.M * g.lip_g * flux.sup_f_second * tau);
}

double stability_constant(const FluxModel& flux, const ConstraintFunction& g,
                          const DiscreteField& w0, const DiscreteField& v0, double horizon_T) {
    const double theta = std::min(tv_envelope(flux, g, w0, horizon_T),
                                  tv_envelope(flux, g, v0, horizon_T));
    const double l1_min = std::min(l1_norm(w0), l1_norm(v0));
    return g.lip_g * flux.lip_f_prime * theta +
           g.M * (flux.lip_f_second * l1_min + flux.sup_f_second);
}

DiscreteField perturbed_data(const DiscreteField& w0, double rho, const initial::Bump& shape) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw ParameterError("perturbation size must lie in [0, 1]");
    }
    initial::Bump unit = shape;
    unit.height = 1.0;
    const DiscreteField phi = discretize(unit, w0.mesh());
    const double scale = linf_norm(w0);
    std::vector<double> v(w0.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = (1.0 - rho) * w0[j] + rho * scale * phi[j];
    }
    return DiscreteField(w0.mesh(), std::move(v), w0.time());
}

StabilityOutcome stability_experiment(const Scenario& s, const DiscreteField& w0,
                                      const DiscreteField& v0, const SplittingParameters& p,
                                      const SolveOptions& opt) {
    if (!(w0.mesh() == v0.mesh())) {
        throw MeshMismatch("stability_experiment: initial data on different meshes");
    }
    const double reach = std::max(l1_norm(w0), l1_norm(v0));
    Scenario sw = s;
    sw.flux = s.flux.with_reach(reach);
    sw.w0 = w0;
    Scenario sv = sw;
    sv.w0 = v0;

    std::optional<Trajectory> runs[2];
    parallel_for(2, [&](std::size_t i) { runs[i] = solve(i == 0 ? sw : sv, p, opt); });

    StabilityOutcome out{{}, std::move(*runs[0]), std::move(*runs[1])};
    StabilityRecord& rec = out.record;
    rec.bound_C = stability_constant(sw.flux, s.constraint, w0, v0, s.horizon_T);
    rec.psi0 = l1_distance(w0, v0);

    double growth = -std::numeric_limits<double>::infinity();
    bool within = true;
    for (std::size_t n = 0; n <= out.w_run.n_outer(); ++n) {
        const double t = out.w_run.at_outer(n).time();
        const double psi = psi_at(out.w_run, out.v_run, n);
        rec.times.push_back(t);
        rec.psi.push_back(psi);
        if (n > 0 && rec.psi0 > 0.0 && psi > 0.0) {
            growth = std::max(growth, std::log(psi / rec.psi0) / t);
        }
        if (rec.psi0 == 0.0 && psi > kUniquenessTolerance) {
            rec.uniqueness_violation = true;
        }
        if (psi > std::exp(rec.bound_C * t) * rec.psi0 * (1.0 + kPsiRelativeSlack)) {
            within = false;
        }
    }
    rec.psi.front() = rec.psi0;
    rec.growth_exponent = std::isfinite(growth) ? growth : 0.0;
    rec.bound_holds = within && !rec.uniqueness_violation &&
                      rec.growth_exponent <= rec.bound_C + kExponentSlack;
    return out;
}

DependenceTerms dependence_terms(const Trajectory& w_run, const Trajectory& v_run,
                                 std::size_t n, const FluxModel& flux,
                                 const ConstraintFunction& g) {
    require_matching(w_run, v_run);
    if (n >= w_run.n_outer()) {
        throw ParameterError("dependence_terms: interval index out of range");
    }
    const auto& k = w_run.coefficients[n].values;
    const auto& l = v_run.coefficients[n].values;
    const double t = w_run.at_outer(n).time();
    DependenceTerms d;
    d.sup_k_minus_l = difference_sup(k, l);
    d.tv_k_minus_l = difference_tv(k, l);
    d.tv_w = total_variation(w_run.at_outer(n));
    d.tv_v = total_variation(v_run.at_outer(n));
    d.theta_w = tv_envelope(flux, g, w_run.at_outer(0), t);
    d.theta_v = tv_envelope(flux, g, v_run.at_outer(0), t);
    return d;
}

DependenceReport continuous_dependence_check(const Trajectory& w_run, const Trajectory& v_run,
                                             const ConstraintFunction& g, double t1, double t2) {
    require_matching(w_run, v_run);
    const std::size_t i1 = node_index(w_run, t1);
    const std::size_t i2 = node_index(w_run, t2);
    if (i1 > i2) {
        throw ParameterError("continuous_dependence_check: t1 > t2");
    }
    DependenceReport r;
    r.t1 = w_run.at_outer(i1).time();
    r.t2 = w_run.at_outer(i2).time();
    r.psi_t1 = psi_at(w_run, v_run, i1);
    r.psi_t2 = psi_at(w_run, v_run, i2);
    r.rhs = r.psi_t1;
    for (std::size_t n = i1; n < i2; ++n) {
        r.rhs += interval_increment(w_run, v_run, n, g);
    }
    r.residual = r.rhs - r.psi_t2;
    r.pass = r.residual >= -kDependenceTolerance;
    return r;
}

DependenceReport continuous_dependence_worst(const Trajectory& w_run, const Trajectory& v_run,
                                             const ConstraintFunction& g) {
    require_matching(w_run, v_run);
    const std::size_t nodes = w_run.n_outer() + 1;
    std::vector<double> psi(nodes);
    std::vector<double> cumulative(nodes, 0.0);
    for (std::size_t n = 0; n < nodes; ++n) {
        psi[n] = psi_at(w_run, v_run, n);
        if (n > 0) {
            cumulative[n] = cumulative[n - 1] + interval_increment(w_run, v_run, n - 1, g);
        }
    }
    DependenceReport worst;
    worst.residual = std::numeric_limits<double>::infinity();
    for (std::size_t i1 = 0; i1 < nodes; ++i1) {
        for (std::size_t i2 = i1; i2 < nodes; ++i2) {
            const double rhs = psi[i1] + (cumulative[i2] - cumulative[i1]);
            const double residual = rhs - psi[i2];
            if (residual < worst.residual) {
                worst = DependenceReport{w_run.at_outer(i1).time(), w_run.at_outer(i2).time(),
                                         psi[i1], psi[i2], rhs, residual,
                                         residual >= -kDependenceTolerance};
            }
        }
    }
    return worst;
}

} // namespace nlclaw
