#pragma once

#include "nlclaw/mesh_field.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nlclaw {

using RealFunction = std::function<double(double)>;

/// Flux f of the nonlocal velocity f'(int w), with the constants the
/// stability and TV estimates are assembled from. Constants hold on the
/// reachable range [-reach, reach]; prefix integrals never leave it.
struct FluxModel {
    std::string name;
    RealFunction f;
    RealFunction f_prime;
    RealFunction f_second;
    double lip_f_prime = 0.0;
    double lip_f_second = 0.0;
    double sup_f_second = 0.0;
    double reach = 0.0;
    /// True when the constants came from dense sampling rather than a formula.
    bool constants_estimated = false;
    /// Polynomial coefficients a_0, a_1, ... when f is a polynomial.
    std::vector<double> coefficients;

    static FluxModel linear(double c);
    static FluxModel burgers();
    /// f(u) = u^3 / 3.
    static FluxModel cubic(double reach);
    /// f(u) = sum_i a_i u^i with sampled constants.
    static FluxModel polynomial(std::vector<double> coefficients, double reach);
    /// Arbitrary smooth flux; constants are estimated by sampling.
    static FluxModel custom(std::string name, RealFunction f, RealFunction f_prime,
                            RealFunction f_second, double reach);

    /// Same flux with constants recomputed for a new reachable range.
    FluxModel with_reach(double new_reach) const;
};

/// The compactly supported factor g of the flux.
struct ConstraintFunction {
    std::string name;
    RealFunction g;
    /// Cutoff h with g(w) = w h(w); only set for the truncation family.
    RealFunction h;
    double M = 0.0;
    double lip_g = 0.0;
    std::optional<double> epsilon;

    double operator()(double s) const { return g(s); }
};

/// Cubic smoothstep cutoff: 1 on [-M+eps, M-eps], 0 outside (-M, M),
/// 3t^2 - 2t^3 in each band with t the distance from the outer edge over eps.
double smoothstep_cutoff(double s, double M, double epsilon);

/// Exact sup |g'| for g(w) = w * smoothstep_cutoff(w).
double truncation_lipschitz(double M, double epsilon);

/// g(w) = w h_eps(w). Throws ParameterError unless 0 < epsilon < M.
ConstraintFunction make_truncation_g(double M, double epsilon);

/// Any Lipschitz g, for exercising the solver on analytic test problems.
/// Nothing checks that g vanishes outside [-M, M]; validate_scenario does.
ConstraintFunction make_generic_g(std::string name, RealFunction g, double lip_g, double M);

namespace initial {

/// height * cos^4(pi (x - center) / (2 half_width)) on |x - center| < half_width.
struct Bump {
    double center = 0.0;
    double half_width = 1.0;
    double height = 1.0;

    /// Mass of the hump: 3/4 * height * half_width.
    double mass() const { return 0.75 * height * half_width; }
    static Bump with_mass(double center, double height, double mass);
};

struct Box {
    double left = 0.0;
    double right = 1.0;
    double height = 1.0;
};

/// w_left on [left, middle), w_right on [middle, right), zero elsewhere.
struct Riemann {
    double left = -1.0;
    double middle = 0.0;
    double right = 1.0;
    double w_left = 1.0;
    double w_right = 0.0;
};

struct SumOfBumps {
    std::vector<Bump> bumps;
};

struct Zero {};

} // namespace initial

using InitialData =
    std::variant<initial::Zero, initial::Bump, initial::Box, initial::Riemann, initial::SumOfBumps>;

/// Exact cell averages of the initial profile.
DiscreteField discretize(const InitialData& data, const Mesh& mesh);

/// Closed interval outside which the profile vanishes; nullopt for zero data.
std::optional<std::pair<double, double>> support_interval(const InitialData& data);

struct Scenario {
    FluxModel flux;
    ConstraintFunction constraint;
    DiscreteField w0;
    double horizon_T = 1.0;
    /// Continuous profile behind w0, needed to re-mesh for refinement studies.
    std::optional<InitialData> initial_data;
};

/// Discretizes the data and fits the flux constants to ||w0||_1.
Scenario make_scenario(const FluxModel& flux, ConstraintFunction constraint,
                       const InitialData& data, const Mesh& mesh, double horizon_T);

/// Same scenario on another mesh; requires initial_data.
Scenario remesh(const Scenario& s, const Mesh& mesh);

struct Violation {
    std::string assumption;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool violates(const std::string& assumption) const;
};

// Assumption labels used in reports.
inline constexpr const char* kAssumptionFlux = "(100) f in C3, f'' bounded";
inline constexpr const char* kAssumptionSupport = "(110) supp g";
inline constexpr const char* kAssumptionLipschitz = "(110) Lip g";
inline constexpr const char* kAssumptionBound = "(120) |w0| ≤ M";
inline constexpr const char* kAssumptionMargin = "support margin";
inline constexpr const char* kAssumptionHorizon = "horizon T > 0";

ValidationReport validate_scenario(const Scenario& s);

/// sup |f'| over [-||w0||_1, ||w0||_1].
double reachable_velocity_bound(const Scenario& s);

/// Distance the solution support can travel by time T.
double propagation_distance(const Scenario& s);

} // namespace nlclaw
