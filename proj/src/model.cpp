#include "nlclaw/model.hpp"

#include "nlclaw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nlclaw {

namespace {

constexpr std::size_t kSamplePoints = 10000;

double sample_sup_abs(const RealFunction& fn, double a, double b) {
    if (a == b) {
        return std::abs(fn(a));
    }
    double sup = 0.0;
    for (std::size_t i = 0; i <= kSamplePoints; ++i) {
        const double s = a + (b - a) * static_cast<double>(i) / kSamplePoints;
        sup = std::max(sup, std::abs(fn(s)));
    }
    return sup;
}

double sample_lipschitz(const RealFunction& fn, double a, double b) {
    if (a == b) {
        return 0.0;
    }
    const double h = (b - a) / kSamplePoints;
    double lip = 0.0;
    double prev = fn(a);
    for (std::size_t i = 1; i <= kSamplePoints; ++i) {
        const double cur = fn(a + h * static_cast<double>(i));
        lip = std::max(lip, std::abs(cur - prev) / h);
        prev = cur;
    }
    return lip;
}

double horner(std::span<const double> c, double u) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * u + *it;
    }
    return acc;
}

std::vector<double> derivative(std::span<const double> c) {
    std::vector<double> d;
    for (std::size_t i = 1; i < c.size(); ++i) {
        d.push_back(static_cast<double>(i) * c[i]);
    }
    return d;
}

void fill_polynomial(FluxModel& m, std::vector<double> coefficients) {
    auto d1 = derivative(coefficients);
    auto d2 = derivative(d1);
    m.coefficients = std::move(coefficients);
    m.f = [c = m.coefficients](double u) { return horner(c, u); };
    m.f_prime = [c = std::move(d1)](double u) { return horner(c, u); };
    m.f_second = [c = std::move(d2)](double u) { return horner(c, u); };
}

void estimate_constants(FluxModel& m) {
    const double r = m.reach;
    m.sup_f_second = sample_sup_abs(m.f_second, -r, r);
    m.lip_f_prime = std::max(m.sup_f_second, sample_lipschitz(m.f_prime, -r, r));
    m.lip_f_second = sample_lipschitz(m.f_second, -r, r);
    m.constants_estimated = true;
}

// Cell integral of height * cos^4(theta), theta = pi (x - c) / (2 r), clipped
// to the hump.
double bump_integral(const initial::Bump& b, double x0, double x1) {
    const double k = std::numbers::pi / (2.0 * b.half_width);
    const auto primitive = [&](double x) {
        const double th = std::clamp(k * (x - b.center), -std::numbers::pi / 2,
                                     std::numbers::pi / 2);
        return 3.0 * th / 8.0 + std::sin(2.0 * th) / 4.0 + std::sin(4.0 * th) / 32.0;
    };
    return b.height * (primitive(x1) - primitive(x0)) / k;
}

double overlap(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double cell_integral(const InitialData& data, double x0, double x1) {
    return std::visit(
        Overloaded{
            [](const initial::Zero&) { return 0.0; },
            [&](const initial::Bump& b) { return bump_integral(b, x0, x1); },
            [&](const initial::Box& b) { return b.height * overlap(x0, x1, b.left, b.right); },
            [&](const initial::Riemann& r) {
                return r.w_left * overlap(x0, x1, r.left, r.middle) +
                       r.w_right * overlap(x0, x1, r.middle, r.right);
            },
            [&](const initial::SumOfBumps& s) {
                double sum = 0.0;
                for (const auto& b : s.bumps) {
                    sum += bump_integral(b, x0, x1);
                }
                return sum;
            },
        },
        data);
}

// Range of the profile; averages are clamped into it to absorb round-off
// in the overlap lengths.
std::pair<double, double> value_range(const InitialData& data) {
    const auto with_zero = [](double a, double b) {
        return std::pair{std::min({0.0, a, b}), std::max({0.0, a, b})};
    };
    return std::visit(
        Overloaded{
            [](const initial::Zero&) { return std::pair{0.0, 0.0}; },
            [&](const initial::Bump& b) { return with_zero(b.height, b.height); },
            [&](const initial::Box& b) { return with_zero(b.height, b.height); },
            [&](const initial::Riemann& r) { return with_zero(r.w_left, r.w_right); },
            [](const initial::SumOfBumps& s) {
                std::pair<double, double> r{0.0, 0.0};
                for (const auto& b : s.bumps) {
                    (b.height < 0.0 ? r.first : r.second) += b.height;
                }
                return r;
            },
        },
        data);
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

FluxModel FluxModel::linear(double c) {
    FluxModel m;
    m.name = "linear";
    fill_polynomial(m, {0.0, c});
    return m;
}

FluxModel FluxModel::burgers() {
    FluxModel m;
    m.name = "burgers";
    fill_polynomial(m, {0.0, 0.0, 0.5});
    m.lip_f_prime = 1.0;
    m.sup_f_second = 1.0;
    return m;
}

FluxModel FluxModel::cubic(double reach) {
    FluxModel m;
    m.name = "cubic";
    fill_polynomial(m, {0.0, 0.0, 0.0, 1.0 / 3.0});
    m.reach = reach;
    m.lip_f_prime = 2.0 * reach;
    m.sup_f_second = 2.0 * reach;
    m.lip_f_second = 2.0;
    return m;
}

FluxModel FluxModel::polynomial(std::vector<double> coefficients, double reach) {
    if (coefficients.empty()) {
        throw ParameterError("polynomial flux needs at least one coefficient");
    }
    FluxModel m;
    m.name = "polynomial";
    fill_polynomial(m, std::move(coefficients));
    m.reach = reach;
    estimate_constants(m);
    return m;
}

FluxModel FluxModel::custom(std::string name, RealFunction f, RealFunction f_prime,
                            RealFunction f_second, double reach) {
    FluxModel m;
    m.name = std::move(name);
    m.f = std::move(f);
    m.f_prime = std::move(f_prime);
    m.f_second = std::move(f_second);
    m.reach = reach;
    estimate_constants(m);
    return m;
}

FluxModel FluxModel::with_reach(double new_reach) const {
    if (name == "linear" || name == "burgers") {
        FluxModel m = *this;
        m.reach = new_reach;
        return m;
    }
    if (name == "cubic") {
        return cubic(new_reach);
    }
    FluxModel m = *this;
    m.reach = new_reach;
    estimate_constants(m);
    return m;
}

double smoothstep_cutoff(double s, double M, double epsilon) {
    const double a = std::abs(s);
    if (a <= M - epsilon) {
        return 1.0;
    }
    if (a >= M) {
        return 0.0;
    }
    const double t = (M - a) / epsilon;
    return t * t * (3.0 - 2.0 * t);
}

double truncation_lipschitz(double M, double epsilon) {
    // In the band, with s = M - eps t:  g'(t) = 9t^2 - 8t^3 - 6r t (1 - t), r = M/eps.
    const double r = M / epsilon;
    const auto slope = [r](double t) { return 9.0 * t * t - 8.0 * t * t * t - 6.0 * r * t * (1.0 - t); };
    double lip = 1.0;
    // Critical points solve 4t^2 - (3 + 2r) t + r = 0.
    const double b = 3.0 + 2.0 * r;
    const double disc = b * b - 16.0 * r;
    if (disc >= 0.0) {
        for (double t : {(b - std::sqrt(disc)) / 8.0, (b + std::sqrt(disc)) / 8.0}) {
            if (t > 0.0 && t < 1.0) {
                lip = std::max(lip, std::abs(slope(t)));
            }
        }
    }
    return lip;
}

ConstraintFunction make_truncation_g(double M, double epsilon) {
    if (!(M > 0.0) || !std::isfinite(M)) {
        throw ParameterError("constraint bound M must be positive");
    }
    if (!(epsilon > 0.0 && epsilon < M)) {
        throw ParameterError("epsilon must lie in (0, M), got " + fmt_double(epsilon));
    }
    ConstraintFunction c;
    c.name = "truncation";
    c.M = M;
    c.epsilon = epsilon;
    c.h = [M, epsilon](double s) { return smoothstep_cutoff(s, M, epsilon); };
    c.g = [M, epsilon](double s) { return s * smoothstep_cutoff(s, M, epsilon); };
    c.lip_g = truncation_lipschitz(M, epsilon);
    return c;
}

ConstraintFunction make_generic_g(std::string name, RealFunction g, double lip_g, double M) {
    if (!(lip_g >= 0.0) || !(M > 0.0)) {
        throw ParameterError("generic g needs lip_g >= 0 and M > 0");
    }
    ConstraintFunction c;
    c.name = std::move(name);
    c.g = std::move(g);
    c.M = M;
    c.lip_g = lip_g;
    return c;
}

initial::Bump initial::Bump::with_mass(double center, double height, double mass) {
    if (!(height != 0.0) || !(mass / height > 0.0)) {
        throw ParameterError("bump mass and height must be nonzero with equal sign");
    }
    return Bump{center, mass / (0.75 * height), height};
}

DiscreteField discretize(const InitialData& data, const Mesh& mesh) {
    std::vector<double> values(mesh.n_cells());
    const double dx = mesh.dx();
    const auto [lo, hi] = value_range(data);
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double x0 = mesh.interface_position(j);
        values[j] = std::clamp(cell_integral(data, x0, x0 + dx) / dx, lo, hi);
    }
    return DiscreteField(mesh, std::move(values));
}

std::optional<std::pair<double, double>> support_interval(const InitialData& data) {
    using Interval = std::optional<std::pair<double, double>>;
    return std::visit(
        Overloaded{
            [](const initial::Zero&) -> Interval { return std::nullopt; },
            [](const initial::Bump& b) -> Interval {
                return std::pair{b.center - b.half_width, b.center + b.half_width};
            },
            [](const initial::Box& b) -> Interval { return std::pair{b.left, b.right}; },
            [](const initial::Riemann& r) -> Interval { return std::pair{r.left, r.right}; },
            [](const initial::SumOfBumps& s) -> Interval {
                Interval out;
                for (const auto& b : s.bumps) {
                    const double lo = b.center - b.half_width;
                    const double hi = b.center + b.half_width;
                    out = out ? std::pair{std::min(out->first, lo), std::max(out->second, hi)}
                              : std::pair{lo, hi};
                }
                return out;
            },
        },
        data);
}

Scenario make_scenario(const FluxModel& flux, ConstraintFunction constraint,
                       const InitialData& data, const Mesh& mesh, double horizon_T) {
    DiscreteField w0 = discretize(data, mesh);
    FluxModel fitted = flux.with_reach(l1_norm(w0));
    return Scenario{std::move(fitted), std::move(constraint), std::move(w0), horizon_T, data};
}

Scenario remesh(const Scenario& s, const Mesh& mesh) {
    if (!s.initial_data) {
        throw ParameterError("remesh: scenario carries no continuous initial data");
    }
    return make_scenario(s.flux, s.constraint, *s.initial_data, mesh, s.horizon_T);
}

bool ValidationReport::violates(const std::string& assumption) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.assumption == assumption; });
}

double reachable_velocity_bound(const Scenario& s) {
    const double r = l1_norm(s.w0);
    return sample_sup_abs(s.flux.f_prime, -r, r);
}

double propagation_distance(const Scenario& s) {
    return s.horizon_T * reachable_velocity_bound(s) * s.constraint.lip_g;
}

ValidationReport validate_scenario(const Scenario& s) {
    ValidationReport report;
    const auto flag = [&](const char* assumption, std::string detail) {
        report.violations.push_back({assumption, std::move(detail)});
    };

    if (!(s.horizon_T > 0.0) || !std::isfinite(s.horizon_T)) {
        flag(kAssumptionHorizon, "horizon_T = " + fmt_double(s.horizon_T));
    }

    const double M = s.constraint.M;
    const double w_max = linf_norm(s.w0);
    if (w_max > M) {
        flag(kAssumptionBound, "max |w0| = " + fmt_double(w_max) + " exceeds M = " + fmt_double(M));
    }

    // g must vanish on |s| >= M.
    for (int i = 0; i <= 1000; ++i) {
        const double a = M * (1.0 + 2.0 * i / 1000.0);
        for (double x : {a, -a}) {
            const double gx = s.constraint.g(x);
            if (!(std::abs(gx) <= 1e-14 * M)) {
                flag(kAssumptionSupport, "g(" + fmt_double(x) + ") = " + fmt_double(gx) + " != 0");
                i = 1001;
                break;
            }
        }
    }

    {
        const int n = 4000;
        const double a = -1.5 * M;
        const double h = 3.0 * M / n;
        double prev = s.constraint.g(a);
        for (int i = 1; i <= n; ++i) {
            const double cur = s.constraint.g(a + h * i);
            const double q = std::abs(cur - prev) / h;
            if (!std::isfinite(cur) || q > s.constraint.lip_g * (1.0 + 1e-9) + 1e-9) {
                flag(kAssumptionLipschitz, "difference quotient " + fmt_double(q) +
                                               " exceeds lip_g = " + fmt_double(s.constraint.lip_g));
                break;
            }
            prev = cur;
        }
    }

    // Derivative consistency of f on the reachable range.
    {
        const double r = l1_norm(s.w0);
        const int n = r > 0.0 ? 200 : 0;
        for (int i = 0; i <= n; ++i) {
            const double u = n == 0 ? 0.0 : -r + 2.0 * r * i / n;
            const double h = 1e-4 * std::max(1.0, std::abs(u));
            const double d1 = (s.flux.f(u + h) - s.flux.f(u - h)) / (2.0 * h);
            const double d2 = (s.flux.f_prime(u + h) - s.flux.f_prime(u - h)) / (2.0 * h);
            const double fp = s.flux.f_prime(u);
            const double fpp = s.flux.f_second(u);
            if (!std::isfinite(fp) || !std::isfinite(fpp) ||
                std::abs(d1 - fp) > 1e-6 * std::max(1.0, std::abs(fp)) ||
                std::abs(d2 - fpp) > 1e-6 * std::max(1.0, std::abs(fpp))) {
                flag(kAssumptionFlux, "derivatives of f inconsistent at u = " + fmt_double(u));
                break;
            }
        }
        if (!std::isfinite(s.flux.sup_f_second)) {
            flag(kAssumptionFlux, "sup |f''| is not finite");
        }
    }

    if (const auto support = support_cells(s.w0)) {
        const Mesh& mesh = s.w0.mesh();
        const double lo = mesh.interface_position(support->first);
        const double hi = mesh.interface_position(support->second + 1);
        const double reach = propagation_distance(s);
        if (lo - reach < mesh.x_left() || hi + reach > mesh.x_right()) {
            flag(kAssumptionMargin, "support [" + fmt_double(lo) + ", " + fmt_double(hi) +
                                        "] widened by " + fmt_double(reach) +
                                        " leaves the mesh [" + fmt_double(mesh.x_left()) + ", " +
                                        fmt_double(mesh.x_right()) + "]");
        }
    }

    return report;
}

} // namespace nlclaw
