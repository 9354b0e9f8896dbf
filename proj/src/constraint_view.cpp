#include "nlclaw/constraint_view.hpp"

#include "nlclaw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace nlclaw {

ReconstructedState reconstruct(const DiscreteField& w) {
    ReconstructedState r{w.mesh(), prefix_integral(w), w.time()};
    for (double u : r.u_values) {
        r.sup_abs_u = std::max(r.sup_abs_u, std::abs(u));
    }
    const double dx = w.mesh().dx();
    for (std::size_t j = 0; j + 1 < r.u_values.size(); ++j) {
        r.sup_slope = std::max(r.sup_slope, std::abs(r.u_values[j + 1] - r.u_values[j]) / dx);
    }
    return r;
}

std::size_t RegionMap::count(Region r) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), r));
}

RegionMap classify_regions(const DiscreteField& w, const ConstraintFunction& c,
                           std::optional<double> tol_J) {
    if (!c.epsilon) {
        throw ParameterError("classify_regions: g is not a smoothed truncation (no epsilon)");
    }
    RegionMap map;
    map.epsilon = *c.epsilon;
    map.tol_J = tol_J.value_or(1e-6 * c.M);
    map.labels.reserve(w.size());
    for (double v : w.values()) {
        const double a = std::abs(v);
        if (a <= c.M - map.epsilon) {
            map.labels.push_back(Region::I);
        } else if (a >= c.M - map.tol_J) {
            map.labels.push_back(Region::J);
        } else {
            map.labels.push_back(Region::K);
        }
    }
    return map;
}

RegimeReport regime_equation_residual(const Trajectory& run, const Scenario& s,
                                      std::span<const double> map_times,
                                      std::optional<double> tol_J) {
    const auto& snaps = run.snapshots;
    if (snaps.size() < 2) {
        throw ParameterError("regime_equation_residual: need at least two snapshots");
    }
    if (!s.constraint.h) {
        throw ParameterError("regime_equation_residual: g is not a smoothed truncation");
    }
    const auto& f = s.flux.f;
    const auto& h = s.constraint.h;
    const double M = s.constraint.M;

    RegimeReport report;
    for (double t : map_times) {
        std::size_t idx = 0;
        for (std::size_t i = 1; i < snaps.size(); ++i) {
            if (std::abs(snaps[i].time() - t) < std::abs(snaps[idx].time() - t)) {
                idx = i;
            }
        }
        const std::size_t lo = idx == 0 ? 0 : idx - 1;
        const std::size_t hi = idx + 1 == snaps.size() ? idx : idx + 1;
        const auto u_lo = prefix_integral(snaps[lo]);
        const auto u_hi = prefix_integral(snaps[hi]);
        const double span = snaps[hi].time() - snaps[lo].time();
        if (!(span > 0.0)) {
            throw ParameterError("regime_equation_residual: snapshot times are not increasing");
        }

        const DiscreteField& w = snaps[idx];
        const auto u = prefix_integral(w);
        const double dx = w.mesh().dx();
        const RegionMap map = classify_regions(w, s.constraint, tol_J);

        RegimeResidual entry;
        entry.time = w.time();
        for (std::size_t j = 0; j < w.size(); ++j) {
            const double ut = 0.5 * ((u_hi[j] + u_hi[j + 1]) - (u_lo[j] + u_lo[j + 1])) / span;
            const double fx = (f(u[j + 1]) - f(u[j])) / dx;
            switch (map.labels[j]) {
            case Region::I: {
                const double r = std::abs(ut + fx);
                entry.max_I = std::max(entry.max_I, r);
                entry.l1_I += r * dx;
                ++entry.count_I;
                break;
            }
            case Region::K: {
                const double r = std::abs(ut + h(w[j]) * fx);
                entry.max_K = std::max(entry.max_K, r);
                entry.l1_K += r * dx;
                ++entry.count_K;
                break;
            }
            case Region::J:
                entry.max_J_gap = std::max(entry.max_J_gap, std::abs(std::abs(w[j]) - M));
                ++entry.count_J;
                break;
            }
        }
        report.max_I = std::max(report.max_I, entry.max_I);
        report.max_K = std::max(report.max_K, entry.max_K);
        report.l1_I = std::max(report.l1_I, entry.l1_I);
        report.l1_K = std::max(report.l1_K, entry.l1_K);
        report.max_J_gap = std::max(report.max_J_gap, entry.max_J_gap);
        report.entries.push_back(entry);
    }
    return report;
}

void write_regions_csv_header(std::ostream& out) {
    out << "t,x,label,w,u\n";
}

void write_regions_csv_rows(std::ostream& out, const DiscreteField& w, const RegionMap& map) {
    const auto u = prefix_integral(w);
    const auto precision = out.precision();
    out << std::setprecision(17);
    for (std::size_t j = 0; j < w.size(); ++j) {
        out << w.time() << ',' << w.mesh().cell_center(j) << ',' << static_cast<char>(map.labels[j])
            << ',' << w[j] << ',' << 0.5 * (u[j] + u[j + 1]) << '\n';
    }
    out.precision(precision);
}

} // namespace nlclaw
