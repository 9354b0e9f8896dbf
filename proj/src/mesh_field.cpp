#include "nlclaw/mesh_field.hpp"

#include "nlclaw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace nlclaw {

Mesh::Mesh(double x_left, double x_right, std::size_t n_cells)
    : x_left_(x_left), x_right_(x_right), n_cells_(n_cells),
      dx_((x_right - x_left) / static_cast<double>(n_cells)) {
    if (n_cells < 2) {
        throw ParameterError("mesh needs at least 2 cells");
    }
    if (!std::isfinite(x_left) || !std::isfinite(x_right) || !(dx_ > 0.0)) {
        throw ParameterError("mesh extents must be finite with x_left < x_right");
    }
}

DiscreteField::DiscreteField(Mesh mesh, std::vector<double> values, double time)
    : mesh_(mesh), values_(std::move(values)), time_(time) {
    if (values_.size() != mesh_.n_cells()) {
        throw ParameterError("field has " + std::to_string(values_.size()) +
                             " values for a mesh of " + std::to_string(mesh_.n_cells()) +
                             " cells");
    }
    if (!(time_ >= 0.0) || !std::isfinite(time_)) {
        throw ParameterError("field time must be finite and nonnegative");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw ParameterError("field values must be finite");
        }
    }
}

DiscreteField DiscreteField::zeros(const Mesh& mesh, double time) {
    return DiscreteField(mesh, std::vector<double>(mesh.n_cells(), 0.0), time);
}

double l1_norm(const DiscreteField& w) {
    double sum = 0.0;
    for (double v : w.values()) {
        sum += std::abs(v);
    }
    return sum * w.mesh().dx();
}

double linf_norm(const DiscreteField& w) {
    double m = 0.0;
    for (double v : w.values()) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double total_variation(const DiscreteField& w) {
    const auto values = w.values();
    double tv = std::abs(values.front());
    for (std::size_t j = 0; j + 1 < values.size(); ++j) {
        tv += std::abs(values[j + 1] - values[j]);
    }
    tv += std::abs(values.back());
    return tv;
}

double mass(const DiscreteField& w) {
    double sum = 0.0;
    for (double v : w.values()) {
        sum += v;
    }
    return sum * w.mesh().dx();
}

std::vector<double> prefix_integral(const DiscreteField& w) {
    const auto values = w.values();
    const double dx = w.mesh().dx();
    std::vector<double> u(values.size() + 1, 0.0);
    for (std::size_t j = 0; j < values.size(); ++j) {
        u[j + 1] = u[j] + values[j] * dx;
    }
    return u;
}

double l1_distance(const DiscreteField& w, const DiscreteField& v) {
    if (!(w.mesh() == v.mesh())) {
        throw MeshMismatch("l1_distance: fields live on different meshes");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        sum += std::abs(w[j] - v[j]);
    }
    return sum * w.mesh().dx();
}

std::optional<std::pair<std::size_t, std::size_t>> support_cells(const DiscreteField& w) {
    const auto values = w.values();
    const auto nonzero = [](double v) { return v != 0.0; };
    const auto first = std::find_if(values.begin(), values.end(), nonzero);
    if (first == values.end()) {
        return std::nullopt;
    }
    const auto last = std::find_if(values.rbegin(), values.rend(), nonzero);
    return std::pair{static_cast<std::size_t>(first - values.begin()),
                     static_cast<std::size_t>(values.rend() - last) - 1};
}

DiscreteField restrict_to(const DiscreteField& fine, const Mesh& coarse) {
    const Mesh& fm = fine.mesh();
    const double tol = 1e-12 * std::max(1.0, fm.length());
    if (std::abs(fm.x_left() - coarse.x_left()) > tol ||
        std::abs(fm.x_right() - coarse.x_right()) > tol ||
        fm.n_cells() % coarse.n_cells() != 0) {
        throw MeshMismatch("restrict_to: meshes are not nested with an integer ratio");
    }
    const std::size_t ratio = fm.n_cells() / coarse.n_cells();
    std::vector<double> values(coarse.n_cells(), 0.0);
    for (std::size_t j = 0; j < coarse.n_cells(); ++j) {
        double sum = 0.0;
        for (std::size_t r = 0; r < ratio; ++r) {
            sum += fine[j * ratio + r];
        }
        values[j] = sum / static_cast<double>(ratio);
    }
    return DiscreteField(coarse, std::move(values), fine.time());
}

void write_field_csv(std::ostream& out, const DiscreteField& w) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(17);
    out << "x,w\n";
    for (std::size_t j = 0; j < w.size(); ++j) {
        out << w.mesh().cell_center(j) << ',' << w[j] << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

} // namespace nlclaw
