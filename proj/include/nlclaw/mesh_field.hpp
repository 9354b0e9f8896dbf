#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace nlclaw {

/// Uniform 1D mesh on [x_left, x_right]. Cell j has center
/// x_left + (j + 1/2) dx; interface i sits at x_left + i dx, i = 0..n_cells.
class Mesh {
public:
    Mesh(double x_left, double x_right, std::size_t n_cells);

    double x_left() const noexcept { return x_left_; }
    double x_right() const noexcept { return x_right_; }
    std::size_t n_cells() const noexcept { return n_cells_; }
    double dx() const noexcept { return dx_; }
    double length() const noexcept { return x_right_ - x_left_; }

    double cell_center(std::size_t j) const noexcept {
        return x_left_ + (static_cast<double>(j) + 0.5) * dx_;
    }
    double interface_position(std::size_t i) const noexcept {
        return x_left_ + static_cast<double>(i) * dx_;
    }

    bool operator==(const Mesh&) const = default;

private:
    double x_left_;
    double x_right_;
    std::size_t n_cells_;
    double dx_;
};

/// Cell averages of w on a mesh, extended by zero outside it.
class DiscreteField {
public:
    DiscreteField(Mesh mesh, std::vector<double> values, double time = 0.0);

    static DiscreteField zeros(const Mesh& mesh, double time = 0.0);

    const Mesh& mesh() const noexcept { return mesh_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t j) const noexcept { return values_[j]; }
    std::size_t size() const noexcept { return values_.size(); }
    double time() const noexcept { return time_; }

    DiscreteField with_values(std::vector<double> values) const {
        return DiscreteField(mesh_, std::move(values), time_);
    }
    DiscreteField at_time(double t) const {
        DiscreteField copy = *this;
        copy.time_ = t;
        return copy;
    }

private:
    Mesh mesh_;
    std::vector<double> values_;
    double time_;
};

// All reductions below sum left to right in a fixed order.

double l1_norm(const DiscreteField& w);
double linf_norm(const DiscreteField& w);

/// Total variation over the real line of the zero-extended field, so the
/// jumps from and back to zero at both ends are counted.
double total_variation(const DiscreteField& w);

/// Signed mass sum_j w_j dx.
double mass(const DiscreteField& w);

/// Primitive of the zero-extended field at the n_cells + 1 interfaces,
/// starting from 0 at x_left.
std::vector<double> prefix_integral(const DiscreteField& w);

/// Throws MeshMismatch unless both fields share a mesh.
double l1_distance(const DiscreteField& w, const DiscreteField& v);

/// Index range [first, last] of cells with nonzero value, if any.
std::optional<std::pair<std::size_t, std::size_t>> support_cells(const DiscreteField& w);

/// Cell-average a fine field onto a coarser mesh covering the same interval
/// with an integer refinement ratio.
DiscreteField restrict_to(const DiscreteField& fine, const Mesh& coarse);

/// CSV with header `x,w`, one row per cell center, 17 significant digits.
void write_field_csv(std::ostream& out, const DiscreteField& w);

} // namespace nlclaw
