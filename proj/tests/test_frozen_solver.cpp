#include "nlclaw/errors.hpp"
#include "nlclaw/frozen_solver.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace nlclaw;

namespace {

ConstraintFunction identity_g(double M = 10.0) {
    return make_generic_g("identity", [](double s) { return s; }, 1.0, M);
}

ConstraintFunction burgers_g() {
    // s^2/2 on the invariant range [0, 1], where its Lipschitz constant is 1.
    return make_generic_g("half-square", [](double s) { return 0.5 * s * s; }, 1.0, 1.0);
}

// Smooth random velocity with a small derivative.
FrozenCoefficient random_coefficient(const Mesh& mesh, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 6.28);
    const double a0 = amp(rng);
    const double a1 = amp(rng);
    const double ph = phase(rng);
    std::vector<double> k(mesh.n_cells() + 1);
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double x = mesh.interface_position(i);
        k[i] = a0 + 0.5 * a1 * std::sin(x + ph);
    }
    return FrozenCoefficient::from_values(std::move(k), mesh.dx());
}

double translation_error(std::size_t n) {
    const Mesh m(-4.0, 4.0, n);
    const initial::Bump b{-1.0, 1.0, 0.5};
    const auto w0 = discretize(b, m);
    const auto k = FrozenCoefficient::constant(1.0, m);
    const auto g = identity_g();
    StepParameters p{admissible_dt(k, g, m.dx(), 0.9), m.dx(), 0.9};
    const auto w = evolve(w0, k, 1.0, p, g);
    return l1_distance(w, oracle::translated_bump(m, b, 1.0));
}

} // namespace

TEST_SUITE("frozen_solver") {

TEST_CASE("numerical flux reference values") {
    const auto g = identity_g(1.0);
    CHECK(numerical_flux(1.0, 1.0, 0.0, g) == 1.0);
    CHECK(numerical_flux(1.0, 0.0, 1.0, g) == 0.0);
    CHECK(numerical_flux(-1.0, 0.0, 1.0, g) == -1.0);
    CHECK(numerical_flux(0.0, 0.3, -0.7, g) == 0.0);
    CHECK(numerical_flux(2.0, 0.5, 0.5, g) == 1.0);
}

TEST_CASE("fixed points") {
    const Mesh m(-2.0, 2.0, 64);
    const auto g = make_truncation_g(1.0, 0.1);
    std::mt19937_64 rng(5);
    const auto k = random_coefficient(m, rng);
    StepParameters p{admissible_dt(k, g, m.dx(), 0.9), m.dx(), 0.9};

    const auto zero = DiscreteField::zeros(m);
    const auto z1 = step(zero, k, p, g);
    CHECK(std::all_of(z1.values().begin(), z1.values().end(), [](double v) { return v == 0.0; }));
    CHECK(z1.time() == p.dt);

    const auto w = oracle::random_field(m, rng, 0.9, 0);
    const auto still = FrozenCoefficient::constant(0.0, m);
    const StepParameters p0{admissible_dt(still, g, m.dx(), 0.9), m.dx(), 0.9};
    const auto w1 = step(w, still, p0, g);
    for (std::size_t j = 0; j < m.n_cells(); ++j) {
        CHECK(w1[j] == w[j]);
    }
}

TEST_CASE("linear translation converges at first order") {
    std::vector<double> errors;
    for (std::size_t n : {200, 400, 800, 1600}) {
        errors.push_back(translation_error(n));
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
        CHECK(errors[i] < errors[i - 1]);
    }
    for (double order : oracle::observed_orders(errors)) {
        CHECK(order >= 0.8);
        CHECK(order <= 1.2);
    }
}

TEST_CASE("self-convergence against a four times finer reference") {
    const auto g = make_truncation_g(1.0, 0.3);
    const initial::Bump bump{-0.5, 1.0, 0.5};
    auto run = [&](std::size_t n) {
        const Mesh m(-4.0, 4.0, n);
        std::vector<double> kv(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            kv[i] = 0.5 + 0.2 * std::sin(m.interface_position(i));
        }
        const auto k = FrozenCoefficient::from_values(std::move(kv), m.dx());
        // One dt for every level keeps the time error out of the comparison.
        const StepParameters p{admissible_dt(k, g, 8.0 / 3200.0, 0.9), m.dx(), 0.9};
        return evolve(discretize(bump, m), k, 0.5, p, g);
    };
    std::vector<double> errors;
    for (std::size_t n : {200, 400}) {
        const auto coarse = run(n);
        errors.push_back(l1_distance(coarse, restrict_to(run(4 * n), coarse.mesh())));
    }
    const double order = oracle::observed_orders(errors)[0];
    CHECK(order >= 0.8);
    CHECK(order <= 1.2);
}

TEST_CASE("composition of evolutions") {
    const Mesh m(-2.0, 2.0, 128);
    const auto g = make_truncation_g(1.0, 0.2);
    std::mt19937_64 rng(77);
    const auto k = random_coefficient(m, rng);
    const auto w0 = oracle::random_field(m, rng, 1.0, 4);
    double dt = 1.0;
    while (dt > admissible_dt(k, g, m.dx(), 0.9)) {
        dt /= 2.0;
    }
    const StepParameters p{dt, m.dx(), 0.9};
    const double tau = 16.0 * dt;
    const auto once = evolve(w0, k, 2.0 * tau, p, g);
    const auto twice = evolve(evolve(w0, k, tau, p, g), k, tau, p, g);
    CHECK(once.time() == twice.time());
    for (std::size_t j = 0; j < m.n_cells(); ++j) {
        CHECK(once[j] == twice[j]);
    }
    const auto none = evolve(w0, k, 0.0, p, g);
    CHECK(l1_distance(none, w0) == 0.0);
}

TEST_CASE("evolve lands exactly on the target time") {
    CHECK(substep_count(1.0, 0.1) == 10);
    CHECK(substep_count(1.0, 0.3) == 4);
    CHECK(substep_count(0.0, 0.3) == 0);
    const Mesh m(0.0, 1.0, 10);
    const auto g = identity_g(1.0);
    const auto k = FrozenCoefficient::constant(0.5, m);
    const StepParameters p{0.03, m.dx(), 0.9};
    const auto w = evolve(DiscreteField(m, std::vector<double>(10, 0.0), 0.2), k, 0.1, p, g);
    CHECK(w.time() == 0.2 + 0.1);
}

TEST_CASE("Riemann shock for the half-square flux") {
    const Mesh m(-3.0, 3.0, 4000);
    const auto g = burgers_g();
    const auto w0 = discretize(initial::Riemann{-2.0, 0.0, 2.5, 1.0, 0.0}, m);
    const auto k = FrozenCoefficient::constant(1.0, m);
    const StepParameters p{admissible_dt(k, g, m.dx(), 0.9), m.dx(), 0.9};
    const auto w = evolve(w0, k, 1.0, p, g);
    // Rightmost crossing of the mid state.
    std::size_t j = m.n_cells() - 1;
    while (j > 0 && w[j] < 0.5) {
        --j;
    }
    const double a = w[j];
    const double b = w[j + 1];
    const double x = m.cell_center(j) + m.dx() * (a - 0.5) / (a - b);
    const double exact = oracle::burgers_shock_position(0.0, 1.0, 0.0, 1.0);
    CHECK(std::abs(x - exact) <= 0.02 * exact);
}

TEST_CASE("discrete entropy inequality") {
    const auto g = make_truncation_g(1.0, 0.1);
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const Mesh m(-3.0, 3.0, 150);
        const auto k = random_coefficient(m, rng);
        const auto w = oracle::random_field(m, rng, 1.0, 3);
        const StepParameters p{admissible_dt(k, g, m.dx(), 0.9), m.dx(), 0.9};
        const auto w1 = step(w, k, p, g);
        for (double c : {-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75}) {
            const auto r = discrete_entropy_residual(w, w1, k, p, g, c);
            CHECK(*std::max_element(r.begin(), r.end()) <= 1e-10);
        }
    }
    SUBCASE("constant state gives zero residual") {
        const Mesh m(0.0, 1.0, 20);
        const auto k = FrozenCoefficient::constant(0.7, m);
        const DiscreteField w(m, std::vector<double>(20, 0.0));
        const StepParameters p{admissible_dt(k, g, m.dx(), 0.9), m.dx(), 0.9};
        const auto w1 = step(w, k, p, g);
        const auto r = discrete_entropy_residual(w, w1, k, p, g, 0.0);
        for (double v : r) {
            CHECK(v == 0.0);
        }
    }
}

TEST_CASE("monotone scheme properties on random data") {
    const auto g = make_truncation_g(1.0, 0.1);
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<std::size_t> cells(20, 300);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Mesh m(-3.0, 3.0, cells(rng));
        const auto k = random_coefficient(m, rng);
        const StepParameters p{admissible_dt(k, g, m.dx(), 0.9), m.dx(), 0.9};
        const auto w = oracle::random_field(m, rng, 1.0, 2);
        auto vv = std::vector<double>(w.values().begin(), w.values().end());
        for (std::size_t j = 2; j + 2 < vv.size(); ++j) {
            vv[j] = std::min(1.0, vv[j] + 0.3 * unit(rng));
        }
        const DiscreteField v(m, vv);

        const auto w1 = step(w, k, p, g);
        const auto v1 = step(v, k, p, g);

        CHECK(linf_norm(w1) <= 1.0 + 1e-12);
        CHECK(std::abs(mass(w1) - mass(w)) <= 1e-13 * (1.0 + l1_norm(w)));
        CHECK(l1_distance(w1, v1) <= l1_distance(w, v) + 1e-13);
        bool ordered = true;
        for (std::size_t j = 0; j < m.n_cells(); ++j) {
            ordered = ordered && w1[j] <= v1[j] + 1e-15;
        }
        CHECK(ordered);

        const auto kc = FrozenCoefficient::constant(k.values[0], m);
        const StepParameters pc{admissible_dt(kc, g, m.dx(), 0.9), m.dx(), 0.9};
        CHECK(total_variation(step(w, kc, pc, g)) <= total_variation(w) + 1e-12);
    }
}

TEST_CASE("time step and mesh restrictions") {
    const Mesh m(0.0, 1.0, 50);
    const auto g = make_truncation_g(1.0, 0.1);
    const auto k = FrozenCoefficient::constant(1.0, m);
    const double dt_max = admissible_dt(k, g, m.dx(), 0.9);
    CHECK(dt_max == doctest::Approx(0.9 * m.dx() / g.lip_g));
    const auto w = DiscreteField::zeros(m);
    try {
        step(w, k, StepParameters{2.0 * dt_max, m.dx(), 0.9}, g);
        FAIL("expected CflError");
    } catch (const CflError& e) {
        CHECK(e.admissible_dt() == doctest::Approx(dt_max));
    }
    // Coefficient too rough for the mesh.
    std::vector<double> rough(51);
    for (std::size_t i = 0; i < rough.size(); ++i) {
        rough[i] = (i % 2 == 0) ? 0.0 : 1.0;
    }
    const auto kr = FrozenCoefficient::from_values(rough, m.dx());
    CHECK(kr.lip_x_k == doctest::Approx(50.0));
    CHECK_THROWS_AS(step(w, kr, StepParameters{admissible_dt(kr, g, m.dx(), 0.9), m.dx(), 0.9}, g),
                    ParameterError);
    CHECK_THROWS_AS(step(w, FrozenCoefficient::constant(1.0, Mesh(0.0, 1.0, 40)),
                         StepParameters{1e-4, m.dx(), 0.9}, g),
                    MeshMismatch);
}

TEST_CASE("coefficient from the prefix integral") {
    const Mesh m(0.0, 1.0, 4);
    const DiscreteField w(m, {1.0, 1.0, 1.0, 1.0});
    const auto k = build_coefficient(w, FluxModel::burgers().with_reach(1.0));
    CHECK(k.values == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(k.lip_x_k == doctest::Approx(1.0));
    CHECK(k.sup_abs == 1.0);
}

}
