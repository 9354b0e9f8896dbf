#include "nlclaw/errors.hpp"
#include "nlclaw/mesh_field.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace nlclaw;

TEST_SUITE("mesh_field") {

TEST_CASE("mesh geometry and construction errors") {
    const Mesh m(0.0, 1.0, 4);
    CHECK(m.dx() == 0.25);
    CHECK(m.cell_center(0) == 0.125);
    CHECK(m.interface_position(4) == 1.0);
    CHECK_THROWS_AS(Mesh(0.0, 1.0, 1), ParameterError);
    CHECK_THROWS_AS(Mesh(1.0, 0.0, 4), ParameterError);
    CHECK_THROWS_AS(DiscreteField(m, {1.0, 2.0}), ParameterError);
    CHECK_THROWS_AS(DiscreteField(m, {1.0, 2.0, std::nan(""), 0.0}), ParameterError);
}

TEST_CASE("l1 norm") {
    CHECK(l1_norm(DiscreteField::zeros(Mesh(-3.0, 2.0, 17))) == 0.0);
    CHECK(l1_norm(DiscreteField(Mesh(0.0, 1.0, 10), std::vector<double>(10, 1.0))) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(l1_norm(DiscreteField(Mesh(0.0, 2.0, 4), {1.0, -1.0, 1.0, -1.0})) == 2.0);
}

TEST_CASE("linf norm") {
    const Mesh m(0.0, 3.0, 3);
    CHECK(linf_norm(DiscreteField::zeros(m)) == 0.0);
    CHECK(linf_norm(DiscreteField(m, {-0.3, 0.7, -0.9})) == 0.9);
    CHECK(linf_norm(DiscreteField(m, {0.75, 0.75, 0.75})) == 0.75);
}

TEST_CASE("total variation counts the jumps to the zero extension") {
    CHECK(total_variation(DiscreteField::zeros(Mesh(0.0, 1.0, 5))) == 0.0);
    CHECK(total_variation(DiscreteField(Mesh(0.0, 1.0, 3), {0.0, 1.0, 0.0})) == 2.0);
    CHECK(total_variation(DiscreteField(Mesh(0.0, 1.0, 5), {0.0, 0.0, 1.0, 0.0, 0.0})) == 2.0);
    // A nonzero boundary cell still jumps to zero outside.
    CHECK(total_variation(DiscreteField(Mesh(0.0, 1.0, 2), {1.0, 1.0})) == 2.0);
}

TEST_CASE("prefix integral") {
    const Mesh m(0.0, 1.0, 4);
    const auto zero = prefix_integral(DiscreteField::zeros(m));
    CHECK(zero == std::vector<double>(5, 0.0));
    const auto ramp = prefix_integral(DiscreteField(m, {1.0, 1.0, 1.0, 1.0}));
    CHECK(ramp == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});

    std::mt19937_64 rng(11);
    const Mesh big(-2.0, 5.0, 301);
    const auto w = oracle::random_field(big, rng, 2.0, 0);
    const auto u = prefix_integral(w);
    REQUIRE(u.size() == big.n_cells() + 1);
    CHECK(u.front() == 0.0);
    CHECK(u.back() == doctest::Approx(mass(w)).epsilon(1e-14));
    for (std::size_t j = 0; j < w.size(); ++j) {
        CHECK(u[j + 1] - u[j] == doctest::Approx(w[j] * big.dx()).epsilon(1e-12).scale(1e-14));
    }
}

TEST_CASE("l1 distance") {
    const Mesh m(0.0, 1.0, 8);
    const DiscreteField one(m, std::vector<double>(8, 1.0));
    const DiscreteField zero = DiscreteField::zeros(m);
    CHECK(l1_distance(one, one) == 0.0);
    CHECK(l1_distance(one, zero) == 1.0);
    CHECK_THROWS_AS(l1_distance(one, DiscreteField::zeros(Mesh(0.0, 1.0, 9))), MeshMismatch);
}

TEST_CASE("norm properties on random fields") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> cells(2, 400);
    for (int trial = 0; trial < 200; ++trial) {
        const Mesh m(-1.0, 1.0 + trial * 0.01, cells(rng));
        const auto w = oracle::random_field(m, rng, 1.5, trial % 3);
        const auto v = oracle::random_field(m, rng, 1.5, 0);

        CHECK(l1_distance(w, v) == l1_distance(v, w));
        CHECK(total_variation(w) >= 0.0);
        if (linf_norm(w) > 0.0) {
            CHECK(total_variation(w) > 0.0);
        }
        if (const auto s = support_cells(w)) {
            const double support_length = static_cast<double>(s->second - s->first + 1) * m.dx();
            CHECK(linf_norm(w) * support_length >= l1_norm(w) * (1.0 - 1e-14));
        }
        // Bit-identical on repeated evaluation.
        CHECK(l1_norm(w) == l1_norm(w));
        CHECK(total_variation(w) == total_variation(w));
        CHECK(prefix_integral(w) == prefix_integral(w));
    }
}

TEST_CASE("restriction averages nested cells") {
    const Mesh fine(0.0, 1.0, 8);
    const Mesh coarse(0.0, 1.0, 4);
    const DiscreteField w(fine, {1, 3, 0, 0, 2, 2, -1, 1});
    const auto r = restrict_to(w, coarse);
    CHECK(std::vector<double>(r.values().begin(), r.values().end()) ==
          std::vector<double>{2.0, 0.0, 2.0, 0.0});
    CHECK(mass(r) == mass(w));
    CHECK_THROWS_AS(restrict_to(w, Mesh(0.0, 1.0, 3)), MeshMismatch);
}

TEST_CASE("csv snapshot format") {
    const DiscreteField w(Mesh(0.0, 1.0, 2), {0.1, 1.0 / 3.0});
    std::ostringstream out;
    write_field_csv(out, w);
    CHECK(out.str() == "x,w\n0.25,0.10000000000000001\n0.75,0.33333333333333331\n");
}

}
