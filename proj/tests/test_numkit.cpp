#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mahlerlab/numkit.hpp"
#include "mahlerlab/random.hpp"
#include "test_support.hpp"

using namespace mahlerlab;

TEST_CASE("sym_eigen on fixed matrices") {
    SECTION("identity") {
        const auto eig = sym_eigen(SymMatrix::identity(2));
        REQUIRE(eig.size() == 2);
        CHECK(eig[0].value == Catch::Approx(1.0).margin(1e-14));
        CHECK(eig[1].value == Catch::Approx(1.0).margin(1e-14));
    }
    SECTION("diagonal, sorted ascending") {
        const auto eig = sym_eigen(SymMatrix::diagonal({2.0, -3.0}));
        CHECK(eig[0].value == Catch::Approx(-3.0).margin(1e-14));
        CHECK(eig[1].value == Catch::Approx(2.0).margin(1e-14));
        CHECK(std::abs(eig[0].vector[1]) == Catch::Approx(1.0).margin(1e-14));
        CHECK(std::abs(eig[1].vector[0]) == Catch::Approx(1.0).margin(1e-14));
    }
    SECTION("Hessian block of the square") {
        // characteristic polynomial x^2 - 48 x - 64, roots 24 +- sqrt(640)
        const SymMatrix m(2, {16.0, -24.0, -24.0, 32.0});
        const auto eig = sym_eigen(m);
        const double root = std::sqrt(640.0);
        CHECK(eig[0].value == Catch::Approx(24.0 - root).epsilon(1e-12));
        CHECK(eig[1].value == Catch::Approx(24.0 + root).epsilon(1e-12));
    }
}

TEST_CASE("sym_eigen reconstruction and orthonormality on random matrices") {
    SplitMix64 rng(20260801);
    for (int trial = 0; trial < 40; ++trial) {
        const int dim = 2 + static_cast<int>(rng.next() % 5); // 2..6
        const SymMatrix m = testing::random_sym(rng, dim);
        const auto eig = sym_eigen(m);
        const double scale = 1.0 + m.max_abs();

        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) {
                const double g = dot(eig[static_cast<std::size_t>(i)].vector,
                                     eig[static_cast<std::size_t>(j)].vector);
                CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-12);
            }

        // Q Lambda Q^t = m
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) {
                double acc = 0.0;
                for (const auto& e : eig) acc += e.value * e.vector[r] * e.vector[c];
                CHECK(std::abs(acc - m.at(r, c)) < 1e-10 * scale);
            }

        // det equals the eigenvalue product
        double prod = 1.0;
        for (const auto& e : eig) prod *= e.value;
        CHECK(det(m) == Catch::Approx(prod).epsilon(1e-9).margin(1e-12));
    }
}

TEST_CASE("determinants") {
    CHECK(det(SymMatrix::identity(3)) == Catch::Approx(1.0));
    CHECK(det(SymMatrix::diagonal({2.0, 5.0})) == Catch::Approx(10.0));
    CHECK(det(SymMatrix(2, {16.0, -24.0, -24.0, 32.0})) == Catch::Approx(-64.0));

    // LU path (dim > 3) against a known block determinant
    SymMatrix h(4);
    h.set(0, 0, 16.0);
    h.set(1, 1, 16.0);
    h.set(2, 2, 32.0);
    h.set(3, 3, 32.0);
    h.set(0, 2, -24.0);
    h.set(1, 3, -24.0);
    CHECK(det(h) == Catch::Approx(4096.0).epsilon(1e-12));
}

TEST_CASE("inverse") {
    const SymMatrix id = SymMatrix::identity(3);
    const SymMatrix inv_id = inverse(id);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(inv_id.at(i, j) == Catch::Approx(id.at(i, j)).margin(1e-14));

    const SymMatrix q = inverse(SymMatrix::diagonal({4.0, 4.0}));
    CHECK(q.at(0, 0) == Catch::Approx(0.25));
    CHECK(q.at(1, 1) == Catch::Approx(0.25));

    // cov of the centered triangle inverts to 4 I
    const SymMatrix cov = SymMatrix::diagonal({0.25, 0.25});
    const SymMatrix covinv = inverse(cov);
    CHECK(covinv.at(0, 0) == Catch::Approx(4.0));
    CHECK(covinv.at(1, 1) == Catch::Approx(4.0));

    CHECK_THROWS_AS(inverse(SymMatrix::diagonal({1.0, 0.0})), SingularMatrix);
}

TEST_CASE("inverse is an involution on well-conditioned random matrices") {
    SplitMix64 rng(77001);
    int tested = 0;
    while (tested < 25) {
        const int dim = 2 + static_cast<int>(rng.next() % 3);
        SymMatrix m = testing::random_sym(rng, dim);
        for (int i = 0; i < dim; ++i) m.set(i, i, m.at(i, i) + 3.0); // keep well-conditioned
        const SymMatrix back = inverse(inverse(m));
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j)
                CHECK(back.at(i, j) == Catch::Approx(m.at(i, j)).epsilon(1e-9).margin(1e-9));

        const SymMatrix prod = SymMatrix::from_mat_symmetrized(m.to_mat() * inverse(m).to_mat());
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                CHECK(std::abs(prod.at(i, j) - (i == j ? 1.0 : 0.0)) < 1e-10);
        ++tested;
    }
}

TEST_CASE("psd_check classification") {
    CHECK(psd_check(SymMatrix::identity(2), 1e-9) == Definiteness::PositiveDefinite);
    CHECK(psd_check(SymMatrix::diagonal({1.0, -1.0}), 1e-9) == Definiteness::Indefinite);
    CHECK(psd_check(SymMatrix::diagonal({1.0, 0.0}), 1e-9) == Definiteness::PositiveSemiDefinite);
    CHECK(psd_check(SymMatrix::diagonal({-1.0, -2.0}), 1e-9) == Definiteness::NegativeDefinite);
    CHECK(psd_check(SymMatrix::diagonal({-1.0, 0.0}), 1e-9) ==
          Definiteness::NegativeSemiDefinite);
    // eigenvalues inside the relative threshold count as zero
    CHECK(psd_check(SymMatrix::diagonal({1.0, 1e-12}), 1e-9) ==
          Definiteness::PositiveSemiDefinite);
}

TEST_CASE("general Mat algebra") {
    const Mat a(2, {1.0, 2.0, 3.0, 4.0});
    const Mat b(2, {0.0, 1.0, -1.0, 0.5});
    const Mat ab = a * b;
    CHECK(ab.at(0, 0) == Catch::Approx(-2.0));
    CHECK(ab.at(0, 1) == Catch::Approx(2.0));
    CHECK(ab.at(1, 0) == Catch::Approx(-4.0));
    CHECK(ab.at(1, 1) == Catch::Approx(5.0));

    const Mat ainv = inverse(a);
    const Mat prod = a * ainv;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(prod.at(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);

    const VecN x = solve(a, VecN{1.0, 0.0});
    CHECK(a.at(0, 0) * x[0] + a.at(0, 1) * x[1] == Catch::Approx(1.0).margin(1e-12));
    CHECK(a.at(1, 0) * x[0] + a.at(1, 1) * x[1] == Catch::Approx(0.0).margin(1e-12));
}
