/**
 * Copyright 2026 The qfp-herald Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qfp/circuit.hpp"
#include "test_support.hpp"

using namespace qfp;
using qfp::testing::max_abs;
using qfp::testing::Rng;

namespace {

// (1/2pi) * integral of exp(i m sin t) exp(i d t) dt by the trapezoid rule, exact for periodic integrands
Complex sideband_quadrature(double m, int d) {
    constexpr int kPoints = 4096;
    Complex acc = 0.0;
    for (int k = 0; k < kPoints; ++k) {
        const double t = kTwoPi * k / kPoints;
        acc += std::polar(1.0, m * std::sin(t) + d * t);
    }
    return acc / static_cast<double>(kPoints);
}

double bessel_signed(int order, double m) {
    const double j = std::cyl_bessel_j(static_cast<double>(std::abs(order)), m);
    return (order < 0 && (order % 2 != 0)) ? -j : j;
}

}  // namespace

TEST_CASE("dft matrix small cases") {
    const CMatrix f1 = dft_matrix(1);
    CHECK(f1.rows() == 1);
    CHECK(std::abs(f1(0, 0) - 1.0) < 1e-15);

    const CMatrix f2 = dft_matrix(2);
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(f2(0, 0) - h) < 1e-15);
    CHECK(std::abs(f2(0, 1) - h) < 1e-15);
    CHECK(std::abs(f2(1, 0) - h) < 1e-15);
    CHECK(std::abs(f2(1, 1) + h) < 1e-15);

    const CMatrix f4 = dft_matrix(4);
    CHECK(max_abs(CMatrix(f4.adjoint() * f4 - CMatrix::Identity(4, 4))) < 1e-14);

    CHECK_THROWS_AS(dft_matrix(0), Error);
}

TEST_CASE("eom layer matches Bessel sidebands and quadrature") {
    const FrequencyLattice lattice{8, 8, 4};
    CHECK(max_abs(CMatrix(eom_layer({0.0, 1.3}, lattice) - CMatrix::Identity(8, 8))) < 1e-14);

    const CMatrix u = eom_layer({0.5, 0.0}, lattice);
    CHECK(leakage_check(u) < 1e-12);
    // an 8-point lattice folds sideband d onto d + 8l
    for (int d = -3; d <= 3; ++d) {
        const Complex entry = u((d + 8) % 8, 0);
        double bessel = 0.0;
        Complex quadrature = 0.0;
        for (int l = -3; l <= 3; ++l) {
            bessel += bessel_signed(-(d + 8 * l), 0.5);
            quadrature += sideband_quadrature(0.5, d + 8 * l);
        }
        CHECK(std::abs(entry - bessel) < 1e-12);
        CHECK(std::abs(entry - quadrature) < 1e-12);
        CHECK(std::abs(entry - bessel_signed(-d, 0.5)) < 1e-5);
    }
}

TEST_CASE("eom layer is circulant") {
    Rng rng(11);
    const FrequencyLattice lattice{12, 12, 6};
    for (int trial = 0; trial < 5; ++trial) {
        const CMatrix u = eom_layer({rng.uniform(0, 5), rng.uniform(0, kTwoPi)}, lattice);
        for (int j = 0; j < 12; ++j)
            for (int k = 0; k < 12; ++k) CHECK(std::abs(u(j, k) - u((j + 1) % 12, (k + 1) % 12)) < 1e-13);
    }
}

TEST_CASE("strong modulation leaks against a narrow passband") {
    const FrequencyLattice lattice{8, 4, 4};
    QfpCircuit c = QfpCircuit::identity(lattice, 3);
    c.eoms[0].modulation_index = 5.0;
    const UnitaryMatrix u = compose_unitary(c);
    CHECK(u.leakage > 1e-6);
    const std::vector<int> centre{3, 4, 5};
    CHECK(compose_unitary(c, centre).leakage > 1e-6);
}

TEST_CASE("shaper layer") {
    const FrequencyLattice full{6, 6, 3};
    CHECK(max_abs(CMatrix(shaper_layer({std::vector<double>(6, 0.0)}, full) - CMatrix::Identity(6, 6))) < 1e-15);

    const FrequencyLattice narrow{6, 4, 3};
    const CMatrix s = shaper_layer({{kPi, 0.0, 0.0, 0.0}}, narrow);
    CHECK(s(0, 0) == Complex(0.0));
    CHECK(s(5, 5) == Complex(0.0));
    CHECK(std::abs(s(1, 1) + 1.0) < 1e-15);
    CHECK(std::abs(s(2, 2) - 1.0) < 1e-15);

    // blocking mask is idempotent in magnitude
    const CMatrix mask = s.cwiseAbs().cast<Complex>();
    CHECK(max_abs(CMatrix(mask * mask - mask)) < 1e-15);

    CHECK_THROWS_AS(shaper_layer({{0.0}}, narrow), Error);
}

TEST_CASE("compose unitary trivial circuits") {
    const FrequencyLattice lattice{8, 8, 4};
    const UnitaryMatrix u1 = compose_unitary(QfpCircuit::identity(lattice, 1));
    CHECK(max_abs(CMatrix(u1.entries - CMatrix::Identity(8, 8))) < 1e-14);
    CHECK(u1.leakage < 1e-14);

    const UnitaryMatrix u3 = compose_unitary(QfpCircuit::identity(lattice, 3));
    CHECK(max_abs(CMatrix(u3.entries - CMatrix::Identity(8, 8))) < 1e-14);

    QfpCircuit bad = QfpCircuit::identity(lattice, 3);
    bad.shapers[0].phases.pop_back();
    CHECK_THROWS_AS(compose_unitary(bad), Error);
    bad = QfpCircuit::identity(lattice, 3);
    bad.shapers.clear();
    CHECK_THROWS_AS(compose_unitary(bad), Error);
    CHECK_THROWS_AS(QfpCircuit::identity(lattice, 2), Error);
}

TEST_CASE("full passband composition is exactly unitary") {
    Rng rng(3);
    const FrequencyLattice lattice{16, 16, 8};
    for (int trial = 0; trial < 10; ++trial) {
        const QfpCircuit c = testing::random_circuit(lattice, 5, 5.0, rng);
        CHECK(compose_unitary(c).leakage < 1e-12);
    }
}

TEST_CASE("weak modulation stays inside a half-width passband") {
    Rng rng(5);
    const FrequencyLattice lattice{64, 32, 32};
    const std::vector<int> centre{31, 32, 33};
    for (int trial = 0; trial < 10; ++trial) {
        const QfpCircuit c = testing::random_circuit(lattice, 3, 0.8, rng);
        CHECK(compose_unitary(c, centre).leakage < 1e-6);
    }
}

TEST_CASE("composition is associative") {
    Rng rng(9);
    const FrequencyLattice lattice{10, 6, 5};
    const QfpCircuit c = testing::random_circuit(lattice, 5, 2.0, rng);
    const CMatrix e0 = eom_layer(c.eoms[0], lattice);
    const CMatrix e1 = eom_layer(c.eoms[1], lattice);
    const CMatrix e2 = eom_layer(c.eoms[2], lattice);
    const CMatrix s0 = shaper_layer(c.shapers[0], lattice);
    const CMatrix s1 = shaper_layer(c.shapers[1], lattice);
    const CMatrix front = s0 * e0;
    const CMatrix back = e2 * s1 * e1;
    CHECK(max_abs(CMatrix(compose_unitary(c).entries - back * front)) < 1e-12);
    CHECK(max_abs(CMatrix(e2 * (s1 * (e1 * (s0 * e0))) - (e2 * s1) * (e1 * s0) * e0)) < 1e-12);
}

TEST_CASE("leakage check") {
    CHECK(leakage_check(CMatrix::Identity(3, 3)) == doctest::Approx(0.0));
    CMatrix d = CMatrix::Identity(2, 2);
    d(1, 1) = 0.0;
    CHECK(leakage_check(d) == doctest::Approx(1.0));

    Rng rng(1);
    CMatrix u = testing::random_unitary(4, rng);
    CMatrix mask = CMatrix::Identity(4, 4);
    mask(2, 2) = 0.0;
    CHECK(leakage_check(CMatrix(u * mask)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lattice validation") {
    CHECK_THROWS_AS((FrequencyLattice{4, 5, 1}.validate()), Error);
    CHECK_THROWS_AS((FrequencyLattice{8, 4, 0}.validate()), Error);
    CHECK_NOTHROW((FrequencyLattice{8, 4, 3}.validate()));
}
