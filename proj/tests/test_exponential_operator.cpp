#include "eife/errors.hpp"
#include "eife/exponential_operator.hpp"

#include <doctest.h>

#include <cmath>

using namespace eife;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Residuals of phi_1 z + 1 = e^z and phi_2 z^2 + z + 1 = e^z, scaled by the
// size of the terms; relative to e^z alone they cancel below rounding for z < -10.
double identity1(double z) {
    const double lhs = phi(1, z) * z;
    return std::abs(lhs + 1.0 - std::exp(z)) / (std::abs(lhs) + 1.0 + std::exp(z));
}

double identity2(double z) {
    const double lhs = phi(2, z) * z * z;
    return std::abs(lhs + z + 1.0 - std::exp(z)) / (std::abs(lhs) + std::abs(z) + 1.0 + std::exp(z));
}

} // namespace

TEST_CASE("phi values") {
    CHECK(phi(0, -1.5) == doctest::Approx(std::exp(-1.5)));
    CHECK(phi(1, 0.0) == 1.0);
    CHECK(phi(2, 0.0) == 0.5);
    CHECK(phi(1, -2.0) == doctest::Approx(0.4323324).epsilon(1e-7));
    CHECK(rel(phi(2, -1e-9), 0.5) < 1e-9);
    CHECK_THROWS_AS(phi(3, -1.0), std::invalid_argument);
}

TEST_CASE("phi recurrences hold across the whole negative range") {
    for (double z = -1e3; z <= -1e-12; z /= 1.37) {
        CAPTURE(z);
        CHECK(identity1(z) < 1e-12);
        CHECK(identity2(z) < 1e-12);
        // Against extended-precision closed forms.
        const long double zl = z;
        CHECK(rel(phi(1, z), static_cast<double>(std::expm1(zl) / zl)) < 1e-12);
        if (z < -1.0) CHECK(rel(phi(2, z), static_cast<double>((std::expm1(zl) - zl) / (zl * zl))) < 1e-12);
    }
}

TEST_CASE("phi is continuous across the Taylor switch") {
    const double below = std::nextafter(-kPhiTaylorSwitch, 0.0);
    const double above = -kPhiTaylorSwitch;
    for (int k : {1, 2}) {
        CAPTURE(k);
        CHECK(rel(phi(k, below), phi(k, above)) < 1e-14);
    }
}

TEST_CASE("operator tensors on a single mode") {
    // One interior node with h = 1/2: lambda_mass = 1/3, lambda_stiff = 4, H = 12.
    const auto mesh = TensorMesh::box({0}, {1}, {2}, BoundaryKind::HomogeneousDirichlet);
    const DiagonalizedOperator op = build_operator(mesh, 1.0);
    CHECK(op.rates[0] == doctest::Approx(12.0));
    CHECK(op.load_weights[0] == doctest::Approx(3.0));
    CHECK(phi_tensor(1, op, 0.1)[0] == doctest::Approx(0.5823382).epsilon(1e-7));
    CHECK(phi_tensor(0, op, 0.1, 0.5)[0] == doctest::Approx(std::exp(-0.6)));
    CHECK(phi_tensor(1, op, 1e-12)[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(build_operator(mesh, 0.0), ConfigError);
}

TEST_CASE("rates combine the axis spectra") {
    const auto mesh = TensorMesh::box({0, 0}, {2, 1}, {6, 4}, BoundaryKind::Periodic);
    const DiagonalizedOperator op = build_operator(mesh, 0.7);
    const auto& sx = op.spectra[0];
    const auto& sy = op.spectra[1];
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const double want = 0.7 * (sx.lambda_stiff[i] / sx.lambda_mass[i] + sy.lambda_stiff[j] / sy.lambda_mass[j]);
            CHECK(op.rates.at({i, j}) == doctest::Approx(want).epsilon(1e-14));
            CHECK(op.load_weights.at({i, j}) == doctest::Approx(1.0 / (sx.lambda_mass[i] * sy.lambda_mass[j])));
        }
    // Only the constant mode is undamped.
    CHECK(op.rates.at({0, 0}) == 0.0);
    const TensorD decay = phi_tensor(0, op, 0.3);
    CHECK(decay.at({0, 0}) == 1.0);
    for (std::size_t f = 1; f < decay.size(); ++f) {
        CHECK(decay[f] > 0.0);
        CHECK(decay[f] < 1.0);
    }
}
