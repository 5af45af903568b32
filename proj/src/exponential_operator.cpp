#include "eife/exponential_operator.hpp"

#include "eife/errors.hpp"

#include <cmath>
#include <string>

namespace eife {

namespace {

// phi_2(z) = sum_j z^j / (j+2)!; 20 terms reach 1 ulp for |z| <= 1.
double phi2_series(double z) {
    constexpr int kTerms = 20;
    double coeff[kTerms];
    double fact = 2.0;
    for (int j = 0; j < kTerms; ++j) {
        coeff[j] = 1.0 / fact;
        fact *= static_cast<double>(j + 3);
    }
    double acc = coeff[kTerms - 1];
    for (int j = kTerms - 2; j >= 0; --j) acc = acc * z + coeff[j];
    return acc;
}

} // namespace

DiagonalizedOperator build_operator(const TensorMesh& mesh, double diffusion) {
    if (!(diffusion > 0.0)) throw ConfigError("diffusion coefficient must be positive");
    DiagonalizedOperator op;
    op.diffusion = diffusion;
    for (std::size_t a = 0; a < mesh.dim(); ++a) op.spectra.push_back(axis_spectrum(mesh.axis(a), mesh.bc()));

    const Shape shape = mesh.dof_shape();
    op.rates = TensorD(shape);
    op.load_weights = TensorD(shape);
    const std::size_t d = mesh.dim();
    std::vector<std::vector<double>> ratio(d);
    for (std::size_t a = 0; a < d; ++a) {
        const auto& s = op.spectra[a];
        for (std::size_t i = 0; i < s.lambda_mass.size(); ++i) ratio[a].push_back(s.lambda_stiff[i] / s.lambda_mass[i]);
    }
    MultiIndex idx(d, 0);
    for (std::size_t flat = 0; flat < op.rates.size(); ++flat) {
        double rate = 0.0;
        double mass = 1.0;
        for (std::size_t a = 0; a < d; ++a) {
            rate += ratio[a][idx[a]];
            mass *= op.spectra[a].lambda_mass[idx[a]];
        }
        op.rates[flat] = diffusion * rate;
        op.load_weights[flat] = 1.0 / mass;
        for (std::size_t a = d; a-- > 0;) {
            if (++idx[a] < shape[a]) break;
            idx[a] = 0;
        }
    }
    return op;
}

double phi(int k, double z) {
    const double az = std::abs(z);
    switch (k) {
    case 0:
        return std::exp(z);
    case 1:
        if (az < kPhiTaylorSwitch) return 1.0 + z * (1.0 / 2 + z * (1.0 / 6 + z * (1.0 / 24 + z / 120)));
        return std::expm1(z) / z;
    case 2:
        if (az < kPhiTaylorSwitch) return 1.0 / 2 + z * (1.0 / 6 + z * (1.0 / 24 + z / 120));
        // The closed form cancels (e^z - 1 - z ~ z^2/2) until |z| is of order one.
        if (az < 1.0) return phi2_series(z);
        return (std::expm1(z) - z) / (z * z);
    default:
        throw std::invalid_argument("phi: order must be 0, 1 or 2, got " + std::to_string(k));
    }
}

TensorD phi_tensor(int k, const DiagonalizedOperator& op, double tau, double scale) {
    TensorD out(op.rates.shape());
    const double factor = -scale * tau;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = phi(k, factor * op.rates[i]);
    return out;
}

} // namespace eife
