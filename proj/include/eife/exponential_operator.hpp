#pragma once

#include "eife/mesh.hpp"
#include "eife/tensor.hpp"
#include "eife/transforms.hpp"

#include <vector>

namespace eife {

/// The spatial operator in transformed coordinates: modal decay rates
/// H = D·Σ_axes lambda_stiff/lambda_mass and load weights Ĥ = 1/Π_axes lambda_mass.
struct DiagonalizedOperator {
    std::vector<AxisSpectrum> spectra;
    TensorD rates;        // H
    TensorD load_weights; // Ĥ
    double diffusion = 1.0;
};

DiagonalizedOperator build_operator(const TensorMesh& mesh, double diffusion);

/// |z| below this switches phi_1 and phi_2 to their Taylor polynomials.
inline constexpr double kPhiTaylorSwitch = 1e-4;

/// phi_0(z) = e^z, phi_1(z) = (e^z - 1)/z, phi_2(z) = (e^z - 1 - z)/z^2.
double phi(int k, double z);

/// Entrywise phi_k(-scale·tau·H).
TensorD phi_tensor(int k, const DiagonalizedOperator& op, double tau, double scale = 1.0);

} // namespace eife
