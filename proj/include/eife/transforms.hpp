#pragma once

#include "eife/mesh.hpp"
#include "eife/tensor.hpp"

#include <vector>

namespace eife {

/// Eigenvalues of the 1D mass (A) and stiffness (B) matrices in the order of
/// the transform's coefficient packing.
struct AxisSpectrum {
    std::vector<double> lambda_mass;
    std::vector<double> lambda_stiff;
};

struct AxisMatrices {
    DenseMatrix mass;
    DenseMatrix stiffness;
};

/// Dense 1D P1 mass (h/6)·R and stiffness (1/h)·G on the owned nodes.
/// Periodic matrices are circulant (wraparound corner entries).
AxisMatrices build_axis_matrices(const Partition1D& p, BoundaryKind bc);

/// Dirichlet: lambda_stiff_i = (4/h) sin^2(i pi / 2N), lambda_mass_i = (h/6)(6 - 4 sin^2(i pi / 2N)),
/// i = 1..N-1. Periodic (half-complex packing): the same with sin^2(k pi / N), k = 0..N-1.
AxisSpectrum axis_spectrum(const Partition1D& p, BoundaryKind bc);

/// Columns are the transform basis vectors, so forward_transform applies
/// P^T along an axis. Dirichlet: P_ij = sin((i+1)(j+1) pi / N), symmetric.
/// Periodic: column m is cos(2 pi j m / N) for m <= N/2 and sin(2 pi j m / N) otherwise.
DenseMatrix transform_basis(const Partition1D& p, BoundaryKind bc);

/// Dense inverse of P^T (the matrix applied along each axis by inverse_transform).
DenseMatrix inverse_transform_matrix(const Partition1D& p, BoundaryKind bc);

/// Ũ = P^T applied along every axis (DST-I for Dirichlet, half-complex real DFT for periodic).
TensorD forward_transform(const TensorD& u, const TensorMesh& mesh);

/// Exact inverse of forward_transform; Dirichlet realization is (2/N)·P per axis.
TensorD inverse_transform(const TensorD& u_tilde, const TensorMesh& mesh);

/// The same two maps realized by dense mode products (test and oracle use).
TensorD forward_transform_dense(const TensorD& u, const TensorMesh& mesh);
TensorD inverse_transform_dense(const TensorD& u_tilde, const TensorMesh& mesh);

} // namespace eife
