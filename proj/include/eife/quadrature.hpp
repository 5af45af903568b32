#pragma once

#include "eife/mesh.hpp"
#include "eife/tensor.hpp"

#include <array>
#include <vector>

namespace eife {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
    std::vector<double> points;
    std::vector<double> weights;
};

GaussRule gauss_legendre(std::size_t n);

/// Per-element tensor-product quadrature for multilinear fields on a TensorMesh.
/// Precomputes, for every quadrature point, the reference coordinates, the
/// weight (including the element volume) and the value/gradient of each of the
/// 2^d corner basis functions.
class ElementQuadrature {
public:
    ElementQuadrature(const TensorMesh& mesh, std::size_t points_per_axis);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t num_points() const noexcept { return weights_.size(); }
    std::size_t num_corners() const noexcept { return std::size_t{1} << dim_; }
    std::size_t num_elements() const noexcept { return num_elements_; }

    double weight(std::size_t q) const { return weights_[q]; }
    double basis(std::size_t q, std::size_t corner) const { return basis_[q * num_corners() + corner]; }
    double basis_grad(std::size_t q, std::size_t corner, std::size_t axis) const {
        return grad_[(q * num_corners() + corner) * dim_ + axis];
    }
    /// Reference offset in [0, 1] of point q along axis.
    double offset(std::size_t q, std::size_t axis) const { return offsets_[q * dim_ + axis]; }

    /// Decomposes element e into per-axis element indices.
    std::array<std::size_t, kMaxRank> element_index(std::size_t e) const;

    /// Physical coordinates of quadrature point q in element `index`.
    std::array<double, kMaxRank> point(const std::array<std::size_t, kMaxRank>& index, std::size_t q) const;

    /// Mesh-node multi-index (0..N per axis) of a corner of element `index`.
    std::array<std::size_t, kMaxRank> corner_node(const std::array<std::size_t, kMaxRank>& index,
                                                  std::size_t corner) const;

private:
    const TensorMesh* mesh_;
    std::size_t dim_;
    std::size_t num_elements_;
    std::vector<double> weights_;
    std::vector<double> offsets_;
    std::vector<double> basis_;
    std::vector<double> grad_;
};

} // namespace eife
