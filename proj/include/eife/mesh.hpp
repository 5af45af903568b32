#pragma once

#include "eife/tensor.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace eife {

/// Uniform partition of [a, b] into n subintervals of width h.
struct Partition1D {
    double a;
    double b;
    std::size_t n;
    double h;

    Partition1D(double a, double b, std::size_t n);
    double node(std::size_t j) const { return a + static_cast<double>(j) * h; }
    double length() const { return b - a; }
};

/// One boundary-condition kind applies to the whole boundary. Dirichlet
/// data for the nonhomogeneous case comes from the problem's trace function.
enum class BoundaryKind { HomogeneousDirichlet, Dirichlet, Periodic };

std::string_view to_string(BoundaryKind kind);
BoundaryKind parse_boundary_kind(std::string_view text);

inline bool is_dirichlet(BoundaryKind kind) { return kind != BoundaryKind::Periodic; }

/// Tensor-product mesh of a box. Dirichlet meshes own the interior nodes
/// 1..N-1 of every axis; periodic meshes own nodes 0..N-1 (node N is node 0).
class TensorMesh {
public:
    TensorMesh(std::vector<Partition1D> partitions, BoundaryKind bc);

    /// Convenience: box [lower, upper] with n[i] subintervals along axis i.
    static TensorMesh box(const std::vector<double>& lower, const std::vector<double>& upper,
                          const std::vector<std::size_t>& n, BoundaryKind bc);

    std::size_t dim() const noexcept { return partitions_.size(); }
    BoundaryKind bc() const noexcept { return bc_; }
    const Partition1D& axis(std::size_t a) const { return partitions_.at(a); }
    const std::vector<Partition1D>& partitions() const noexcept { return partitions_; }

    std::size_t axis_dofs(std::size_t a) const;
    Shape dof_shape() const;
    std::size_t total_dofs() const;

    /// Mesh-node index (0..N) of the owned node with dof index j on axis a.
    std::size_t node_of_dof(std::size_t /*axis*/, std::size_t j) const {
        return is_dirichlet(bc_) ? j + 1 : j;
    }
    /// Coordinates of all owned nodes along axis a.
    std::vector<double> dof_coordinates(std::size_t a) const;

    /// max(h_i) / min(h_i).
    double aspect_ratio() const;

    /// "64x32" style label.
    std::string resolution_label() const;

    double volume() const;

private:
    std::vector<Partition1D> partitions_;
    BoundaryKind bc_;
};

Shape dof_shape(const TensorMesh& mesh);

std::vector<double> node_coordinates(const TensorMesh& mesh, const MultiIndex& index);

} // namespace eife
