#include "eife/mesh.hpp"

#include "eife/errors.hpp"

#include <algorithm>
#include <cmath>

namespace eife {

Partition1D::Partition1D(double a_, double b_, std::size_t n_)
    : a(a_), b(b_), n(n_), h((b_ - a_) / static_cast<double>(n_)) {
    if (!(b > a)) throw ConfigError("partition requires b > a");
    if (n < 2) throw ConfigError("partition requires at least 2 subintervals");
}

std::string_view to_string(BoundaryKind kind) {
    switch (kind) {
    case BoundaryKind::HomogeneousDirichlet: return "homogeneous_dirichlet";
    case BoundaryKind::Dirichlet: return "dirichlet";
    case BoundaryKind::Periodic: return "periodic";
    }
    return "unknown";
}

BoundaryKind parse_boundary_kind(std::string_view text) {
    if (text == "homogeneous_dirichlet" || text == "zero") return BoundaryKind::HomogeneousDirichlet;
    if (text == "dirichlet") return BoundaryKind::Dirichlet;
    if (text == "periodic") return BoundaryKind::Periodic;
    throw ConfigError("unknown boundary kind '" + std::string(text) + "'");
}

TensorMesh::TensorMesh(std::vector<Partition1D> partitions, BoundaryKind bc)
    : partitions_(std::move(partitions)), bc_(bc) {
    if (partitions_.empty() || partitions_.size() > kMaxRank) {
        throw ConfigError("mesh dimension must be 1, 2 or 3");
    }
}

TensorMesh TensorMesh::box(const std::vector<double>& lower, const std::vector<double>& upper,
                           const std::vector<std::size_t>& n, BoundaryKind bc) {
    if (lower.size() != upper.size() || lower.size() != n.size()) {
        throw ConfigError("mesh bounds and subdivisions must have the same length");
    }
    std::vector<Partition1D> parts;
    for (std::size_t a = 0; a < n.size(); ++a) parts.emplace_back(lower[a], upper[a], n[a]);
    return TensorMesh(std::move(parts), bc);
}

std::size_t TensorMesh::axis_dofs(std::size_t a) const {
    const std::size_t n = axis(a).n;
    return is_dirichlet(bc_) ? n - 1 : n;
}

Shape TensorMesh::dof_shape() const {
    Shape s(dim());
    for (std::size_t a = 0; a < dim(); ++a) s[a] = axis_dofs(a);
    return s;
}

std::size_t TensorMesh::total_dofs() const {
    std::size_t n = 1;
    for (std::size_t a = 0; a < dim(); ++a) n *= axis_dofs(a);
    return n;
}

std::vector<double> TensorMesh::dof_coordinates(std::size_t a) const {
    std::vector<double> x(axis_dofs(a));
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = axis(a).node(node_of_dof(a, j));
    return x;
}

double TensorMesh::aspect_ratio() const {
    double lo = partitions_.front().h;
    double hi = lo;
    for (const auto& p : partitions_) {
        lo = std::min(lo, p.h);
        hi = std::max(hi, p.h);
    }
    return hi / lo;
}

std::string TensorMesh::resolution_label() const {
    std::string s;
    for (std::size_t a = 0; a < dim(); ++a) {
        if (a) s += 'x';
        s += std::to_string(axis(a).n);
    }
    return s;
}

double TensorMesh::volume() const {
    double v = 1.0;
    for (const auto& p : partitions_) v *= p.length();
    return v;
}

Shape dof_shape(const TensorMesh& mesh) { return mesh.dof_shape(); }

std::vector<double> node_coordinates(const TensorMesh& mesh, const MultiIndex& index) {
    if (index.size() != mesh.dim()) throw BoundsError("node index rank mismatch");
    std::vector<double> x(mesh.dim());
    for (std::size_t a = 0; a < mesh.dim(); ++a) {
        if (index[a] >= mesh.axis_dofs(a)) throw BoundsError("node index out of range");
        x[a] = mesh.axis(a).node(mesh.node_of_dof(a, index[a]));
    }
    return x;
}

} // namespace eife
