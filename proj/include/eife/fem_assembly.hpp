#pragma once

#include "eife/exponential_operator.hpp"
#include "eife/mesh.hpp"
#include "eife/problems.hpp"
#include "eife/tensor.hpp"

#include <vector>

namespace eife {

enum class InitialMode { Interpolate, L2Projection };

/// How the reaction enters the load vector F_i = (f(t, u_i), phi_i).
enum class ReactionLoad {
    Lumped,       // f(t, x_i, u_i) times the integral of phi_i: h_x h_y h_z f_i
    Interpolated  // mass matrix applied to the nodal values: (M f)_i
};

struct LoadOptions {
    ReactionLoad reaction = ReactionLoad::Interpolated;
};

/// Coupling of one owned node to one boundary node through the assembled
/// mass and stiffness matrices.
struct BoundaryCoupling {
    std::size_t dof;            // flat index into the dof tensor
    std::size_t boundary_node;  // index into LoadContext::boundary_points
    double mass;
    double stiffness;
};

/// Everything needed to evaluate the transformed load for one problem on one mesh.
class LoadContext {
public:
    LoadContext(const Problem& problem, const TensorMesh& mesh, LoadOptions options = {});

    const Problem& problem() const noexcept { return *problem_; }
    const TensorMesh& mesh() const noexcept { return *mesh_; }
    const DiagonalizedOperator& op() const noexcept { return op_; }
    const LoadOptions& options() const noexcept { return options_; }

    const std::vector<std::vector<double>>& axis_coordinates() const noexcept { return coords_; }
    const std::vector<BoundaryCoupling>& couplings() const noexcept { return couplings_; }
    /// Coordinates of boundary nodes referenced by couplings, packed dim() per node.
    const std::vector<double>& boundary_points() const noexcept { return boundary_points_; }

    bool has_boundary_terms() const noexcept { return !couplings_.empty(); }

    /// Reaction f(t, x, U) evaluated at every owned node.
    TensorD nodal_reaction(double t, const TensorD& u) const;

    /// Boundary-lifting load C(t) on the owned nodes (zero tensor when not applicable).
    TensorD boundary_load(double t) const;

private:
    const Problem* problem_;
    const TensorMesh* mesh_;
    LoadOptions options_;
    DiagonalizedOperator op_;
    std::vector<std::vector<double>> coords_;
    std::vector<BoundaryCoupling> couplings_;
    std::vector<double> boundary_points_;
};

/// Initial nodal tensor: interpolation of u0 (or the seeded random field), or
/// its discrete L2 projection onto the finite element space.
TensorD initial_state(const Problem& problem, const TensorMesh& mesh,
                      InitialMode mode = InitialMode::Interpolate);

/// Ĥ ⊙ forward_transform(F(t, U) + C(t)).
TensorD transformed_load(const LoadContext& ctx, double t, const TensorD& u_nodal);

/// Oracle: dU/dt = M^{-1}(F(t,U) - D K U) by dense Kronecker assembly and direct solve.
/// Throws ScaleError above kDenseOracleMaxDofs unknowns.
inline constexpr std::size_t kDenseOracleMaxDofs = 4096;
TensorD dense_semidiscrete_rhs(const LoadContext& ctx, double t, const TensorD& u_nodal);

/// Nodal values on every mesh node (extent N+1 per axis), with Dirichlet
/// boundary values from the problem and periodic wraparound copies.
TensorD full_nodal_field(const TensorD& u_nodal, const TensorMesh& mesh, const Problem& problem, double t);

} // namespace eife
