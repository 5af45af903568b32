#include "eife/fem_assembly.hpp"

#include "eife/errors.hpp"
#include "eife/quadrature.hpp"
#include "eife/transforms.hpp"

#include <array>
#include <cmath>
#include <string>

namespace eife {

namespace {

// Advances a row-major multi-index; returns false after the last entry.
bool next_index(std::array<std::size_t, kMaxRank>& idx, const Shape& shape) {
    for (std::size_t a = shape.size(); a-- > 0;) {
        if (++idx[a] < shape[a]) return true;
        idx[a] = 0;
    }
    return false;
}

Shape full_shape(const TensorMesh& mesh) {
    Shape s(mesh.dim());
    for (std::size_t a = 0; a < mesh.dim(); ++a) s[a] = mesh.axis(a).n + 1;
    return s;
}

double cell_volume(const TensorMesh& mesh) {
    double v = 1.0;
    for (const auto& p : mesh.partitions()) v *= p.h;
    return v;
}

// Couplings between owned (interior) nodes and boundary nodes of a Dirichlet mesh.
void build_couplings(const TensorMesh& mesh, std::vector<BoundaryCoupling>& couplings,
                     std::vector<double>& points) {
    const std::size_t d = mesh.dim();
    const Shape full = full_shape(mesh);
    const Shape dofs = mesh.dof_shape();
    std::array<std::size_t, kMaxRank> node{};
    std::size_t neighbours = 1;
    for (std::size_t a = 0; a < d; ++a) neighbours *= 3;
    do {
        bool on_boundary = false;
        for (std::size_t a = 0; a < d; ++a) on_boundary |= node[a] == 0 || node[a] == full[a] - 1;
        if (!on_boundary) continue;
        const std::size_t boundary_id = points.size() / d;
        bool referenced = false;
        for (std::size_t k = 0; k < neighbours; ++k) {
            std::size_t rest = k;
            bool interior = true;
            double mass = 1.0;
            std::array<double, kMaxRank> m{};
            std::array<double, kMaxRank> s{};
            std::array<std::size_t, kMaxRank> owner{};
            for (std::size_t a = d; a-- > 0;) {
                const int offset = static_cast<int>(rest % 3) - 1;
                rest /= 3;
                const long nb = static_cast<long>(node[a]) + offset;
                if (nb < 1 || nb > static_cast<long>(full[a]) - 2) {
                    interior = false;
                    break;
                }
                owner[a] = static_cast<std::size_t>(nb - 1);
                const double h = mesh.axis(a).h;
                m[a] = offset == 0 ? 4.0 * h / 6.0 : h / 6.0;
                s[a] = offset == 0 ? 2.0 / h : -1.0 / h;
            }
            if (!interior) continue;
            std::size_t flat = 0;
            for (std::size_t a = 0; a < d; ++a) flat = flat * dofs[a] + owner[a];
            double stiff = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                mass *= m[a];
                double term = s[a];
                for (std::size_t b = 0; b < d; ++b) {
                    if (b != a) term *= m[b];
                }
                stiff += term;
            }
            couplings.push_back({flat, boundary_id, mass, stiff});
            referenced = true;
        }
        if (referenced) {
            for (std::size_t a = 0; a < d; ++a) points.push_back(mesh.axis(a).node(node[a]));
        }
    } while (next_index(node, full));
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

DenseMatrix kron_all(const std::vector<DenseMatrix>& factors) {
    DenseMatrix out = factors.back();
    for (std::size_t a = factors.size() - 1; a-- > 0;) out = kron(factors[a], out);
    return out;
}

} // namespace

LoadContext::LoadContext(const Problem& problem, const TensorMesh& mesh, LoadOptions options)
    : problem_(&problem), mesh_(&mesh), options_(options), op_(build_operator(mesh, problem.diffusion)) {
    if (!problem.reaction) throw ConfigError("problem '" + problem.name + "' has no reaction term");
    if (mesh.bc() == BoundaryKind::Dirichlet && !problem.boundary) {
        throw ConfigError("problem '" + problem.name + "' has no Dirichlet boundary data");
    }
    for (std::size_t a = 0; a < mesh.dim(); ++a) coords_.push_back(mesh.dof_coordinates(a));
    if (mesh.bc() == BoundaryKind::Dirichlet) build_couplings(mesh, couplings_, boundary_points_);
}

TensorD LoadContext::nodal_reaction(double t, const TensorD& u) const {
    const Shape shape = mesh_->dof_shape();
    if (u.shape() != shape) throw ShapeError("nodal_reaction: tensor does not match mesh");
    TensorD out(shape);
    const std::size_t d = mesh_->dim();
    std::array<std::size_t, kMaxRank> idx{};
    std::array<double, kMaxRank> x{};
    const auto& f = problem_->reaction;
    std::size_t flat = 0;
    do {
        for (std::size_t a = 0; a < d; ++a) x[a] = coords_[a][idx[a]];
        out[flat] = f(t, Point(x.data(), d), u[flat]);
        ++flat;
    } while (next_index(idx, shape));
    return out;
}

TensorD LoadContext::boundary_load(double t) const {
    TensorD c(mesh_->dof_shape());
    if (couplings_.empty()) return c;
    const std::size_t d = mesh_->dim();
    const std::size_t nb = boundary_points_.size() / d;
    std::vector<double> g(nb);
    std::vector<double> gdot(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const Point x(boundary_points_.data() + b * d, d);
        g[b] = problem_->boundary_value(t, x);
        gdot[b] = problem_->boundary_rate(t, x);
    }
    const double diff = problem_->diffusion;
    for (const auto& cp : couplings_) {
        c[cp.dof] -= cp.mass * gdot[cp.boundary_node] + diff * cp.stiffness * g[cp.boundary_node];
    }
    return c;
}

TensorD initial_state(const Problem& problem, const TensorMesh& mesh, InitialMode mode) {
    const Shape shape = mesh.dof_shape();
    TensorD u(shape);
    if (problem.random_initial) {
        // A nodal random field is already a member of the finite element space,
        // so both modes coincide.
        const auto& r = *problem.random_initial;
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = seeded_uniform(r.seed, i, r.low, r.high);
        return u;
    }
    if (!problem.initial) throw ConfigError("problem '" + problem.name + "' has no initial datum");
    const std::size_t d = mesh.dim();
    if (mode == InitialMode::Interpolate) {
        std::vector<std::vector<double>> coords;
        for (std::size_t a = 0; a < d; ++a) coords.push_back(mesh.dof_coordinates(a));
        std::array<std::size_t, kMaxRank> idx{};
        std::array<double, kMaxRank> x{};
        std::size_t flat = 0;
        do {
            for (std::size_t a = 0; a < d; ++a) x[a] = coords[a][idx[a]];
            u[flat++] = problem.initial(Point(x.data(), d));
        } while (next_index(idx, shape));
        return u;
    }

    // Discrete L2 projection: M u = (u0, phi) - M_IB g(0).
    TensorD load(shape);
    const ElementQuadrature quad(mesh, 5);
    const bool periodic = mesh.bc() == BoundaryKind::Periodic;
    for (std::size_t e = 0; e < quad.num_elements(); ++e) {
        const auto elem = quad.element_index(e);
        for (std::size_t q = 0; q < quad.num_points(); ++q) {
            const auto x = quad.point(elem, q);
            const double wv = quad.weight(q) * problem.initial(Point(x.data(), d));
            for (std::size_t c = 0; c < quad.num_corners(); ++c) {
                const auto node = quad.corner_node(elem, c);
                std::size_t flat = 0;
                bool owned = true;
                for (std::size_t a = 0; a < d; ++a) {
                    std::size_t j = node[a];
                    const std::size_t n = mesh.axis(a).n;
                    if (periodic) {
                        j %= n;
                    } else {
                        if (j == 0 || j == n) {
                            owned = false;
                            break;
                        }
                        j -= 1;
                    }
                    flat = flat * shape[a] + j;
                }
                if (owned) load[flat] += wv * quad.basis(q, c);
            }
        }
    }
    if (mesh.bc() == BoundaryKind::Dirichlet && problem.boundary) {
        std::vector<BoundaryCoupling> couplings;
        std::vector<double> points;
        build_couplings(mesh, couplings, points);
        for (const auto& cp : couplings) {
            load[cp.dof] -= cp.mass * problem.boundary(0.0, Point(points.data() + cp.boundary_node * d, d));
        }
    }
    const DiagonalizedOperator op = build_operator(mesh, 1.0);
    return inverse_transform(hadamard(op.load_weights, forward_transform(load, mesh)), mesh);
}

TensorD transformed_load(const LoadContext& ctx, double t, const TensorD& u_nodal) {
    const TensorMesh& mesh = ctx.mesh();
    TensorD f = ctx.nodal_reaction(t, u_nodal);
    if (ctx.options().reaction == ReactionLoad::Lumped) {
        f *= cell_volume(mesh);
        if (ctx.has_boundary_terms()) f += ctx.boundary_load(t);
        return hadamard(ctx.op().load_weights, forward_transform(f, mesh));
    }
    // Ĥ ⊙ P^T(A ⊗ ... ⊗ A f) = P^T f: the mass factors cancel against Ĥ.
    TensorD g = forward_transform(f, mesh);
    if (ctx.has_boundary_terms()) {
        g += hadamard(ctx.op().load_weights, forward_transform(ctx.boundary_load(t), mesh));
    }
    return g;
}

TensorD dense_semidiscrete_rhs(const LoadContext& ctx, double t, const TensorD& u_nodal) {
    const TensorMesh& mesh = ctx.mesh();
    const Problem& problem = ctx.problem();
    const std::size_t d = mesh.dim();
    const Shape shape = mesh.dof_shape();
    if (u_nodal.shape() != shape) throw ShapeError("dense_semidiscrete_rhs: tensor does not match mesh");
    if (mesh.total_dofs() > kDenseOracleMaxDofs) {
        throw ScaleError("dense oracle limited to " + std::to_string(kDenseOracleMaxDofs) + " unknowns, got " +
                         std::to_string(mesh.total_dofs()));
    }
    const double diff = problem.diffusion;
    const bool periodic = mesh.bc() == BoundaryKind::Periodic;

    // 1D matrices on every mesh node 0..N; periodic axes use the circulant ones directly.
    std::vector<DenseMatrix> mass_rows(d), stiff_rows(d), mass_sq(d), stiff_sq(d);
    for (std::size_t a = 0; a < d; ++a) {
        const auto& p = mesh.axis(a);
        if (periodic) {
            const AxisMatrices m = build_axis_matrices(p, mesh.bc());
            mass_sq[a] = m.mass;
            stiff_sq[a] = m.stiffness;
            continue;
        }
        const auto n = static_cast<Eigen::Index>(p.n);
        DenseMatrix mf = DenseMatrix::Zero(n + 1, n + 1);
        DenseMatrix kf = DenseMatrix::Zero(n + 1, n + 1);
        for (Eigen::Index e = 0; e < n; ++e) {
            mf.block(e, e, 2, 2) += (p.h / 6.0) * (DenseMatrix(2, 2) << 2, 1, 1, 2).finished();
            kf.block(e, e, 2, 2) += (1.0 / p.h) * (DenseMatrix(2, 2) << 1, -1, -1, 1).finished();
        }
        mass_rows[a] = mf.middleRows(1, n - 1);
        stiff_rows[a] = kf.middleRows(1, n - 1);
        mass_sq[a] = mass_rows[a].middleCols(1, n - 1);
        stiff_sq[a] = stiff_rows[a].middleCols(1, n - 1);
    }

    auto operator_sum = [&](const std::vector<DenseMatrix>& mass, const std::vector<DenseMatrix>& stiff) {
        DenseMatrix k;
        for (std::size_t a = 0; a < d; ++a) {
            std::vector<DenseMatrix> factors = mass;
            factors[a] = stiff[a];
            DenseMatrix term = kron_all(factors);
            k = a == 0 ? term : DenseMatrix(k + term);
        }
        return k;
    };

    const DenseMatrix m_ii = kron_all(mass_sq);
    const DenseMatrix k_ii = operator_sum(mass_sq, stiff_sq);
    const Eigen::Map<const Eigen::VectorXd> u(u_nodal.data().data(), static_cast<Eigen::Index>(u_nodal.size()));

    // Reaction at the owned nodes, coordinates recomputed from the partitions.
    Eigen::VectorXd f_int(u.size());
    {
        std::array<std::size_t, kMaxRank> idx{};
        std::array<double, kMaxRank> x{};
        Eigen::Index flat = 0;
        do {
            for (std::size_t a = 0; a < d; ++a) x[a] = mesh.axis(a).node(periodic ? idx[a] : idx[a] + 1);
            f_int[flat] = problem.reaction(t, Point(x.data(), d), u[flat]);
            ++flat;
        } while (next_index(idx, shape));
    }

    const bool lumped = ctx.options().reaction == ReactionLoad::Lumped;
    Eigen::VectorXd rhs = lumped ? Eigen::VectorXd(cell_volume(mesh) * f_int) : Eigen::VectorXd(m_ii * f_int);
    rhs -= diff * (k_ii * u);
    if (mesh.bc() == BoundaryKind::Dirichlet) {
        const DenseMatrix m_if = kron_all(mass_rows);
        const DenseMatrix k_if = operator_sum(mass_rows, stiff_rows);
        const Shape full = full_shape(mesh);
        Eigen::VectorXd g_full = Eigen::VectorXd::Zero(m_if.cols());
        Eigen::VectorXd gdot_full = Eigen::VectorXd::Zero(m_if.cols());
        std::array<std::size_t, kMaxRank> node{};
        std::array<double, kMaxRank> x{};
        Eigen::Index flat = 0;
        do {
            bool on_boundary = false;
            for (std::size_t a = 0; a < d; ++a) {
                x[a] = mesh.axis(a).node(node[a]);
                on_boundary |= node[a] == 0 || node[a] == full[a] - 1;
            }
            const Point p(x.data(), d);
            if (on_boundary) {
                g_full[flat] = problem.boundary_value(t, p);
                gdot_full[flat] = problem.boundary_rate(t, p);
            }
            ++flat;
        } while (next_index(node, full));
        rhs -= m_if * gdot_full + diff * (k_if * g_full);
    }
    const Eigen::VectorXd dudt = m_ii.llt().solve(rhs);
    return TensorD(shape, std::vector<double>(dudt.data(), dudt.data() + dudt.size()));
}

TensorD full_nodal_field(const TensorD& u_nodal, const TensorMesh& mesh, const Problem& problem, double t) {
    const Shape dofs = mesh.dof_shape();
    if (u_nodal.shape() != dofs) throw ShapeError("full_nodal_field: tensor does not match mesh");
    const Shape full = full_shape(mesh);
    const std::size_t d = mesh.dim();
    const bool periodic = mesh.bc() == BoundaryKind::Periodic;
    TensorD out(full);
    std::array<std::size_t, kMaxRank> node{};
    std::array<double, kMaxRank> x{};
    std::size_t flat = 0;
    do {
        bool on_boundary = false;
        std::size_t src = 0;
        for (std::size_t a = 0; a < d; ++a) {
            const std::size_t n = mesh.axis(a).n;
            if (periodic) {
                src = src * dofs[a] + node[a] % n;
            } else {
                on_boundary |= node[a] == 0 || node[a] == n;
                if (!on_boundary) src = src * dofs[a] + (node[a] - 1);
            }
        }
        if (on_boundary) {
            for (std::size_t a = 0; a < d; ++a) x[a] = mesh.axis(a).node(node[a]);
            out[flat] = problem.boundary_value(t, Point(x.data(), d));
        } else {
            out[flat] = u_nodal[src];
        }
        ++flat;
    } while (next_index(node, full));
    return out;
}

} // namespace eife
