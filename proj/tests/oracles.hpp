// Independent dense realizations used to check the fast paths.
#pragma once

#include "eife/exponential_operator.hpp"
#include "eife/fem_assembly.hpp"
#include "eife/time_stepper.hpp"
#include "eife/mesh.hpp"
#include "eife/tensor.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using eife::DenseMatrix;

// 1D P1 mass and stiffness on the owned nodes, written out entry by entry.
inline DenseMatrix mass_1d(const eife::Partition1D& p, eife::BoundaryKind bc) {
    const bool periodic = bc == eife::BoundaryKind::Periodic;
    const auto n = static_cast<Eigen::Index>(periodic ? p.n : p.n - 1);
    DenseMatrix m = DenseMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = 4.0 * p.h / 6.0;
        if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = p.h / 6.0;
    }
    if (periodic) {
        m(0, n - 1) += p.h / 6.0;
        m(n - 1, 0) += p.h / 6.0;
    }
    return m;
}

inline DenseMatrix stiffness_1d(const eife::Partition1D& p, eife::BoundaryKind bc) {
    const bool periodic = bc == eife::BoundaryKind::Periodic;
    const auto n = static_cast<Eigen::Index>(periodic ? p.n : p.n - 1);
    DenseMatrix k = DenseMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = 2.0 / p.h;
        if (i + 1 < n) k(i, i + 1) = k(i + 1, i) = -1.0 / p.h;
    }
    if (periodic) {
        k(0, n - 1) -= 1.0 / p.h;
        k(n - 1, 0) -= 1.0 / p.h;
    }
    return k;
}

inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Row-major (last axis fastest) Kronecker products of the per-axis matrices.
struct DenseSystem {
    DenseMatrix mass;
    DenseMatrix stiffness;
};

inline DenseSystem assemble(const eife::TensorMesh& mesh) {
    const std::size_t d = mesh.dim();
    std::vector<DenseMatrix> m(d), k(d);
    for (std::size_t a = 0; a < d; ++a) {
        m[a] = mass_1d(mesh.axis(a), mesh.bc());
        k[a] = stiffness_1d(mesh.axis(a), mesh.bc());
    }
    auto product = [&](std::size_t replace) {
        DenseMatrix out = replace == 0 ? k[0] : m[0];
        for (std::size_t a = 1; a < d; ++a) out = kron(out, replace == a ? k[a] : m[a]);
        return out;
    };
    DenseSystem s;
    s.mass = product(d);
    s.stiffness = product(0);
    for (std::size_t a = 1; a < d; ++a) s.stiffness += product(a);
    return s;
}

// phi_k(-tau L) with L = M^{-1} K D, through the generalized eigenproblem K v = lambda M v.
class DenseExponential {
public:
    DenseExponential(const DenseSystem& s, double diffusion) : mass_(s.mass) {
        Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(s.stiffness, s.mass);
        vectors_ = es.eigenvectors();
        values_ = diffusion * es.eigenvalues();
    }

    DenseMatrix phi(int k, double tau) const {
        Eigen::VectorXd d(values_.size());
        for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = eife::phi(k, -tau * values_[i]);
        // V^T M V = I, so M^{-1} K = V diag V^T M.
        return vectors_ * d.asDiagonal() * vectors_.transpose() * mass_;
    }

    DenseMatrix generator() const { return vectors_ * values_.asDiagonal() * vectors_.transpose() * mass_; }

private:
    DenseMatrix mass_;
    DenseMatrix vectors_;
    Eigen::VectorXd values_;
};

inline Eigen::VectorXd as_vector(const eife::TensorD& t) {
    return Eigen::Map<const Eigen::VectorXd>(t.data().data(), static_cast<Eigen::Index>(t.size()));
}

inline eife::TensorD as_tensor(const Eigen::VectorXd& v, const eife::Shape& shape) {
    return eife::TensorD(shape, std::vector<double>(v.data(), v.data() + v.size()));
}

inline eife::TensorD random_tensor(const eife::Shape& shape, unsigned seed, double lo = -1.0, double hi = 1.0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    eife::TensorD t(shape);
    for (auto& v : t.data()) v = dist(gen);
    return t;
}

// Nodal-space step with dense phi functions of M^{-1} K.
inline eife::TensorD dense_step(const eife::LoadContext& ctx, eife::Scheme scheme, const eife::TensorD& u0, double t,
                                double dt, double c2) {
    const eife::TensorMesh& mesh = ctx.mesh();
    const DenseExponential ex(assemble(mesh), ctx.problem().diffusion);
    const DenseMatrix gen = ex.generator();
    auto load = [&](double tt, const Eigen::VectorXd& u) {
        const eife::TensorD ut = as_tensor(u, mesh.dof_shape());
        return Eigen::VectorXd(as_vector(eife::dense_semidiscrete_rhs(ctx, tt, ut)) + gen * u);
    };
    const Eigen::VectorXd u = as_vector(u0);
    const Eigen::VectorXd g1 = load(t, u);
    Eigen::VectorXd out;
    if (scheme == eife::Scheme::Eife1) {
        out = ex.phi(0, dt) * u + dt * (ex.phi(1, dt) * g1);
    } else {
        const Eigen::VectorXd stage = ex.phi(0, c2 * dt) * u + c2 * dt * (ex.phi(1, c2 * dt) * g1);
        const Eigen::VectorXd g2 = load(t + c2 * dt, stage);
        const DenseMatrix p1 = ex.phi(1, dt);
        const DenseMatrix p2 = ex.phi(2, dt);
        out = ex.phi(0, dt) * u + dt * ((p1 - p2 / c2) * g1 + (p2 / c2) * g2);
    }
    return as_tensor(out, mesh.dof_shape());
}

} // namespace oracle
