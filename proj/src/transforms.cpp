#include "eife/transforms.hpp"

#include "eife/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

namespace eife {

namespace {

using std::numbers::pi;

enum class Kernel { DstI, RealToHalfComplex, HalfComplexToReal };

// FFTW's planner is not reentrant; executing an existing plan on new arrays is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(Kernel kernel, std::size_t n) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(kernel, n);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const int len = static_cast<int>(n);
        double* in = fftw_alloc_real(n);
        double* out = fftw_alloc_real(n);
        fftw_r2r_kind kind = FFTW_RODFT00;
        if (kernel == Kernel::RealToHalfComplex) kind = FFTW_R2HC;
        if (kernel == Kernel::HalfComplexToReal) kind = FFTW_HC2R;
        // ESTIMATE keeps plan selection, and so the arithmetic, identical across runs.
        fftw_plan plan = fftw_plan_r2r_1d(len, in, out, kind, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<Kernel, std::size_t>, fftw_plan> plans_;
};

struct FftwBuffer {
    double* in = nullptr;
    double* out = nullptr;
    std::size_t n = 0;

    void reserve(std::size_t len) {
        if (len <= n) return;
        release();
        in = fftw_alloc_real(len);
        out = fftw_alloc_real(len);
        n = len;
    }
    void release() {
        if (in) fftw_free(in);
        if (out) fftw_free(out);
        in = out = nullptr;
        n = 0;
    }
    ~FftwBuffer() { release(); }
};

void run_kernel(Kernel kernel, std::span<double> line, double scale) {
    thread_local FftwBuffer buffer;
    const std::size_t n = line.size();
    buffer.reserve(n);
    fftw_plan plan = PlanCache::instance().get(kernel, n);
    std::copy(line.begin(), line.end(), buffer.in);
    fftw_execute_r2r(plan, buffer.in, buffer.out);
    for (std::size_t i = 0; i < n; ++i) line[i] = scale * buffer.out[i];
}

void require_dof_shape(const TensorD& u, const TensorMesh& mesh) {
    if (u.shape() != mesh.dof_shape()) throw ShapeError("tensor shape does not match mesh degrees of freedom");
}

void add_element(DenseMatrix& m, std::size_t i, std::size_t j, double v) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += v;
}

} // namespace

AxisMatrices build_axis_matrices(const Partition1D& p, BoundaryKind bc) {
    const bool periodic = bc == BoundaryKind::Periodic;
    const std::size_t n = periodic ? p.n : p.n - 1;
    const auto dim = static_cast<Eigen::Index>(n);
    AxisMatrices out{DenseMatrix::Zero(dim, dim), DenseMatrix::Zero(dim, dim)};
    const double h = p.h;
    // Element-by-element assembly over [x_e, x_{e+1}], mapping mesh nodes onto owned dofs.
    auto owned = [&](std::size_t node, std::size_t& dof) {
        if (periodic) {
            dof = node % p.n;
            return true;
        }
        if (node == 0 || node == p.n) return false;
        dof = node - 1;
        return true;
    };
    const double local_mass[2][2] = {{2.0 * h / 6.0, h / 6.0}, {h / 6.0, 2.0 * h / 6.0}};
    const double local_stiff[2][2] = {{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}};
    for (std::size_t e = 0; e < p.n; ++e) {
        for (std::size_t r = 0; r < 2; ++r) {
            std::size_t dr = 0;
            if (!owned(e + r, dr)) continue;
            for (std::size_t c = 0; c < 2; ++c) {
                std::size_t dc = 0;
                if (!owned(e + c, dc)) continue;
                add_element(out.mass, dr, dc, local_mass[r][c]);
                add_element(out.stiffness, dr, dc, local_stiff[r][c]);
            }
        }
    }
    return out;
}

AxisSpectrum axis_spectrum(const Partition1D& p, BoundaryKind bc) {
    AxisSpectrum s;
    const double h = p.h;
    const double n = static_cast<double>(p.n);
    if (bc == BoundaryKind::Periodic) {
        for (std::size_t k = 0; k < p.n; ++k) {
            const double sn = std::sin(static_cast<double>(k) * pi / n);
            s.lambda_stiff.push_back(4.0 / h * sn * sn);
            s.lambda_mass.push_back(h / 6.0 * (6.0 - 4.0 * sn * sn));
        }
    } else {
        for (std::size_t i = 1; i < p.n; ++i) {
            const double sn = std::sin(static_cast<double>(i) * pi / (2.0 * n));
            s.lambda_stiff.push_back(4.0 / h * sn * sn);
            s.lambda_mass.push_back(h / 6.0 * (6.0 - 4.0 * sn * sn));
        }
    }
    return s;
}

DenseMatrix transform_basis(const Partition1D& p, BoundaryKind bc) {
    const double n = static_cast<double>(p.n);
    if (bc == BoundaryKind::Periodic) {
        const auto dim = static_cast<Eigen::Index>(p.n);
        DenseMatrix basis(dim, dim);
        for (Eigen::Index j = 0; j < dim; ++j) {
            for (Eigen::Index m = 0; m < dim; ++m) {
                const double arg = 2.0 * pi * static_cast<double>(j * m) / n;
                basis(j, m) = (2 * m <= dim) ? std::cos(arg) : std::sin(arg);
            }
        }
        return basis;
    }
    const auto dim = static_cast<Eigen::Index>(p.n - 1);
    DenseMatrix basis(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            basis(i, j) = std::sin(static_cast<double>((i + 1) * (j + 1)) * pi / n);
        }
    }
    return basis;
}

DenseMatrix inverse_transform_matrix(const Partition1D& p, BoundaryKind bc) {
    const DenseMatrix basis = transform_basis(p, bc);
    if (bc != BoundaryKind::Periodic) return (2.0 / static_cast<double>(p.n)) * basis;
    // Columns of the basis are orthogonal with squared norms N (m = 0, N/2) or N/2.
    DenseMatrix inv = basis;
    const auto dim = basis.cols();
    for (Eigen::Index m = 0; m < dim; ++m) {
        const bool full = m == 0 || 2 * m == dim;
        inv.col(m) /= full ? static_cast<double>(dim) : static_cast<double>(dim) / 2.0;
    }
    return inv;
}

TensorD forward_transform(const TensorD& u, const TensorMesh& mesh) {
    require_dof_shape(u, mesh);
    TensorD out = u;
    const bool periodic = mesh.bc() == BoundaryKind::Periodic;
    const Kernel kernel = periodic ? Kernel::RealToHalfComplex : Kernel::DstI;
    // FFTW's RODFT00 carries a factor 2 relative to P.
    const double scale = periodic ? 1.0 : 0.5;
    for (std::size_t a = 0; a < mesh.dim(); ++a) {
        for_each_line(out, a, [&](std::span<double> line) { run_kernel(kernel, line, scale); });
    }
    return out;
}

TensorD inverse_transform(const TensorD& u_tilde, const TensorMesh& mesh) {
    require_dof_shape(u_tilde, mesh);
    TensorD out = u_tilde;
    const bool periodic = mesh.bc() == BoundaryKind::Periodic;
    const Kernel kernel = periodic ? Kernel::HalfComplexToReal : Kernel::DstI;
    for (std::size_t a = 0; a < mesh.dim(); ++a) {
        // (2/N)·P = RODFT00 / N; HC2R is the unnormalized inverse of R2HC.
        const double scale = 1.0 / static_cast<double>(mesh.axis(a).n);
        for_each_line(out, a, [&](std::span<double> line) { run_kernel(kernel, line, scale); });
    }
    return out;
}

TensorD forward_transform_dense(const TensorD& u, const TensorMesh& mesh) {
    require_dof_shape(u, mesh);
    TensorD out = u;
    for (std::size_t a = 0; a < mesh.dim(); ++a) {
        out = mode_multiply(transform_basis(mesh.axis(a), mesh.bc()).transpose(), out, a);
    }
    return out;
}

TensorD inverse_transform_dense(const TensorD& u_tilde, const TensorMesh& mesh) {
    require_dof_shape(u_tilde, mesh);
    TensorD out = u_tilde;
    for (std::size_t a = 0; a < mesh.dim(); ++a) {
        out = mode_multiply(inverse_transform_matrix(mesh.axis(a), mesh.bc()), out, a);
    }
    return out;
}

} // namespace eife
