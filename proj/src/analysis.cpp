#include "eife/analysis.hpp"

#include "eife/errors.hpp"
#include "eife/fem_assembly.hpp"
#include "eife/quadrature.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace eife {

namespace {

// Value and gradient of the multilinear field at quadrature point q of element `elem`.
struct FieldSample {
    double value = 0.0;
    std::array<double, kMaxRank> grad{};
};

class FullField {
public:
    FullField(const TensorD& field, const TensorMesh& mesh) : field_(field), dim_(mesh.dim()) {
        for (std::size_t a = 0; a < dim_; ++a) strides_[a] = field.stride(a);
    }

    void gather(const ElementQuadrature& quad, const std::array<std::size_t, kMaxRank>& elem,
                std::array<double, 8>& corners) const {
        for (std::size_t c = 0; c < quad.num_corners(); ++c) {
            const auto node = quad.corner_node(elem, c);
            std::size_t flat = 0;
            for (std::size_t a = 0; a < dim_; ++a) flat += node[a] * strides_[a];
            corners[c] = field_[flat];
        }
    }

    FieldSample sample(const ElementQuadrature& quad, std::size_t q, const std::array<double, 8>& corners) const {
        FieldSample s;
        for (std::size_t c = 0; c < quad.num_corners(); ++c) {
            s.value += corners[c] * quad.basis(q, c);
            for (std::size_t a = 0; a < dim_; ++a) s.grad[a] += corners[c] * quad.basis_grad(q, c, a);
        }
        return s;
    }

private:
    const TensorD& field_;
    std::size_t dim_;
    std::array<std::size_t, kMaxRank> strides_{};
};

Shape full_shape_of(const TensorMesh& mesh) {
    Shape s(mesh.dim());
    for (std::size_t a = 0; a < mesh.dim(); ++a) s[a] = mesh.axis(a).n + 1;
    return s;
}

// Exact gradient by centred differences with a step scaled to the element size.
std::array<double, kMaxRank> exact_gradient(const SpaceTimeFn& exact, double t, std::array<double, kMaxRank> x,
                                            const TensorMesh& mesh) {
    std::array<double, kMaxRank> g{};
    const std::size_t d = mesh.dim();
    for (std::size_t a = 0; a < d; ++a) {
        const double delta = 1e-5 * mesh.axis(a).h;
        auto xp = x;
        auto xm = x;
        xp[a] += delta;
        xm[a] -= delta;
        g[a] = (exact(t, Point(xp.data(), d)) - exact(t, Point(xm.data(), d))) / (2.0 * delta);
    }
    return g;
}

} // namespace

std::string_view to_string(ErrorReference ref) { return ref == ErrorReference::Exact ? "exact" : "interpolant"; }

ErrorReference parse_error_reference(std::string_view text) {
    if (text == "exact") return ErrorReference::Exact;
    if (text == "interpolant") return ErrorReference::Interpolant;
    throw ConfigError("unknown error reference '" + std::string(text) + "'");
}

ErrorNorms error_norms_full(const TensorD& full_field, const TensorMesh& mesh, const SpaceTimeFn& exact, double t,
                            const NormOptions& options) {
    if (full_field.shape() != full_shape_of(mesh)) throw ShapeError("error_norms: field must cover every mesh node");
    if (!exact) throw ConfigError("error_norms: no exact solution available");
    const std::size_t d = mesh.dim();

    TensorD diff = full_field;
    if (options.reference == ErrorReference::Interpolant) {
        for (std::size_t i = 0; i < diff.size(); ++i) {
            const MultiIndex node = diff.multi_index(i);
            std::array<double, kMaxRank> x{};
            for (std::size_t a = 0; a < d; ++a) x[a] = mesh.axis(a).node(node[a]);
            diff[i] -= exact(t, Point(x.data(), d));
        }
    }
    const FullField field(diff, mesh);
    const bool against_exact = options.reference == ErrorReference::Exact;

    auto integrate = [&](std::size_t points, bool gradient) {
        const ElementQuadrature quad(mesh, points);
        double sum = 0.0;
        std::array<double, 8> corners{};
        for (std::size_t e = 0; e < quad.num_elements(); ++e) {
            const auto elem = quad.element_index(e);
            field.gather(quad, elem, corners);
            for (std::size_t q = 0; q < quad.num_points(); ++q) {
                FieldSample s = field.sample(quad, q, corners);
                double v = 0.0;
                if (gradient) {
                    if (against_exact) {
                        const auto g = exact_gradient(exact, t, quad.point(elem, q), mesh);
                        for (std::size_t a = 0; a < d; ++a) s.grad[a] -= g[a];
                    }
                    for (std::size_t a = 0; a < d; ++a) v += s.grad[a] * s.grad[a];
                } else {
                    if (against_exact) {
                        const auto x = quad.point(elem, q);
                        s.value -= exact(t, Point(x.data(), d));
                    }
                    v = s.value * s.value;
                }
                sum += quad.weight(q) * v;
            }
        }
        return sum;
    };
    const double l2 = integrate(options.points_per_axis, false);
    const double semi = integrate(options.gradient_points_per_axis, true);
    return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

ErrorNorms error_norms(const TensorD& u_nodal, const TensorMesh& mesh, const Problem& problem, double t,
                       const NormOptions& options) {
    return error_norms_full(full_nodal_field(u_nodal, mesh, problem, t), mesh, problem.exact, t, options);
}

namespace {

double energy_impl(const TensorD& u_nodal, const TensorMesh& mesh, const FloryHugginsParams& params,
                   std::size_t points, bool gradient_only) {
    if (!gradient_only) {
        for (double v : u_nodal.data()) {
            if (!(std::abs(v) < 1.0)) {
                std::ostringstream msg;
                msg << "energy undefined for nodal value " << v << " outside (-1, 1)";
                throw DomainError(msg.str(), v);
            }
        }
    }
    // Boundary values only matter for Dirichlet meshes, where the energy is taken with zero trace.
    Problem zero;
    zero.bc = mesh.bc() == BoundaryKind::Periodic ? BoundaryKind::Periodic : BoundaryKind::HomogeneousDirichlet;
    const TensorD full = full_nodal_field(u_nodal, mesh, zero, 0.0);
    const ElementQuadrature quad(mesh, points);
    const FullField field(full, mesh);
    const std::size_t d = mesh.dim();
    const double half_eps2 = 0.5 * params.eps * params.eps;
    double energy = 0.0;
    std::array<double, 8> corners{};
    for (std::size_t e = 0; e < quad.num_elements(); ++e) {
        const auto elem = quad.element_index(e);
        field.gather(quad, elem, corners);
        for (std::size_t q = 0; q < quad.num_points(); ++q) {
            const FieldSample s = field.sample(quad, q, corners);
            double grad2 = 0.0;
            for (std::size_t a = 0; a < d; ++a) grad2 += s.grad[a] * s.grad[a];
            double density = half_eps2 * grad2;
            if (!gradient_only) {
                const double u = s.value;
                density += 0.5 * params.theta * ((1.0 + u) * std::log1p(u) + (1.0 - u) * std::log1p(-u)) -
                           0.5 * params.theta_c * u * u;
            }
            energy += quad.weight(q) * density;
        }
    }
    return energy;
}

} // namespace

double discrete_energy(const TensorD& u_nodal, const TensorMesh& mesh, const FloryHugginsParams& params,
                       std::size_t points_per_axis) {
    return energy_impl(u_nodal, mesh, params, points_per_axis, false);
}

double gradient_energy(const TensorD& u_nodal, const TensorMesh& mesh, double eps, std::size_t points_per_axis) {
    FloryHugginsParams p;
    p.eps = eps;
    return energy_impl(u_nodal, mesh, p, points_per_axis, true);
}

double sup_norm(const TensorD& u_nodal) { return max_abs(u_nodal); }

double convergence_rate(double coarse_error, double fine_error) { return std::log2(coarse_error / fine_error); }

double growth_factor(double coarse_seconds, double fine_seconds, double coarse_nodes, double fine_nodes) {
    return std::log(fine_seconds / coarse_seconds) / std::log(fine_nodes / coarse_nodes);
}

namespace {

double cell_count(const TensorMesh& mesh) {
    double n = 1.0;
    for (const auto& p : mesh.partitions()) n *= static_cast<double>(p.n);
    return n;
}

StudyRow run_rung(const StudySpec& spec, const StudyRung& rung, bool with_errors) {
    SchemeConfig cfg;
    cfg.scheme = spec.scheme;
    cfg.c2 = spec.c2;
    cfg.final_time = spec.final_time;
    cfg.dt = spec.final_time / static_cast<double>(rung.nt);
    const RunResult result = run(spec.problem, rung.mesh, cfg, {}, spec.run);
    StudyRow row;
    row.resolution = rung.mesh.resolution_label();
    row.nt = rung.nt;
    row.nodes = cell_count(rung.mesh);
    row.seconds_per_step = result.seconds_per_step;
    if (with_errors && spec.problem.has_exact()) {
        const ErrorNorms e = error_norms(result.u_nodal, rung.mesh, spec.problem, result.state.t, spec.norms);
        row.err_l2 = e.l2;
        row.err_h1 = e.h1;
    }
    return row;
}

StudyReport make_report(const StudySpec& spec, const char* kind) {
    StudyReport report;
    report.problem = spec.problem.name;
    report.scheme = std::string(to_string(spec.scheme));
    report.kind = kind;
    return report;
}

} // namespace

StudyReport convergence_study(const StudySpec& spec) {
    if (!spec.problem.has_exact()) throw ConfigError("convergence study needs a problem with an exact solution");
    StudyReport report = make_report(spec, "convergence");
    for (const auto& rung : spec.rungs) {
        StudyRow row = run_rung(spec, rung, true);
        if (!report.rows.empty()) {
            const StudyRow& prev = report.rows.back();
            row.rate_l2 = convergence_rate(*prev.err_l2, *row.err_l2);
            row.rate_h1 = convergence_rate(*prev.err_h1, *row.err_h1);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

StudyReport timing_study(const StudySpec& spec) {
    StudyReport report = make_report(spec, "timing");
    for (const auto& rung : spec.rungs) {
        StudyRow row = run_rung(spec, rung, false);
        if (!report.rows.empty()) {
            const StudyRow& prev = report.rows.back();
            row.growth = growth_factor(prev.seconds_per_step, row.seconds_per_step, prev.nodes, row.nodes);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<TensorMesh> dyadic_meshes(const std::vector<double>& lower, const std::vector<double>& upper,
                                      std::vector<std::size_t> n0, std::size_t levels, BoundaryKind bc) {
    std::vector<TensorMesh> meshes;
    for (std::size_t l = 0; l < levels; ++l) {
        meshes.push_back(TensorMesh::box(lower, upper, n0, bc));
        for (auto& n : n0) n *= 2;
    }
    return meshes;
}

Observer SeriesRecorder::observer() {
    return [this](const Observation& obs) {
        SeriesRow row{obs.step, obs.t, sup_norm(obs.u_nodal), std::nullopt, std::nullopt, std::nullopt};
        if (obs.problem.energy) row.energy = discrete_energy(obs.u_nodal, obs.mesh, *obs.problem.energy);
        if (obs.problem.has_exact()) {
            const ErrorNorms e = error_norms(obs.u_nodal, obs.mesh, obs.problem, obs.t, norms_);
            row.err_l2 = e.l2;
            row.err_h1 = e.h1;
        }
        rows_.push_back(row);
    };
}

} // namespace eife
