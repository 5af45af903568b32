#pragma once

#include "eife/mesh.hpp"
#include "eife/problems.hpp"
#include "eife/tensor.hpp"
#include "eife/time_stepper.hpp"

#include <optional>
#include <string>
#include <vector>

namespace eife {

/// What the discrete solution is compared against.
enum class ErrorReference {
    Exact,       // u(t, x) itself, by quadrature
    Interpolant  // the nodal interpolant of u(t, ·) in the finite element space
};

std::string_view to_string(ErrorReference ref);
ErrorReference parse_error_reference(std::string_view text);

struct NormOptions {
    ErrorReference reference = ErrorReference::Exact;
    /// Gauss points per axis for the L2 part.
    std::size_t points_per_axis = 3;
    /// Gauss points per axis for the gradient part. One point samples the
    /// gradient at element centres, where the bilinear gradient superconverges.
    std::size_t gradient_points_per_axis = 1;
};

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;  // full H1 norm: sqrt(L2^2 + |grad|^2)
};

/// Errors of the multilinear field with nodal values `full_field` (every mesh
/// node, as produced by full_nodal_field) against `exact(t, ·)`.
ErrorNorms error_norms_full(const TensorD& full_field, const TensorMesh& mesh, const SpaceTimeFn& exact, double t,
                            const NormOptions& options = {});

/// Errors of owned-node values `u_nodal`, with boundary values taken from the problem.
ErrorNorms error_norms(const TensorD& u_nodal, const TensorMesh& mesh, const Problem& problem, double t,
                       const NormOptions& options = {});

/// Quadrature of the Flory-Huggins free energy of the multilinear interpolant.
double discrete_energy(const TensorD& u_nodal, const TensorMesh& mesh, const FloryHugginsParams& params,
                       std::size_t points_per_axis = 3);

/// The (eps^2/2)|grad u|^2 part of discrete_energy alone.
double gradient_energy(const TensorD& u_nodal, const TensorMesh& mesh, double eps, std::size_t points_per_axis = 3);

double sup_norm(const TensorD& u_nodal);

/// log2(coarse / fine).
double convergence_rate(double coarse_error, double fine_error);

/// log(t_fine / t_coarse) / log(nodes_fine / nodes_coarse).
double growth_factor(double coarse_seconds, double fine_seconds, double coarse_nodes, double fine_nodes);

struct StudyRow {
    std::string resolution;
    std::size_t nt = 0;
    double nodes = 0.0;
    std::optional<double> err_l2;
    std::optional<double> err_h1;
    std::optional<double> rate_l2;
    std::optional<double> rate_h1;
    double seconds_per_step = 0.0;
    std::optional<double> growth;
};

struct StudyReport {
    std::string problem;
    std::string scheme;
    std::string kind;  // "convergence" or "timing"
    std::vector<StudyRow> rows;
};

struct StudyRung {
    TensorMesh mesh;
    std::size_t nt;
};

struct StudySpec {
    Problem problem;
    Scheme scheme = Scheme::Eife2;
    double c2 = 0.5;
    double final_time = 1.0;
    std::vector<StudyRung> rungs;
    RunOptions run;
    NormOptions norms;
};

/// Runs every rung and reports errors at the final time with consecutive-rung rates.
StudyReport convergence_study(const StudySpec& spec);

/// Runs every rung and reports mean time per step with consecutive-rung growth factors.
StudyReport timing_study(const StudySpec& spec);

/// Dyadic ladder helper: `levels` meshes starting at n0, doubling every axis.
std::vector<TensorMesh> dyadic_meshes(const std::vector<double>& lower, const std::vector<double>& upper,
                                      std::vector<std::size_t> n0, std::size_t levels, BoundaryKind bc);

/// Per-observation time series: sup norm, optional energy and errors.
struct SeriesRow {
    std::size_t step;
    double t;
    double sup_norm;
    std::optional<double> energy;
    std::optional<double> err_l2;
    std::optional<double> err_h1;
};

class SeriesRecorder {
public:
    explicit SeriesRecorder(NormOptions norms = {}) : norms_(norms) {}

    Observer observer();
    const std::vector<SeriesRow>& rows() const noexcept { return rows_; }

private:
    NormOptions norms_;
    std::vector<SeriesRow> rows_;
};

} // namespace eife
