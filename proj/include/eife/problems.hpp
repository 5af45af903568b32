#pragma once

#include "eife/mesh.hpp"
#include "eife/tensor.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eife {

using Point = std::span<const double>;
using ReactionFn = std::function<double(double t, Point x, double u)>;
using SpaceTimeFn = std::function<double(double t, Point x)>;
using SpaceFn = std::function<double(Point x)>;

/// Parameters of the Flory-Huggins free energy
/// (theta/2)((1+u)ln(1+u) + (1-u)ln(1-u)) - (theta_c/2)u^2 + (eps^2/2)|grad u|^2.
struct FloryHugginsParams {
    double eps = 0.01;
    double theta = 0.8;
    double theta_c = 1.6;
};

/// Per-node uniform random initial data from a seeded counter-based generator.
struct RandomInitialData {
    std::uint64_t seed = 0;
    double low = -0.9;
    double high = 0.9;
};

/// u_t = D Δu + f(t, x, u) on a box with one boundary kind.
struct Problem {
    std::string name;
    double diffusion = 1.0;
    ReactionFn reaction;
    ReactionFn reaction_du;   // optional, diagnostics only
    SpaceTimeFn boundary;     // Dirichlet trace g (nonhomogeneous Dirichlet only)
    SpaceTimeFn boundary_dt;  // optional analytic dg/dt
    SpaceFn initial;
    std::optional<RandomInitialData> random_initial;
    SpaceTimeFn exact;        // optional
    std::optional<FloryHugginsParams> energy;

    BoundaryKind bc = BoundaryKind::HomogeneousDirichlet;
    std::vector<double> lower;
    std::vector<double> upper;
    double final_time = 1.0;

    bool has_exact() const { return static_cast<bool>(exact); }
    std::size_t dim() const { return lower.size(); }

    /// g(t, x) for nonhomogeneous Dirichlet data, 0 for homogeneous.
    double boundary_value(double t, Point x) const;
    /// dg/dt, analytic when supplied, else centred difference with δ = 1e-6·max(1,|t|).
    double boundary_rate(double t, Point x) const;
};

/// Example with homogeneous Dirichlet data, D = 1/2, on (1/2, 5/2) x (0, 1):
/// u = e^{-pi^2 t}(sin(pi x) - 1) sin(pi y).
Problem builtin_linear_rd();

/// Allen-Cahn traveling wave with double-well reaction on (0, sqrt2) x (0, 1/8)^2.
Problem builtin_allen_cahn_wave(double eps = 0.05);

/// Allen-Cahn grain coarsening with the Flory-Huggins potential on (0, 1)^3, periodic.
Problem builtin_flory_huggins(double eps = 0.01, double theta = 0.8, double theta_c = 1.6,
                              std::uint64_t seed = 0);

/// Flory-Huggins reaction (theta/2) ln((1-u)/(1+u)) + theta_c u; throws DomainError for |u| >= 1.
double flory_huggins_reaction(double u, double theta, double theta_c);

/// Deterministic value in [low, high) for node `counter` under `seed`.
double seeded_uniform(std::uint64_t seed, std::uint64_t counter, double low, double high);

/// A compiled scalar expression over the variables t, x, y, z, u.
class Expression {
public:
    /// Supports + - * / ^, unary minus, parentheses, numbers, pi,
    /// and the functions exp, ln (alias log), tanh, sin, cos, sqrt.
    static Expression compile(std::string_view source);

    double operator()(double t, Point x, double u = 0.0) const;
    const std::string& source() const noexcept { return source_; }

    struct Node;

private:
    std::string source_;
    std::shared_ptr<const Node> root_;
};

/// Problem assembled from expression strings (custom problems in config files).
struct CustomProblemSpec {
    std::string name = "custom";
    double diffusion = 1.0;
    std::string reaction;         // in t, x, y, z, u
    std::string initial;          // in x, y, z
    std::string exact;            // optional, in t, x, y, z
    std::string boundary;         // optional, in t, x, y, z; defaults to exact
    BoundaryKind bc = BoundaryKind::HomogeneousDirichlet;
    std::vector<double> lower;
    std::vector<double> upper;
    double final_time = 1.0;
};

Problem make_custom_problem(const CustomProblemSpec& spec);

} // namespace eife
