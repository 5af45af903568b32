#pragma once

#include "eife/exponential_operator.hpp"
#include "eife/fem_assembly.hpp"
#include "eife/mesh.hpp"
#include "eife/problems.hpp"
#include "eife/tensor.hpp"

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace eife {

enum class Scheme { Eife1, Eife2 };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);

struct SchemeConfig {
    Scheme scheme = Scheme::Eife2;
    double c2 = 0.5;
    double dt = 0.0;
    double final_time = 0.0;

    /// Number of uniform steps; throws ConfigError unless final_time / dt is an integer.
    std::size_t num_steps() const;
    void validate() const;
};

/// Solution in transformed (modal) coordinates.
struct SolverState {
    double t = 0.0;
    TensorD u_tilde;
    std::size_t step_index = 0;
};

/// Entrywise weight tensors for one step size.
struct StepWeights {
    double dt = 0.0;
    double c2 = 0.0;
    TensorD decay;        // e^{-dt H}
    TensorD phi1;         // phi_1(-dt H)
    TensorD phi2;         // phi_2(-dt H), EIFE2 only
    TensorD stage_decay;  // e^{-c2 dt H}, EIFE2 only
    TensorD stage_phi1;   // phi_1(-c2 dt H), EIFE2 only

    /// b_1 = phi_1 - phi_2 / c2 and b_2 = phi_2 / c2.
    TensorD b1() const;
    TensorD b2() const;
    /// a_21 = c2 phi_1(-c2 dt H).
    TensorD a21() const;
};

StepWeights make_weights(const DiagonalizedOperator& op, Scheme scheme, double dt, double c2 = 0.5);

/// Exponential Euler: Ũ+ = e^{-dtH} Ũ + dt phi_1(-dtH) G̃(t, U).
SolverState eife1_step(const SolverState& state, const LoadContext& ctx, double dt);

/// Two-stage exponential Runge-Kutta with stage node c2.
SolverState eife2_step(const SolverState& state, const LoadContext& ctx, double dt, double c2);

/// Steps with weights cached for one uniform step size.
class Integrator {
public:
    Integrator(const LoadContext& ctx, const SchemeConfig& cfg);

    SolverState step(const SolverState& state) const;
    const StepWeights& weights() const noexcept { return weights_; }
    const SchemeConfig& config() const noexcept { return cfg_; }

private:
    const LoadContext* ctx_;
    SchemeConfig cfg_;
    StepWeights weights_;
};

/// Applies the stored weights; used by Integrator and the free step functions.
SolverState advance(const SolverState& state, const LoadContext& ctx, Scheme scheme, const StepWeights& w);

struct Observation {
    std::size_t step;
    double t;
    const TensorD& u_nodal;
    const TensorMesh& mesh;
    const Problem& problem;
};

using Observer = std::function<void(const Observation&)>;

struct RunOptions {
    std::size_t cadence = 1;  // observe every `cadence` steps (plus step 0 and the final step)
    InitialMode initial = InitialMode::Interpolate;
    LoadOptions load;
};

struct RunResult {
    SolverState state;
    TensorD u_nodal;
    std::size_t steps = 0;
    /// Mean wall time per step, first step excluded when more than one step ran.
    double seconds_per_step = 0.0;
};

RunResult run(const Problem& problem, const TensorMesh& mesh, const SchemeConfig& cfg,
              std::span<const Observer> observers = {}, const RunOptions& options = {});

} // namespace eife
