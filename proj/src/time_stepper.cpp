#include "eife/time_stepper.hpp"

#include "eife/errors.hpp"
#include "eife/transforms.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace eife {

std::string_view to_string(Scheme scheme) { return scheme == Scheme::Eife1 ? "eife1" : "eife2"; }

Scheme parse_scheme(std::string_view text) {
    if (text == "eife1" || text == "EIFE1") return Scheme::Eife1;
    if (text == "eife2" || text == "EIFE2") return Scheme::Eife2;
    throw ConfigError("unknown scheme '" + std::string(text) + "'");
}

void SchemeConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    if (!(final_time >= 0.0)) throw ConfigError("final time must be non-negative");
    if (scheme == Scheme::Eife2 && !(c2 > 0.0 && c2 <= 1.0)) throw ConfigError("c2 must lie in (0, 1]");
}

std::size_t SchemeConfig::num_steps() const {
    validate();
    const double ratio = final_time / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        std::ostringstream msg;
        msg << "final time " << final_time << " is not an integer multiple of dt " << dt;
        throw ConfigError(msg.str());
    }
    return static_cast<std::size_t>(rounded);
}

TensorD StepWeights::b2() const { return (1.0 / c2) * phi2; }
TensorD StepWeights::b1() const { return phi1 - b2(); }
TensorD StepWeights::a21() const { return c2 * stage_phi1; }

StepWeights make_weights(const DiagonalizedOperator& op, Scheme scheme, double dt, double c2) {
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    StepWeights w;
    w.dt = dt;
    w.c2 = c2;
    w.decay = phi_tensor(0, op, dt);
    w.phi1 = phi_tensor(1, op, dt);
    if (scheme == Scheme::Eife2) {
        if (!(c2 > 0.0 && c2 <= 1.0)) throw ConfigError("c2 must lie in (0, 1]");
        w.phi2 = phi_tensor(2, op, dt);
        w.stage_decay = phi_tensor(0, op, dt, c2);
        w.stage_phi1 = phi_tensor(1, op, dt, c2);
    }
    return w;
}

namespace {

TensorD load_at(const LoadContext& ctx, double t, const TensorD& u_tilde, std::size_t step) {
    try {
        return transformed_load(ctx, t, inverse_transform(u_tilde, ctx.mesh()));
    } catch (const DomainError& e) {
        std::ostringstream msg;
        msg << "step " << step << " (t = " << t << "): " << e.what();
        throw DomainError(msg.str(), e.value());
    }
}

} // namespace

SolverState advance(const SolverState& state, const LoadContext& ctx, Scheme scheme, const StepWeights& w) {
    const TensorD& u = state.u_tilde;
    const double dt = w.dt;
    const TensorD g1 = load_at(ctx, state.t, u, state.step_index);
    SolverState next;
    next.t = state.t + dt;
    next.step_index = state.step_index + 1;
    next.u_tilde = TensorD(u.shape());
    auto out = next.u_tilde.data();
    if (scheme == Scheme::Eife1) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = w.decay[i] * u[i] + dt * w.phi1[i] * g1[i];
        return next;
    }
    const double c2 = w.c2;
    TensorD stage(u.shape());
    for (std::size_t i = 0; i < stage.size(); ++i) {
        stage[i] = w.stage_decay[i] * u[i] + c2 * dt * w.stage_phi1[i] * g1[i];
    }
    const TensorD g2 = load_at(ctx, state.t + c2 * dt, stage, state.step_index);
    const double inv_c2 = 1.0 / c2;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double b2 = inv_c2 * w.phi2[i];
        const double b1 = w.phi1[i] - b2;
        out[i] = w.decay[i] * u[i] + dt * (b1 * g1[i] + b2 * g2[i]);
    }
    return next;
}

SolverState eife1_step(const SolverState& state, const LoadContext& ctx, double dt) {
    return advance(state, ctx, Scheme::Eife1, make_weights(ctx.op(), Scheme::Eife1, dt));
}

SolverState eife2_step(const SolverState& state, const LoadContext& ctx, double dt, double c2) {
    return advance(state, ctx, Scheme::Eife2, make_weights(ctx.op(), Scheme::Eife2, dt, c2));
}

Integrator::Integrator(const LoadContext& ctx, const SchemeConfig& cfg)
    : ctx_(&ctx), cfg_(cfg), weights_(make_weights(ctx.op(), cfg.scheme, cfg.dt, cfg.c2)) {
    cfg_.validate();
}

SolverState Integrator::step(const SolverState& state) const {
    return advance(state, *ctx_, cfg_.scheme, weights_);
}

RunResult run(const Problem& problem, const TensorMesh& mesh, const SchemeConfig& cfg,
              std::span<const Observer> observers, const RunOptions& options) {
    if (options.cadence == 0) throw ConfigError("observer cadence must be at least 1");
    const std::size_t steps = cfg.num_steps();
    const LoadContext ctx(problem, mesh, options.load);
    const Integrator integrator(ctx, cfg);

    RunResult result;
    TensorD u_nodal = initial_state(problem, mesh, options.initial);
    result.state.u_tilde = forward_transform(u_nodal, mesh);

    auto observe = [&](const SolverState& s, const TensorD& nodal) {
        const Observation obs{s.step_index, s.t, nodal, mesh, problem};
        for (const auto& o : observers) o(obs);
    };
    if (!observers.empty()) observe(result.state, u_nodal);

    using Clock = std::chrono::steady_clock;
    double timed = 0.0;
    std::size_t timed_steps = 0;
    for (std::size_t n = 0; n < steps; ++n) {
        const auto start = Clock::now();
        SolverState next = integrator.step(result.state);
        // Uniform grid in time: t_n = n dt, no accumulated round-off.
        next.t = static_cast<double>(n + 1) * cfg.dt;
        const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        if (n > 0 || steps == 1) {
            timed += elapsed;
            ++timed_steps;
        }
        result.state = std::move(next);
        const bool last = n + 1 == steps;
        if (!observers.empty() && ((n + 1) % options.cadence == 0 || last)) {
            observe(result.state, inverse_transform(result.state.u_tilde, mesh));
        }
    }
    result.steps = steps;
    result.seconds_per_step = timed_steps ? timed / static_cast<double>(timed_steps) : 0.0;
    result.u_nodal = steps == 0 ? u_nodal : inverse_transform(result.state.u_tilde, mesh);
    return result;
}

} // namespace eife
