#include "eife/analysis.hpp"
#include "eife/errors.hpp"
#include "eife/fem_assembly.hpp"
#include "eife/time_stepper.hpp"
#include "eife/transforms.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace eife;

namespace {

// One interior node with h = 1/2, so H = 12 D and the transforms are the identity.
TensorMesh scalar_mesh() { return TensorMesh::box({0}, {1}, {2}, BoundaryKind::HomogeneousDirichlet); }

Problem scalar_problem(double diffusion, ReactionFn f) {
    Problem p;
    p.name = "scalar";
    p.diffusion = diffusion;
    p.reaction = std::move(f);
    p.initial = [](Point) { return 0.0; };
    p.bc = BoundaryKind::HomogeneousDirichlet;
    p.lower = {0.0};
    p.upper = {1.0};
    return p;
}

SolverState state_from(const TensorD& u_nodal, const TensorMesh& mesh) {
    SolverState s;
    s.u_tilde = forward_transform(u_nodal, mesh);
    return s;
}

} // namespace

TEST_CASE("EIFE1 on u' = -12u + 1") {
    const auto mesh = scalar_mesh();
    const Problem p = scalar_problem(1.0, [](double, Point, double) { return 1.0; });
    const LoadContext ctx(p, mesh);
    const SolverState s1 = eife1_step(state_from(TensorD({1}, {1.0}), mesh), ctx, 0.1);
    CHECK(s1.t == doctest::Approx(0.1));
    CHECK(s1.step_index == 1);
    CHECK(s1.u_tilde[0] == doctest::Approx(0.3594280).epsilon(1e-7));
    CHECK(s1.u_tilde[0] == doctest::Approx(std::exp(-1.2) + (1.0 - std::exp(-1.2)) / 12.0).epsilon(1e-14));
}

TEST_CASE("EIFE2 integrates a load linear in t exactly") {
    const auto mesh = scalar_mesh();
    const Problem p = scalar_problem(1.0 / 12.0, [](double t, Point, double) { return t; });
    const LoadContext ctx(p, mesh);
    for (double c2 : {0.5, 1.0, 0.3}) {
        const SolverState s1 = eife2_step(state_from(TensorD({1}), mesh), ctx, 0.5, c2);
        CHECK(std::abs(s1.u_tilde[0] - (std::exp(-0.5) - 1.0 + 0.5)) < 1e-12);
    }
    CHECK(std::abs(eife2_step(state_from(TensorD({1}), mesh), ctx, 0.5, 0.5).u_tilde[0] - 0.1065307) < 1e-7);
}

TEST_CASE("weight tensors satisfy the consistency conditions") {
    const auto mesh = TensorMesh::box({0, 0}, {1, 1}, {8, 6}, BoundaryKind::Periodic);
    const DiagonalizedOperator op = build_operator(mesh, 0.3);
    const StepWeights w = make_weights(op, Scheme::Eife2, 0.05, 0.5);
    CHECK(relative_max_difference(w.b1() + w.b2(), w.phi1) < 1e-13);
    CHECK(relative_max_difference(w.a21(), 0.5 * phi_tensor(1, op, 0.05, 0.5)) < 1e-13);
    CHECK_THROWS_AS(make_weights(op, Scheme::Eife2, 0.05, 0.0), ConfigError);
    CHECK_THROWS_AS(make_weights(op, Scheme::Eife2, 0.05, 1.5), ConfigError);
    CHECK_THROWS_AS(make_weights(op, Scheme::Eife1, -0.1), ConfigError);
}

TEST_CASE("zero reaction: both schemes decay each mode exactly") {
    Problem p = scalar_problem(0.8, [](double, Point, double) { return 0.0; });
    p.lower = {0, 0};
    p.upper = {1, 2};
    const auto mesh = TensorMesh::box(p.lower, p.upper, {8, 8}, p.bc);
    const LoadContext ctx(p, mesh);
    const SolverState s0 = state_from(oracle::random_tensor(mesh.dof_shape(), 3), mesh);
    const double dt = 0.01;
    SolverState a = s0;
    SolverState b = s0;
    for (int n = 0; n < 100; ++n) {
        a = eife1_step(a, ctx, dt);
        b = eife2_step(b, ctx, dt, 0.5);
    }
    const TensorD want = hadamard(exp_entrywise(-1.0 * (100 * dt) * ctx.op().rates), s0.u_tilde);
    CHECK(relative_max_difference(a.u_tilde, want) < 1e-13);
    CHECK(relative_max_difference(b.u_tilde, want) < 1e-13);
}

TEST_CASE("tiny steps barely move the state") {
    const Problem p = builtin_linear_rd();
    const auto mesh = TensorMesh::box(p.lower, p.upper, {8, 4}, p.bc);
    const LoadContext ctx(p, mesh);
    const SolverState s0 = state_from(initial_state(p, mesh), mesh);
    CHECK(relative_max_difference(eife1_step(s0, ctx, 1e-8).u_tilde, s0.u_tilde) < 1e-6);
    CHECK(relative_max_difference(eife2_step(s0, ctx, 1e-8, 0.5).u_tilde, s0.u_tilde) < 1e-6);
}

TEST_CASE("fast steps agree with dense matrix exponentials") {
    const Problem lin = builtin_linear_rd();
    const Problem wave = builtin_allen_cahn_wave(0.05);
    const Problem fh = builtin_flory_huggins(0.05, 0.8, 1.6, 1);
    struct Case {
        const Problem* p;
        std::vector<std::size_t> n;
        double dt;
    };
    const Case cases[] = {{&lin, {8}, 0.05},     {&lin, {8, 4}, 0.05},    {&wave, {8}, 1e-3},
                          {&wave, {6, 4}, 1e-3}, {&fh, {8}, 0.1},         {&fh, {8, 6}, 0.1}};
    unsigned seed = 40;
    for (const auto& c : cases) {
        const Problem& p = *c.p;
        const std::vector<double> lo(p.lower.begin(), p.lower.begin() + static_cast<long>(c.n.size()));
        const std::vector<double> hi(p.upper.begin(), p.upper.begin() + static_cast<long>(c.n.size()));
        const auto mesh = TensorMesh::box(lo, hi, c.n, p.bc);
        const LoadContext ctx(p, mesh);
        const TensorD u0 = oracle::random_tensor(mesh.dof_shape(), seed++, -0.5, 0.5);
        SolverState s = state_from(u0, mesh);
        s.t = 0.1 * p.final_time;
        CAPTURE(p.name);
        CAPTURE(mesh.resolution_label());
        const TensorD e1 = inverse_transform(eife1_step(s, ctx, c.dt).u_tilde, mesh);
        CHECK(relative_max_difference(e1, oracle::dense_step(ctx, Scheme::Eife1, u0, s.t, c.dt, 0.5)) < 1e-10);
        const TensorD e2 = inverse_transform(eife2_step(s, ctx, c.dt, 0.5).u_tilde, mesh);
        CHECK(relative_max_difference(e2, oracle::dense_step(ctx, Scheme::Eife2, u0, s.t, c.dt, 0.5)) < 1e-10);
    }
}

TEST_CASE("run loop") {
    const Problem p = builtin_linear_rd();
    const auto mesh = TensorMesh::box(p.lower, p.upper, {8, 4}, p.bc);
    SchemeConfig cfg;
    cfg.dt = 0.1;
    cfg.final_time = 0.0;
    const RunResult none = run(p, mesh, cfg);
    CHECK(none.steps == 0);
    CHECK(none.u_nodal == initial_state(p, mesh));

    cfg.final_time = 1.0;
    std::vector<std::size_t> seen;
    const std::vector<Observer> obs{[&](const Observation& o) { seen.push_back(o.step); }};
    RunOptions opts;
    opts.cadence = 3;
    const RunResult r = run(p, mesh, cfg, obs, opts);
    CHECK(r.steps == 10);
    CHECK(r.state.t == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(seen == std::vector<std::size_t>{0, 3, 6, 9, 10});
    CHECK(relative_max_difference(r.u_nodal, inverse_transform(r.state.u_tilde, mesh)) == 0.0);

    // Identical inputs give identical bits.
    CHECK(run(p, mesh, cfg).u_nodal == r.u_nodal);

    opts.cadence = 0;
    CHECK_THROWS_AS(run(p, mesh, cfg, obs, opts), ConfigError);
    cfg.dt = 0.3;
    CHECK_THROWS_AS(run(p, mesh, cfg), ConfigError);
}

TEST_CASE("domain errors name the step") {
    CustomProblemSpec spec;
    spec.reaction = "ln(1 - u) + 5";
    spec.initial = "0.5";
    spec.bc = BoundaryKind::Periodic;
    spec.lower = {0.0};
    spec.upper = {1.0};
    spec.final_time = 2.0;
    const Problem p = make_custom_problem(spec);
    const auto mesh = TensorMesh::box(p.lower, p.upper, {4}, p.bc);
    SchemeConfig cfg;
    cfg.scheme = Scheme::Eife1;
    cfg.dt = 0.05;
    cfg.final_time = 2.0;
    try {
        run(p, mesh, cfg);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("step ") == 0);
        CHECK(e.value() <= 0.0);
    }
}

TEST_CASE("large steps stay finite on the 32^3 coarsening problem") {
    // dt = 1 may push a node past |u| = 1, where the reaction is undefined; that
    // must surface as a DomainError rather than as NaN or overflow.
    const Problem p = builtin_flory_huggins();
    const auto mesh = TensorMesh::box(p.lower, p.upper, {32, 32, 32}, p.bc);
    for (double dt : {0.01, 0.1, 1.0}) {
        CAPTURE(dt);
        SchemeConfig cfg;
        cfg.dt = dt;
        cfg.final_time = 5.0;
        bool finite = true;
        const std::vector<Observer> obs{[&](const Observation& o) { finite = finite && std::isfinite(sup_norm(o.u_nodal)); }};
        try {
            const RunResult r = run(p, mesh, cfg, obs);
            CHECK(r.steps == static_cast<std::size_t>(std::lround(5.0 / dt)));
            CHECK(sup_norm(r.u_nodal) < 1.0);
        } catch (const DomainError& e) {
            CHECK(dt == 1.0);
            CHECK(std::string(e.what()).rfind("step ", 0) == 0);
        }
        CHECK(finite);
    }
}
