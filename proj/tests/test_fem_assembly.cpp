#include "eife/errors.hpp"
#include "eife/fem_assembly.hpp"
#include "eife/transforms.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace eife;

namespace {

Problem zero_reaction(BoundaryKind bc, std::size_t dim) {
    Problem p;
    p.name = "zero";
    p.reaction = [](double, Point, double) { return 0.0; };
    p.initial = [](Point) { return 0.0; };
    p.bc = bc;
    p.lower.assign(dim, 0.0);
    p.upper.assign(dim, 1.0);
    return p;
}

// Semidiscrete rhs from the fast path: inverse(-H ⊙ Ũ + G̃).
TensorD fast_rhs(const LoadContext& ctx, double t, const TensorD& u) {
    const TensorD u_tilde = forward_transform(u, ctx.mesh());
    TensorD g = transformed_load(ctx, t, u);
    g -= hadamard(ctx.op().rates, u_tilde);
    return inverse_transform(g, ctx.mesh());
}

} // namespace

TEST_CASE("initial state by interpolation and projection") {
    const Problem p = builtin_linear_rd();
    const auto mesh = TensorMesh::box(p.lower, p.upper, {4, 2}, p.bc);
    const TensorD u0 = initial_state(p, mesh);
    // dof (1, 0) is node (2, 1) at (1.5, 0.5): (sin(1.5 pi) - 1) sin(pi / 2) = -2.
    CHECK(u0.at({1, 0}) == doctest::Approx(-2.0).epsilon(1e-14));

    // A multilinear datum is a member of the space: both modes reproduce it.
    Problem lin = zero_reaction(BoundaryKind::Dirichlet, 2);
    lin.initial = [](Point x) { return 1.0 + 2.0 * x[0] - x[1] + 3.0 * x[0] * x[1]; };
    lin.boundary = [init = lin.initial](double, Point x) { return init(x); };
    const auto m2 = TensorMesh::box({0, 0}, {1, 2}, {5, 4}, BoundaryKind::Dirichlet);
    const TensorD interp = initial_state(lin, m2, InitialMode::Interpolate);
    const TensorD proj = initial_state(lin, m2, InitialMode::L2Projection);
    CHECK(relative_max_difference(proj, interp) < 1e-11);
    for (std::size_t f = 0; f < interp.size(); ++f) {
        const auto idx = interp.multi_index(f);
        const auto x = node_coordinates(m2, idx);
        CHECK(interp[f] == doctest::Approx(lin.initial(Point(x.data(), 2))).epsilon(1e-14));
    }

    const Problem fh = builtin_flory_huggins(0.01, 0.8, 1.6, 9);
    const auto m3 = TensorMesh::box(fh.lower, fh.upper, {8, 8, 8}, fh.bc);
    const TensorD a = initial_state(fh, m3);
    CHECK(a == initial_state(fh, m3));
    CHECK(max_abs(a) < 0.9);
}

TEST_CASE("zero reaction gives a zero load") {
    const Problem p = zero_reaction(BoundaryKind::HomogeneousDirichlet, 2);
    const auto mesh = TensorMesh::box(p.lower, p.upper, {6, 5}, p.bc);
    const LoadContext ctx(p, mesh);
    CHECK(max_abs(transformed_load(ctx, 0.3, oracle::random_tensor(mesh.dof_shape(), 1))) == 0.0);
    CHECK(max_abs(dense_semidiscrete_rhs(ctx, 0.0, TensorD(mesh.dof_shape()))) == 0.0);
}

TEST_CASE("collapse identity: Ĥ ⊙ P^T(A f) equals P^T f") {
    for (auto bc : {BoundaryKind::HomogeneousDirichlet, BoundaryKind::Periodic}) {
        const auto mesh = TensorMesh::box({0, 0, 0}, {1, 2, 1}, {6, 8, 5}, bc);
        const DiagonalizedOperator op = build_operator(mesh, 1.0);
        const TensorD f = oracle::random_tensor(mesh.dof_shape(), 4);
        TensorD af = f;
        for (std::size_t a = 0; a < mesh.dim(); ++a) af = mode_multiply(oracle::mass_1d(mesh.axis(a), bc), af, a);
        CHECK(relative_max_difference(hadamard(op.load_weights, forward_transform(af, mesh)), forward_transform(f, mesh)) <
              1e-12);
    }
    // 1D, f ≡ 1 through the load assembly.
    Problem p = zero_reaction(BoundaryKind::HomogeneousDirichlet, 1);
    p.reaction = [](double, Point, double) { return 1.0; };
    const auto mesh = TensorMesh::box({0}, {1}, {7}, p.bc);
    const LoadContext ctx(p, mesh);
    const TensorD ones = TensorD::ones(mesh.dof_shape());
    const TensorD ref = hadamard(ctx.op().load_weights,
                                 forward_transform(mode_multiply(oracle::mass_1d(mesh.axis(0), p.bc), ones, 0), mesh));
    CHECK(relative_max_difference(transformed_load(ctx, 0.0, ones), ref) < 1e-13);
    CHECK(relative_max_difference(transformed_load(ctx, 0.0, ones), forward_transform(ones, mesh)) < 1e-13);
}

TEST_CASE("boundary lifting of a constant left value") {
    Problem p = zero_reaction(BoundaryKind::Dirichlet, 1);
    p.boundary = [](double, Point x) { return x[0] < 0.5 ? 1.0 : 0.0; };
    p.boundary_dt = [](double, Point) { return 0.0; };
    const auto mesh = TensorMesh::box({0}, {1}, {4}, p.bc);
    const LoadContext ctx(p, mesh);
    const TensorD c = ctx.boundary_load(0.0);
    CHECK(c[0] == doctest::Approx(4.0));
    CHECK(c[1] == 0.0);
    CHECK(c[2] == 0.0);
    // Steady state of the lifted problem is the linear profile 1 - x.
    const TensorD u({3}, {0.75, 0.5, 0.25});
    CHECK(max_abs(fast_rhs(ctx, 0.0, u)) < 1e-13);
    CHECK(max_abs(dense_semidiscrete_rhs(ctx, 0.0, u)) < 1e-13);
}

TEST_CASE("fast semidiscrete rhs agrees with dense assembly") {
    const Problem wave = builtin_allen_cahn_wave(0.05);
    const Problem lin = builtin_linear_rd();
    const Problem fh = builtin_flory_huggins(0.05, 0.8, 1.6, 3);
    struct Case {
        const Problem* p;
        std::vector<std::size_t> n;
    };
    const Case cases[] = {{&lin, {8, 4}}, {&lin, {3, 7}}, {&wave, {8}}, {&wave, {8, 3}}, {&wave, {5, 2, 4}},
                          {&fh, {8}}, {&fh, {6, 8}}, {&fh, {2, 3, 4}}};
    unsigned seed = 20;
    for (const auto& c : cases) {
        for (auto load : {ReactionLoad::Interpolated, ReactionLoad::Lumped}) {
            const Problem& p = *c.p;
            const std::vector<double> lo(p.lower.begin(), p.lower.begin() + static_cast<long>(c.n.size()));
            const std::vector<double> hi(p.upper.begin(), p.upper.begin() + static_cast<long>(c.n.size()));
            const auto mesh = TensorMesh::box(lo, hi, c.n, p.bc);
            const LoadContext ctx(p, mesh, {load});
            const TensorD u = oracle::random_tensor(mesh.dof_shape(), seed++, -0.8, 0.8);
            for (double t : {0.0, 0.5 * p.final_time}) {
                CAPTURE(p.name);
                CAPTURE(mesh.resolution_label());
                CHECK(relative_max_difference(fast_rhs(ctx, t, u), dense_semidiscrete_rhs(ctx, t, u)) < 1e-10);
            }
        }
    }
}

TEST_CASE("linear reaction on an eigenmode") {
    Problem p = zero_reaction(BoundaryKind::HomogeneousDirichlet, 2);
    p.reaction = [](double, Point, double u) { return -u; };
    const auto mesh = TensorMesh::box({0, 0}, {1, 1}, {6, 4}, p.bc);
    const LoadContext ctx(p, mesh);
    TensorD mode_tilde(mesh.dof_shape());
    mode_tilde.at({2, 1}) = 1.0;
    const TensorD u = inverse_transform(mode_tilde, mesh);
    const double h = ctx.op().rates.at({2, 1});
    const TensorD rhs = dense_semidiscrete_rhs(ctx, 0.0, u);
    CHECK(relative_max_difference(rhs, -(h + 1.0) * u) < 1e-12);
}

TEST_CASE("periodic constant load excites only the constant mode") {
    Problem p = zero_reaction(BoundaryKind::Periodic, 2);
    p.reaction = [](double, Point, double) { return 2.5; };
    const auto mesh = TensorMesh::box({0, 0}, {1, 1}, {8, 6}, p.bc);
    for (auto load : {ReactionLoad::Interpolated, ReactionLoad::Lumped}) {
        const LoadContext ctx(p, mesh, {load});
        const TensorD g = transformed_load(ctx, 0.0, TensorD(mesh.dof_shape()));
        CHECK(g[0] != 0.0);
        for (std::size_t f = 1; f < g.size(); ++f) CHECK(std::abs(g[f]) < 1e-13 * std::abs(g[0]));
    }
}

TEST_CASE("domain errors carry the offending value") {
    const Problem fh = builtin_flory_huggins();
    const auto mesh = TensorMesh::box(fh.lower, fh.upper, {4, 4, 4}, fh.bc);
    const LoadContext ctx(fh, mesh);
    TensorD u(mesh.dof_shape());
    u[5] = 1.25;
    try {
        transformed_load(ctx, 0.0, u);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(e.value() == 1.25);
    }
}

TEST_CASE("dense oracle refuses large meshes") {
    const Problem p = builtin_linear_rd();
    const auto mesh = TensorMesh::box(p.lower, p.upper, {128, 64}, p.bc);
    const LoadContext ctx(p, mesh);
    CHECK_THROWS_AS(dense_semidiscrete_rhs(ctx, 0.0, TensorD(mesh.dof_shape())), ScaleError);
}

TEST_CASE("full nodal field adds boundary and wraparound nodes") {
    const Problem wave = builtin_allen_cahn_wave(0.05);
    const auto mesh = TensorMesh::box({0, 0}, {std::sqrt(2.0), 0.125}, {4, 2}, wave.bc);
    const TensorD full = full_nodal_field(TensorD(mesh.dof_shape(), 0.25), mesh, wave, 0.0);
    CHECK(full.shape() == Shape{5, 3});
    CHECK(full.at({1, 1}) == 0.25);
    const std::array<double, 2> x0{0.0, 0.0};
    CHECK(full.at({0, 0}) == doctest::Approx(wave.exact(0.0, Point(x0.data(), 2))));

    const Problem fh = builtin_flory_huggins();
    const auto pm = TensorMesh::box({0, 0}, {1, 1}, {3, 2}, fh.bc);
    const TensorD u = oracle::random_tensor(pm.dof_shape(), 2);
    const TensorD pf = full_nodal_field(u, pm, fh, 0.0);
    CHECK(pf.shape() == Shape{4, 3});
    CHECK(pf.at({3, 2}) == u.at({0, 0}));
    CHECK(pf.at({1, 2}) == u.at({1, 0}));
}
