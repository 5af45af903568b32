#include "eife/errors.hpp"
#include "eife/mesh.hpp"

#include <doctest.h>

using namespace eife;

TEST_CASE("dof_shape by boundary kind") {
    CHECK(dof_shape(TensorMesh::box({0, 0}, {1, 1}, {8, 4}, BoundaryKind::HomogeneousDirichlet)) == Shape{7, 3});
    CHECK(dof_shape(TensorMesh::box({0, 0, 0}, {1, 1, 1}, {128, 128, 128}, BoundaryKind::Periodic)) ==
          Shape{128, 128, 128});
    CHECK(dof_shape(TensorMesh::box({0}, {1}, {2}, BoundaryKind::Dirichlet)) == Shape{1});
}

TEST_CASE("node_coordinates") {
    const auto d1 = TensorMesh::box({0}, {1}, {4}, BoundaryKind::HomogeneousDirichlet);
    CHECK(node_coordinates(d1, {0})[0] == doctest::Approx(0.25));
    const auto p1 = TensorMesh::box({0}, {1}, {4}, BoundaryKind::Periodic);
    CHECK(node_coordinates(p1, {0})[0] == 0.0);
    const auto d2 = TensorMesh::box({0, 0}, {1, 1}, {4, 4}, BoundaryKind::Dirichlet);
    const auto x = node_coordinates(d2, {1, 2});
    CHECK(x[0] == doctest::Approx(0.5));
    CHECK(x[1] == doctest::Approx(0.75));
    CHECK_THROWS_AS(node_coordinates(d2, {3, 0}), BoundsError);
    CHECK_THROWS_AS(node_coordinates(d2, {0}), BoundsError);
}

TEST_CASE("partitions validate their input") {
    CHECK_THROWS_AS(Partition1D(1.0, 1.0, 4), ConfigError);
    CHECK_THROWS_AS(Partition1D(0.0, 1.0, 1), ConfigError);
    const Partition1D p(0.5, 2.5, 8);
    CHECK(p.h == doctest::Approx(0.25));
    CHECK(p.node(8) == doctest::Approx(2.5));
}

TEST_CASE("mesh metadata") {
    const auto m = TensorMesh::box({0.5, 0}, {2.5, 1}, {64, 32}, BoundaryKind::HomogeneousDirichlet);
    CHECK(m.resolution_label() == "64x32");
    CHECK(m.volume() == doctest::Approx(2.0));
    CHECK(m.aspect_ratio() == doctest::Approx(1.0));
    CHECK(m.total_dofs() == 63u * 31u);
    CHECK(m.dof_coordinates(1).front() == doctest::Approx(1.0 / 32.0));
    CHECK_THROWS_AS(TensorMesh::box({0}, {1, 1}, {4}, BoundaryKind::Periodic), ConfigError);
    CHECK_THROWS_AS(TensorMesh::box({0, 0, 0, 0}, {1, 1, 1, 1}, {2, 2, 2, 2}, BoundaryKind::Periodic), ConfigError);
}

TEST_CASE("boundary kind names round-trip") {
    for (auto k : {BoundaryKind::HomogeneousDirichlet, BoundaryKind::Dirichlet, BoundaryKind::Periodic}) {
        CHECK(parse_boundary_kind(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_boundary_kind("neumann"), ConfigError);
}
