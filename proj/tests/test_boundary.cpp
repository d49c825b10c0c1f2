#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ddc/boundary.hpp"
#include "ddc/datasets.hpp"
#include "ddc/errors.hpp"
#include "ddc/spatial_index.hpp"
#include "support.hpp"

using namespace ddc;
constexpr double kPi6 = std::numbers::pi / 6.0;

TEST(Displacement, Examples) {
    EXPECT_EQ(displacement_vector(Point{0, 0}, std::vector<Point>{{1, 0}, {-1, 0}}), (Vector{0, 0}));
    EXPECT_EQ(displacement_vector(Point{0, 0}, std::vector<Point>{{1, 0}}), (Vector{-1, 0}));
    EXPECT_EQ(displacement_vector(Point{2, 1}, std::vector<Point>{{1, 1}, {1, 0}}), (Vector{2, 1}));
    EXPECT_EQ(displacement_vector(Point{2, 1}, std::vector<Point>{}), (Vector{0, 0}));
    EXPECT_THROW(displacement_vector(Point{0, 0}, std::vector<Point>{{1, 0, 0}}), InvalidInput);
}

TEST(BalanceField, Examples) {
    const auto two = balance_field(std::vector<Point>{{0, 0}, {1, 0}}, 2.0);
    EXPECT_EQ(two[0], (Vector{-1, 0}));
    EXPECT_EQ(two[1], (Vector{1, 0}));
    const auto cross = balance_field(std::vector<Point>{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}}, 1.0);
    EXPECT_TRUE(cross[0].is_zero());
}

TEST(BalanceFieldOracle, RandomBlobMatchesNaiveSum) {
    const auto pts = oracle::clustered_points(500, 2, 11);
    const auto field = balance_field(pts, 0.5);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto ref = oracle::naive_balance(pts, i, 0.5);
        for (std::size_t a = 0; a < 2; ++a) ASSERT_NEAR(field[i][a], ref[a], 1e-9);
        ASSERT_EQ(field[i].is_zero(), std::all_of(ref.begin(), ref.end(), [](double x) { return x == 0.0; }));
    }
}

TEST(ConePredicate, Examples) {
    EXPECT_TRUE(is_boundary_cone(Point{0, 0}, Vector{0, -1}, std::vector<Point>{{0, 1}, {1, 1}, {-1, 1}}, kPi6));
    EXPECT_FALSE(is_boundary_cone(Point{0, 0}, Vector{1, 0}, std::vector<Point>{{1, 0}, {-1, 0.5}}, kPi6));
    EXPECT_TRUE(is_boundary_cone(Point{0, 0}, Vector{1, 0}, std::vector<Point>{}, kPi6));
    EXPECT_FALSE(is_boundary_cone(Point{0, 0}, Vector{0, 0}, std::vector<Point>{{1, 0}}, kPi6));
}

TEST(ConePredicate, ApertureEdge) {
    // A neighbour at exactly 45 degrees is inside a pi/4 cone (>=) and outside a narrower one.
    const std::vector<Point> nb{{1, 1}};
    EXPECT_TRUE(is_boundary_cone(Point{0, 0}, Vector{1, 0}, nb, std::numbers::pi / 4.0 - 1e-9));
    EXPECT_FALSE(is_boundary_cone(Point{0, 0}, Vector{1, 0}, nb, std::numbers::pi / 4.0 + 1e-9));
}

TEST(SpherePredicate, Examples) {
    const std::vector<Point> a{{0, 0}, {-1, 0}};
    EXPECT_TRUE(is_boundary_sphere(Point{0, 0}, Vector{1, 0}, NeighborhoodIndex(a, 0.5), 1.0));
    const std::vector<Point> b{{0, 0}, {-1, 0}, {1.2, 0}};
    EXPECT_FALSE(is_boundary_sphere(Point{0, 0}, Vector{1, 0}, NeighborhoodIndex(b, 0.5), 1.0));
    EXPECT_FALSE(is_boundary_sphere(Point{0, 0}, Vector{0, 0}, NeighborhoodIndex(a, 0.5), 1.0));
}

TEST(AutoRho, Examples) {
    EXPECT_DOUBLE_EQ(auto_rho(std::vector<Point>{{0, 0}, {1, 0}}, 2.0), 2.0);
    EXPECT_DOUBLE_EQ(auto_rho(std::vector<Point>{{0, 0}, {1, 0}, {2, 0}}, 1.5), 2.0);
    EXPECT_THROW(auto_rho(std::vector<Point>{{0, 0}, {5, 0}}, 1.0), InvalidInput);
}

TEST(AutoRhoOracle, RandomBlob) {
    const auto pts = oracle::clustered_points(300, 2, 5);
    EXPECT_NEAR(auto_rho(pts, 0.4), oracle::naive_auto_rho(pts, 0.4), 1e-9);
}

TEST(DetectBoundary, TwoPointCluster) {
    const BoundarySet b = detect_boundary(std::vector<Point>{{0, 0}, {1, 0}}, {2.0, kPi6}, 3, 4);
    ASSERT_EQ(b.size(), 2u);
    for (const auto& m : b.members) {
        EXPECT_EQ(m.source_node, 3);
        EXPECT_EQ(m.source_cluster, 4);
    }
}

TEST(DetectBoundary, InvalidParams) {
    const std::vector<Point> pts{{0, 0}};
    EXPECT_THROW(detect_boundary(pts, {0.0, kPi6}, 0, 0), InvalidParameter);
    EXPECT_THROW(detect_boundary(pts, {1.0, 0.0}, 0, 0), InvalidParameter);
    EXPECT_THROW(detect_boundary(pts, {1.0, std::numbers::pi / 2.0}, 0, 0), InvalidParameter);
    BoundaryParams p{1.0, kPi6};
    p.rho = -1.0;
    p.predicate = BoundaryPredicate::Sphere;
    EXPECT_THROW(detect_boundary(pts, p, 0, 0), InvalidParameter);
}

TEST(DetectBoundary, IsolatedPointsAreAllBoundary) {
    const auto pts = oracle::random_points(50, 2, 0, 1000, 3);
    EXPECT_EQ(detect_boundary(pts, {0.01, kPi6}, 0, 0).size(), pts.size());
}

TEST(DetectBoundary, CrossCentreIsInteriorUnderBothPredicates) {
    const std::vector<Point> cross{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (auto pred : {BoundaryPredicate::Cone, BoundaryPredicate::Sphere}) {
        BoundaryParams p{1.0, kPi6};
        p.predicate = pred;
        const auto b = detect_boundary(cross, p, 0, 0);
        for (const auto& m : b.members) EXPECT_NE(m.point, (Point{0, 0}));
    }
}

TEST(DetectBoundaryOracle, ConeMatchesNaiveExactly) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto pts = oracle::clustered_points(600, 2 + seed % 2, seed);
        const double eps = 0.5;
        const NeighborhoodIndex index(pts, eps);
        const auto got = detect_boundary_indices(index, balance_field(index), {eps, kPi6});
        std::vector<std::size_t> want;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (oracle::naive_cone(pts, i, eps, kPi6)) want.push_back(i);
        }
        ASSERT_EQ(got, want) << "seed " << seed;
    }
}

TEST(DetectBoundaryOracle, SphereMatchesNaiveExactly) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto pts = oracle::clustered_points(500, 2, seed + 20);
        const double eps = 0.5;
        const NeighborhoodIndex index(pts, eps);
        BoundaryParams p{eps, kPi6};
        p.predicate = BoundaryPredicate::Sphere;
        const auto got = detect_boundary_indices(index, balance_field(index), p);
        const double rho = oracle::naive_auto_rho(pts, eps);
        std::vector<std::size_t> want;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (oracle::naive_sphere(pts, i, eps, rho)) want.push_back(i);
        }
        ASSERT_EQ(got, want) << "seed " << seed;
    }
}

TEST(DetectBoundaryProperty, SubsetOfCluster) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto pts = oracle::clustered_points(200, 2, seed + 40);
        const auto b = detect_boundary(pts, {0.3 + 0.05 * double(seed), kPi6}, 0, 0);
        for (const auto& m : b.members) EXPECT_NE(std::find(pts.begin(), pts.end(), m.point), pts.end());
    }
}

TEST(DetectBoundaryProperty, TranslationEquivariance) {
    const auto pts = oracle::clustered_points(400, 2, 61);
    const Vector shift{3.25, -1.5};
    std::vector<Point> moved;
    for (const auto& p : pts) moved.push_back(p + shift);
    const NeighborhoodIndex a(pts, 0.45), b(moved, 0.45);
    const auto fa = balance_field(a), fb = balance_field(b);
    EXPECT_EQ(detect_boundary_indices(a, fa, {0.45, kPi6}), detect_boundary_indices(b, fb, {0.45, kPi6}));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t k = 0; k < 2; ++k) ASSERT_NEAR(fa[i][k], fb[i][k], 1e-9);
    }
}

TEST(DetectBoundaryProperty, RotationEquivariance) {
    const auto pts = oracle::clustered_points(400, 2, 62);
    for (double angle : {std::numbers::pi / 2.0, 0.7}) {
        std::vector<Point> turned;
        for (const auto& p : pts) turned.push_back(oracle::rotate2(p, angle));
        const NeighborhoodIndex a(pts, 0.45), b(turned, 0.45);
        const auto fa = balance_field(a), fb = balance_field(b);
        EXPECT_EQ(detect_boundary_indices(a, fa, {0.45, kPi6}), detect_boundary_indices(b, fb, {0.45, kPi6}));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Vector r{std::cos(angle) * fa[i][0] - std::sin(angle) * fa[i][1],
                           std::sin(angle) * fa[i][0] + std::cos(angle) * fa[i][1]};
            for (std::size_t k = 0; k < 2; ++k) ASSERT_NEAR(r[k], fb[i][k], 1e-9);
        }
    }
}

TEST(DetectBoundaryProperty, ZeroBalanceNeverBoundary) {
    // A full lattice: interior nodes have exactly cancelling neighbourhoods.
    std::vector<Point> grid;
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) grid.push_back(Point{double(i), double(j)});
    }
    const NeighborhoodIndex index(grid, 1.5);
    const auto field = balance_field(index);
    for (auto pred : {BoundaryPredicate::Cone, BoundaryPredicate::Sphere}) {
        BoundaryParams p{1.5, kPi6};
        p.predicate = pred;
        for (std::size_t i : detect_boundary_indices(index, field, p)) EXPECT_FALSE(field[i].is_zero());
    }
    std::size_t zero = 0;
    for (const auto& v : field) zero += v.is_zero();
    EXPECT_EQ(zero, 49u);
}

TEST(DetectBoundary, DiskInteriorRarelyFlagged) {
    const Dataset d = preset("disk", 0);
    const auto b = detect_boundary(d.points, {0.15, kPi6}, 0, 0);
    std::size_t deep = 0, flagged = 0;
    for (const auto& p : d.points) deep += std::hypot(p[0], p[1]) <= 0.6;
    for (const auto& m : b.members) flagged += std::hypot(m.point[0], m.point[1]) <= 0.6;
    EXPECT_LE(double(flagged) / double(deep), 0.10);
}

TEST(Predicate, Names) {
    EXPECT_EQ(parse_predicate("cone"), BoundaryPredicate::Cone);
    EXPECT_EQ(parse_predicate("sphere"), BoundaryPredicate::Sphere);
    EXPECT_THROW(parse_predicate("cube"), InvalidParameter);
}
