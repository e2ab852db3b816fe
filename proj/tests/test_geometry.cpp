#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hvem/geometry.hpp"
#include "hvem/quadrature.hpp"

using namespace hvem;

namespace
{

std::vector<Point> unit_square() { return {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)}; }

std::vector<Point> l_shape()
{
    return {Point(0, 0), Point(2, 0), Point(2, 1), Point(1, 1), Point(1, 2), Point(0, 2)};
}

double integrate_one(const std::vector<Triangle>& tris)
{
    const auto rule = triangle_quadrature(2);
    double s = 0.0;
    for (const auto& t : tris) {
        std::vector<Point> pts;
        std::vector<double> w;
        map_triangle_rule(rule, t, pts, w);
        for (double wi : w)
            s += wi;
    }
    return s;
}

} // namespace

TEST(Geometry, SquareBasics)
{
    const auto sq = unit_square();
    EXPECT_DOUBLE_EQ(signed_area(sq), 1.0);
    EXPECT_DOUBLE_EQ(diameter(sq), std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(perimeter(sq), 4.0);
    EXPECT_TRUE(centroid(sq).isApprox(Point(0.5, 0.5)));
    for (double a : interior_angles(sq))
        EXPECT_NEAR(a, M_PI / 2, 1e-15);
}

TEST(Geometry, LShapeCentroidAndAngles)
{
    const auto l = l_shape();
    EXPECT_DOUBLE_EQ(area(l), 3.0);
    // union of three unit squares with centroids (0.5,0.5), (1.5,0.5), (0.5,1.5)
    EXPECT_TRUE(centroid(l).isApprox(Point(2.5 / 3.0, 2.5 / 3.0)));
    const auto ang = interior_angles(l);
    EXPECT_NEAR(ang[3], 1.5 * M_PI, 1e-14);
    EXPECT_TRUE(is_simple(l));
}

TEST(Geometry, SelfIntersectingPolygonIsNotSimple)
{
    const std::vector<Point> bowtie{Point(0, 0), Point(1, 1), Point(1, 0), Point(0, 1)};
    EXPECT_FALSE(is_simple(bowtie));
}

TEST(Geometry, KernelOfConvexPolygonIsItself)
{
    const auto sq = unit_square();
    const auto k = polygon_kernel(sq);
    ASSERT_FALSE(k.empty());
    EXPECT_NEAR(area(k), 1.0, 1e-14);
    const auto disc = chebyshev_disc(k);
    EXPECT_NEAR(disc.radius, 0.5, 1e-14);
    EXPECT_TRUE(disc.center.isApprox(Point(0.5, 0.5)));
}

TEST(Geometry, KernelOfLShapeIsTheCornerSquare)
{
    const auto k = polygon_kernel(l_shape());
    ASSERT_FALSE(k.empty());
    EXPECT_NEAR(area(k), 1.0, 1e-14);
    EXPECT_NEAR(chebyshev_disc(k).radius, 0.5, 1e-14);
}

TEST(Geometry, NonStarShapedPolygonHasEmptyKernel)
{
    // U shape: the two prongs cannot see each other's tips
    const std::vector<Point> zigzag{Point(0, 0), Point(3, 0), Point(3, 3), Point(2, 3), Point(2, 1),
                                    Point(1, 1), Point(1, 3), Point(0, 3)};
    EXPECT_TRUE(polygon_kernel(zigzag).empty());
    const std::vector<Point> spiral{Point(0, 0), Point(4, 0), Point(4, 4), Point(1, 4), Point(1, 2), Point(2, 2),
                                    Point(2, 3), Point(3, 3), Point(3, 1), Point(0, 1)};
    ASSERT_TRUE(is_simple(spiral));
    ASSERT_GT(signed_area(spiral), 0.0);
    EXPECT_TRUE(polygon_kernel(spiral).empty());
}

TEST(SubTriangulate, ConvexQuadUsesCentroidFan)
{
    const std::vector<Point> quad{Point(0, 0), Point(2, 0), Point(2.5, 1.5), Point(-0.5, 1)};
    const auto tris = sub_triangulate(quad);
    ASSERT_EQ(tris.size(), 4u);
    double s = 0.0;
    for (const auto& t : tris) {
        EXPECT_GT(triangle_area(t), 0.0);
        s += triangle_area(t);
    }
    EXPECT_NEAR(s, area(quad), 1e-14);
}

TEST(SubTriangulate, LShapeHasFourTriangles)
{
    // the centroid of this thin L lies outside, so ear clipping is used
    const std::vector<Point> thin{Point(0, 0), Point(4, 0), Point(4, 0.5), Point(0.5, 0.5), Point(0.5, 4),
                                  Point(0, 4)};
    ASSERT_FALSE(star_shaped_wrt(thin, centroid(thin)));
    const auto tris = sub_triangulate(thin);
    EXPECT_EQ(tris.size(), 4u);
    EXPECT_NEAR(integrate_one(tris), area(thin), 1e-13);
}

TEST(SubTriangulate, QuadratureOfOneMatchesShoelaceOnRandomStarPolygons)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> radius(0.3, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + trial % 8;
        std::vector<Point> poly;
        for (int i = 0; i < n; ++i) {
            const double th = 2.0 * M_PI * (i + 0.3 * radius(rng)) / n;
            const double r = radius(rng);
            poly.emplace_back(r * std::cos(th), r * std::sin(th));
        }
        const auto tris = sub_triangulate(poly);
        EXPECT_NEAR(integrate_one(tris), area(poly), 1e-13 * area(poly)) << "trial " << trial;
    }
}

TEST(SubTriangulate, EarClipOfNonStarPolygon)
{
    const std::vector<Point> spiral{Point(0, 0), Point(4, 0), Point(4, 4), Point(1, 4), Point(1, 2), Point(2, 2),
                                    Point(2, 3), Point(3, 3), Point(3, 1), Point(0, 1)};
    const auto tris = sub_triangulate(spiral);
    EXPECT_EQ(tris.size(), spiral.size() - 2);
    EXPECT_NEAR(integrate_one(tris), area(spiral), 1e-13);
}
