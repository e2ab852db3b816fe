// Shared helpers for the test programs.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hvem/geometry.hpp"
#include "hvem/quadrature.hpp"

namespace hvem::testing
{

/// Random simple polygon, star-shaped around its seed point, with n vertices:
/// sorted random angles (minimum gap enforced) and radii in [0.4, 1], then a
/// random scale and shift.
inline std::vector<Point> random_polygon(std::mt19937_64& rng, int n)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> ang;
    const double gap = 0.25 * 2 * std::numbers::pi / n;
    while (true) {
        ang.clear();
        for (int i = 0; i < n; ++i)
            ang.push_back(2 * std::numbers::pi * u(rng));
        std::sort(ang.begin(), ang.end());
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            const double next = i + 1 < n ? ang[i + 1] : ang[0] + 2 * std::numbers::pi;
            ok = ok && next - ang[i] > gap;
        }
        // keep the seed strictly inside: no angular gap of pi or more
        for (int i = 0; i < n; ++i) {
            const double next = i + 1 < n ? ang[i + 1] : ang[0] + 2 * std::numbers::pi;
            ok = ok && next - ang[i] < 0.9 * std::numbers::pi;
        }
        if (ok)
            break;
    }
    const double scale = std::exp(std::log(1e-2) + u(rng) * std::log(1e3)); // 0.01 .. 10
    const Point shift(4 * u(rng) - 2, 4 * u(rng) - 2);
    std::vector<Point> poly;
    for (double a : ang) {
        const double r = 0.4 + 0.6 * u(rng);
        poly.push_back(shift + scale * r * Point(std::cos(a), std::sin(a)));
    }
    return poly;
}

/// int_K f over a polygon by sub-triangulation and a triangle rule.
template <class F>
double bulk_integral(const std::vector<Point>& poly, int exactness, F&& f)
{
    const auto ref = triangle_quadrature(exactness);
    std::vector<Point> pts;
    std::vector<double> wts;
    double s = 0.0;
    for (const auto& t : sub_triangulate(poly)) {
        pts.clear();
        wts.clear();
        map_triangle_rule(ref, t, pts, wts);
        for (std::size_t q = 0; q < pts.size(); ++q)
            s += wts[q] * f(pts[q]);
    }
    return s;
}

} // namespace hvem::testing
