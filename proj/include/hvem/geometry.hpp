// Planar polygon primitives used by the mesh, quadrature and validation code.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace hvem
{

using Point = Eigen::Vector2d;

using Triangle = std::array<Point, 3>;

/// z-component of (b - a) x (c - a).
inline double orient(const Point& a, const Point& b, const Point& c)
{
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

inline double cross(const Point& u, const Point& v) { return u.x() * v.y() - u.y() * v.x(); }

/// Signed area by the shoelace formula; positive for counter-clockwise loops.
inline double signed_area(std::span<const Point> poly)
{
    double a = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
        a += cross(poly[i], poly[(i + 1) % n]);
    return 0.5 * a;
}

inline double area(std::span<const Point> poly) { return std::abs(signed_area(poly)); }

/// Area centroid of a simple polygon.
inline Point centroid(std::span<const Point> poly)
{
    const double a = signed_area(poly);
    Point c = Point::Zero();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        c += (p + q) * cross(p, q);
    }
    return c / (6.0 * a);
}

/// Largest distance between two vertices.
inline double diameter(std::span<const Point> poly)
{
    double d = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j)
            d = std::max(d, (poly[i] - poly[j]).norm());
    return d;
}

inline double perimeter(std::span<const Point> poly)
{
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        s += (poly[(i + 1) % poly.size()] - poly[i]).norm();
    return s;
}

/// Interior angles (radians) of a CCW polygon, one per vertex.
inline std::vector<double> interior_angles(std::span<const Point> poly)
{
    const std::size_t n = poly.size();
    std::vector<double> ang(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point& prev = poly[(i + n - 1) % n];
        const Point& cur = poly[i];
        const Point& next = poly[(i + 1) % n];
        const Point u = prev - cur;
        const Point v = next - cur;
        // angle swept counter-clockwise from v to u
        double a = std::atan2(cross(v, u), v.dot(u));
        if (a < 0.0)
            a += 2.0 * M_PI;
        ang[i] = a;
    }
    return ang;
}

inline double distance_to_segment(const Point& x, const Point& a, const Point& b)
{
    const Point ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0)
        return (x - a).norm();
    const double t = std::clamp((x - a).dot(ab) / len2, 0.0, 1.0);
    return (x - (a + t * ab)).norm();
}

/// True when x lies strictly inside segment (a, b), away from both endpoints.
inline bool on_segment_interior(const Point& x, const Point& a, const Point& b, double tol)
{
    if ((x - a).norm() <= tol || (x - b).norm() <= tol)
        return false;
    return distance_to_segment(x, a, b) <= tol;
}

/// Segment intersection test excluding shared endpoints (proper crossings and overlaps).
inline bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d)
{
    const double d1 = orient(c, d, a);
    const double d2 = orient(c, d, b);
    const double d3 = orient(a, b, c);
    const double d4 = orient(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    return false;
}

/// Non-adjacent edges must not cross.
inline bool is_simple(std::span<const Point> poly)
{
    const std::size_t n = poly.size();
    if (n < 3)
        return false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1))
                continue;
            if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

inline bool point_in_polygon(const Point& x, std::span<const Point> poly)
{
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = poly[i];
        const Point& b = poly[j];
        if ((a.y() > x.y()) != (b.y() > x.y())) {
            const double xs = (b.x() - a.x()) * (x.y() - a.y()) / (b.y() - a.y()) + a.x();
            if (x.x() < xs)
                inside = !inside;
        }
    }
    return inside;
}

/// Half-plane { x : normal . x <= offset }.
struct HalfPlane
{
    Point normal;
    double offset;
};

/// Clip a convex polygon against a half-plane (Sutherland-Hodgman, one plane).
inline std::vector<Point> clip(std::span<const Point> poly, const HalfPlane& hp)
{
    std::vector<Point> out;
    const std::size_t n = poly.size();
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        const double fp = hp.normal.dot(p) - hp.offset;
        const double fq = hp.normal.dot(q) - hp.offset;
        if (fp <= 0.0)
            out.push_back(p);
        if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
            const double t = fp / (fp - fq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

/// Inner half-plane of the directed edge a -> b of a CCW polygon.
inline HalfPlane inner_half_plane(const Point& a, const Point& b)
{
    const Point d = b - a;
    const Point outward(d.y(), -d.x());
    const Point n = outward / outward.norm();
    return {n, n.dot(a)};
}

/// Kernel of a CCW polygon: the set of points from which the whole polygon is visible.
/// Empty when the polygon is not star-shaped.
inline std::vector<Point> polygon_kernel(std::span<const Point> poly)
{
    Eigen::AlignedBox2d box;
    for (const auto& p : poly)
        box.extend(p);
    const Point lo = box.min().array() - 1.0;
    const Point hi = box.max().array() + 1.0;
    std::vector<Point> k{lo, Point(hi.x(), lo.y()), hi, Point(lo.x(), hi.y())};
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n && !k.empty(); ++i)
        k = clip(k, inner_half_plane(poly[i], poly[(i + 1) % n]));
    if (k.size() < 3 || area(k) <= 0.0)
        return {};
    return k;
}

/// Radius and center of the largest disc inscribed in a convex CCW polygon.
/// Enumerates triples of supporting lines; polygons here have few edges.
struct InscribedDisc
{
    Point center = Point::Zero();
    double radius = 0.0;
};

inline InscribedDisc chebyshev_disc(std::span<const Point> convex)
{
    const std::size_t n = convex.size();
    InscribedDisc best;
    if (n < 3)
        return best;
    std::vector<HalfPlane> hp(n);
    for (std::size_t i = 0; i < n; ++i)
        hp[i] = inner_half_plane(convex[i], convex[(i + 1) % n]);
    const double scale = diameter(convex);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                Eigen::Matrix3d m;
                Eigen::Vector3d rhs;
                const std::array<std::size_t, 3> ids{i, j, k};
                for (int r = 0; r < 3; ++r) {
                    m.row(r) << hp[ids[r]].normal.x(), hp[ids[r]].normal.y(), 1.0;
                    rhs(r) = hp[ids[r]].offset;
                }
                const Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
                if (!lu.isInvertible())
                    continue;
                const Eigen::Vector3d sol = lu.solve(rhs);
                if (sol(2) <= best.radius)
                    continue;
                const Point c(sol(0), sol(1));
                bool feasible = true;
                for (const auto& h : hp)
                    if (h.normal.dot(c) + sol(2) > h.offset + 1e-12 * scale) {
                        feasible = false;
                        break;
                    }
                if (feasible) {
                    best.center = c;
                    best.radius = sol(2);
                }
            }
    return best;
}

/// Star-shapedness with respect to x: every edge sees x on its inner side.
inline bool star_shaped_wrt(std::span<const Point> poly, const Point& x, double tol = 0.0)
{
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
        if (orient(poly[i], poly[(i + 1) % n], x) <= tol)
            return false;
    return true;
}

/// Ear clipping triangulation of a simple CCW polygon; yields n - 2 triangles.
inline std::vector<Triangle> ear_clip(std::span<const Point> poly)
{
    std::vector<std::size_t> idx(poly.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::vector<Triangle> tris;
    tris.reserve(poly.size() - 2);
    const double scale = diameter(poly);
    const double eps = 1e-14 * scale * scale;
    while (idx.size() > 3) {
        const std::size_t m = idx.size();
        bool clipped = false;
        for (std::size_t i = 0; i < m; ++i) {
            const Point& a = poly[idx[(i + m - 1) % m]];
            const Point& b = poly[idx[i]];
            const Point& c = poly[idx[(i + 1) % m]];
            if (orient(a, b, c) <= eps)
                continue;
            bool contains = false;
            for (std::size_t j = 0; j < m && !contains; ++j) {
                const std::size_t v = idx[j];
                if (v == idx[(i + m - 1) % m] || v == idx[i] || v == idx[(i + 1) % m])
                    continue;
                const Point& x = poly[v];
                contains = orient(a, b, x) >= -eps && orient(b, c, x) >= -eps && orient(c, a, x) >= -eps;
            }
            if (contains)
                continue;
            tris.push_back({a, b, c});
            idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
            clipped = true;
            break;
        }
        if (!clipped)
            throw std::runtime_error("ear_clip: no ear found, polygon is not simple or not CCW");
    }
    tris.push_back({poly[idx[0]], poly[idx[1]], poly[idx[2]]});
    return tris;
}

/// Partition of a simple polygon into triangles: a centroid fan when the polygon
/// is star-shaped with respect to its centroid, ear clipping otherwise.
inline std::vector<Triangle> sub_triangulate(std::span<const Point> poly)
{
    const Point c = centroid(poly);
    const double h = diameter(poly);
    if (star_shaped_wrt(poly, c, 1e-12 * h * h)) {
        std::vector<Triangle> tris;
        tris.reserve(poly.size());
        for (std::size_t i = 0; i < poly.size(); ++i)
            tris.push_back({c, poly[i], poly[(i + 1) % poly.size()]});
        return tris;
    }
    return ear_clip(poly);
}

inline double triangle_area(const Triangle& t) { return 0.5 * orient(t[0], t[1], t[2]); }

} // namespace hvem
