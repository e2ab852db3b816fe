// Reference harmonic functions with analytic gradients and their norms.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvem/assembly.hpp"
#include "hvem/basis.hpp"
#include "hvem/geometry.hpp"
#include "hvem/mesh.hpp"
#include "hvem/mesh_generators.hpp"
#include "hvem/quadrature.hpp"

namespace hvem
{

struct ReferenceValue
{
    double value = 0.0;
    Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
    /// true at a branch point, where the gradient is not defined
    bool singular = false;
};

struct ReferenceSolution
{
    std::string id;
    std::function<ReferenceValue(const Point&)> eval;
    /// study domain (CCW loop)
    std::vector<Point> domain;
    std::optional<Point> singular_point;
    std::string regularity;
    double l2_norm = 0.0;
    /// full H1 norm
    double h1_norm = 0.0;

    double value(const Point& x) const { return eval(x).value; }
    BoundaryData boundary_data() const
    {
        auto f = eval;
        return {[f](const Point& x) { return f(x).value; }, singular_point};
    }
};

namespace detail
{
/// Polar angle in (-pi, pi]; the negative real axis maps to +pi whatever the sign of zero.
inline double polar_angle(const Point& x)
{
    const double t = std::atan2(x.y(), x.x());
    return t <= -std::numbers::pi ? std::numbers::pi : t;
}

/// Im f and grad Im f = (Im f', Re f') for a holomorphic f.
inline ReferenceValue from_holomorphic(std::complex<double> f, std::complex<double> df)
{
    return {f.imag(), Eigen::Vector2d(df.imag(), df.real()), false};
}

inline std::vector<Triangle> refine_uniform(const std::vector<Triangle>& tris)
{
    std::vector<Triangle> out;
    for (const auto& t : tris) {
        const Point a = 0.5 * (t[0] + t[1]), b = 0.5 * (t[1] + t[2]), c = 0.5 * (t[2] + t[0]);
        out.push_back({t[0], a, c});
        out.push_back({a, t[1], b});
        out.push_back({c, b, t[2]});
        out.push_back({a, b, c});
    }
    return out;
}

/// Triangles covering a polygon, split geometrically toward `singular`.
inline std::vector<Triangle> graded_cover(std::span<const Point> poly, const std::optional<Point>& singular,
                                          int uniform_levels, int rings, double ratio)
{
    auto tris = sub_triangulate(poly);
    for (int l = 0; l < uniform_levels; ++l)
        tris = refine_uniform(tris);
    if (!singular)
        return tris;
    std::vector<Triangle> out;
    const double tol = 1e-12 * diameter(poly);
    for (const auto& t : tris)
        for (const auto& s : grade_toward(t, *singular, rings, ratio, tol))
            out.push_back(s);
    return out;
}
} // namespace detail

/// L2 and full H1 norms of a function over a polygon (composite rule of
/// exactness 20, three geometric rings of ratio 0.15 at the singular point).
inline std::pair<double, double> domain_norms(const std::function<ReferenceValue(const Point&)>& f,
                                              std::span<const Point> domain, const std::optional<Point>& singular,
                                              int exactness = 20)
{
    const auto ref = triangle_quadrature(exactness);
    double l2 = 0.0, h1 = 0.0;
    std::vector<Point> pts;
    std::vector<double> wts;
    for (const auto& t : detail::graded_cover(domain, singular, 2, 3, 0.15)) {
        pts.clear();
        wts.clear();
        map_triangle_rule(ref, t, pts, wts);
        for (std::size_t q = 0; q < pts.size(); ++q) {
            const auto v = f(pts[q]);
            l2 += wts[q] * v.value * v.value;
            h1 += wts[q] * v.gradient.squaredNorm();
        }
    }
    return {std::sqrt(l2), std::sqrt(l2 + h1)};
}

inline ReferenceSolution make_reference(std::string id, std::function<ReferenceValue(const Point&)> f,
                                        std::vector<Point> domain, std::optional<Point> singular,
                                        std::string regularity)
{
    ReferenceSolution r{std::move(id), std::move(f), std::move(domain), singular, std::move(regularity), 0.0, 0.0};
    std::tie(r.l2_norm, r.h1_norm) = domain_norms(r.eval, r.domain, r.singular_point);
    return r;
}

/// u1 = e^x sin y = Im e^z on the unit square.
inline ReferenceValue eval_u1(const Point& x)
{
    const std::complex<double> z(x.x(), x.y());
    const auto e = std::exp(z);
    return detail::from_holomorphic(e, e);
}

/// u2 = r^2 (log r sin 2t + t cos 2t) = Im(z^2 log z) on the unit square.
inline ReferenceValue eval_u2(const Point& x)
{
    const double r = x.norm();
    if (r == 0.0)
        return {0.0, Eigen::Vector2d::Zero(), true};
    const std::complex<double> z(x.x(), x.y());
    const std::complex<double> lz(std::log(r), detail::polar_angle(x));
    return detail::from_holomorphic(z * z * lz, 2.0 * z * lz + z);
}

/// u3 = r^(2/3) sin(2t/3 + pi/3) = Im(e^{i pi/3} z^{2/3}) on the L-shape.
inline ReferenceValue eval_u3(const Point& x)
{
    const double r = x.norm();
    if (r == 0.0)
        return {0.0, Eigen::Vector2d::Zero(), true};
    const double t = detail::polar_angle(x);
    const double pi3 = std::numbers::pi / 3.0;
    const std::complex<double> f = std::polar(std::pow(r, 2.0 / 3.0), 2.0 * t / 3.0 + pi3);
    const std::complex<double> df = (2.0 / 3.0) * std::polar(std::pow(r, -1.0 / 3.0), -t / 3.0 + pi3);
    return detail::from_holomorphic(f, df);
}

inline ReferenceSolution constant_reference(double c, std::vector<Point> domain = unit_square_domain())
{
    return make_reference("const:" + std::to_string(c),
                          [c](const Point&) { return ReferenceValue{c, Eigen::Vector2d::Zero(), false}; },
                          std::move(domain), std::nullopt, "constant");
}

/// A single member q_alpha of a harmonic basis, used for patch tests.
inline ReferenceSolution harmonic_reference(const HarmonicBasis& hb, int alpha,
                                            std::vector<Point> domain = unit_square_domain())
{
    return make_reference(
        "q" + std::to_string(alpha),
        [hb, alpha](const Point& x) {
            const auto v = hb.eval(alpha, x);
            return ReferenceValue{v.value, v.gradient, false};
        },
        std::move(domain), std::nullopt, "harmonic polynomial");
}

/// "u1", "u2", "u3" or "const:<c>". Norms are computed once per id and cached.
inline ReferenceSolution reference(const std::string& id)
{
    static std::mutex mutex;
    static std::map<std::string, ReferenceSolution> cache;
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(id); it != cache.end())
        return it->second;
    ReferenceSolution r;
    if (id == "u1")
        r = make_reference(id, eval_u1, unit_square_domain(), std::nullopt, "analytic");
    else if (id == "u2")
        r = make_reference(id, eval_u2, unit_square_domain(), Point(0, 0), "H^(3-eps)");
    else if (id == "u3")
        r = make_reference(id, eval_u3, lshape_domain(), Point(0, 0), "H^(5/3-eps)");
    else if (id.rfind("const:", 0) == 0) {
        std::size_t used = 0;
        double c = 0.0;
        try {
            c = std::stod(id.substr(6), &used);
        }
        catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != id.size() - 6)
            throw std::invalid_argument("bad constant in reference id '" + id + "'");
        r = constant_reference(c);
        r.id = id;
    }
    else
        throw std::invalid_argument("unknown reference solution '" + id + "'");
    cache.emplace(id, r);
    return r;
}

} // namespace hvem
