// Gauss-Legendre, collapsed triangle and Gauss-Lobatto rules.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hvem/geometry.hpp"

namespace hvem
{

/// Legendre polynomial L_n(t) and its derivative, by the three-term recurrence.
inline std::pair<double, double> legendre_with_derivative(int n, double t)
{
    if (n == 0)
        return {1.0, 0.0};
    double p0 = 1.0;
    double p1 = t;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    // derivative from n (t L_n - L_{n-1}) / (t^2 - 1), or its endpoint limit
    double dp;
    if (std::abs(std::abs(t) - 1.0) < 1e-15)
        dp = (t > 0 ? 1.0 : (n % 2 ? 1.0 : -1.0)) * 0.5 * n * (n + 1.0);
    else
        dp = n * (t * p1 - p0) / (t * t - 1.0);
    return {p1, dp};
}

inline double legendre(int n, double t) { return legendre_with_derivative(n, t).first; }

/// One-dimensional rule on [-1, 1].
struct QuadratureRule1D
{
    std::vector<double> nodes;
    std::vector<double> weights;
    int exactness = 0;
};

/// Two-dimensional rule on a reference domain.
struct QuadratureRule2D
{
    std::vector<Point> nodes;
    std::vector<double> weights;
    int exactness = 0;
};

namespace detail
{

/// Eigenvalues of a symmetric tridiagonal Jacobi matrix with zero diagonal.
inline std::vector<double> jacobi_eigenvalues(const std::vector<double>& offdiag)
{
    const auto n = static_cast<Eigen::Index>(offdiag.size() + 1);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        j(i, i + 1) = j(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

} // namespace detail

/// Gauss-Legendre rule with the given number of points.
/// Nodes from the Golub-Welsch matrix, refined by Newton steps on L_n.
inline QuadratureRule1D gauss_legendre_points(int npts)
{
    if (npts < 1)
        throw std::invalid_argument("gauss_legendre_points: need at least one point");
    QuadratureRule1D rule;
    rule.exactness = 2 * npts - 1;
    if (npts == 1) {
        rule.nodes = {0.0};
        rule.weights = {2.0};
        return rule;
    }
    std::vector<double> off(static_cast<std::size_t>(npts - 1));
    for (int k = 1; k < npts; ++k)
        off[static_cast<std::size_t>(k - 1)] = k / std::sqrt(4.0 * k * k - 1.0);
    rule.nodes = detail::jacobi_eigenvalues(off);
    rule.weights.resize(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double& t = rule.nodes[i];
        for (int it = 0; it < 3; ++it) {
            const auto [p, dp] = legendre_with_derivative(npts, t);
            t -= p / dp;
        }
        const double dp = legendre_with_derivative(npts, t).second;
        rule.weights[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    // exact symmetry
    for (std::size_t i = 0; i < rule.nodes.size() / 2; ++i) {
        const std::size_t j = rule.nodes.size() - 1 - i;
        const double t = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -t;
        rule.nodes[j] = t;
        rule.weights[i] = rule.weights[j] = w;
    }
    if (npts % 2 == 1)
        rule.nodes[static_cast<std::size_t>(npts / 2)] = 0.0;
    return rule;
}

/// Gauss-Legendre rule exact for polynomials of degree <= exactness on [-1, 1].
inline QuadratureRule1D edge_quadrature(int exactness)
{
    if (exactness < 0)
        throw std::invalid_argument("edge_quadrature: negative exactness");
    const int npts = (exactness + 2) / 2; // ceil((exactness + 1) / 2)
    QuadratureRule1D rule = gauss_legendre_points(npts);
    return rule;
}

/// Composite Gauss rule on [-1, 1] refined geometrically toward t = -1
/// (toward_start) or t = +1: `rings` cuts at distances ratio^k from that end.
inline QuadratureRule1D graded_edge_quadrature(int exactness, bool toward_start, int rings, double ratio)
{
    const QuadratureRule1D base = edge_quadrature(exactness);
    std::vector<double> cuts{2.0};
    for (int k = 0; k < rings; ++k)
        cuts.push_back(cuts.back() * ratio);
    cuts.push_back(0.0);
    QuadratureRule1D rule;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        // sub-interval [cuts[i+1], cuts[i]] measured from the graded end
        const double lo = cuts[i + 1];
        const double hi = cuts[i];
        for (std::size_t q = 0; q < base.nodes.size(); ++q) {
            const double d = lo + 0.5 * (base.nodes[q] + 1.0) * (hi - lo);
            rule.nodes.push_back(toward_start ? -1.0 + d : 1.0 - d);
            rule.weights.push_back(0.5 * (hi - lo) * base.weights[q]);
        }
    }
    return rule;
}

/// Rule on the reference triangle {(x, y) : x, y >= 0, x + y <= 1} obtained by
/// collapsing a Gauss-Legendre tensor rule (Duffy map).
inline QuadratureRule2D triangle_quadrature(int exactness)
{
    if (exactness < 0)
        throw std::invalid_argument("triangle_quadrature: negative exactness");
    // the collapsed direction carries one extra degree from the Jacobian
    const QuadratureRule1D g = gauss_legendre_points((exactness + 3) / 2);
    QuadratureRule2D rule;
    rule.exactness = exactness;
    const std::size_t n = g.nodes.size();
    rule.nodes.reserve(n * n);
    rule.weights.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 0.5 * (g.nodes[i] + 1.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double v = 0.5 * (g.nodes[j] + 1.0);
            rule.nodes.emplace_back(u, v * (1.0 - u));
            rule.weights.push_back(0.25 * g.weights[i] * g.weights[j] * (1.0 - u));
        }
    }
    return rule;
}

/// The p + 1 Gauss-Lobatto nodes on [-1, 1]: the endpoints and the roots of L_p'.
/// Interior roots are the zeros of the Jacobi polynomial P^(1,1)_{p-1}.
inline std::vector<double> gauss_lobatto_nodes(int p)
{
    if (p < 1)
        throw std::invalid_argument("gauss_lobatto_nodes: p must be >= 1");
    std::vector<double> nodes{-1.0};
    if (p >= 2) {
        std::vector<double> off(static_cast<std::size_t>(p - 2));
        for (int k = 1; k <= p - 2; ++k)
            off[static_cast<std::size_t>(k - 1)] = std::sqrt(k * (k + 2.0) / ((2.0 * k + 1.0) * (2.0 * k + 3.0)));
        std::vector<double> inner = p == 2 ? std::vector<double>{0.0} : detail::jacobi_eigenvalues(off);
        for (double& t : inner) {
            // Newton on L_p' using L_p'' = (2 t L_p' - p (p + 1) L_p) / (1 - t^2)
            for (int it = 0; it < 3; ++it) {
                const auto [lp, dlp] = legendre_with_derivative(p, t);
                const double d2 = (2.0 * t * dlp - p * (p + 1.0) * lp) / (1.0 - t * t);
                t -= dlp / d2;
            }
        }
        for (std::size_t i = 0; i < inner.size() / 2; ++i) {
            const std::size_t j = inner.size() - 1 - i;
            const double t = 0.5 * (inner[j] - inner[i]);
            inner[i] = -t;
            inner[j] = t;
        }
        if (inner.size() % 2 == 1)
            inner[inner.size() / 2] = 0.0;
        nodes.insert(nodes.end(), inner.begin(), inner.end());
    }
    nodes.push_back(1.0);
    return nodes;
}

/// Physical points and weights of a reference triangle rule mapped onto t.
inline void map_triangle_rule(const QuadratureRule2D& ref, const Triangle& t, std::vector<Point>& pts,
                              std::vector<double>& wts)
{
    const Point e1 = t[1] - t[0];
    const Point e2 = t[2] - t[0];
    const double jac = std::abs(cross(e1, e2));
    for (std::size_t q = 0; q < ref.nodes.size(); ++q) {
        pts.push_back(t[0] + ref.nodes[q].x() * e1 + ref.nodes[q].y() * e2);
        wts.push_back(ref.weights[q] * jac);
    }
}

/// Split a triangle geometrically toward one of its vertices. Each ring cuts
/// the remaining corner triangle at `ratio` of its size; the outer trapezoid
/// becomes two triangles. Triangles not having `corner` as a vertex are returned as-is.
inline std::vector<Triangle> grade_toward(const Triangle& t, const Point& corner, int rings, double ratio,
                                          double tol = 1e-14)
{
    int k = -1;
    for (int i = 0; i < 3; ++i)
        if ((t[static_cast<std::size_t>(i)] - corner).norm() <= tol)
            k = i;
    if (k < 0 || rings <= 0)
        return {t};
    const Point s = t[static_cast<std::size_t>(k)];
    Point a = t[static_cast<std::size_t>((k + 1) % 3)];
    Point b = t[static_cast<std::size_t>((k + 2) % 3)];
    std::vector<Triangle> out;
    for (int r = 0; r < rings; ++r) {
        const Point a2 = s + ratio * (a - s);
        const Point b2 = s + ratio * (b - s);
        out.push_back({a2, a, b});
        out.push_back({a2, b, b2});
        a = a2;
        b = b2;
    }
    out.push_back({s, a, b});
    return out;
}

} // namespace hvem
