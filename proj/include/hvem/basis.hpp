// Edge Legendre bases and 2D harmonic polynomial bases.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hvem/geometry.hpp"
#include "hvem/quadrature.hpp"

namespace hvem
{

/// Legendre polynomials transported to a straight edge [a, b]:
/// m_r(x) = L_r(t) with x = a + (t + 1)/2 (b - a).
class EdgeLegendreBasis
{
  public:
    EdgeLegendreBasis() = default;
    EdgeLegendreBasis(const Point& a, const Point& b, int degree) : a_(a), b_(b), h_((b - a).norm()), p_(degree)
    {
        if (!(h_ > 0.0))
            throw std::invalid_argument("EdgeLegendreBasis: zero-length edge");
        if (degree < 0)
            throw std::invalid_argument("EdgeLegendreBasis: negative degree");
    }

    const Point& start() const { return a_; }
    const Point& end() const { return b_; }
    double length() const { return h_; }
    /// moment functionals use r = 0 .. degree()-1
    int degree() const { return p_; }

    Point from_reference(double t) const { return a_ + 0.5 * (t + 1.0) * (b_ - a_); }

    /// Inverse of the affine map; throws std::domain_error for points off the edge.
    double to_reference(const Point& x) const
    {
        const Point d = b_ - a_;
        const double s = (x - a_).dot(d) / (h_ * h_);
        const double off = std::abs(cross(d, x - a_)) / h_;
        const double tol = 1e-12 * std::max(1.0, h_);
        if (off > tol || s < -tol / h_ || s > 1.0 + tol / h_)
            throw std::domain_error("point is not on the edge");
        return 2.0 * s - 1.0;
    }

    double eval_reference(int r, double t) const
    {
        if (r < 0 || r > p_)
            throw std::out_of_range("Legendre index " + std::to_string(r) + " outside 0.." + std::to_string(p_));
        return legendre(r, t);
    }

    double eval(int r, const Point& x) const { return eval_reference(r, to_reference(x)); }

  private:
    Point a_ = Point::Zero();
    Point b_ = Point::Zero();
    double h_ = 0.0;
    int p_ = 0;
};

inline double eval_legendre(const EdgeLegendreBasis& basis, int r, const Point& x) { return basis.eval(r, x); }

struct HarmonicValue
{
    double value = 0.0;
    Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
};

/// Harmonic polynomials of degree <= p in scaled coordinates X = (x - x_K)/h_K,
/// Y = (y - y_K)/h_K. With w = X + iY and 0-based indices:
///   q_0 = 1, q_{2l-1} = Im w^l, q_{2l} = Re w^l  (l = 1..p),
/// so the dimension is 2p + 1.
class HarmonicBasis
{
  public:
    HarmonicBasis() = default;
    HarmonicBasis(const Point& center, double scale, int degree) : c_(center), h_(scale), p_(degree)
    {
        if (!(scale > 0.0))
            throw std::invalid_argument("HarmonicBasis: scale must be positive");
        if (degree < 0)
            throw std::invalid_argument("HarmonicBasis: negative degree");
    }

    const Point& center() const { return c_; }
    double scale() const { return h_; }
    int degree() const { return p_; }
    int dimension() const { return 2 * p_ + 1; }

    /// Degree of the polynomial with index alpha.
    static int degree_of(int alpha) { return (alpha + 1) / 2; }

    /// Values and gradients of all basis functions at x.
    void eval_all(const Point& x, Eigen::VectorXd& values, Eigen::Matrix<double, Eigen::Dynamic, 2>& grads) const
    {
        const int n = dimension();
        values.resize(n);
        grads.resize(n, 2);
        const std::complex<double> w((x.x() - c_.x()) / h_, (x.y() - c_.y()) / h_);
        values(0) = 1.0;
        grads.row(0).setZero();
        std::complex<double> prev(1.0, 0.0); // w^{l-1}
        for (int l = 1; l <= p_; ++l) {
            const std::complex<double> cur = prev * w;
            // d/dX w^l = l w^{l-1}, d/dY w^l = i l w^{l-1}
            const std::complex<double> d = static_cast<double>(l) * prev / h_;
            values(2 * l - 1) = cur.imag();
            values(2 * l) = cur.real();
            grads(2 * l - 1, 0) = d.imag();
            grads(2 * l - 1, 1) = d.real();
            grads(2 * l, 0) = d.real();
            grads(2 * l, 1) = -d.imag();
            prev = cur;
        }
    }

    HarmonicValue eval(int alpha, const Point& x) const
    {
        if (alpha < 0 || alpha >= dimension())
            throw std::out_of_range("harmonic basis index out of range");
        Eigen::VectorXd v;
        Eigen::Matrix<double, Eigen::Dynamic, 2> g;
        eval_all(x, v, g);
        return {v(alpha), g.row(alpha).transpose()};
    }

    /// Value of sum_alpha coeffs(alpha) q_alpha at x.
    HarmonicValue eval_expansion(const Eigen::VectorXd& coeffs, const Point& x) const
    {
        Eigen::VectorXd v;
        Eigen::Matrix<double, Eigen::Dynamic, 2> g;
        eval_all(x, v, g);
        const int n = std::min<int>(dimension(), static_cast<int>(coeffs.size()));
        return {coeffs.head(n).dot(v.head(n)), g.topRows(n).transpose() * coeffs.head(n)};
    }

  private:
    Point c_ = Point::Zero();
    double h_ = 1.0;
    int p_ = 0;
};

inline HarmonicValue eval_harmonic(const HarmonicBasis& basis, int alpha, const Point& x)
{
    return basis.eval(alpha, x);
}

} // namespace hvem
