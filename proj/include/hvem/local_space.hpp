// Local element space: edge-moment DOFs, the H1 projector onto harmonic
// polynomials and the local stiffness matrix.
#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hvem/basis.hpp"
#include "hvem/errors.hpp"
#include "hvem/geometry.hpp"
#include "hvem/mesh.hpp"
#include "hvem/quadrature.hpp"

namespace hvem
{

/// Moments (1/h_e) int_e f m_r, r = 0..nmom-1, by Gauss rule of the given exactness.
inline Eigen::VectorXd edge_moments(const EdgeLegendreBasis& eb, const std::function<double(const Point&)>& f,
                                    int nmom, int exactness)
{
    const auto rule = edge_quadrature(exactness);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(nmom);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double t = rule.nodes[q];
        const double fx = f(eb.from_reference(t));
        for (int r = 0; r < nmom; ++r)
            m(r) += 0.5 * rule.weights[q] * fx * legendre(r, t);
    }
    return m;
}

/// Per-element DOF layout and bases. Each edge carries its own degree p_e and
/// moments r = 0..p_e-1; local indices are ordered edge by edge.
class LocalElementSpace
{
  public:
    /// poly: CCW vertex loop; edge j runs from poly[j] to poly[j+1].
    /// edge_degrees[j] >= 1. flipped[j] reverses the parametrisation of edge j so
    /// that neighbouring elements share one orientation (empty = none flipped).
    LocalElementSpace(std::vector<Point> poly, std::vector<int> edge_degrees, std::vector<bool> flipped = {})
        : poly_(std::move(poly)), pe_(std::move(edge_degrees))
    {
        const std::size_t n = poly_.size();
        if (n < 3)
            throw std::invalid_argument("LocalElementSpace: polygon needs at least 3 vertices");
        if (pe_.size() != n)
            throw std::invalid_argument("LocalElementSpace: one degree per edge required");
        if (flipped.empty())
            flipped.assign(n, false);
        if (flipped.size() != n)
            throw std::invalid_argument("LocalElementSpace: one orientation flag per edge required");
        if (*std::min_element(pe_.begin(), pe_.end()) < 1)
            throw std::invalid_argument("LocalElementSpace: edge degrees must be >= 1");

        offsets_.assign(n + 1, 0);
        for (std::size_t j = 0; j < n; ++j) {
            const Point& a = poly_[j];
            const Point& b = poly_[(j + 1) % n];
            edges_.emplace_back(flipped[j] ? b : a, flipped[j] ? a : b, pe_[j]);
            const Point d = b - a;
            normals_.push_back(Point(d.y(), -d.x()).normalized());
            offsets_[j + 1] = offsets_[j] + static_cast<std::size_t>(pe_[j]);
        }
        // the bulk degree cannot exceed any edge degree, otherwise the projector
        // is not computable from the moments
        bulk_p_ = *std::min_element(pe_.begin(), pe_.end());
        harmonic_ = HarmonicBasis(centroid(poly_), diameter(poly_), bulk_p_);
    }

    /// Element k of a mesh, edges oriented from the lower to the higher vertex index.
    static LocalElementSpace from_mesh(const Mesh& mesh, std::size_t k, const std::vector<int>& edge_degrees)
    {
        const auto& loop = mesh.element(k);
        std::vector<bool> flipped(loop.size());
        for (std::size_t j = 0; j < loop.size(); ++j)
            flipped[j] = loop[j] > loop[(j + 1) % loop.size()];
        return LocalElementSpace(mesh.polygon(k), edge_degrees, flipped);
    }

    const std::vector<Point>& polygon() const { return poly_; }
    std::size_t num_edges() const { return poly_.size(); }
    int bulk_degree() const { return bulk_p_; }
    int edge_degree(std::size_t j) const { return pe_[j]; }
    const EdgeLegendreBasis& edge_basis(std::size_t j) const { return edges_[j]; }
    const Point& outward_normal(std::size_t j) const { return normals_[j]; }
    const HarmonicBasis& harmonic_basis() const { return harmonic_; }
    std::size_t dof_offset(std::size_t j) const { return offsets_[j]; }
    std::size_t dim() const { return offsets_.back(); }
    int num_harmonic() const { return harmonic_.dimension(); }

    /// Highest degree met on the element, used to size quadrature rules.
    int max_degree() const { return *std::max_element(pe_.begin(), pe_.end()); }

  private:
    std::vector<Point> poly_;
    std::vector<int> pe_;
    std::vector<EdgeLegendreBasis> edges_;
    std::vector<Point> normals_;
    std::vector<std::size_t> offsets_;
    int bulk_p_ = 1;
    HarmonicBasis harmonic_;
};

/// D(i, alpha) = dof_i(q_alpha).
inline Eigen::MatrixXd compute_D(const LocalElementSpace& sp)
{
    const int nh = sp.num_harmonic();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sp.dim()), nh);
    Eigen::VectorXd v;
    Eigen::Matrix<double, Eigen::Dynamic, 2> g;
    for (std::size_t j = 0; j < sp.num_edges(); ++j) {
        const auto& eb = sp.edge_basis(j);
        const int pe = sp.edge_degree(j);
        const auto rule = edge_quadrature(sp.bulk_degree() + pe);
        const auto off = static_cast<Eigen::Index>(sp.dof_offset(j));
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double t = rule.nodes[q];
            sp.harmonic_basis().eval_all(eb.from_reference(t), v, g);
            for (int r = 0; r < pe; ++r)
                D.row(off + r) += (0.5 * rule.weights[q] * legendre(r, t)) * v.transpose();
        }
    }
    return D;
}

/// Row 0: int_{dK} q_beta. Rows alpha >= 1: (grad q_alpha, grad q_beta)_K by the
/// boundary reduction int_{dK} (d_n q_alpha) q_beta.
inline Eigen::MatrixXd compute_G(const LocalElementSpace& sp)
{
    const int nh = sp.num_harmonic();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nh, nh);
    const auto rule = edge_quadrature(2 * sp.bulk_degree());
    Eigen::VectorXd v;
    Eigen::Matrix<double, Eigen::Dynamic, 2> g;
    for (std::size_t j = 0; j < sp.num_edges(); ++j) {
        const auto& eb = sp.edge_basis(j);
        const Point& n = sp.outward_normal(j);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            sp.harmonic_basis().eval_all(eb.from_reference(rule.nodes[q]), v, g);
            const double w = 0.5 * rule.weights[q] * eb.length();
            const Eigen::VectorXd dn = g * n;
            G.row(0) += w * v.transpose();
            G.bottomRows(nh - 1) += w * dn.tail(nh - 1) * v.transpose();
        }
    }
    // constants have zero gradient
    G.block(1, 0, nh - 1, 1).setZero();
    const Eigen::MatrixXd K = G.bottomRightCorner(nh - 1, nh - 1);
    G.bottomRightCorner(nh - 1, nh - 1) = 0.5 * (K + K.transpose());
    return G;
}

/// B(beta, i): row 0 is int_{dK} phi_i, rows beta >= 1 are (grad phi_i, grad q_beta)_K,
/// evaluated through the Legendre coefficients of d_n q_beta on each edge.
inline Eigen::MatrixXd compute_B(const LocalElementSpace& sp)
{
    const int nh = sp.num_harmonic();
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nh, static_cast<Eigen::Index>(sp.dim()));
    Eigen::VectorXd v;
    Eigen::Matrix<double, Eigen::Dynamic, 2> g;
    for (std::size_t j = 0; j < sp.num_edges(); ++j) {
        const auto& eb = sp.edge_basis(j);
        const Point& n = sp.outward_normal(j);
        const int pe = sp.edge_degree(j);
        const auto off = static_cast<Eigen::Index>(sp.dof_offset(j));
        const double he = eb.length();
        B(0, off) = he;
        const auto rule = edge_quadrature(sp.bulk_degree() - 1 + pe - 1);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double t = rule.nodes[q];
            sp.harmonic_basis().eval_all(eb.from_reference(t), v, g);
            const Eigen::VectorXd dn = g * n;
            for (int r = 0; r < pe; ++r) {
                // h_e c_r with c_r = (2r+1)/h_e int_e d_n q m_r
                const double c = (2.0 * r + 1.0) * 0.5 * rule.weights[q] * legendre(r, t);
                B.block(1, off + r, nh - 1, 1) += he * c * dn.tail(nh - 1);
            }
        }
    }
    return B;
}

/// Diagonal stabilisation p_e (2r+1) on the moment of order r of edge e.
inline Eigen::MatrixXd compute_S(const LocalElementSpace& sp)
{
    Eigen::VectorXd d(static_cast<Eigen::Index>(sp.dim()));
    for (std::size_t j = 0; j < sp.num_edges(); ++j)
        for (int r = 0; r < sp.edge_degree(j); ++r)
            d(static_cast<Eigen::Index>(sp.dof_offset(j)) + r) = sp.edge_degree(j) * (2.0 * r + 1.0);
    return d.asDiagonal();
}

struct ProjectionMatrices
{
    Eigen::MatrixXd G;
    Eigen::MatrixXd B;
    Eigen::MatrixXd D;
    Eigen::MatrixXd PiStar;
    Eigen::MatrixXd Pi;
    Eigen::MatrixXd S;
    Eigen::MatrixXd Gtilde;
    Eigen::MatrixXd A;
    double cond_G = 0.0;
};

inline double& g_condition_warning_threshold()
{
    static double t = 1e12;
    return t;
}

inline ProjectionMatrices compute_projections(const LocalElementSpace& sp)
{
    ProjectionMatrices m;
    m.G = compute_G(sp);
    m.B = compute_B(sp);
    m.D = compute_D(sp);
    m.S = compute_S(sp);

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.G);
    const auto& sv = svd.singularValues();
    m.cond_G = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    if (!std::isfinite(m.cond_G))
        throw NumericalError("singular G matrix on a degenerate element");
    if (m.cond_G > g_condition_warning_threshold())
        std::cerr << "warning: ill-conditioned G (cond " << m.cond_G << ", degree " << sp.bulk_degree() << ")\n";

    m.PiStar = m.G.partialPivLu().solve(m.B);
    m.Pi = m.D * m.PiStar;
    m.Gtilde = m.G;
    m.Gtilde.row(0).setZero();
    const auto n = static_cast<Eigen::Index>(sp.dim());
    const Eigen::MatrixXd IminusPi = Eigen::MatrixXd::Identity(n, n) - m.Pi;
    const Eigen::MatrixXd A = m.PiStar.transpose() * m.Gtilde * m.PiStar + IminusPi.transpose() * m.S * IminusPi;
    m.A = 0.5 * (A + A.transpose());
    return m;
}

inline Eigen::MatrixXd local_stiffness(const LocalElementSpace& sp) { return compute_projections(sp).A; }

/// L2 projection of f onto P_{p_e - 1}(e): c_r = (2r+1)/h_e int_e f m_r.
inline Eigen::VectorXd edge_l2_project(const LocalElementSpace& sp, std::size_t j,
                                       const std::function<double(const Point&)>& f, int exactness = -1)
{
    const int pe = sp.edge_degree(j);
    if (exactness < 0)
        exactness = 2 * pe + 6;
    Eigen::VectorXd c = edge_moments(sp.edge_basis(j), f, pe, exactness);
    for (int r = 0; r < pe; ++r)
        c(r) *= 2.0 * r + 1.0;
    return c;
}

} // namespace hvem
