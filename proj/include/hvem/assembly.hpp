// Global DOF numbering, degree vectors, Dirichlet data, assembly, solve and
// condition estimates.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hvem/errors.hpp"
#include "hvem/local_space.hpp"
#include "hvem/mesh.hpp"
#include "hvem/mesh_generators.hpp"
#include "hvem/quadrature.hpp"

namespace hvem
{

using SparseMatrix = Eigen::SparseMatrix<double>;

struct DegreeVector
{
    std::vector<int> p_elem;
    std::vector<int> p_edge;

    int max_degree() const { return p_edge.empty() ? 0 : *std::max_element(p_edge.begin(), p_edge.end()); }
};

namespace detail
{
inline void apply_maximum_rule(const Mesh& mesh, DegreeVector& dv)
{
    dv.p_edge.assign(mesh.num_edges(), 0);
    for (std::size_t e = 0; e < mesh.num_edges(); ++e)
        for (std::size_t k : mesh.edge(e).elements)
            if (k != npos)
                dv.p_edge[e] = std::max(dv.p_edge[e], dv.p_elem[k]);
}
} // namespace detail

inline DegreeVector uniform_degrees(const Mesh& mesh, int p)
{
    if (p < 1)
        throw std::invalid_argument("polynomial degree must be >= 1");
    DegreeVector dv;
    dv.p_elem.assign(mesh.num_elements(), p);
    detail::apply_maximum_rule(mesh, dv);
    return dv;
}

/// Layer 0 gets degree 1, layer l gets max(1, ceil(mu (l + 1))).
inline DegreeVector graded_degrees(const Mesh& mesh, const LayerDecomposition& layers, double mu)
{
    if (!(mu > 0.0))
        throw std::invalid_argument("mu must be positive");
    if (layers.layer_of_element.size() != mesh.num_elements())
        throw std::invalid_argument("layer decomposition does not match the mesh");
    DegreeVector dv;
    for (int l : layers.layer_of_element)
        dv.p_elem.push_back(l == 0 ? 1 : std::max(1, static_cast<int>(std::ceil(mu * (l + 1) - 1e-12))));
    detail::apply_maximum_rule(mesh, dv);
    return dv;
}

/// Exactly one of p_uniform or (layers, mu) must be given.
inline DegreeVector build_degree_vector(const Mesh& mesh, const std::optional<LayerDecomposition>& layers,
                                        std::optional<int> p_uniform, std::optional<double> mu)
{
    const bool uniform = p_uniform.has_value();
    const bool graded = layers.has_value() && mu.has_value();
    if (uniform == graded)
        throw std::invalid_argument("give either a uniform degree or layers together with mu");
    return uniform ? uniform_degrees(mesh, *p_uniform) : graded_degrees(mesh, *layers, *mu);
}

inline std::vector<int> element_edge_degrees(const Mesh& mesh, const DegreeVector& dv, std::size_t k)
{
    std::vector<int> pe;
    for (std::size_t e : mesh.element_edges(k))
        pe.push_back(dv.p_edge[e]);
    return pe;
}

/// Global numbering: DOF (e, r) has index offset[e] + r, edges in mesh order.
struct DofMap
{
    std::vector<std::size_t> offset;
    std::size_t count = 0;
    std::vector<bool> dirichlet;
    std::vector<std::size_t> interior; ///< global indices of free DOFs
    std::vector<std::size_t> boundary; ///< global indices of Dirichlet DOFs
};

inline DofMap make_dof_map(const Mesh& mesh, const DegreeVector& dv)
{
    if (dv.p_edge.size() != mesh.num_edges())
        throw std::invalid_argument("degree vector does not match the mesh");
    DofMap m;
    m.offset.resize(mesh.num_edges() + 1);
    m.offset[0] = 0;
    for (std::size_t e = 0; e < mesh.num_edges(); ++e)
        m.offset[e + 1] = m.offset[e] + static_cast<std::size_t>(dv.p_edge[e]);
    m.count = m.offset.back();
    m.dirichlet.assign(m.count, false);
    for (std::size_t e = 0; e < mesh.num_edges(); ++e)
        if (mesh.edge(e).boundary())
            for (std::size_t i = m.offset[e]; i < m.offset[e + 1]; ++i)
                m.dirichlet[i] = true;
    for (std::size_t i = 0; i < m.count; ++i)
        (m.dirichlet[i] ? m.boundary : m.interior).push_back(i);
    return m;
}

enum class DirichletMode
{
    exact_moments,
    gauss_lobatto_interp
};

/// Boundary data: a function of position plus an optional point where it is
/// not smooth; edges ending there get a geometrically graded rule.
struct BoundaryData
{
    std::function<double(const Point&)> g;
    std::optional<Point> singular_point;
};

namespace detail
{
/// Moments (1/h_e) int_e g_p m_r where g_p interpolates g at the p+1 Gauss-Lobatto nodes.
inline Eigen::VectorXd lobatto_moments(const EdgeLegendreBasis& eb, const std::function<double(const Point&)>& g,
                                       int p)
{
    const auto nodes = gauss_lobatto_nodes(p);
    const std::size_t n = nodes.size();
    std::vector<double> vals(n), bw(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        vals[i] = g(eb.from_reference(nodes[i]));
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                bw[i] /= nodes[i] - nodes[j];
    }
    const auto rule = edge_quadrature(2 * p);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(p);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double t = rule.nodes[q];
        double num = 0.0, den = 0.0;
        double gp = 0.0;
        bool on_node = false;
        for (std::size_t i = 0; i < n && !on_node; ++i) {
            if (t == nodes[i]) {
                gp = vals[i];
                on_node = true;
                continue;
            }
            const double c = bw[i] / (t - nodes[i]);
            num += c * vals[i];
            den += c;
        }
        if (!on_node)
            gp = num / den;
        for (int r = 0; r < p; ++r)
            m(r) += 0.5 * rule.weights[q] * gp * legendre(r, t);
    }
    return m;
}
} // namespace detail

/// Full-length DOF vector of edge moments (1/h_e) int_e g m_r, on boundary
/// edges only or on every edge.
inline Eigen::VectorXd edge_moment_dofs(const Mesh& mesh, const DegreeVector& dv, const BoundaryData& data,
                                        DirichletMode mode, bool boundary_only)
{
    const DofMap map = make_dof_map(mesh, dv);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.count));
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
        const MeshEdge& edge = mesh.edge(e);
        if (boundary_only && !edge.boundary())
            continue;
        const int p = dv.p_edge[e];
        const EdgeLegendreBasis eb(mesh.vertex(edge.v[0]), mesh.vertex(edge.v[1]), p);
        Eigen::VectorXd m;
        if (mode == DirichletMode::gauss_lobatto_interp) {
            m = detail::lobatto_moments(eb, data.g, p);
        }
        else {
            const double tol = 1e-12 * eb.length();
            const bool at_start = data.singular_point && (eb.start() - *data.singular_point).norm() <= tol;
            const bool at_end = data.singular_point && (eb.end() - *data.singular_point).norm() <= tol;
            const QuadratureRule1D rule = (at_start || at_end) ? graded_edge_quadrature(2 * p + 6, at_start, 12, 0.15)
                                                               : edge_quadrature(2 * p + 6);
            m = Eigen::VectorXd::Zero(p);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double t = rule.nodes[q];
                const double gx = data.g(eb.from_reference(t));
                for (int r = 0; r < p; ++r)
                    m(r) += 0.5 * rule.weights[q] * gx * legendre(r, t);
            }
        }
        x.segment(static_cast<Eigen::Index>(map.offset[e]), p) = m;
    }
    return x;
}

/// Boundary DOF values for the Dirichlet datum; interior entries are zero.
inline Eigen::VectorXd impose_dirichlet(const Mesh& mesh, const DegreeVector& dv, const BoundaryData& data,
                                        DirichletMode mode = DirichletMode::exact_moments)
{
    return edge_moment_dofs(mesh, dv, data, mode, true);
}

/// DOF vector of the interpolant (exact edge moments on every edge).
inline Eigen::VectorXd interpolate(const Mesh& mesh, const DegreeVector& dv, const BoundaryData& data)
{
    return edge_moment_dofs(mesh, dv, data, DirichletMode::exact_moments, false);
}

/// Per-element data kept after assembly to recover the projections.
struct LocalData
{
    std::vector<std::size_t> dofs; ///< local index -> global index
    Eigen::MatrixXd PiStar;
    HarmonicBasis basis;
    double cond_G = 0.0;
};

struct GlobalSystem
{
    DofMap map;
    SparseMatrix A; ///< full stiffness, all DOFs
    std::vector<LocalData> local;
    double max_cond_G = 0.0;

    std::size_t num_dofs() const { return map.count; }
};

/// Worker count: HVEM_NUM_THREADS if set, otherwise the hardware concurrency.
inline unsigned num_threads()
{
    if (const char* s = std::getenv("HVEM_NUM_THREADS")) {
        const int n = std::atoi(s);
        if (n >= 1)
            return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Run body(k) for k in [0, n) on worker threads; the first exception is rethrown.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0)
{
    if (threads == 0)
        threads = num_threads();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t k = 0; k < n; ++k)
            body(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < n; k = next++) {
                try {
                    body(k);
                }
                catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!err)
                        err = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (err)
        std::rethrow_exception(err);
}

inline GlobalSystem assemble(const Mesh& mesh, const DegreeVector& dv, unsigned threads = 0)
{
    GlobalSystem sys;
    sys.map = make_dof_map(mesh, dv);
    const std::size_t ne = mesh.num_elements();
    sys.local.resize(ne);
    std::vector<Eigen::MatrixXd> Aloc(ne);

    parallel_for(
        ne,
        [&](std::size_t k) {
            const auto sp = LocalElementSpace::from_mesh(mesh, k, element_edge_degrees(mesh, dv, k));
            auto pm = compute_projections(sp);
            LocalData& ld = sys.local[k];
            const auto edges = mesh.element_edges(k);
            for (std::size_t j = 0; j < edges.size(); ++j)
                for (int r = 0; r < sp.edge_degree(j); ++r)
                    ld.dofs.push_back(sys.map.offset[edges[j]] + static_cast<std::size_t>(r));
            ld.PiStar = std::move(pm.PiStar);
            ld.basis = sp.harmonic_basis();
            ld.cond_G = pm.cond_G;
            Aloc[k] = std::move(pm.A);
        },
        threads);

    // scatter in element order so the result does not depend on scheduling
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t k = 0; k < ne; ++k) {
        const auto& d = sys.local[k].dofs;
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size(); ++j)
                trip.emplace_back(static_cast<int>(d[i]), static_cast<int>(d[j]),
                                  Aloc[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        sys.max_cond_G = std::max(sys.max_cond_G, sys.local[k].cond_G);
    }
    const auto n = static_cast<Eigen::Index>(sys.map.count);
    sys.A.resize(n, n);
    sys.A.setFromTriplets(trip.begin(), trip.end());
    sys.A.makeCompressed();
    return sys;
}

namespace detail
{
/// Rows `rows`, columns `cols` of a sparse matrix.
inline SparseMatrix extract(const SparseMatrix& A, const std::vector<std::size_t>& rows,
                            const std::vector<std::size_t>& cols)
{
    std::vector<int> rmap(static_cast<std::size_t>(A.rows()), -1), cmap(static_cast<std::size_t>(A.cols()), -1);
    for (std::size_t i = 0; i < rows.size(); ++i)
        rmap[rows[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < cols.size(); ++i)
        cmap[cols[i]] = static_cast<int>(i);
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index c = 0; c < A.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(A, c); it; ++it) {
            const int r = rmap[static_cast<std::size_t>(it.row())];
            const int cc = cmap[static_cast<std::size_t>(it.col())];
            if (r >= 0 && cc >= 0)
                trip.emplace_back(r, cc, it.value());
        }
    SparseMatrix B(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    B.setFromTriplets(trip.begin(), trip.end());
    return B;
}

inline Eigen::VectorXd gather(const Eigen::VectorXd& x, const std::vector<std::size_t>& idx)
{
    Eigen::VectorXd y(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        y(static_cast<Eigen::Index>(i)) = x(static_cast<Eigen::Index>(idx[i]));
    return y;
}
} // namespace detail

struct DiscreteSolution
{
    Eigen::VectorXd dofs;
    /// projection coefficients in each element's harmonic basis
    std::vector<Eigen::VectorXd> coeffs;
    std::vector<HarmonicBasis> bases;
    /// relative residual of the interior solve
    double residual = 0.0;

    HarmonicValue eval(std::size_t k, const Point& x) const { return bases[k].eval_expansion(coeffs[k], x); }
};

/// Per-element projection coefficients PiStar * (local DOF slice).
inline void recover_projections(const GlobalSystem& sys, DiscreteSolution& sol)
{
    sol.coeffs.resize(sys.local.size());
    sol.bases.resize(sys.local.size());
    for (std::size_t k = 0; k < sys.local.size(); ++k) {
        const auto& ld = sys.local[k];
        sol.coeffs[k] = ld.PiStar * detail::gather(sol.dofs, ld.dofs);
        sol.bases[k] = ld.basis;
    }
}

/// Eliminates the Dirichlet DOFs (values taken from `boundary_values`, a
/// full-length vector) and solves the interior system by sparse LDL^T.
inline DiscreteSolution solve(const GlobalSystem& sys, const Eigen::VectorXd& boundary_values,
                              double residual_tol = 1e-10)
{
    const auto& m = sys.map;
    if (boundary_values.size() != static_cast<Eigen::Index>(m.count))
        throw std::invalid_argument("boundary value vector has the wrong length");
    DiscreteSolution sol;
    sol.dofs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.count));
    for (std::size_t i : m.boundary)
        sol.dofs(static_cast<Eigen::Index>(i)) = boundary_values(static_cast<Eigen::Index>(i));

    if (!m.interior.empty()) {
        const SparseMatrix Aii = detail::extract(sys.A, m.interior, m.interior);
        const SparseMatrix Aib = detail::extract(sys.A, m.interior, m.boundary);
        const Eigen::VectorXd gb = detail::gather(sol.dofs, m.boundary);
        const Eigen::VectorXd rhs = -(Aib * gb);

        Eigen::SimplicialLDLT<SparseMatrix> ldlt(Aii);
        if (ldlt.info() != Eigen::Success)
            throw NumericalError("factorisation of the interior block failed");
        const Eigen::VectorXd d = ldlt.vectorD();
        if (d.minCoeff() <= 0.0) {
            std::ostringstream os;
            os << "interior block is not positive definite (smallest pivot " << d.minCoeff() << ", "
               << m.interior.size() << " unknowns)";
            throw NumericalError(os.str());
        }
        const Eigen::VectorXd xi = ldlt.solve(rhs);
        const double bn = rhs.norm();
        sol.residual = bn > 0.0 ? (Aii * xi - rhs).norm() / bn : (Aii * xi).norm();
        if (!(sol.residual <= residual_tol)) {
            std::ostringstream os;
            os << "interior solve residual " << sol.residual << " exceeds " << residual_tol;
            throw NumericalError(os.str());
        }
        for (std::size_t i = 0; i < m.interior.size(); ++i)
            sol.dofs(static_cast<Eigen::Index>(m.interior[i])) = xi(static_cast<Eigen::Index>(i));
    }
    recover_projections(sys, sol);
    return sol;
}

/// DOF vector of the global constant function c.
inline Eigen::VectorXd constant_dofs(const DofMap& map, double c = 1.0)
{
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.count));
    for (std::size_t e = 0; e + 1 < map.offset.size(); ++e)
        x(static_cast<Eigen::Index>(map.offset[e])) = c;
    return x;
}

struct ConditionEstimate
{
    /// lambda_max / smallest nonzero eigenvalue of the full matrix
    double full = 0.0;
    /// condition of the interior (Dirichlet-eliminated) block
    double interior = 0.0;
    bool converged = true;
    /// largest relative change of the Ritz values at the last iteration
    double achieved_tol = 0.0;
};

namespace detail
{
/// Largest eigenvalue of a symmetric operator by Lanczos with full
/// reorthogonalisation, restricted to the complement of `deflate` if given.
inline double lanczos_largest(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply, Eigen::Index n,
                              const Eigen::VectorXd* deflate, double tol, int max_iter, bool& converged,
                              double& achieved)
{
    Eigen::VectorXd c;
    if (deflate)
        c = deflate->normalized();
    auto project = [&](Eigen::VectorXd& v) {
        if (deflate)
            v -= c.dot(v) * c;
    };
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);
    project(v);
    v.normalize();
    std::vector<Eigen::VectorXd> Q{v};
    std::vector<double> alpha, beta;
    double prev = 0.0;
    const Eigen::Index space = n - (deflate ? 1 : 0);
    const int kmax = static_cast<int>(std::min<Eigen::Index>(max_iter, space));
    const bool exhaustive = kmax == space;
    converged = false;
    achieved = 1.0;
    for (int k = 0; k < kmax; ++k) {
        Eigen::VectorXd w = apply(Q.back());
        project(w);
        alpha.push_back(Q.back().dot(w));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : Q)
                w -= q.dot(w) * q;
        const double b = w.norm();
        const auto m = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            T(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m)
                T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(T, Eigen::EigenvaluesOnly).eigenvalues()(m - 1);
        achieved = exhaustive && k + 1 == kmax ? 0.0 : std::abs(top - prev) / std::abs(top);
        prev = top;
        // an exhausted Krylov space gives exact Ritz values
        if ((k >= 4 && achieved < tol) || b <= 1e-14 * std::abs(top) || (exhaustive && k + 1 == kmax)) {
            converged = true;
            return top;
        }
        beta.push_back(b);
        Q.push_back(w / b);
    }
    return prev;
}
} // namespace detail

struct ConditionResult
{
    double value = 0.0;
    bool converged = true;
    double achieved_tol = 0.0;
};

/// 2-norm condition number of a symmetric positive definite matrix: dense
/// eigenvalues up to dense_limit unknowns, Lanczos on A and on A^{-1} above.
inline ConditionResult spd_condition(const SparseMatrix& A, Eigen::Index dense_limit = 2000)
{
    ConditionResult res;
    const Eigen::Index n = A.rows();
    if (n == 0)
        return res;
    if (n <= dense_limit) {
        const Eigen::MatrixXd Ad(A);
        const Eigen::VectorXd ev =
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Ad, Eigen::EigenvaluesOnly).eigenvalues();
        res.value = ev(n - 1) / ev(0);
        return res;
    }
    bool ok = true;
    double ach = 0.0;
    const double lmax = detail::lanczos_largest([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; },
                                                n, nullptr, 1e-10, 300, ok, ach);
    res.converged = ok;
    res.achieved_tol = ach;
    Eigen::SimplicialLDLT<SparseMatrix> f(A);
    if (f.info() != Eigen::Success)
        throw NumericalError("factorisation for the condition estimate failed");
    const double inv = detail::lanczos_largest([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return f.solve(x); },
                                               n, nullptr, 1e-10, 300, ok, ach);
    res.converged = res.converged && ok;
    res.achieved_tol = std::max(res.achieved_tol, ach);
    res.value = lmax * inv;
    return res;
}

/// lambda_max / lambda_min over the nonzero spectrum of a positive
/// semidefinite matrix whose kernel is spanned by `kernel`.
inline ConditionResult semidefinite_condition(const SparseMatrix& A, const Eigen::VectorXd& kernel,
                                              Eigen::Index dense_limit = 2000)
{
    ConditionResult res;
    const Eigen::Index n = A.rows();
    if (n <= 1)
        return {1.0, true, 0.0};
    if (n <= dense_limit) {
        const Eigen::MatrixXd Ad(A);
        const Eigen::VectorXd ev =
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Ad, Eigen::EigenvaluesOnly).eigenvalues();
        res.value = ev(n - 1) / ev(1);
        return res;
    }
    bool ok = true;
    double ach = 0.0;
    const double lmax = detail::lanczos_largest([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; },
                                                n, &kernel, 1e-10, 300, ok, ach);
    res.converged = ok;
    res.achieved_tol = ach;
    // the kernel vector is an eigenvector of A + delta I too, so deflating it
    // keeps the iteration on the nonzero spectrum
    const double delta = 1e-12 * lmax;
    SparseMatrix shifted = A;
    for (Eigen::Index i = 0; i < n; ++i)
        shifted.coeffRef(i, i) += delta;
    Eigen::SimplicialLDLT<SparseMatrix> f(shifted);
    if (f.info() != Eigen::Success)
        throw NumericalError("factorisation for the condition estimate failed");
    const double inv = detail::lanczos_largest([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return f.solve(x); },
                                               n, &kernel, 1e-10, 300, ok, ach);
    res.converged = res.converged && ok;
    res.achieved_tol = std::max(res.achieved_tol, ach);
    res.value = lmax / (1.0 / inv - delta);
    return res;
}

/// Condition numbers of the full stiffness matrix (constants deflated) and of
/// the interior block.
inline ConditionEstimate condition_estimate(const GlobalSystem& sys, Eigen::Index dense_limit = 2000)
{
    ConditionEstimate ce;
    const auto full = semidefinite_condition(sys.A, constant_dofs(sys.map), dense_limit);
    const auto inner = spd_condition(detail::extract(sys.A, sys.map.interior, sys.map.interior), dense_limit);
    ce.full = full.value;
    ce.interior = inner.value;
    ce.converged = full.converged && inner.converged;
    ce.achieved_tol = std::max(full.achieved_tol, inner.achieved_tol);
    return ce;
}

} // namespace hvem
