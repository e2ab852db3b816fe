// Error norms of the projected discrete solution, convergence studies and rate fits.
#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvem/assembly.hpp"
#include "hvem/mesh_generators.hpp"
#include "hvem/reference.hpp"

namespace hvem
{

struct ErrorNorms
{
    double rel_l2 = 0.0;
    double rel_h1 = 0.0;
    double abs_l2 = 0.0;
    /// broken H1 seminorm of u - Pi u_n
    double abs_h1 = 0.0;
};

struct ErrorOptions
{
    /// quadrature exactness is 2 p_K + extra on each element
    int extra_exactness = 6;
    int rings = 3;
    double ratio = 0.15;
};

/// ||u - Pi u_n||_0 / ||u||_0 and |u - Pi u_n|_{1,broken} / ||u||_1.
inline ErrorNorms compute_errors(const DiscreteSolution& sol, const ReferenceSolution& ref, const Mesh& mesh,
                                 const ErrorOptions& opt = {})
{
    if (sol.coeffs.size() != mesh.num_elements())
        throw std::invalid_argument("solution does not match the mesh");
    double l2 = 0.0, h1 = 0.0;
    std::vector<Point> pts;
    std::vector<double> wts;
    for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
        const auto rule = triangle_quadrature(2 * sol.bases[k].degree() + opt.extra_exactness);
        const auto poly = mesh.polygon(k);
        for (const auto& t : detail::graded_cover(poly, ref.singular_point, 0, opt.rings, opt.ratio)) {
            pts.clear();
            wts.clear();
            map_triangle_rule(rule, t, pts, wts);
            for (std::size_t q = 0; q < pts.size(); ++q) {
                const auto u = ref.eval(pts[q]);
                const auto v = sol.eval(k, pts[q]);
                l2 += wts[q] * (u.value - v.value) * (u.value - v.value);
                h1 += wts[q] * (u.gradient - v.gradient).squaredNorm();
            }
        }
    }
    ErrorNorms e;
    e.abs_l2 = std::sqrt(l2);
    e.abs_h1 = std::sqrt(h1);
    e.rel_l2 = ref.l2_norm > 0.0 ? e.abs_l2 / ref.l2_norm : e.abs_l2;
    e.rel_h1 = ref.h1_norm > 0.0 ? e.abs_h1 / ref.h1_norm : e.abs_h1;
    return e;
}

struct StudyRow
{
    int level = 0;
    double h = 0.0;
    int p_max = 0;
    std::size_t dofs = 0;
    double rel_l2 = 0.0;
    double rel_h1 = 0.0;
    /// full-matrix condition number, NaN when not computed
    double cond = std::nan("");
};

struct StudyResult
{
    std::string kind;
    std::string family;
    std::string u;
    std::vector<StudyRow> rows;
};

struct StudyOptions
{
    DirichletMode dirichlet = DirichletMode::exact_moments;
    bool compute_condition = true;
    Eigen::Index dense_limit = 2000;
    /// Voronoi meshes: Lloyd iterations and RNG seed
    std::size_t lloyd_iters = 30;
    std::uint64_t seed = 1;
    double residual_tol = 1e-10;
    ErrorOptions errors{};
};

/// Mesh of a named family at level n: cartesian n x n squares, voronoi n^2
/// cells, or the non-convex pinwheel (n ignored).
inline Mesh family_mesh(const std::string& family, std::size_t n, const StudyOptions& opt = {})
{
    if (family == "cartesian")
        return generate_cartesian(n);
    if (family == "voronoi")
        return generate_voronoi_lloyd(n * n, unit_square_domain(), opt.lloyd_iters, opt.seed);
    if (family == "nonconvex")
        return generate_nonconvex_pinwheel();
    throw std::invalid_argument("unknown mesh family '" + family + "'");
}

struct SolveOutput
{
    GlobalSystem system;
    DiscreteSolution solution;
    ErrorNorms errors;
    double cond = std::nan("");
};

inline SolveOutput solve_reference(const Mesh& mesh, const DegreeVector& dv, const ReferenceSolution& ref,
                                   const StudyOptions& opt = {})
{
    SolveOutput out;
    out.system = assemble(mesh, dv);
    out.solution = solve(out.system, impose_dirichlet(mesh, dv, ref.boundary_data(), opt.dirichlet), opt.residual_tol);
    out.errors = compute_errors(out.solution, ref, mesh, opt.errors);
    if (opt.compute_condition)
        out.cond = condition_estimate(out.system, opt.dense_limit).full;
    return out;
}

namespace detail
{
inline StudyRow make_row(int level, const Mesh& mesh, const DegreeVector& dv, const SolveOutput& s)
{
    StudyRow r;
    r.level = level;
    r.h = mesh.mesh_size();
    r.p_max = dv.max_degree();
    r.dofs = s.system.num_dofs();
    r.rel_l2 = s.errors.rel_l2;
    r.rel_h1 = s.errors.rel_h1;
    r.cond = s.cond;
    return r;
}
} // namespace detail

inline StudyResult run_h_study(const std::string& u, const std::string& family, int p,
                               const std::vector<std::size_t>& levels, const StudyOptions& opt = {})
{
    const ReferenceSolution ref = reference(u);
    StudyResult res{"h", family, u, {}};
    for (std::size_t n : levels) {
        const Mesh mesh = family_mesh(family, n, opt);
        const auto dv = uniform_degrees(mesh, p);
        res.rows.push_back(detail::make_row(static_cast<int>(n), mesh, dv, solve_reference(mesh, dv, ref, opt)));
    }
    return res;
}

inline StudyResult run_p_study(const std::string& u, const Mesh& mesh, const std::string& family_label, int p_max,
                               const StudyOptions& opt = {})
{
    const ReferenceSolution ref = reference(u);
    StudyResult res{"p", family_label, u, {}};
    for (int p = 1; p <= p_max; ++p) {
        const auto dv = uniform_degrees(mesh, p);
        res.rows.push_back(detail::make_row(p, mesh, dv, solve_reference(mesh, dv, ref, opt)));
    }
    return res;
}

inline StudyResult run_p_study(const std::string& u, const std::string& family, std::size_t n, int p_max,
                               const StudyOptions& opt = {})
{
    return run_p_study(u, family_mesh(family, n, opt), family, p_max, opt);
}

inline std::string family_name(GradedFamily f)
{
    switch (f) {
    case GradedFamily::a:
        return "graded-a";
    case GradedFamily::b:
        return "graded-b";
    default:
        return "graded-c";
    }
}

/// Graded L-shape meshes with n layers and degrees growing away from the corner.
inline StudyResult run_hp_study(const std::string& u, GradedFamily family, double sigma, double mu,
                                const std::vector<std::size_t>& n_range, const StudyOptions& opt = {})
{
    const ReferenceSolution ref = reference(u);
    StudyResult res{"hp", family_name(family), u, {}};
    for (std::size_t n : n_range) {
        const GradedMesh gm = generate_graded_lshape(n, sigma, family);
        const auto dv = graded_degrees(gm.mesh, gm.layers, mu);
        res.rows.push_back(detail::make_row(static_cast<int>(n), gm.mesh, dv, solve_reference(gm.mesh, dv, ref, opt)));
    }
    return res;
}

struct RateFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double correlation = 0.0;
    /// root mean square residual of the fitted line
    double residual = 0.0;
};

/// Least-squares line y = slope x + intercept; needs at least 3 points.
inline RateFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("fit_line: size mismatch");
    if (x.size() < 3)
        throw std::invalid_argument("fit_line: at least 3 points are required");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    RateFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    f.correlation = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
    double rr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = y[i] - (f.slope * x[i] + f.intercept);
        rr += d * d;
    }
    f.residual = std::sqrt(rr / n);
    return f;
}

enum class RateAxis
{
    log_h,
    p,
    sqrt_dofs
};

enum class ErrorKind
{
    l2,
    h1
};

/// Fit log(err) against the chosen axis over rows [first, first + count).
inline RateFit fit_rate(const std::vector<StudyRow>& rows, RateAxis axis, ErrorKind err, std::size_t first = 0,
                        std::size_t count = std::string::npos)
{
    std::vector<double> x, y;
    for (std::size_t i = first; i < rows.size() && i - first < count; ++i) {
        const auto& r = rows[i];
        switch (axis) {
        case RateAxis::log_h:
            x.push_back(std::log(r.h));
            break;
        case RateAxis::p:
            x.push_back(static_cast<double>(r.p_max));
            break;
        case RateAxis::sqrt_dofs:
            x.push_back(std::sqrt(static_cast<double>(r.dofs)));
            break;
        }
        y.push_back(std::log(err == ErrorKind::h1 ? r.rel_h1 : r.rel_l2));
    }
    return fit_line(x, y);
}

/// Rows used for asymptotic fits: the last three (h) or the upper half (p, hp).
inline std::pair<std::size_t, std::size_t> asymptotic_range(const StudyResult& s)
{
    const std::size_t n = s.rows.size();
    if (s.kind == "h") {
        const std::size_t c = std::min<std::size_t>(3, n);
        return {n - c, c};
    }
    const std::size_t c = std::max<std::size_t>(std::min<std::size_t>(3, n), (n + 1) / 2);
    return {n - c, c};
}

inline void write_csv_header(std::ostream& os) { os << "kind,family,u,level,h,p_max,dofs,relL2,relH1,cond\n"; }

inline void write_csv_rows(std::ostream& os, const StudyResult& s)
{
    char buf[256];
    for (const auto& r : s.rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%zu,%.17g,%.17g,%.17g", r.level, r.h, r.p_max, r.dofs, r.rel_l2,
                      r.rel_h1, r.cond);
        os << s.kind << ',' << s.family << ',' << s.u << ',' << buf << '\n';
    }
}

inline void write_csv(std::ostream& os, const StudyResult& s)
{
    write_csv_header(os);
    write_csv_rows(os, s);
}

} // namespace hvem
