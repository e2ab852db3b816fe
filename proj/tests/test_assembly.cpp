#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hvem/assembly.hpp"
#include "hvem/mesh_generators.hpp"

using namespace hvem;

namespace
{

Mesh voronoi(std::size_t cells, std::uint64_t seed = 1)
{
    return generate_voronoi_lloyd(cells, unit_square_domain(), 30, seed);
}

// Global harmonic polynomial of index alpha for a fixed centre and scale.
BoundaryData harmonic_data(int alpha, int p)
{
    const HarmonicBasis hb(Point(0.5, 0.5), std::sqrt(2.0), p);
    return {[hb, alpha](const Point& x) { return hb.eval(alpha, x).value; }, std::nullopt};
}

} // namespace

TEST(DegreeVector, UniformAndGraded)
{
    const Mesh m = generate_cartesian(3);
    const auto u = uniform_degrees(m, 3);
    EXPECT_TRUE(std::all_of(u.p_edge.begin(), u.p_edge.end(), [](int p) { return p == 3; }));
    EXPECT_EQ(u.max_degree(), 3);

    const auto gm = generate_graded_lshape(2, 0.5, GradedFamily::c);
    const auto g = graded_degrees(gm.mesh, gm.layers, 1.0);
    for (std::size_t k = 0; k < gm.mesh.num_elements(); ++k)
        EXPECT_EQ(g.p_elem[k], gm.layers.layer_of_element[k] + 1);
    for (std::size_t e = 0; e < gm.mesh.num_edges(); ++e) {
        const auto& ed = gm.mesh.edge(e);
        int expected = g.p_elem[ed.elements[0]];
        if (!ed.boundary())
            expected = std::max(expected, g.p_elem[ed.elements[1]]);
        EXPECT_EQ(g.p_edge[e], expected);
    }
    const auto half = graded_degrees(gm.mesh, gm.layers, 0.4);
    for (std::size_t k = 0; k < gm.mesh.num_elements(); ++k) {
        const int l = gm.layers.layer_of_element[k];
        EXPECT_EQ(half.p_elem[k], l == 0 ? 1 : std::max(1, static_cast<int>(std::ceil(0.4 * (l + 1)))));
    }
    EXPECT_THROW(build_degree_vector(m, std::nullopt, std::nullopt, std::nullopt), std::invalid_argument);
    EXPECT_THROW(build_degree_vector(gm.mesh, gm.layers, 2, 1.0), std::invalid_argument);
    EXPECT_EQ(build_degree_vector(m, std::nullopt, 2, std::nullopt).p_edge, uniform_degrees(m, 2).p_edge);
}

TEST(DegreeVector, MaximumRuleAcrossAnEdge)
{
    const Mesh m = generate_cartesian(2);
    DegreeVector dv;
    dv.p_elem = {2, 3, 2, 2};
    detail::apply_maximum_rule(m, dv);
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
        const auto& ed = m.edge(e);
        const bool touches1 = ed.elements[0] == 1 || ed.elements[1] == 1;
        EXPECT_EQ(dv.p_edge[e], touches1 ? 3 : 2);
    }
}

TEST(DofMap, CountsAndSharedIndices)
{
    const Mesh m = generate_cartesian(2);
    const auto map = make_dof_map(m, uniform_degrees(m, 1));
    EXPECT_EQ(map.count, 12u);
    EXPECT_EQ(map.interior.size(), 4u);
    const auto sys = assemble(m, uniform_degrees(m, 3));
    // every (edge, moment) pair owns exactly one global index, read by both neighbours
    std::vector<int> seen(sys.num_dofs(), 0);
    for (const auto& ld : sys.local)
        for (std::size_t i : ld.dofs)
            ++seen[i];
    for (std::size_t e = 0; e < m.num_edges(); ++e)
        for (std::size_t i = sys.map.offset[e]; i < sys.map.offset[e + 1]; ++i)
            EXPECT_EQ(seen[i], static_cast<int>(m.edge(e).num_elements()));
}

TEST(Dirichlet, ConstantAndLegendreData)
{
    const Mesh m = generate_cartesian(2);
    const auto dv = uniform_degrees(m, 4);
    const auto map = make_dof_map(m, dv);
    for (auto mode : {DirichletMode::exact_moments, DirichletMode::gauss_lobatto_interp}) {
        const auto g = impose_dirichlet(m, dv, {[](const Point&) { return 1.0; }, std::nullopt}, mode);
        for (std::size_t e = 0; e < m.num_edges(); ++e)
            for (int r = 0; r < 4; ++r) {
                const double v = g(static_cast<Eigen::Index>(map.offset[e]) + r);
                EXPECT_NEAR(v, m.edge(e).boundary() && r == 0 ? 1.0 : 0.0, 1e-15);
            }
    }
    // trace of m_1 on the bottom-left boundary edge
    std::size_t e0 = 0;
    while (!m.edge(e0).boundary())
        ++e0;
    const EdgeLegendreBasis eb(m.vertex(m.edge(e0).v[0]), m.vertex(m.edge(e0).v[1]), 4);
    const BoundaryData d{[&](const Point& x) {
                             try {
                                 return eb.eval(1, x);
                             }
                             catch (const std::domain_error&) {
                                 return 0.0;
                             }
                         },
                         std::nullopt};
    const auto g = impose_dirichlet(m, dv, d);
    for (int r = 0; r < 4; ++r)
        EXPECT_NEAR(g(static_cast<Eigen::Index>(map.offset[e0]) + r), r == 1 ? 1.0 / 3.0 : 0.0, 1e-14);
}

TEST(Dirichlet, LobattoModeConvergesFasterThanAnyPower)
{
    const Mesh m = generate_cartesian(1);
    const BoundaryData d{[](const Point& x) { return std::exp(x.x()) * std::sin(x.y()); }, std::nullopt};
    std::vector<double> diff;
    for (int p = 2; p <= 12; p += 2) {
        const auto dv = uniform_degrees(m, p);
        diff.push_back((impose_dirichlet(m, dv, d) - impose_dirichlet(m, dv, d, DirichletMode::gauss_lobatto_interp))
                           .cwiseAbs()
                           .maxCoeff());
    }
    // super-geometric: successive ratios shrink
    for (std::size_t i = 0; i + 2 < diff.size(); ++i)
        if (diff[i + 2] > 1e-15)
            EXPECT_LT(diff[i + 2] / diff[i + 1], diff[i + 1] / diff[i]);
    EXPECT_LT(diff.back(), 1e-12);
    EXPECT_GT(diff.front(), 1e-6);
}

TEST(Assembly, SymmetricAndSingleSquareConstant)
{
    const Mesh one = generate_cartesian(1);
    const auto dv = uniform_degrees(one, 1);
    const auto sys = assemble(one, dv);
    const auto sol = solve(sys, impose_dirichlet(one, dv, {[](const Point&) { return 1.0; }, std::nullopt}));
    EXPECT_NEAR((sol.dofs - Eigen::VectorXd::Ones(4)).norm(), 0.0, 1e-14);
    EXPECT_NEAR(sol.eval(0, Point(0.3, 0.8)).value, 1.0, 1e-14);

    const Mesh v = voronoi(12);
    const auto sv = assemble(v, uniform_degrees(v, 4));
    const SparseMatrix diff = sv.A - SparseMatrix(sv.A.transpose());
    EXPECT_EQ(diff.cwiseAbs().sum() == 0.0 || diff.nonZeros() == 0, true);
}

TEST(Assembly, QuadraticFormOfGlobalHarmonicPolynomial)
{
    const Mesh m = voronoi(9, 3);
    const int p = 3;
    const auto dv = uniform_degrees(m, p);
    const auto sys = assemble(m, dv);
    const HarmonicBasis hb(Point(0.5, 0.5), std::sqrt(2.0), p);
    for (int a = 0; a < hb.dimension(); ++a) {
        const auto x = interpolate(m, dv, harmonic_data(a, p));
        // sum over elements of (grad q, grad q)_K = int_{dOmega} q d_n q
        double exact = 0.0;
        const auto rule = edge_quadrature(2 * p);
        const auto& dom = unit_square_domain();
        for (std::size_t j = 0; j < dom.size(); ++j) {
            const Point A = dom[j], B = dom[(j + 1) % dom.size()];
            const Point n = Point(B.y() - A.y(), A.x() - B.x()).normalized();
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const Point y = A + 0.5 * (rule.nodes[q] + 1) * (B - A);
                const auto v = hb.eval(a, y);
                exact += 0.5 * (B - A).norm() * rule.weights[q] * v.value * v.gradient.dot(n);
            }
        }
        EXPECT_NEAR(x.dot(sys.A * x), exact, 1e-10 * std::max(1.0, exact)) << a;
    }
}

TEST(Solve, PatchTestReproducesHarmonicPolynomials)
{
    for (const Mesh& m : {generate_cartesian(2), voronoi(4, 5), generate_nonconvex_pinwheel()}) {
        for (int p = 1; p <= 4; ++p) {
            const auto dv = uniform_degrees(m, p);
            const auto sys = assemble(m, dv);
            const HarmonicBasis hb(Point(0.5, 0.5), std::sqrt(2.0), p);
            for (int a = 0; a < hb.dimension(); ++a) {
                const auto sol = solve(sys, impose_dirichlet(m, dv, harmonic_data(a, p)));
                EXPECT_LE(sol.residual, 1e-10);
                for (std::size_t k = 0; k < m.num_elements(); ++k) {
                    const Point c = m.geometry(k).centroid;
                    const auto u = sol.eval(k, c);
                    const auto q = hb.eval(a, c);
                    EXPECT_NEAR(u.value, q.value, 1e-10);
                    EXPECT_NEAR((u.gradient - q.gradient).norm(), 0.0, 1e-9);
                }
            }
        }
    }
}

TEST(Solve, ConstantDataGivesConstantSolution)
{
    const Mesh m = voronoi(20, 9);
    for (int p : {1, 3, 6}) {
        const auto dv = uniform_degrees(m, p);
        const auto sol = solve(assemble(m, dv), impose_dirichlet(m, dv, {[](const Point&) { return -2.5; }, std::nullopt}));
        EXPECT_NEAR((sol.dofs - constant_dofs(make_dof_map(m, dv), -2.5)).cwiseAbs().maxCoeff(), 0.0, 1e-12);
        for (std::size_t k = 0; k < m.num_elements(); ++k)
            EXPECT_NEAR(sol.eval(k, m.geometry(k).centroid).value, -2.5, 1e-12);
    }
}

TEST(Solve, ElementOrderDoesNotMatter)
{
    const Mesh m = voronoi(15, 4);
    std::vector<std::size_t> perm(m.num_elements());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 rng(1);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<std::size_t>> loops;
    for (std::size_t k : perm)
        loops.push_back(m.elements()[k]);
    const Mesh pm(m.vertices(), loops);

    const BoundaryData d{[](const Point& x) { return std::exp(x.x()) * std::sin(x.y()); }, std::nullopt};
    const auto dv = uniform_degrees(m, 3);
    const auto pdv = uniform_degrees(pm, 3);
    const auto a = solve(assemble(m, dv), impose_dirichlet(m, dv, d));
    const auto b = solve(assemble(pm, pdv), impose_dirichlet(pm, pdv, d));
    for (std::size_t i = 0; i < perm.size(); ++i)
        EXPECT_LE((a.coeffs[perm[i]] - b.coeffs[i]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Assembly, ThreadCountDoesNotChangeMatrix)
{
    const Mesh m = voronoi(25, 2);
    const auto dv = uniform_degrees(m, 4);
    const auto a = assemble(m, dv, 1);
    const auto b = assemble(m, dv, 4);
    EXPECT_EQ((a.A - b.A).norm(), 0.0);
}

TEST(Condition, SyntheticMatrices)
{
    SparseMatrix I(5, 5);
    I.setIdentity();
    EXPECT_NEAR(spd_condition(I).value, 1.0, 1e-14);
    SparseMatrix D(2, 2);
    D.insert(0, 0) = 1.0;
    D.insert(1, 1) = 10.0;
    EXPECT_NEAR(spd_condition(D).value, 10.0, 1e-12);

    // 1D Neumann Laplacian: kernel = constants, eigenvalues 2 - 2 cos(k pi / n)
    const int n = 60;
    SparseMatrix L(n, n);
    for (int i = 0; i < n; ++i) {
        L.insert(i, i) = (i == 0 || i == n - 1) ? 1.0 : 2.0;
        if (i + 1 < n) {
            L.insert(i, i + 1) = -1.0;
            L.insert(i + 1, i) = -1.0;
        }
    }
    const double expected = (2 - 2 * std::cos((n - 1) * M_PI / n)) / (2 - 2 * std::cos(M_PI / n));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    EXPECT_NEAR(semidefinite_condition(L, ones).value / expected, 1.0, 1e-10);
    const auto lz = semidefinite_condition(L, ones, 0);
    EXPECT_TRUE(lz.converged);
    EXPECT_NEAR(lz.value / expected, 1.0, 1e-6);
}

TEST(Condition, IterativeAgreesWithDense)
{
    const Mesh m = generate_cartesian(4);
    const auto sys = assemble(m, uniform_degrees(m, 3));
    const auto dense = condition_estimate(sys);
    const auto iter = condition_estimate(sys, 0);
    EXPECT_NEAR(iter.full / dense.full, 1.0, 1e-6);
    EXPECT_NEAR(iter.interior / dense.interior, 1.0, 1e-6);
    EXPECT_GT(dense.full, dense.interior * 0.0);
}
