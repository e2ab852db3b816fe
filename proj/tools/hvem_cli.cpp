// hvem-cli: mesh generation, solves, convergence studies and mesh validation.
//
// Exit codes: 0 success, 1 usage or input error, 2 numerical failure or a
// failed validation check.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hvem/analysis.hpp"
#include "hvem/config.hpp"
#include "hvem/mesh_generators.hpp"
#include "hvem/mesh_io.hpp"
#include "hvem/regularity.hpp"

using namespace hvem;

namespace
{

constexpr int exit_usage = 1;
constexpr int exit_numerical = 2;

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

GradedFamily parse_graded(const std::string& f)
{
    if (f == "graded-a" || f == "a")
        return GradedFamily::a;
    if (f == "graded-b" || f == "b")
        return GradedFamily::b;
    if (f == "graded-c" || f == "c")
        return GradedFamily::c;
    throw UsageError("unknown graded family '" + f + "'");
}

DirichletMode parse_dirichlet(const std::string& m)
{
    if (m == "exact_moments")
        return DirichletMode::exact_moments;
    if (m == "gauss_lobatto_interp")
        return DirichletMode::gauss_lobatto_interp;
    throw UsageError("unknown Dirichlet mode '" + m + "'");
}

int run_mesh_gen(const RunConfig& c)
{
    Mesh mesh;
    if (c.family == "cartesian")
        mesh = generate_cartesian(c.n);
    else if (c.family == "voronoi")
        mesh = generate_voronoi_lloyd(c.n * c.n, unit_square_domain(), c.lloyd, c.seed);
    else if (c.family == "nonconvex")
        mesh = generate_nonconvex_pinwheel();
    else if (c.family.rfind("graded-", 0) == 0)
        mesh = generate_graded_lshape(c.n, c.sigma, parse_graded(c.family)).mesh;
    else
        throw UsageError("unknown mesh family '" + c.family + "'");
    if (c.out.empty())
        throw UsageError("mesh-gen needs --out");
    save_mesh(mesh, c.out);
    std::cout << "wrote " << c.out << ": " << mesh.num_vertices() << " vertices, " << mesh.num_elements()
              << " elements, " << mesh.num_edges() << " edges\n";
    return 0;
}

/// Norms of the reference over the region covered by the mesh.
ReferenceSolution reference_for_mesh(const std::string& id, const Mesh& mesh)
{
    ReferenceSolution ref = reference(id);
    if (std::abs(mesh.total_area() - area(ref.domain)) > 1e-10 * area(ref.domain)) {
        double l2 = 0.0, h1 = 0.0;
        for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
            const auto [a, b] = domain_norms(ref.eval, mesh.polygon(k), ref.singular_point);
            l2 += a * a;
            h1 += b * b;
        }
        ref.l2_norm = std::sqrt(l2);
        ref.h1_norm = std::sqrt(h1);
    }
    return ref;
}

int run_solve(const RunConfig& c)
{
    if (c.mesh.empty())
        throw UsageError("solve needs --mesh");
    const Mesh mesh = load_mesh(c.mesh);
    DegreeVector dv;
    if (c.hp) {
        if (c.corner.size() != 2)
            throw UsageError("--corner takes two coordinates");
        dv = graded_degrees(mesh, compute_layers(mesh, Point(c.corner[0], c.corner[1])), c.mu);
    }
    else
        dv = uniform_degrees(mesh, c.p);
    const ReferenceSolution ref = reference_for_mesh(c.g, mesh);
    StudyOptions opt;
    opt.dirichlet = parse_dirichlet(c.dirichlet);
    opt.residual_tol = c.residual_tolerance;
    opt.compute_condition = false;
    const SolveOutput out = solve_reference(mesh, dv, ref, opt);

    nlohmann::json j;
    j["g"] = c.g;
    j["dofs"] = std::vector<double>(out.solution.dofs.data(), out.solution.dofs.data() + out.solution.dofs.size());
    j["p_edge"] = dv.p_edge;
    auto& el = j["elements"] = nlohmann::json::array();
    for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
        const auto& hb = out.solution.bases[k];
        const auto& co = out.solution.coeffs[k];
        el.push_back({{"center", {hb.center().x(), hb.center().y()}},
                      {"scale", hb.scale()},
                      {"degree", hb.degree()},
                      {"coeffs", std::vector<double>(co.data(), co.data() + co.size())}});
    }
    j["residual"] = out.solution.residual;
    j["errors"] = {{"relL2", out.errors.rel_l2}, {"relH1", out.errors.rel_h1}};
    if (!c.out.empty()) {
        std::ofstream os(c.out);
        if (!os)
            throw std::runtime_error("cannot write " + c.out);
        os << j.dump() << '\n';
    }
    std::printf("dofs %zu  max degree %d  residual %.3e  relL2 %.6e  relH1 %.6e\n", out.system.num_dofs(),
                dv.max_degree(), out.solution.residual, out.errors.rel_l2, out.errors.rel_h1);
    return 0;
}

int run_study(const RunConfig& c)
{
    StudyOptions opt;
    opt.dirichlet = parse_dirichlet(c.dirichlet);
    opt.residual_tol = c.residual_tolerance;
    opt.lloyd_iters = c.lloyd;
    opt.seed = c.seed;
    StudyResult res;
    RateAxis axis = RateAxis::log_h;
    if (c.kind == "h") {
        std::vector<std::size_t> sizes;
        for (std::size_t i = 0, n = c.n; i < c.levels; ++i, n *= 2)
            sizes.push_back(n);
        res = run_h_study(c.u, c.family, c.p, sizes, opt);
    }
    else if (c.kind == "p") {
        res = run_p_study(c.u, c.family, c.n, c.pmax, opt);
        axis = RateAxis::p;
    }
    else if (c.kind == "hp") {
        std::vector<std::size_t> layers;
        for (std::size_t n = 0; n <= c.levels; ++n)
            layers.push_back(n);
        res = run_hp_study(c.u, parse_graded(c.family), c.sigma, c.mu, layers, opt);
        axis = RateAxis::sqrt_dofs;
    }
    else
        throw UsageError("unknown study kind '" + c.kind + "'");

    if (c.out.empty())
        write_csv(std::cout, res);
    else {
        std::ofstream os(c.out);
        if (!os)
            throw std::runtime_error("cannot write " + c.out);
        write_csv(os, res);
        std::cout << "wrote " << res.rows.size() << " rows to " << c.out << '\n';
    }
    if (res.rows.size() >= 3) {
        const auto [first, count] = asymptotic_range(res);
        const auto h1 = fit_rate(res.rows, axis, ErrorKind::h1, first, count);
        const auto l2 = fit_rate(res.rows, axis, ErrorKind::l2, first, count);
        std::fprintf(c.out.empty() ? stderr : stdout, "fit over last %zu rows: H1 slope %.4f (corr %.5f), L2 slope %.4f (corr %.5f)\n",
                     count, h1.slope, h1.correlation, l2.slope, l2.correlation);
    }
    return 0;
}

int run_validate(const RunConfig& c)
{
    if (c.mesh.empty())
        throw UsageError("validate needs --mesh");
    const Mesh mesh = load_mesh(c.mesh);
    RegularityParameters prm;
    prm.rho1 = c.rho1;
    prm.rho2 = c.rho2;
    prm.max_edges = c.lambda;
    prm.check_quasi_uniform = c.check_quasi_uniform;
    prm.rho3 = c.rho3;
    const auto rep = validate_regularity(mesh, prm);
    std::cout << rep;
    return rep.passed() ? 0 : exit_numerical;
}

/// Value of --config in argv, if present.
std::string find_config(int argc, char** argv)
{
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config")
            return argv[i + 1];
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a.rfind("--config=", 0) == 0)
            return a.substr(9);
    }
    return {};
}

} // namespace

int main(int argc, char** argv)
{
    RunConfig cfg;
    try {
        if (const auto path = find_config(argc, argv); !path.empty())
            cfg = load_config(path);
    }
    catch (const nlohmann::json::parse_error& e) {
        std::cerr << "error: malformed config JSON at byte " << e.byte << ": " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }

    CLI::App app{"Harmonic virtual element solver for the Laplace equation on polygonal meshes"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, save_path;
    app.add_option("--config", config_path, "Load options from a JSON run configuration");
    app.add_option("--save-config", save_path, "Write the effective run configuration as JSON");

    auto tolerance = [&](CLI::App* sub) {
        sub->add_option("--tolerance", cfg.residual_tolerance, "Relative residual tolerance of the linear solve")
            ->capture_default_str();
        sub->add_option("--g-cond-warning", cfg.g_condition_warning, "Warn when cond(G) exceeds this value")
            ->capture_default_str();
    };

    auto* gen = app.add_subcommand("mesh-gen", "Generate a mesh");
    gen->add_option("--family", cfg.family, "cartesian | voronoi | graded-a | graded-b | graded-c | nonconvex")
        ->capture_default_str();
    gen->add_option("--out", cfg.out, "Output mesh JSON");
    gen->add_option("--n", cfg.n, "Cells per side (cartesian), sqrt of cell count (voronoi), layers (graded)")
        ->capture_default_str();
    gen->add_option("--sigma", cfg.sigma, "Grading factor in (0, 1)")->capture_default_str();
    gen->add_option("--seed", cfg.seed, "Random seed (voronoi)")->capture_default_str();
    gen->add_option("--lloyd", cfg.lloyd, "Lloyd iterations (voronoi)")->capture_default_str();

    auto* sol = app.add_subcommand("solve", "Solve the Laplace problem with a reference Dirichlet datum");
    sol->add_option("--mesh", cfg.mesh, "Mesh JSON");
    sol->add_option("--p", cfg.p, "Uniform polynomial degree")->capture_default_str();
    sol->add_flag("--hp", cfg.hp, "Grade the degree by layers around --corner");
    sol->add_option("--mu", cfg.mu, "Degree slope for --hp")->capture_default_str();
    sol->add_option("--corner", cfg.corner, "Corner point for --hp")->expected(2);
    sol->add_option("--g", cfg.g, "u1 | u2 | u3 | const:<c>")->capture_default_str();
    sol->add_option("--dirichlet", cfg.dirichlet, "exact_moments | gauss_lobatto_interp")->capture_default_str();
    sol->add_option("--out", cfg.out, "Output solution JSON");
    tolerance(sol);

    auto* st = app.add_subcommand("study", "Run an h, p or hp convergence study and write CSV");
    st->add_option("--kind", cfg.kind, "h | p | hp")->capture_default_str();
    st->add_option("--u", cfg.u, "u1 | u2 | u3")->capture_default_str();
    st->add_option("--family", cfg.family, "cartesian | voronoi | nonconvex (h, p); a | b | c (hp)")
        ->capture_default_str();
    st->add_option("--p", cfg.p, "Degree for the h study")->capture_default_str();
    st->add_option("--pmax", cfg.pmax, "Highest degree for the p study")->capture_default_str();
    st->add_option("--n", cfg.n, "Coarsest mesh size (h) or mesh size (p)")->capture_default_str();
    st->add_option("--sigma", cfg.sigma, "Grading factor (hp)")->capture_default_str();
    st->add_option("--mu", cfg.mu, "Degree slope (hp)")->capture_default_str();
    st->add_option("--levels", cfg.levels, "Refinements (h) or largest layer count (hp)")->capture_default_str();
    st->add_option("--seed", cfg.seed, "Random seed (voronoi)")->capture_default_str();
    st->add_option("--lloyd", cfg.lloyd, "Lloyd iterations (voronoi)")->capture_default_str();
    st->add_option("--dirichlet", cfg.dirichlet, "exact_moments | gauss_lobatto_interp")->capture_default_str();
    st->add_option("--out", cfg.out, "Output CSV (stdout if omitted)");
    tolerance(st);

    auto* val = app.add_subcommand("validate", "Check mesh regularity assumptions");
    val->add_option("--mesh", cfg.mesh, "Mesh JSON");
    val->add_option("--rho1", cfg.rho1, "Edge length ratio bound")->capture_default_str();
    val->add_option("--rho2", cfg.rho2, "Star-shapedness radius ratio bound")->capture_default_str();
    val->add_option("--Lambda", cfg.lambda, "Maximum number of edges per element")->capture_default_str();
    val->add_flag("--check-quasi-uniform", cfg.check_quasi_uniform, "Also check quasi-uniformity");
    val->add_option("--rho3", cfg.rho3, "Quasi-uniformity bound")->capture_default_str();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    g_condition_warning_threshold() = cfg.g_condition_warning;
    try {
        if (!save_path.empty())
            save_config(cfg, save_path);
        if (cfg.command == "mesh-gen")
            return run_mesh_gen(cfg);
        if (cfg.command == "solve")
            return run_solve(cfg);
        if (cfg.command == "study")
            return run_study(cfg);
        return run_validate(cfg);
    }
    catch (const nlohmann::json::parse_error& e) {
        std::cerr << "error: malformed JSON at byte " << e.byte << ": " << e.what() << '\n';
        return exit_usage;
    }
    catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
}
