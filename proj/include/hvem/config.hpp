// Serializable run configuration shared by the command-line subcommands.
#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace hvem
{

struct RunConfig
{
    std::string command;

    // mesh-gen
    std::string family = "cartesian";
    std::size_t n = 4;
    double sigma = 0.5;
    std::uint64_t seed = 1;
    std::size_t lloyd = 30;

    // solve
    std::string mesh;
    int p = 1;
    bool hp = false;
    double mu = 1.0;
    std::vector<double> corner{0.0, 0.0};
    std::string g = "u1";
    std::string dirichlet = "exact_moments";

    // study
    std::string kind = "h";
    std::string u = "u1";
    int pmax = 10;
    /// number of refinement levels (h: n, 2n, 4n, ...; hp: layers 0..levels)
    std::size_t levels = 4;

    // validate
    double rho1 = 0.1;
    double rho2 = 0.05;
    std::size_t lambda = 20;
    bool check_quasi_uniform = false;
    double rho3 = 10.0;

    // tolerance overrides
    double residual_tolerance = 1e-10;
    double g_condition_warning = 1e12;

    std::string out;

    bool operator==(const RunConfig&) const = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RunConfig, command, family, n, sigma, seed, lloyd, mesh, p, hp, mu,
                                                corner, g, dirichlet, kind, u, pmax, levels, rho1, rho2, lambda,
                                                check_quasi_uniform, rho3, residual_tolerance, g_condition_warning,
                                                out)

inline void save_config(const RunConfig& cfg, const std::string& path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write config file " + path);
    os << nlohmann::json(cfg).dump(2) << '\n';
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open config file " + path);
    return nlohmann::json::parse(is).get<RunConfig>();
}

} // namespace hvem
