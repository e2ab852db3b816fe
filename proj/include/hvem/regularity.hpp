// Mesh regularity checks: edge/diameter ratio, star-shapedness, edge count and
// quasi-uniformity.
#pragma once

#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "hvem/mesh.hpp"

namespace hvem
{

struct RegularityParameters
{
    double rho1 = 0.1;
    double rho2 = 0.05;
    std::size_t max_edges = 20;
    bool check_quasi_uniform = false;
    double rho3 = 10.0;
};

struct RegularityCheck
{
    std::string name;
    bool checked = true;
    bool passed = true;
    /// measured value at the worst element (a ratio, or an edge count)
    double worst_value = 0.0;
    std::size_t worst_element = npos;
    double threshold = 0.0;
};

struct RegularityReport
{
    RegularityCheck edge_ratio{"D1 edge length >= rho1 h_K"};
    RegularityCheck star_shaped{"D2 star-shaped w.r.t. a ball of radius >= rho2 h_K"};
    RegularityCheck edge_count{"D3 number of edges <= Lambda"};
    RegularityCheck quasi_uniform{"D4 h_K2 <= rho3 h_K1"};
    /// internal edges with two elements, no unabsorbed hanging nodes
    bool conforming = true;

    bool passed() const
    {
        return conforming && edge_ratio.passed && star_shaped.passed && edge_count.passed &&
               (!quasi_uniform.checked || quasi_uniform.passed);
    }
};

inline RegularityReport validate_regularity(const Mesh& mesh, const RegularityParameters& prm)
{
    RegularityReport r;
    r.edge_ratio.threshold = prm.rho1;
    r.edge_ratio.worst_value = std::numeric_limits<double>::infinity();
    r.star_shaped.threshold = prm.rho2;
    r.star_shaped.worst_value = std::numeric_limits<double>::infinity();
    r.edge_count.threshold = static_cast<double>(prm.max_edges);
    r.quasi_uniform.checked = prm.check_quasi_uniform;
    r.quasi_uniform.threshold = prm.rho3;

    double hmin = std::numeric_limits<double>::infinity();
    double hmax = 0.0;
    std::size_t kmin = npos;
    for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
        const ElementGeometry g = mesh.geometry(k);
        double emin = std::numeric_limits<double>::infinity();
        for (double he : g.edge_lengths)
            emin = std::min(emin, he);
        const double ratio = emin / g.diameter;
        if (ratio < r.edge_ratio.worst_value) {
            r.edge_ratio.worst_value = ratio;
            r.edge_ratio.worst_element = k;
        }
        const double star = g.star_radius / g.diameter;
        if (star < r.star_shaped.worst_value) {
            r.star_shaped.worst_value = star;
            r.star_shaped.worst_element = k;
        }
        const double ne = static_cast<double>(g.edge_lengths.size());
        if (ne > r.edge_count.worst_value) {
            r.edge_count.worst_value = ne;
            r.edge_count.worst_element = k;
        }
        if (g.diameter < hmin) {
            hmin = g.diameter;
            kmin = k;
        }
        hmax = std::max(hmax, g.diameter);
    }
    // relative slack so that exact ratios (uniform meshes) meet their own threshold
    constexpr double slack = 1e-12;
    r.edge_ratio.passed = r.edge_ratio.worst_value >= prm.rho1 * (1.0 - slack);
    r.star_shaped.passed = r.star_shaped.worst_value >= prm.rho2 * (1.0 - slack) && r.star_shaped.worst_value > 0.0;
    r.edge_count.passed = r.edge_count.worst_value <= static_cast<double>(prm.max_edges);
    r.quasi_uniform.worst_value = hmax / hmin;
    r.quasi_uniform.worst_element = kmin;
    r.quasi_uniform.passed = r.quasi_uniform.worst_value <= prm.rho3 * (1.0 + slack);
    r.conforming = mesh.t_junctions().empty();
    return r;
}

inline std::ostream& operator<<(std::ostream& os, const RegularityReport& r)
{
    auto line = [&](const RegularityCheck& c) {
        os << (c.checked ? (c.passed ? "PASS " : "FAIL ") : "SKIP ") << c.name << ": worst " << c.worst_value
           << " (threshold " << c.threshold << ")";
        if (c.checked && c.worst_element != npos)
            os << " at element " << c.worst_element;
        os << '\n';
    };
    os << (r.conforming ? "PASS " : "FAIL ") << "conformity (no hanging nodes inside edges)\n";
    line(r.edge_ratio);
    line(r.star_shaped);
    line(r.edge_count);
    line(r.quasi_uniform);
    return os;
}

} // namespace hvem
