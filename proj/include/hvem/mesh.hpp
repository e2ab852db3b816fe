// Polygonal mesh with derived edge topology.
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hvem/geometry.hpp"

namespace hvem
{

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct MeshEdge
{
    /// Endpoints with v[0] < v[1]; this fixes the edge parametrization used by every element.
    std::array<std::size_t, 2> v{npos, npos};
    std::array<std::size_t, 2> elements{npos, npos};

    bool boundary() const { return elements[1] == npos; }
    std::size_t num_elements() const { return boundary() ? 1 : 2; }
};

/// Geometric quantities of one element.
struct ElementGeometry
{
    double diameter = 0.0;
    Point centroid = Point::Zero();
    double area = 0.0;
    std::vector<double> edge_lengths;
    /// smallest exterior angle / pi, exterior angle = 2 pi - interior angle
    double lambda = 0.0;
    /// largest interior angle / pi
    double omega = 0.0;
    /// radius of the largest disc inside the polygon kernel
    double star_radius = 0.0;
};

/// Immutable conforming polygonal decomposition. Elements are CCW vertex loops;
/// edges, adjacency and boundary flags are derived on construction.
class Mesh
{
  public:
    Mesh() = default;

    Mesh(std::vector<Point> vertices, std::vector<std::vector<std::size_t>> elements)
        : vertices_(std::move(vertices)), elements_(std::move(elements))
    {
        build_topology();
    }

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_elements() const { return elements_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<std::vector<std::size_t>>& elements() const { return elements_; }
    const std::vector<MeshEdge>& edges() const { return edges_; }

    const Point& vertex(std::size_t i) const { return vertices_[i]; }
    std::span<const std::size_t> element(std::size_t k) const { return elements_[k]; }
    const MeshEdge& edge(std::size_t e) const { return edges_[e]; }

    /// Global edge ids of element k; entry i is the edge from vertex i to vertex i+1.
    std::span<const std::size_t> element_edges(std::size_t k) const { return element_edges_[k]; }

    std::vector<Point> polygon(std::size_t k) const
    {
        std::vector<Point> poly;
        poly.reserve(elements_[k].size());
        for (std::size_t v : elements_[k])
            poly.push_back(vertices_[v]);
        return poly;
    }

    double edge_length(std::size_t e) const { return (vertices_[edges_[e].v[1]] - vertices_[edges_[e].v[0]]).norm(); }

    std::size_t num_boundary_edges() const
    {
        return static_cast<std::size_t>(
            std::count_if(edges_.begin(), edges_.end(), [](const MeshEdge& e) { return e.boundary(); }));
    }

    double element_area(std::size_t k) const { return area(polygon(k)); }

    double total_area() const
    {
        double a = 0.0;
        for (std::size_t k = 0; k < num_elements(); ++k)
            a += element_area(k);
        return a;
    }

    /// Largest element diameter.
    double mesh_size() const
    {
        double h = 0.0;
        for (std::size_t k = 0; k < num_elements(); ++k)
            h = std::max(h, diameter(polygon(k)));
        return h;
    }

    ElementGeometry geometry(std::size_t k) const
    {
        const auto poly = polygon(k);
        ElementGeometry g;
        g.diameter = diameter(poly);
        g.centroid = centroid(poly);
        g.area = area(poly);
        for (std::size_t i = 0; i < poly.size(); ++i)
            g.edge_lengths.push_back((poly[(i + 1) % poly.size()] - poly[i]).norm());
        const auto ang = interior_angles(poly);
        const double amax = *std::max_element(ang.begin(), ang.end());
        g.omega = amax / M_PI;
        g.lambda = (2.0 * M_PI - amax) / M_PI;
        const auto ker = polygon_kernel(poly);
        g.star_radius = ker.empty() ? 0.0 : chebyshev_disc(ker).radius;
        return g;
    }

    /// Vertices lying in the interior of an edge they do not bound (unabsorbed
    /// hanging nodes). Returns pairs (vertex, edge). O(V E); meant for validation.
    std::vector<std::pair<std::size_t, std::size_t>> t_junctions(double rel_tol = 1e-10) const
    {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const Point& a = vertices_[edges_[e].v[0]];
            const Point& b = vertices_[edges_[e].v[1]];
            const double tol = rel_tol * (b - a).norm();
            const Eigen::AlignedBox2d box(a.cwiseMin(b), a.cwiseMax(b));
            for (std::size_t v = 0; v < vertices_.size(); ++v) {
                if (v == edges_[e].v[0] || v == edges_[e].v[1])
                    continue;
                const Point& x = vertices_[v];
                if (x.x() < box.min().x() - tol || x.x() > box.max().x() + tol || x.y() < box.min().y() - tol ||
                    x.y() > box.max().y() + tol)
                    continue;
                if (on_segment_interior(x, a, b, tol))
                    out.emplace_back(v, e);
            }
        }
        return out;
    }

  private:
    void build_topology()
    {
        const std::size_t nv = vertices_.size();
        std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> incidence;
        for (std::size_t k = 0; k < elements_.size(); ++k) {
            const auto& loop = elements_[k];
            if (loop.size() < 3)
                throw std::invalid_argument("element " + std::to_string(k) + " has fewer than 3 vertices");
            for (std::size_t i = 0; i < loop.size(); ++i) {
                const std::size_t a = loop[i];
                const std::size_t b = loop[(i + 1) % loop.size()];
                if (a >= nv || b >= nv)
                    throw std::invalid_argument("element " + std::to_string(k) + " references a missing vertex");
                if (a == b)
                    throw std::invalid_argument("element " + std::to_string(k) + " repeats a vertex");
                incidence[{std::min(a, b), std::max(a, b)}].push_back(k);
            }
            const auto poly = polygon(k);
            if (signed_area(poly) <= 0.0)
                throw std::invalid_argument("element " + std::to_string(k) + " is not counter-clockwise");
            if (!is_simple(poly))
                throw std::invalid_argument("element " + std::to_string(k) + " is not a simple polygon");
        }
        // std::map iteration sorts edges by their vertex pair, independent of element order
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> id;
        edges_.reserve(incidence.size());
        for (const auto& [key, elems] : incidence) {
            if (elems.size() > 2)
                throw std::invalid_argument("edge (" + std::to_string(key.first) + ", " + std::to_string(key.second) +
                                            ") is shared by more than two elements");
            if (elems.size() == 2 && elems[0] == elems[1])
                throw std::invalid_argument("element " + std::to_string(elems[0]) + " uses an edge twice");
            MeshEdge e;
            e.v = {key.first, key.second};
            e.elements[0] = std::min(elems.front(), elems.back());
            if (elems.size() == 2)
                e.elements[1] = std::max(elems[0], elems[1]);
            id[key] = edges_.size();
            edges_.push_back(e);
        }
        element_edges_.resize(elements_.size());
        for (std::size_t k = 0; k < elements_.size(); ++k) {
            const auto& loop = elements_[k];
            element_edges_[k].resize(loop.size());
            for (std::size_t i = 0; i < loop.size(); ++i) {
                const std::size_t a = loop[i];
                const std::size_t b = loop[(i + 1) % loop.size()];
                element_edges_[k][i] = id.at({std::min(a, b), std::max(a, b)});
            }
        }
    }

    std::vector<Point> vertices_;
    std::vector<std::vector<std::size_t>> elements_;
    std::vector<MeshEdge> edges_;
    std::vector<std::vector<std::size_t>> element_edges_;
};

} // namespace hvem
