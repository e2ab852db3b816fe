// Mesh families: Cartesian, Voronoi-Lloyd, geometrically graded L-shapes and a
// small mesh of non-convex elements.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hvem/geometry.hpp"
#include "hvem/mesh.hpp"

namespace hvem
{

struct Rectangle
{
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
};

/// Element -> layer number. Layer 0 touches the marked corner, layer l touches
/// layer l - 1 and no earlier layer.
struct LayerDecomposition
{
    std::vector<int> layer_of_element;

    int num_layers() const
    {
        return layer_of_element.empty() ? 0 : *std::max_element(layer_of_element.begin(), layer_of_element.end()) + 1;
    }
};

enum class GradedFamily
{
    a, ///< tensor rectangles refined toward the corner, hanging nodes absorbed
    b, ///< nested L-shaped rings cut along the diagonal
    c, ///< nested L-shaped rings, non-convex elements
};

struct GradedMesh
{
    Mesh mesh;
    LayerDecomposition layers;
};

namespace detail
{

/// Collects polygons given by coordinates and merges coincident vertices.
class PolygonSoup
{
  public:
    explicit PolygonSoup(double tol) : tol_(tol) {}

    std::size_t add_vertex(const Point& p)
    {
        const long long ix = std::llround(p.x() / (4.0 * tol_));
        const long long iy = std::llround(p.y() / (4.0 * tol_));
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                const auto it = grid_.find(key(ix + dx, iy + dy));
                if (it == grid_.end())
                    continue;
                for (std::size_t v : it->second)
                    if ((vertices_[v] - p).norm() <= tol_)
                        return v;
            }
        grid_[key(ix, iy)].push_back(vertices_.size());
        vertices_.push_back(p);
        return vertices_.size() - 1;
    }

    void add_polygon(std::span<const Point> poly)
    {
        std::vector<std::size_t> loop;
        for (const auto& p : poly) {
            const std::size_t v = add_vertex(p);
            if (loop.empty() || loop.back() != v)
                loop.push_back(v);
        }
        while (loop.size() > 1 && loop.front() == loop.back())
            loop.pop_back();
        if (loop.size() < 3)
            throw std::runtime_error("degenerate polygon after vertex merging");
        loops_.push_back(std::move(loop));
    }

    /// Insert every known vertex lying inside an element edge into that element's
    /// loop, turning hanging nodes into genuine polygon vertices.
    void absorb_hanging_nodes()
    {
        for (auto& loop : loops_) {
            std::vector<std::size_t> out;
            for (std::size_t i = 0; i < loop.size(); ++i) {
                const Point& a = vertices_[loop[i]];
                const Point& b = vertices_[loop[(i + 1) % loop.size()]];
                out.push_back(loop[i]);
                std::vector<std::pair<double, std::size_t>> inner;
                for (std::size_t v = 0; v < vertices_.size(); ++v)
                    if (on_segment_interior(vertices_[v], a, b, tol_))
                        inner.emplace_back((vertices_[v] - a).norm(), v);
                std::sort(inner.begin(), inner.end());
                for (const auto& [d, v] : inner)
                    out.push_back(v);
            }
            loop = std::move(out);
        }
    }

    Mesh build() && { return Mesh(std::move(vertices_), std::move(loops_)); }

  private:
    static std::uint64_t key(long long ix, long long iy)
    {
        return (static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ull) ^ static_cast<std::uint64_t>(iy);
    }

    double tol_;
    std::vector<Point> vertices_;
    std::vector<std::vector<std::size_t>> loops_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid_;
};

inline std::vector<Point> rect_loop(double x0, double y0, double x1, double y1)
{
    return {Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)};
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline void check_convex_domain(std::span<const Point> domain)
{
    if (domain.size() < 3 || signed_area(domain) <= 0.0)
        throw std::invalid_argument("voronoi: domain must be a CCW polygon");
    for (std::size_t i = 0; i < domain.size(); ++i)
        if (orient(domain[i], domain[(i + 1) % domain.size()], domain[(i + 2) % domain.size()]) < 0.0)
            throw std::invalid_argument("voronoi: domain must be convex");
}

} // namespace detail

/// n x n squares tiling an axis-aligned rectangle.
inline Mesh generate_cartesian(std::size_t n, const Rectangle& domain = {})
{
    if (n < 1)
        throw std::invalid_argument("generate_cartesian: n must be >= 1");
    std::vector<Point> verts;
    verts.reserve((n + 1) * (n + 1));
    for (std::size_t j = 0; j <= n; ++j)
        for (std::size_t i = 0; i <= n; ++i) {
            const double x = i == n ? domain.x1 : domain.x0 + (domain.x1 - domain.x0) * static_cast<double>(i) / static_cast<double>(n);
            const double y = j == n ? domain.y1 : domain.y0 + (domain.y1 - domain.y0) * static_cast<double>(j) / static_cast<double>(n);
            verts.emplace_back(x, y);
        }
    std::vector<std::vector<std::size_t>> elems;
    elems.reserve(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t v0 = j * (n + 1) + i;
            elems.push_back({v0, v0 + 1, v0 + n + 2, v0 + n + 1});
        }
    return Mesh(std::move(verts), std::move(elems));
}

/// Voronoi cells of `seeds` restricted to a convex CCW domain, one half-plane
/// clip per competing seed.
inline std::vector<std::vector<Point>> voronoi_cells(std::span<const Point> seeds, std::span<const Point> domain)
{
    std::vector<std::vector<Point>> cells(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        std::vector<Point> cell(domain.begin(), domain.end());
        for (std::size_t j = 0; j < seeds.size() && !cell.empty(); ++j) {
            if (j == i)
                continue;
            // |x - s_i|^2 <= |x - s_j|^2  <=>  2 (s_j - s_i) . x <= |s_j|^2 - |s_i|^2
            const Point n = 2.0 * (seeds[j] - seeds[i]);
            cell = clip(cell, {n, seeds[j].squaredNorm() - seeds[i].squaredNorm()});
        }
        cells[i] = std::move(cell);
    }
    return cells;
}

struct VoronoiReport
{
    std::vector<Point> seeds;
    /// number of seeds moved because they coincided with another seed
    std::size_t perturbed = 0;
};

/// Lloyd relaxation of the given seeds in a convex domain; the final Voronoi
/// cells become the mesh elements. Coincident seeds are redrawn uniformly from
/// the domain using rng_seed and counted in the report.
inline Mesh generate_voronoi_from_seeds(std::vector<Point> seeds, std::span<const Point> domain,
                                        std::size_t lloyd_iters, std::uint64_t rng_seed,
                                        VoronoiReport* report = nullptr)
{
    if (seeds.empty())
        throw std::invalid_argument("generate_voronoi_lloyd: n_seeds must be >= 1");
    detail::check_convex_domain(domain);

    Eigen::AlignedBox2d box;
    for (const auto& p : domain)
        box.extend(p);
    const double diam = diameter(domain);
    std::mt19937_64 rng(rng_seed);
    auto sample = [&] {
        for (;;) {
            const Point p(box.min().x() + detail::unit_uniform(rng) * box.sizes().x(),
                          box.min().y() + detail::unit_uniform(rng) * box.sizes().y());
            if (star_shaped_wrt(domain, p))
                return p;
        }
    };

    std::size_t perturbed = 0;
    auto clashes = [&](std::size_t i) {
        for (std::size_t j = 0; j < i; ++j)
            if ((seeds[i] - seeds[j]).norm() <= 1e-9 * diam)
                return true;
        return false;
    };
    auto separate = [&] {
        for (std::size_t i = 1; i < seeds.size(); ++i)
            while (clashes(i)) {
                seeds[i] = sample();
                ++perturbed;
            }
    };
    separate();

    auto cells = voronoi_cells(seeds, domain);
    for (std::size_t it = 0; it < lloyd_iters; ++it) {
        for (std::size_t i = 0; i < seeds.size(); ++i)
            seeds[i] = centroid(cells[i]);
        separate();
        cells = voronoi_cells(seeds, domain);
    }

    detail::PolygonSoup soup(1e-10 * diam);
    for (const auto& c : cells)
        soup.add_polygon(c);
    if (report) {
        report->seeds = seeds;
        report->perturbed = perturbed;
    }
    return std::move(soup).build();
}

/// n_seeds uniform random seeds in a convex CCW domain followed by Lloyd
/// relaxation. Deterministic for a fixed rng_seed on every platform.
inline Mesh generate_voronoi_lloyd(std::size_t n_seeds, std::span<const Point> domain, std::size_t lloyd_iters,
                                   std::uint64_t rng_seed, VoronoiReport* report = nullptr)
{
    if (n_seeds < 1)
        throw std::invalid_argument("generate_voronoi_lloyd: n_seeds must be >= 1");
    detail::check_convex_domain(domain);
    Eigen::AlignedBox2d box;
    for (const auto& p : domain)
        box.extend(p);
    std::mt19937_64 rng(rng_seed);
    std::vector<Point> seeds;
    seeds.reserve(n_seeds);
    while (seeds.size() < n_seeds) {
        const Point p(box.min().x() + detail::unit_uniform(rng) * box.sizes().x(),
                      box.min().y() + detail::unit_uniform(rng) * box.sizes().y());
        if (star_shaped_wrt(domain, p))
            seeds.push_back(p);
    }
    return generate_voronoi_from_seeds(std::move(seeds), domain, lloyd_iters, rng(), report);
}

/// Elements that share a vertex with the corner's element ring form layer 0;
/// breadth-first search over vertex-sharing neighbours yields the others.
inline LayerDecomposition compute_layers(const Mesh& mesh, const Point& corner, double tol = 1e-12)
{
    const std::size_t ne = mesh.num_elements();
    std::vector<std::vector<std::size_t>> vertex_elems(mesh.num_vertices());
    for (std::size_t k = 0; k < ne; ++k)
        for (std::size_t v : mesh.element(k))
            vertex_elems[v].push_back(k);
    LayerDecomposition ld;
    ld.layer_of_element.assign(ne, -1);
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
        if ((mesh.vertex(v) - corner).norm() <= tol)
            for (std::size_t k : vertex_elems[v])
                if (ld.layer_of_element[k] < 0) {
                    ld.layer_of_element[k] = 0;
                    queue.push_back(k);
                }
    if (queue.empty())
        throw std::invalid_argument("compute_layers: corner is not a mesh vertex");
    while (!queue.empty()) {
        const std::size_t k = queue.front();
        queue.pop_front();
        for (std::size_t v : mesh.element(k))
            for (std::size_t nb : vertex_elems[v])
                if (ld.layer_of_element[nb] < 0) {
                    ld.layer_of_element[nb] = ld.layer_of_element[k] + 1;
                    queue.push_back(nb);
                }
    }
    return ld;
}

/// L-shaped domain (-1, 1)^2 \ (-1, 0]^2, CCW, re-entrant corner at the origin.
inline std::vector<Point> lshape_domain()
{
    return {Point(0, 0), Point(0, -1), Point(1, -1), Point(1, 1), Point(-1, 1), Point(-1, 0)};
}

inline std::vector<Point> unit_square_domain() { return detail::rect_loop(0.0, 0.0, 1.0, 1.0); }

/// Geometrically graded mesh of the L-shape with n_layers + 1 layers toward the
/// re-entrant corner. Element sizes in layer l scale like sigma^(n_layers - l).
inline GradedMesh generate_graded_lshape(std::size_t n_layers, double sigma, GradedFamily family)
{
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::invalid_argument("generate_graded_lshape: sigma must lie in (0, 1), got " + std::to_string(sigma));
    const auto n = n_layers;
    std::vector<double> scale(n + 1);
    scale[0] = 1.0;
    for (std::size_t j = 1; j <= n; ++j)
        scale[j] = scale[j - 1] * sigma;

    std::vector<std::vector<Point>> polys;
    std::vector<int> layer;

    if (family == GradedFamily::a) {
        // quadrant sign patterns: first, second and fourth quadrants
        const std::array<std::array<double, 2>, 3> quadrants{{{1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}}};
        for (const auto& q : quadrants) {
            auto emit = [&](double x0, double y0, double x1, double y1, int l) {
                std::vector<Point> loop = detail::rect_loop(q[0] * x0, q[1] * y0, q[0] * x1, q[1] * y1);
                if (q[0] * q[1] < 0.0)
                    std::reverse(loop.begin(), loop.end());
                polys.push_back(std::move(loop));
                layer.push_back(l);
            };
            for (std::size_t j = 0; j < n; ++j) {
                const double s = scale[j];
                const double t = scale[j + 1];
                const int l = static_cast<int>(n - j);
                emit(t, 0.0, s, t, l);
                emit(t, t, s, s, l);
                emit(0.0, t, t, s, l);
            }
            emit(0.0, 0.0, scale[n], scale[n], 0);
        }
    }
    else {
        const bool cut = family == GradedFamily::b;
        for (std::size_t j = 0; j < n; ++j) {
            const double s = scale[j];
            const double t = scale[j + 1];
            const int l = static_cast<int>(n - j);
            if (cut) {
                polys.push_back({Point(0, -s), Point(s, -s), Point(s, s), Point(t, t), Point(t, -t), Point(0, -t)});
                polys.push_back({Point(t, t), Point(s, s), Point(-s, s), Point(-s, 0), Point(-t, 0), Point(-t, t)});
                layer.insert(layer.end(), {l, l});
            }
            else {
                polys.push_back({Point(0, -s), Point(s, -s), Point(s, s), Point(-s, s), Point(-s, 0), Point(-t, 0),
                                 Point(-t, t), Point(t, t), Point(t, -t), Point(0, -t)});
                layer.push_back(l);
            }
        }
        const double t = scale[n];
        if (cut) {
            polys.push_back({Point(0, 0), Point(0, -t), Point(t, -t), Point(t, t)});
            polys.push_back({Point(0, 0), Point(t, t), Point(-t, t), Point(-t, 0)});
            layer.insert(layer.end(), {0, 0});
        }
        else {
            polys.push_back({Point(0, 0), Point(0, -t), Point(t, -t), Point(t, t), Point(-t, t), Point(-t, 0)});
            layer.push_back(0);
        }
    }

    detail::PolygonSoup soup(1e-9 * scale[n]);
    for (const auto& p : polys)
        soup.add_polygon(p);
    soup.absorb_hanging_nodes();
    return {std::move(soup).build(), {std::move(layer)}};
}

/// Unit square cut into four L-shaped tetromino pieces arranged as a pinwheel
/// around the centre; every element is non-convex. Grid points on piece
/// boundaries are kept as vertices so neighbouring pieces match.
inline Mesh generate_nonconvex_pinwheel()
{
    const std::vector<Point> piece{Point(0, 0),       Point(0.25, 0),   Point(0.5, 0),    Point(0.75, 0),
                                   Point(0.75, 0.25), Point(0.75, 0.5), Point(0.5, 0.5),  Point(0.5, 0.25),
                                   Point(0.25, 0.25), Point(0, 0.25)};
    detail::PolygonSoup soup(1e-12);
    std::vector<Point> cur = piece;
    for (int r = 0; r < 4; ++r) {
        soup.add_polygon(cur);
        for (auto& p : cur)
            p = Point(1.0 - p.y(), p.x());
    }
    soup.absorb_hanging_nodes();
    return std::move(soup).build();
}

} // namespace hvem
