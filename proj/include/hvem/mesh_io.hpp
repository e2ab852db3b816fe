// Mesh JSON format: {"vertices": [[x, y], ...], "elements": [[i0, i1, ...], ...]}.
// Indices are 0-based and loops CCW; edges are always re-derived on load.
#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hvem/mesh.hpp"

namespace hvem
{

inline nlohmann::json mesh_to_json(const Mesh& mesh)
{
    nlohmann::json j;
    auto& verts = j["vertices"] = nlohmann::json::array();
    for (const auto& p : mesh.vertices())
        verts.push_back({p.x(), p.y()});
    auto& elems = j["elements"] = nlohmann::json::array();
    for (const auto& loop : mesh.elements())
        elems.push_back(loop);
    return j;
}

inline Mesh mesh_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("vertices") || !j.contains("elements"))
        throw std::invalid_argument("mesh JSON needs \"vertices\" and \"elements\"");
    std::vector<Point> verts;
    for (const auto& v : j.at("vertices")) {
        if (!v.is_array() || v.size() != 2)
            throw std::invalid_argument("mesh JSON: each vertex must be [x, y]");
        verts.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    std::vector<std::vector<std::size_t>> elems;
    for (const auto& e : j.at("elements"))
        elems.push_back(e.get<std::vector<std::size_t>>());
    return Mesh(std::move(verts), std::move(elems));
}

/// Throws nlohmann::json::parse_error (carrying the byte offset) on malformed input.
inline Mesh load_mesh(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open mesh file " + path);
    return mesh_from_json(nlohmann::json::parse(in));
}

inline void save_mesh(const Mesh& mesh, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write mesh file " + path);
    out << mesh_to_json(mesh).dump() << '\n';
}

} // namespace hvem
