#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mllg {

struct Box {
    Eigen::Vector3d lo{0.0, 0.0, 0.0};
    Eigen::Vector3d hi{1.0, 1.0, 1.0};

    static Box unit_cube() { return Box{}; }
    double volume() const { return (hi - lo).prod(); }
    bool contains(const Eigen::Vector3d& x) const {
        return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
    }
};

enum class Region : std::uint8_t { inside_d, outside_d };

// Local edges of a tetrahedron, by vertex slot.
inline constexpr std::array<std::array<int, 2>, 6> kTetLocalEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Tetrahedral mesh of an axis-aligned box. Vertices, tets and edges are
// enumerated deterministically; edges are stored with the low vertex index
// first so Nedelec orientation signs are reproducible.
struct Mesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 4>> tets;   // positively oriented
    std::vector<std::array<int, 2>> edges;  // a < b, sorted lexicographically
    // (global edge index, sign) for each local edge of each tet; sign is +1
    // when the local low->high direction matches the stored edge direction.
    std::vector<std::array<std::pair<int, int>, 6>> tet_edges;
    std::vector<Region> region;
    std::vector<double> volume;                           // per tet, positive
    std::vector<std::array<Eigen::Vector3d, 4>> grad_l;   // barycentric gradients per tet

    double h = 0.0;             // maximal element diameter
    Eigen::Vector3d spacing{0.0, 0.0, 0.0};  // grid cell size (structured meshes)
    Box box;
    int n = 0;                  // cube subdivision parameter, 0 for manual meshes

    // Vertices of the D-submesh (tets tagged inside_d), ascending global ids,
    // and the global -> D-local map (-1 outside D).
    std::vector<int> d_vertices;
    std::vector<int> d_index;
    std::vector<int> d_tets;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_tets() const { return static_cast<int>(tets.size()); }
    int num_d_vertices() const { return static_cast<int>(d_vertices.size()); }

    Eigen::Vector3d edge_vector(int e) const {
        return vertices[edges[e][1]] - vertices[edges[e][0]];
    }
    double edge_length(int e) const { return edge_vector(e).norm(); }
    Eigen::Vector3d edge_tangent(int e) const { return edge_vector(e).normalized(); }
    Eigen::Vector3d tet_centroid(int t) const;
    Eigen::Vector3d point_at(int t, const std::array<double, 4>& bary) const;
    double total_volume() const;

    // Builds derived data (edges, volumes, gradients, D-index) from raw cells.
    // Throws InvariantError on non-positive tet volumes.
    static Mesh from_cells(std::vector<Eigen::Vector3d> vertices,
                           std::vector<std::array<int, 4>> tets,
                           std::vector<Region> region);

    // Plain-text dump, one section per entity kind, index-explicit.
    void dump(std::ostream& os) const;
};

// Kuhn (path-tetrahedra) subdivision of each of the n^3 cells of `box`.
// `d_region`, when given, must be a sub-box with corners on the cell grid;
// tets are tagged by centroid membership. Defaults to D = box.
Mesh build_cube_mesh(int n, const Box& box = Box::unit_cube(),
                     const std::optional<Box>& d_region = std::nullopt);

struct OffdiagReport {
    bool pass = false;
    double worst_entry = 0.0;  // maximum off-diagonal P1 stiffness entry on D
};

// Checks the acute-type mesh condition: all off-diagonal entries of the
// scalar P1 stiffness matrix restricted to D must be <= 1e-12.
OffdiagReport verify_offdiagonal_condition(const Mesh& mesh);

}  // namespace mllg
