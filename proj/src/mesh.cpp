#include "mllg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "mllg/errors.hpp"

namespace mllg {

namespace {

// The six permutations of (0,1,2) in lexicographic order. Each permutation
// yields one path tetrahedron of the unit cell, walking from the low corner
// to the high corner one axis at a time.
constexpr std::array<std::array<int, 3>, 6> kPerms = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

int perm_sign(const std::array<int, 3>& p) {
    int inv = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (p[i] > p[j]) ++inv;
    return (inv % 2 == 0) ? 1 : -1;
}

double signed_volume(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                     const Eigen::Vector3d& c, const Eigen::Vector3d& d) {
    Eigen::Matrix3d m;
    m.col(0) = b - a;
    m.col(1) = c - a;
    m.col(2) = d - a;
    return m.determinant() / 6.0;
}

}  // namespace

Eigen::Vector3d Mesh::tet_centroid(int t) const {
    const auto& v = tets[t];
    return (vertices[v[0]] + vertices[v[1]] + vertices[v[2]] + vertices[v[3]]) / 4.0;
}

Eigen::Vector3d Mesh::point_at(int t, const std::array<double, 4>& bary) const {
    const auto& v = tets[t];
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    for (int i = 0; i < 4; ++i) x += bary[i] * vertices[v[i]];
    return x;
}

double Mesh::total_volume() const {
    double s = 0.0, comp = 0.0;
    for (double v : volume) {  // compensated: tet counts grow as 6n^3
        double y = v - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s;
}

Mesh Mesh::from_cells(std::vector<Eigen::Vector3d> vertices,
                      std::vector<std::array<int, 4>> tets,
                      std::vector<Region> region) {
    Mesh m;
    m.vertices = std::move(vertices);
    m.tets = std::move(tets);
    m.region = std::move(region);
    if (m.region.size() != m.tets.size())
        throw InputError("mesh: region tags must match tet count");

    m.volume.resize(m.tets.size());
    m.grad_l.resize(m.tets.size());
    m.h = 0.0;
    for (std::size_t t = 0; t < m.tets.size(); ++t) {
        const auto& v = m.tets[t];
        const Eigen::Vector3d& a = m.vertices[v[0]];
        const Eigen::Vector3d& b = m.vertices[v[1]];
        const Eigen::Vector3d& c = m.vertices[v[2]];
        const Eigen::Vector3d& d = m.vertices[v[3]];
        double vol = signed_volume(a, b, c, d);
        if (!(vol > 0.0))
            throw InvariantError("mesh: tet " + std::to_string(t) +
                                 " has non-positive volume " + std::to_string(vol));
        m.volume[t] = vol;

        Eigen::Matrix3d jac;
        jac.col(0) = b - a;
        jac.col(1) = c - a;
        jac.col(2) = d - a;
        Eigen::Matrix3d inv = jac.inverse();
        // Rows of jac^{-1} are the gradients of the barycentric coordinates
        // attached to vertices 1..3; vertex 0 closes the partition of unity.
        for (int i = 0; i < 3; ++i) m.grad_l[t][i + 1] = inv.row(i).transpose();
        m.grad_l[t][0] = -(m.grad_l[t][1] + m.grad_l[t][2] + m.grad_l[t][3]);

        const std::array<const Eigen::Vector3d*, 4> p = {&a, &b, &c, &d};
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                m.h = std::max(m.h, (*p[i] - *p[j]).norm());
    }

    // Unique edges, low vertex first, sorted lexicographically.
    std::vector<std::array<int, 2>> all;
    all.reserve(m.tets.size() * 6);
    for (const auto& v : m.tets)
        for (const auto& le : kTetLocalEdges) {
            int p = v[le[0]], q = v[le[1]];
            all.push_back({std::min(p, q), std::max(p, q)});
        }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    m.edges = std::move(all);

    std::map<std::array<int, 2>, int> edge_id;
    for (std::size_t e = 0; e < m.edges.size(); ++e) edge_id[m.edges[e]] = static_cast<int>(e);

    m.tet_edges.resize(m.tets.size());
    for (std::size_t t = 0; t < m.tets.size(); ++t) {
        const auto& v = m.tets[t];
        for (int le = 0; le < 6; ++le) {
            int p = v[kTetLocalEdges[le][0]], q = v[kTetLocalEdges[le][1]];
            int sign = p < q ? 1 : -1;
            m.tet_edges[t][le] = {edge_id.at({std::min(p, q), std::max(p, q)}), sign};
        }
    }

    // D-submesh indexing.
    m.d_index.assign(m.vertices.size(), -1);
    for (std::size_t t = 0; t < m.tets.size(); ++t)
        if (m.region[t] == Region::inside_d) {
            m.d_tets.push_back(static_cast<int>(t));
            for (int i = 0; i < 4; ++i) m.d_index[m.tets[t][i]] = 0;
        }
    for (std::size_t v = 0; v < m.vertices.size(); ++v)
        if (m.d_index[v] == 0) {
            m.d_index[v] = static_cast<int>(m.d_vertices.size());
            m.d_vertices.push_back(static_cast<int>(v));
        }
    return m;
}

Mesh build_cube_mesh(int n, const Box& box, const std::optional<Box>& d_region) {
    if (n < 1) throw ConfigError("mesh: subdivision n must be >= 1, got " + std::to_string(n));
    if ((box.hi - box.lo).minCoeff() <= 0.0)
        throw ConfigError("mesh: box must have positive extent on every axis");

    const Eigen::Vector3d spacing = (box.hi - box.lo) / n;
    if (d_region) {
        for (int a = 0; a < 3; ++a) {
            for (double c : {d_region->lo[a], d_region->hi[a]}) {
                double steps = (c - box.lo[a]) / spacing[a];
                if (std::abs(steps - std::round(steps)) > 1e-12 || c < box.lo[a] - 1e-12 ||
                    c > box.hi[a] + 1e-12)
                    throw ConfigError("mesh: d_region corners must lie on the cell grid");
            }
        }
    }

    const int np = n + 1;
    std::vector<Eigen::Vector3d> vertices(static_cast<std::size_t>(np) * np * np);
    auto vid = [np](int ix, int iy, int iz) { return ix + np * (iy + np * iz); };
    for (int iz = 0; iz < np; ++iz)
        for (int iy = 0; iy < np; ++iy)
            for (int ix = 0; ix < np; ++ix)
                vertices[vid(ix, iy, iz)] =
                    box.lo + Eigen::Vector3d(ix * spacing[0], iy * spacing[1], iz * spacing[2]);

    std::vector<std::array<int, 4>> tets;
    tets.reserve(static_cast<std::size_t>(6) * n * n * n);
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const std::array<int, 3> base = {ix, iy, iz};
                for (const auto& perm : kPerms) {
                    std::array<std::array<int, 3>, 4> path;
                    path[0] = base;
                    for (int s = 0; s < 3; ++s) {
                        path[s + 1] = path[s];
                        path[s + 1][perm[s]] += 1;
                    }
                    std::array<int, 4> tet;
                    for (int i = 0; i < 4; ++i) tet[i] = vid(path[i][0], path[i][1], path[i][2]);
                    if (perm_sign(perm) < 0) std::swap(tet[1], tet[2]);
                    tets.push_back(tet);
                }
            }

    std::vector<Region> region(tets.size(), Region::inside_d);
    if (d_region) {
        for (std::size_t t = 0; t < tets.size(); ++t) {
            Eigen::Vector3d c = (vertices[tets[t][0]] + vertices[tets[t][1]] +
                                 vertices[tets[t][2]] + vertices[tets[t][3]]) /
                                4.0;
            region[t] = d_region->contains(c) ? Region::inside_d : Region::outside_d;
        }
    }

    Mesh m = Mesh::from_cells(std::move(vertices), std::move(tets), std::move(region));
    m.spacing = spacing;
    m.box = box;
    m.n = n;
    return m;
}

OffdiagReport verify_offdiagonal_condition(const Mesh& mesh) {
    // Scalar P1 stiffness restricted to D, assembled densely over index
    // pairs that actually meet; only the off-diagonal maximum is needed.
    std::map<std::array<int, 2>, double> entries;
    for (int t : mesh.d_tets) {
        const auto& v = mesh.tets[t];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (v[i] == v[j]) continue;
                int r = mesh.d_index[v[i]], c = mesh.d_index[v[j]];
                entries[{r, c}] += mesh.volume[t] * mesh.grad_l[t][i].dot(mesh.grad_l[t][j]);
            }
    }
    OffdiagReport rep;
    rep.worst_entry = -std::numeric_limits<double>::infinity();
    for (const auto& [rc, val] : entries) rep.worst_entry = std::max(rep.worst_entry, val);
    if (entries.empty()) rep.worst_entry = 0.0;
    rep.pass = rep.worst_entry <= 1e-12;
    return rep;
}

void Mesh::dump(std::ostream& os) const {
    os << "mesh-dump v1\n";
    os.precision(17);
    os << "vertices " << num_vertices() << "\n";
    for (int i = 0; i < num_vertices(); ++i)
        os << i << " " << vertices[i][0] << " " << vertices[i][1] << " " << vertices[i][2]
           << "\n";
    os << "tets " << num_tets() << "\n";
    for (int t = 0; t < num_tets(); ++t) {
        os << t;
        for (int i = 0; i < 4; ++i) os << " " << tets[t][i];
        os << " " << (region[t] == Region::inside_d ? "inside_D" : "outside_D") << "\n";
    }
    os << "edges " << num_edges() << "\n";
    for (int e = 0; e < num_edges(); ++e)
        os << e << " " << edges[e][0] << " " << edges[e][1] << "\n";
    os << "tet_edges " << num_tets() << "\n";
    for (int t = 0; t < num_tets(); ++t) {
        os << t;
        for (int le = 0; le < 6; ++le)
            os << " " << tet_edges[t][le].first << " " << tet_edges[t][le].second;
        os << "\n";
    }
}

}  // namespace mllg
