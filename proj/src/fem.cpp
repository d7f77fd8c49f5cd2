#include "mllg/fem.hpp"

#include <cmath>

#include "mllg/errors.hpp"

namespace mllg {

NodalField interpolate_nodal(const VectorFunc& f, const Mesh& mesh) {
    NodalField u(mesh);
    for (int i = 0; i < mesh.num_d_vertices(); ++i) {
        Eigen::Vector3d v = f(mesh.vertices[mesh.d_vertices[i]]);
        if (!v.allFinite())
            throw InputError("interpolate_nodal: non-finite value at vertex " +
                             std::to_string(mesh.d_vertices[i]));
        u.values[i] = v;
    }
    return u;
}

EdgeField interpolate_edge(const VectorFunc& f, const Mesh& mesh) {
    EdgeField p(mesh);
    const EdgeRule& rule = edge_rule();
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const Eigen::Vector3d a = mesh.vertices[mesh.edges[e][0]];
        const Eigen::Vector3d d = mesh.edge_vector(e);
        double c = 0.0;
        for (int q = 0; q < 2; ++q)
            c += rule.weights[q] * f(a + rule.points[q] * d).dot(d);
        p.coeffs[e] = c;  // d carries the edge length: tau * |e|
    }
    return p;
}

P1Matrices assemble_p1_matrices(const Mesh& mesh) {
    std::vector<Entry> mass, stiff;
    mass.reserve(mesh.d_tets.size() * 16);
    stiff.reserve(mesh.d_tets.size() * 16);
    for (int t : mesh.d_tets) {
        const double vol = mesh.volume[t];
        const auto& v = mesh.tets[t];
        for (int i = 0; i < 4; ++i) {
            const int r = mesh.d_index[v[i]];
            for (int j = 0; j < 4; ++j) {
                const int c = mesh.d_index[v[j]];
                // Exact P1 mass: vol * (1 + delta_ij) / 20.
                mass.push_back({r, c, t, vol * (i == j ? 0.1 : 0.05)});
                stiff.push_back({r, c, t, vol * mesh.grad_l[t][i].dot(mesh.grad_l[t][j])});
            }
        }
    }
    const int n = mesh.num_d_vertices();
    return {SparseMat::from_entries(n, n, std::move(mass)),
            SparseMat::from_entries(n, n, std::move(stiff))};
}

NedelecMatrices assemble_nedelec_matrices(const Mesh& mesh, double sigma_d, double sigma_out) {
    if (!(sigma_d > 0.0) || !(sigma_out > 0.0))
        throw ConfigError("assemble_nedelec_matrices: sigma values must be positive");

    const QuadratureRule& rule = QuadratureRule::degree2();
    std::vector<Entry> mass, curl;
    mass.reserve(mesh.tets.size() * 36);
    curl.reserve(mesh.tets.size() * 36);

    for (int t = 0; t < mesh.num_tets(); ++t) {
        const double vol = mesh.volume[t];
        const double sig = mesh.region[t] == Region::inside_d ? sigma_d : sigma_out;

        Eigen::Vector3d curl_shape[6];
        for (int le = 0; le < 6; ++le) {
            int a = kTetLocalEdges[le][0], b = kTetLocalEdges[le][1];
            curl_shape[le] = 2.0 * mesh.grad_l[t][a].cross(mesh.grad_l[t][b]);
        }

        double mloc[6][6] = {};
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto& bary = rule.points[q];
            Eigen::Vector3d shape[6];
            for (int le = 0; le < 6; ++le) {
                int a = kTetLocalEdges[le][0], b = kTetLocalEdges[le][1];
                shape[le] = bary[a] * mesh.grad_l[t][b] - bary[b] * mesh.grad_l[t][a];
            }
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j)
                    mloc[i][j] += rule.weights[q] * shape[i].dot(shape[j]);
        }

        for (int i = 0; i < 6; ++i) {
            auto [ei, si] = mesh.tet_edges[t][i];
            for (int j = 0; j < 6; ++j) {
                auto [ej, sj] = mesh.tet_edges[t][j];
                const double orient = static_cast<double>(si * sj);
                mass.push_back({ei, ej, t, orient * vol * mloc[i][j]});
                curl.push_back({ei, ej, t, orient * sig * vol * curl_shape[i].dot(curl_shape[j])});
            }
        }
    }
    const int m = mesh.num_edges();
    return {SparseMat::from_entries(m, m, std::move(mass)),
            SparseMat::from_entries(m, m, std::move(curl))};
}

double discrete_lp_norm(const NodalField& u, double p) {
    const Mesh& mesh = *u.mesh;
    const double cell = mesh.spacing.prod() > 0.0 ? mesh.spacing.prod()
                                                  : std::pow(mesh.h, 3);
    double s = 0.0;
    for (const auto& v : u.values) s += std::pow(v.norm(), p);
    return std::pow(cell * s, 1.0 / p);
}

double quadratic_form_vec(const SparseMat& a, const NodalField& u) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += a.quadratic_form(u.component(c));
    return s;
}

std::vector<Eigen::Vector3d> apply_blockwise(const SparseMat& a, const NodalField& u) {
    std::vector<Eigen::Vector3d> out(u.values.size(), Eigen::Vector3d::Zero());
    for (int r = 0; r < a.rows(); ++r)
        for (int k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k)
            out[r] += a.values()[k] * u.values[a.col_idx()[k]];
    return out;
}

}  // namespace mllg
