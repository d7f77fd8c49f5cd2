#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "mllg/mesh.hpp"

namespace mllg {

// Vector-valued piecewise-linear function on the D-submesh, one 3-vector per
// D-vertex.
struct NodalField {
    const Mesh* mesh = nullptr;
    std::vector<Eigen::Vector3d> values;

    NodalField() = default;
    explicit NodalField(const Mesh& m)
        : mesh(&m), values(static_cast<std::size_t>(m.num_d_vertices()),
                           Eigen::Vector3d::Zero()) {}

    int size() const { return static_cast<int>(values.size()); }

    // Nodal values on tet t (t must be a D-tet), in local vertex order.
    std::array<Eigen::Vector3d, 4> on_tet(int t) const {
        std::array<Eigen::Vector3d, 4> v;
        for (int i = 0; i < 4; ++i) v[i] = values[mesh->d_index[mesh->tets[t][i]]];
        return v;
    }

    Eigen::Vector3d value_at(int t, const std::array<double, 4>& bary) const {
        auto v = on_tet(t);
        return bary[0] * v[0] + bary[1] * v[1] + bary[2] * v[2] + bary[3] * v[3];
    }

    // Partial derivatives on tet t: partials[i] = d(field)/dx_i, constant per tet.
    std::array<Eigen::Vector3d, 3> gradient_on(int t) const {
        auto v = on_tet(t);
        std::array<Eigen::Vector3d, 3> partials = {Eigen::Vector3d::Zero(),
                                                   Eigen::Vector3d::Zero(),
                                                   Eigen::Vector3d::Zero()};
        for (int a = 0; a < 4; ++a)
            for (int i = 0; i < 3; ++i) partials[i] += mesh->grad_l[t][a][i] * v[a];
        return partials;
    }

    // Flattened copy of component c (for blockwise scalar-matrix products).
    Eigen::VectorXd component(int c) const {
        Eigen::VectorXd x(size());
        for (int i = 0; i < size(); ++i) x[i] = values[i][c];
        return x;
    }
};

// Lowest-order Nedelec (first kind) function on the full mesh, one edge
// circulation per edge: coeffs[q] ~ integral over e_q of u . tau_q ds.
struct EdgeField {
    const Mesh* mesh = nullptr;
    std::vector<double> coeffs;

    EdgeField() = default;
    explicit EdgeField(const Mesh& m)
        : mesh(&m), coeffs(static_cast<std::size_t>(m.num_edges()), 0.0) {}

    int size() const { return static_cast<int>(coeffs.size()); }

    Eigen::VectorXd as_vector() const {
        return Eigen::Map<const Eigen::VectorXd>(coeffs.data(), size());
    }
    static EdgeField from_vector(const Mesh& m, const Eigen::VectorXd& x) {
        EdgeField f(m);
        for (int i = 0; i < f.size(); ++i) f.coeffs[i] = x[i];
        return f;
    }

    // Whitney expansion at a barycentric point of tet t; affine in x.
    Eigen::Vector3d value_at(int t, const std::array<double, 4>& bary) const {
        Eigen::Vector3d u = Eigen::Vector3d::Zero();
        for (int le = 0; le < 6; ++le) {
            auto [e, sign] = mesh->tet_edges[t][le];
            int a = kTetLocalEdges[le][0], b = kTetLocalEdges[le][1];
            u += coeffs[e] * sign *
                 (bary[a] * mesh->grad_l[t][b] - bary[b] * mesh->grad_l[t][a]);
        }
        return u;
    }

    // Elementwise curl; the local shape a + b x x has constant curl 2b.
    Eigen::Vector3d curl_on(int t) const {
        Eigen::Vector3d c = Eigen::Vector3d::Zero();
        for (int le = 0; le < 6; ++le) {
            auto [e, sign] = mesh->tet_edges[t][le];
            int a = kTetLocalEdges[le][0], b = kTetLocalEdges[le][1];
            c += coeffs[e] * sign * 2.0 * mesh->grad_l[t][a].cross(mesh->grad_l[t][b]);
        }
        return c;
    }
};

}  // namespace mllg
