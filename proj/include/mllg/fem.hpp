#pragma once

#include <functional>

#include "mllg/fields.hpp"
#include "mllg/mesh.hpp"
#include "mllg/quadrature.hpp"
#include "mllg/sparse.hpp"

namespace mllg {

using VectorFunc = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;

// Nodal interpolation onto vector P1: values[n] = f(x_n) at every D-vertex.
NodalField interpolate_nodal(const VectorFunc& f, const Mesh& mesh);

// Edge interpolation onto lowest-order Nedelec: coeffs[q] is the two-point
// Gauss approximation of the tangential line integral along edge q (exact
// for polynomial traces of degree <= 3, in particular for a + b x x).
EdgeField interpolate_edge(const VectorFunc& f, const Mesh& mesh);

// Scalar N x N matrices over the D-submesh, applied blockwise to 3-vector
// fields. Mass is exact; stiffness rows sum to zero.
struct P1Matrices {
    SparseMat mass;
    SparseMat stiffness;
};
P1Matrices assemble_p1_matrices(const Mesh& mesh);

// M x M Nedelec matrices over the whole mesh. The curl-curl matrix carries
// the per-region coefficient (sigma_d on D, sigma_out elsewhere); pass both
// equal to 1 for the unweighted form.
struct NedelecMatrices {
    SparseMat mass;
    SparseMat curlcurl;
};
NedelecMatrices assemble_nedelec_matrices(const Mesh& mesh, double sigma_d, double sigma_out);

inline Eigen::Vector3d curl_edge_field(const EdgeField& p, int tet) { return p.curl_on(tet); }

// (cell_volume * sum_n |u(x_n)|^p)^(1/p) over D-vertices; equivalent to the
// L^p norm on quasiuniform meshes.
double discrete_lp_norm(const NodalField& u, double p);

// Blockwise quadratic form x^T (A ⊗ I_3) x of a scalar matrix on a vector field.
double quadratic_form_vec(const SparseMat& a, const NodalField& u);

// A applied blockwise: result[n] = sum_c A[n,c] * u[c].
std::vector<Eigen::Vector3d> apply_blockwise(const SparseMat& a, const NodalField& u);

}  // namespace mllg
