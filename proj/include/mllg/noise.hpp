#pragma once

#include <cstdint>
#include <functional>

#include "mllg/fields.hpp"
#include "mllg/mesh.hpp"

namespace mllg {

// One sampled Brownian trajectory on the time grid t_j = j*k. values[0] = 0;
// increments are i.i.d. N(0, k), drawn from a counter-based generator so the
// path is a pure function of (J, k, seed).
struct WienerPath {
    std::vector<double> values;
    double k = 0.0;
    std::uint64_t seed = 0;
};

// Counter-based standard normal: stateless, keyed by (seed, stream, counter).
double normal_sample(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

std::uint64_t derive_path_seed(std::uint64_t base_seed, std::uint64_t path_index);

WienerPath sample_wiener_path(int J, double k, std::uint64_t seed);

inline Eigen::Vector3d apply_G(const Eigen::Vector3d& u, const Eigen::Vector3d& g) {
    return u.cross(g);
}

// Three-term rotation e^{sG}u = u + sin(s) u x g + (1 - cos(s)) (u x g) x g,
// evaluated exactly as written (no renormalization).
inline Eigen::Vector3d apply_exp_sG(const Eigen::Vector3d& u, const Eigen::Vector3d& g,
                                    double s) {
    const Eigen::Vector3d ug = u.cross(g);
    return u + std::sin(s) * ug + (1.0 - std::cos(s)) * ug.cross(g);
}

// Analytic description of g: value, partial derivatives d g/dx_i, Laplacian.
struct GFunc {
    std::function<Eigen::Vector3d(const Eigen::Vector3d&)> value;
    std::function<Eigen::Vector3d(const Eigen::Vector3d&, int)> partial;
    std::function<Eigen::Vector3d(const Eigen::Vector3d&)> laplacian;
};

// Built-in non-constant profile used by g_mode=analytic:
// g(x) = (sin(pi x1), 0, cos(pi x1)), unit norm everywhere.
GFunc analytic_g_profile();

// Interpolated noise-direction data: g_h = I(g), nodal I(dg/dx_i), nodal
// I(Laplacian g). Nodal values of g must be unit (1e-12).
struct GData {
    NodalField g;
    std::vector<std::array<Eigen::Vector3d, 3>> grad_g;  // per D-vertex
    NodalField lap_g;
    bool constant = false;

    static GData constant_g(const Mesh& mesh, const Eigen::Vector3d& g0);
    static GData from_callbacks(const Mesh& mesh, const GFunc& f);

    Eigen::Vector3d g_at(int t, const std::array<double, 4>& bary) const {
        return g.value_at(t, bary);
    }
};

// Pointwise evaluator of C_h(m) = m x I(Lap g) + 2 sum_i d_i m x I(d_i g);
// piecewise polynomial, valid at any barycentric point of a D-tet.
class ChEvaluator {
public:
    ChEvaluator(const NodalField& m, const GData& gdata) : m_(&m), gdata_(&gdata) {}
    Eigen::Vector3d operator()(int t, const std::array<double, 4>& bary) const;

private:
    const NodalField* m_;
    const GData* gdata_;
    friend class RhkEvaluator;
};

// Pointwise evaluator of the full correction chain at fixed W_j:
//   D   = sin(W) C_h(m) + (1 - cos W)(G_h C_h(m) + C_h(G_h m))
//   C~  = (I - sin(W) G_h + (1 - cos W) G_h^2) D
//   R   = lambda2^2 m x (m x C~) - lambda1^2 C~
// with G_h evaluated pointwise through g_h at the evaluation point.
class RhkEvaluator {
public:
    RhkEvaluator(const NodalField& m, const GData& gdata, double w_j, double lambda1,
                 double lambda2)
        : m_(&m), gdata_(&gdata), w_(w_j), l1_(lambda1), l2_(lambda2) {}
    Eigen::Vector3d operator()(int t, const std::array<double, 4>& bary) const;

private:
    const NodalField* m_;
    const GData* gdata_;
    double w_, l1_, l2_;
};

inline ChEvaluator compute_Ch(const NodalField& m, const GData& gdata) {
    return ChEvaluator(m, gdata);
}
inline RhkEvaluator compute_Rhk(const NodalField& m, const GData& gdata, double w_j,
                                double lambda1, double lambda2) {
    return RhkEvaluator(m, gdata, w_j, lambda1, lambda2);
}

// Nodal reconstruction M(x_n) = e^{W_t G} m(x_n) with g = g_h(x_n). Warns on
// stderr when |m(x_n)| deviates from 1 beyond 1e-9.
NodalField reconstruct_M(const NodalField& m, const GData& gdata, double w_t);

}  // namespace mllg
