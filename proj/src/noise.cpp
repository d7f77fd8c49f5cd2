#include "mllg/noise.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "mllg/errors.hpp"
#include "mllg/fem.hpp"

namespace mllg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform in (0, 1]; the +1 keeps log() finite.
double to_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1p-53;
}

}  // namespace

double normal_sample(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t key = splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
    const double u1 = to_unit(key);
    const double u2 = to_unit(splitmix64(key ^ 0xD1B54A32D192ED03ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_path_seed(std::uint64_t base_seed, std::uint64_t path_index) {
    return splitmix64(base_seed ^ splitmix64(path_index + 1));
}

WienerPath sample_wiener_path(int J, double k, std::uint64_t seed) {
    if (J < 1) throw ConfigError("sample_wiener_path: J must be >= 1");
    if (!(k > 0.0)) throw ConfigError("sample_wiener_path: step size k must be positive");
    WienerPath path;
    path.k = k;
    path.seed = seed;
    path.values.resize(J + 1);
    path.values[0] = 0.0;
    const double sqrt_k = std::sqrt(k);
    for (int j = 1; j <= J; ++j)
        path.values[j] = path.values[j - 1] + sqrt_k * normal_sample(seed, 0, j - 1);
    return path;
}

GFunc analytic_g_profile() {
    using std::numbers::pi;
    GFunc f;
    f.value = [](const Eigen::Vector3d& x) {
        return Eigen::Vector3d(std::sin(pi * x[0]), 0.0, std::cos(pi * x[0]));
    };
    f.partial = [](const Eigen::Vector3d& x, int i) {
        if (i != 0) return Eigen::Vector3d::Zero().eval();
        return Eigen::Vector3d(pi * std::cos(pi * x[0]), 0.0, -pi * std::sin(pi * x[0]));
    };
    f.laplacian = [](const Eigen::Vector3d& x) {
        return Eigen::Vector3d(-pi * pi * std::sin(pi * x[0]), 0.0,
                               -pi * pi * std::cos(pi * x[0]));
    };
    return f;
}

namespace {

void check_unit_nodal(const NodalField& g) {
    for (int i = 0; i < g.size(); ++i)
        if (std::abs(g.values[i].norm() - 1.0) > 1e-12)
            throw InputError("GData: |g| must be 1 at every vertex; vertex " +
                             std::to_string(i) + " has |g| = " +
                             std::to_string(g.values[i].norm()));
}

}  // namespace

GData GData::constant_g(const Mesh& mesh, const Eigen::Vector3d& g0) {
    GData d;
    d.g = NodalField(mesh);
    for (auto& v : d.g.values) v = g0;
    check_unit_nodal(d.g);
    d.grad_g.assign(d.g.values.size(),
                    {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()});
    d.lap_g = NodalField(mesh);
    d.constant = true;
    return d;
}

GData GData::from_callbacks(const Mesh& mesh, const GFunc& f) {
    GData d;
    d.g = interpolate_nodal(f.value, mesh);
    check_unit_nodal(d.g);
    d.grad_g.resize(d.g.values.size());
    d.lap_g = NodalField(mesh);
    for (int i = 0; i < d.g.size(); ++i) {
        const Eigen::Vector3d x = mesh.vertices[mesh.d_vertices[i]];
        for (int a = 0; a < 3; ++a) d.grad_g[i][a] = f.partial(x, a);
        d.lap_g.values[i] = f.laplacian(x);
    }
    d.constant = false;
    return d;
}

Eigen::Vector3d ChEvaluator::operator()(int t, const std::array<double, 4>& bary) const {
    if (gdata_->constant) return Eigen::Vector3d::Zero();
    const Eigen::Vector3d mval = m_->value_at(t, bary);
    const auto dm = m_->gradient_on(t);

    Eigen::Vector3d lap = Eigen::Vector3d::Zero();
    std::array<Eigen::Vector3d, 3> dg_interp = {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(),
                                                Eigen::Vector3d::Zero()};
    const Mesh& mesh = *m_->mesh;
    for (int a = 0; a < 4; ++a) {
        const int n = mesh.d_index[mesh.tets[t][a]];
        lap += bary[a] * gdata_->lap_g.values[n];
        for (int i = 0; i < 3; ++i) dg_interp[i] += bary[a] * gdata_->grad_g[n][i];
    }
    Eigen::Vector3d out = mval.cross(lap);
    for (int i = 0; i < 3; ++i) out += 2.0 * dm[i].cross(dg_interp[i]);
    return out;
}

Eigen::Vector3d RhkEvaluator::operator()(int t, const std::array<double, 4>& bary) const {
    if (gdata_->constant) return Eigen::Vector3d::Zero();
    const double sw = std::sin(w_);
    const double cw = 1.0 - std::cos(w_);

    const Mesh& mesh = *m_->mesh;
    const Eigen::Vector3d mval = m_->value_at(t, bary);
    const auto dm = m_->gradient_on(t);
    const Eigen::Vector3d gval = gdata_->g.value_at(t, bary);
    const auto dg_lin = gdata_->g.gradient_on(t);  // gradient of the interpolant

    Eigen::Vector3d lap = Eigen::Vector3d::Zero();
    std::array<Eigen::Vector3d, 3> dg_interp = {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(),
                                                Eigen::Vector3d::Zero()};
    for (int a = 0; a < 4; ++a) {
        const int n = mesh.d_index[mesh.tets[t][a]];
        lap += bary[a] * gdata_->lap_g.values[n];
        for (int i = 0; i < 3; ++i) dg_interp[i] += bary[a] * gdata_->grad_g[n][i];
    }

    // C_h(m)
    Eigen::Vector3d ch_m = mval.cross(lap);
    for (int i = 0; i < 3; ++i) ch_m += 2.0 * dm[i].cross(dg_interp[i]);

    // C_h(G_h m): the argument is w = m x g_h with d_i w = d_i m x g_h + m x d_i g_h.
    Eigen::Vector3d ch_gm = mval.cross(gval).cross(lap);
    for (int i = 0; i < 3; ++i) {
        const Eigen::Vector3d dw = dm[i].cross(gval) + mval.cross(dg_lin[i]);
        ch_gm += 2.0 * dw.cross(dg_interp[i]);
    }

    const Eigen::Vector3d d_val = sw * ch_m + cw * (ch_m.cross(gval) + ch_gm);
    const Eigen::Vector3d dxg = d_val.cross(gval);
    const Eigen::Vector3d c_tilde = d_val - sw * dxg + cw * dxg.cross(gval);
    return l2_ * l2_ * mval.cross(mval.cross(c_tilde)) - l1_ * l1_ * c_tilde;
}

NodalField reconstruct_M(const NodalField& m, const GData& gdata, double w_t) {
    NodalField out(*m.mesh);
    bool warned = false;
    for (int i = 0; i < m.size(); ++i) {
        if (!warned && std::abs(m.values[i].norm() - 1.0) > 1e-9) {
            std::cerr << "reconstruct_M: |m| deviates from 1 at vertex " << i << " (|m| = "
                      << m.values[i].norm() << ")\n";
            warned = true;
        }
        out.values[i] = apply_exp_sG(m.values[i], gdata.g.values[i], w_t);
    }
    return out;
}

}  // namespace mllg
