#pragma once

#include <functional>

#include "mllg/config.hpp"
#include "mllg/fem.hpp"
#include "mllg/fields.hpp"
#include "mllg/mesh.hpp"
#include "mllg/noise.hpp"

namespace mllg {

// Per-vertex orthonormal pair spanning the plane orthogonal to m(x_n).
struct TangentFrame {
    std::vector<std::array<Eigen::Vector3d, 2>> axes;
};

// Deterministic frame: pick the axis least aligned with m (ties -> lowest
// index), project it, complete with the cross product.
TangentFrame build_tangent_frame(const NodalField& m);

struct StepState {
    int j = 0;
    NodalField m;
    EdgeField P;
    const WienerPath* path = nullptr;
};

struct EnergyRecord {
    double t = 0.0;
    double exchange = 0.0;  // |grad m|^2 on D
    double field = 0.0;     // |P|^2 on the cavity
    double total = 0.0;     // exchange + field
    double curl = 0.0;      // |curl P|^2 on the cavity
};
using EnergyTrace = std::vector<EnergyRecord>;

struct Energies {
    double exchange = 0.0;
    double field = 0.0;
    double curl = 0.0;
};

// Everything shared between time steps and across Monte Carlo paths:
// immutable after construction.
struct SimContext {
    SimConfig cfg;
    Mesh mesh;
    P1Matrices p1;
    NedelecMatrices ned;       // curlcurl weighted by (sigma_D, sigma)
    SparseMat curlcurl_plain;  // unweighted, for energy reporting
    SparseMat maxwell_system;  // (mu0/k) mass + curlcurl_sigma, SPD
    GData gdata;
    NodalField m0;
    EdgeField P0;

    explicit SimContext(const SimConfig& cfg, bool allow_unstable_theta = false);
};

// Reference vortex initial magnetization and the induction P0 = H0 + M~0;
// with H0 = H0* - chi_D M0 and constant H0* = (0,0,H_s) this collapses to
// P0 = H0* everywhere.
Eigen::Vector3d initial_magnetization(const Eigen::Vector3d& x);

// One theta-linear LLG solve in the reduced tangent basis: returns v with
// v(x_n) . m(x_n) = 0. Throws SolverError when the factorization fails or the
// residual exceeds 1e-10 relative.
NodalField llg_step(const SimContext& ctx, const StepState& state, const TangentFrame& frame);

// Nodal renormalized update (m + k v)/|m + k v|. Throws InvariantError when a
// denominator drops below 1 - 1e-10 (broken tangency).
NodalField normalize_update(const NodalField& m, const NodalField& v, double k);

// Implicit Maxwell step: SPD solve by conjugate gradients (1e-10 relative).
EdgeField maxwell_step(const SimContext& ctx, const StepState& state);

Energies compute_energies(const SimContext& ctx, const NodalField& m, const EdgeField& p);

// Integral of (1 - |m(x)|)^2 over D by volume quadrature.
double sphere_defect_sq(const SimContext& ctx, const NodalField& m);

struct RunOptions {
    bool check_invariants = true;
    // Optional per-step probe: (step j, solved v, updated m).
    std::function<void(int, const NodalField&, const NodalField&)> probe;
};

struct PathResult {
    EnergyTrace trace;           // J + 1 records at the grid times
    double sphere_error_sq = 0;  // integral over D x (0,T) of (1 - |m-|)^2
    NodalField m_final;
    EdgeField P_final;
};

// Full per-path run: J steps of (LLG solve, Maxwell solve, renormalize),
// energy recording at every grid time.
PathResult run_path(const SimContext& ctx, const WienerPath& path, const RunOptions& opts = {});

}  // namespace mllg
