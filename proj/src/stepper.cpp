#include "mllg/stepper.hpp"

#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "mllg/errors.hpp"

namespace mllg {

namespace {

// Exact integral of phi_a phi_b phi_c over a tet, divided by the volume.
double p1_triple_weight(int a, int b, int c) {
    if (a == b && b == c) return 1.0 / 20.0;
    if (a == b || b == c || a == c) return 1.0 / 60.0;
    return 1.0 / 120.0;
}

}  // namespace

TangentFrame build_tangent_frame(const NodalField& m) {
    TangentFrame frame;
    frame.axes.resize(m.values.size());
    for (std::size_t n = 0; n < m.values.size(); ++n) {
        const Eigen::Vector3d& mv = m.values[n];
        if (mv.norm() < 0.5)
            throw InvariantError("tangent frame: |m| < 1/2 at vertex " + std::to_string(n));
        int best = 0;
        double best_align = std::abs(mv[0]);
        for (int a = 1; a < 3; ++a)
            if (std::abs(mv[a]) < best_align) {
                best = a;
                best_align = std::abs(mv[a]);
            }
        Eigen::Vector3d axis = Eigen::Vector3d::Zero();
        axis[best] = 1.0;
        const Eigen::Vector3d t1 = (axis - axis.dot(mv) * mv).normalized();
        frame.axes[n] = {t1, mv.cross(t1)};
    }
    return frame;
}

Eigen::Vector3d initial_magnetization(const Eigen::Vector3d& x) {
    const Eigen::Vector3d xs(x[0] - 0.5, x[1] - 0.5, 0.0);
    const double r = xs.norm();
    if (r >= 0.5) return {0.0, 0.0, -1.0};
    const double a = std::pow(1.0 - 2.0 * r, 4) / 4.0;
    const double denom = a * a + r * r;
    return Eigen::Vector3d(2.0 * a * xs[0], 2.0 * a * xs[1], a * a - r * r) / denom;
}

SimContext::SimContext(const SimConfig& config, bool allow_unstable_theta)
    : cfg(config), mesh(build_cube_mesh(config.n)) {
    cfg.validate();
    check_theta_stability(cfg, allow_unstable_theta);
    p1 = assemble_p1_matrices(mesh);
    ned = assemble_nedelec_matrices(mesh, cfg.sigma_d, cfg.sigma);
    curlcurl_plain = assemble_nedelec_matrices(mesh, 1.0, 1.0).curlcurl;
    {
        const double mu0_k = cfg.mu0 / cfg.k();
        std::vector<Entry> entries;
        for (int r = 0; r < ned.mass.rows(); ++r) {
            for (int p = ned.mass.row_ptr()[r]; p < ned.mass.row_ptr()[r + 1]; ++p)
                entries.push_back({r, ned.mass.col_idx()[p], 0, mu0_k * ned.mass.values()[p]});
            for (int p = ned.curlcurl.row_ptr()[r]; p < ned.curlcurl.row_ptr()[r + 1]; ++p)
                entries.push_back(
                    {r, ned.curlcurl.col_idx()[p], 1, ned.curlcurl.values()[p]});
        }
        maxwell_system =
            SparseMat::from_entries(ned.mass.rows(), ned.mass.rows(), std::move(entries));
    }
    gdata = cfg.g_mode == GMode::constant
                ? GData::constant_g(mesh, Eigen::Vector3d(0.0, 0.0, 1.0))
                : GData::from_callbacks(mesh, analytic_g_profile());
    m0 = interpolate_nodal(initial_magnetization, mesh);
    const double hs = cfg.H_s;
    P0 = interpolate_edge([hs](const Eigen::Vector3d&) { return Eigen::Vector3d(0, 0, hs); },
                          mesh);
}

NodalField llg_step(const SimContext& ctx, const StepState& state, const TangentFrame& frame) {
    const Mesh& mesh = ctx.mesh;
    const int nd = mesh.num_d_vertices();
    const double k = ctx.cfg.k();
    const double theta = ctx.cfg.theta;
    const double l1 = ctx.cfg.lambda1;
    const double l2 = ctx.cfg.lambda2;
    const double mu = ctx.cfg.mu();
    const double w_j = state.path->values[state.j];

    // Cross-coupling vectors V_rc = integral of phi_r phi_c m_h, and the
    // quadrature right-hand side integral of phi_r (mu e^{-W G_h} P - R).
    std::vector<Entry> cross_entries[3];
    std::vector<Eigen::Vector3d> rhs_vec(nd, Eigen::Vector3d::Zero());
    const QuadratureRule& rule = volume_rule();
    const RhkEvaluator rhk = compute_Rhk(state.m, ctx.gdata, w_j, l1, l2);

    for (int t : mesh.d_tets) {
        const double vol = mesh.volume[t];
        const auto& v = mesh.tets[t];
        const auto mvals = state.m.on_tet(t);
        for (int a = 0; a < 4; ++a) {
            const int r = mesh.d_index[v[a]];
            for (int b = 0; b < 4; ++b) {
                const int c = mesh.d_index[v[b]];
                Eigen::Vector3d w_rc = Eigen::Vector3d::Zero();
                for (int s = 0; s < 4; ++s) w_rc += p1_triple_weight(a, b, s) * mvals[s];
                w_rc *= vol;
                for (int comp = 0; comp < 3; ++comp)
                    cross_entries[comp].push_back({r, c, t, w_rc[comp]});
            }
        }
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto& bary = rule.points[q];
            const double wq = rule.weights[q] * vol;
            const Eigen::Vector3d gq = ctx.gdata.g_at(t, bary);
            const Eigen::Vector3d p_rot =
                apply_exp_sG(state.P.value_at(t, bary), gq, -w_j);
            const Eigen::Vector3d integrand = mu * p_rot - rhk(t, bary);
            for (int a = 0; a < 4; ++a)
                rhs_vec[mesh.d_index[v[a]]] += wq * bary[a] * integrand;
        }
    }
    SparseMat cross[3];
    for (int comp = 0; comp < 3; ++comp)
        cross[comp] = SparseMat::from_entries(nd, nd, std::move(cross_entries[comp]));

    const auto stiff_m = apply_blockwise(ctx.p1.stiffness, state.m);

    // Reduced 2N x 2N system in the per-node frame coefficients (alpha, beta).
    // Mass, stiffness and the cross matrices share one sparsity pattern: all
    // are assembled from the full 4 x 4 couplings of the same D-tets.
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs(2 * nd);
    const auto& mass = ctx.p1.mass;
    const auto& stiff = ctx.p1.stiffness;
    for (int r = 0; r < nd; ++r) {
        for (int a = 0; a < 2; ++a) {
            const Eigen::Vector3d& ta = frame.axes[r][a];
            rhs[2 * r + a] = (rhs_vec[r] - mu * stiff_m[r]).dot(ta);
        }
        for (int kk = mass.row_ptr()[r]; kk < mass.row_ptr()[r + 1]; ++kk) {
            const int c = mass.col_idx()[kk];
            const double m_rc = mass.values()[kk];
            const double k_rc = stiff.values()[kk];
            const Eigen::Vector3d v_rc(cross[0].values()[kk], cross[1].values()[kk],
                                       cross[2].values()[kk]);
            for (int a = 0; a < 2; ++a) {
                const Eigen::Vector3d& ta = frame.axes[r][a];
                for (int b = 0; b < 2; ++b) {
                    const Eigen::Vector3d& tb = frame.axes[c][b];
                    double val = (l2 * m_rc + mu * k * theta * k_rc) * ta.dot(tb) -
                                 l1 * v_rc.dot(tb.cross(ta));
                    trip.emplace_back(2 * r + a, 2 * c + b, val);
                }
            }
        }
    }

    Eigen::SparseMatrix<double> a(2 * nd, 2 * nd);
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    Eigen::VectorXd sol;
    bool ok = lu.info() == Eigen::Success;
    if (ok) {
        sol = lu.solve(rhs);
        ok = (a * sol - rhs).norm() <= 1e-10 * std::max(rhs.norm(), 1e-300);
    }
    if (!ok) {
        // Iterative fallback for the nonsymmetric system.
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> solver;
        solver.setTolerance(1e-12);
        solver.setMaxIterations(20000);
        solver.compute(a);
        sol = solver.solve(rhs);
        if ((a * sol - rhs).norm() > 1e-10 * std::max(rhs.norm(), 1e-300))
            throw SolverError("llg_step: linear solve failed to reach 1e-10 relative residual",
                              solver.iterations());
    }

    NodalField vfield(mesh);
    for (int r = 0; r < nd; ++r)
        vfield.values[r] = sol[2 * r] * frame.axes[r][0] + sol[2 * r + 1] * frame.axes[r][1];
    return vfield;
}

NodalField normalize_update(const NodalField& m, const NodalField& v, double k) {
    NodalField out(*m.mesh);
    for (std::size_t n = 0; n < m.values.size(); ++n) {
        const Eigen::Vector3d u = m.values[n] + k * v.values[n];
        const double len = u.norm();
        if (len < 1.0 - 1e-10)
            throw InvariantError("normalize_update: |m + k v| = " + std::to_string(len) +
                                 " < 1 at vertex " + std::to_string(n) +
                                 " (tangency violated)");
        out.values[n] = u / len;
    }
    return out;
}

EdgeField maxwell_step(const SimContext& ctx, const StepState& state) {
    const Mesh& mesh = ctx.mesh;
    const double k = ctx.cfg.k();
    const double mu0_k = ctx.cfg.mu0 / k;
    const double w_j = state.path->values[state.j];

    // System matrix (mu0/k) M + K_sigma; kept as entries so the CG path stays
    // on the deterministic CSR type.
    std::vector<Entry> entries;
    const auto& mm = ctx.ned.mass;
    const auto& kk = ctx.ned.curlcurl;
    for (int r = 0; r < mm.rows(); ++r) {
        for (int p = mm.row_ptr()[r]; p < mm.row_ptr()[r + 1]; ++p)
            entries.push_back({r, mm.col_idx()[p], 0, mu0_k * mm.values()[p]});
        for (int p = kk.row_ptr()[r]; p < kk.row_ptr()[r + 1]; ++p)
            entries.push_back({r, kk.col_idx()[p], 1, kk.values()[p]});
    }
    const SparseMat a = SparseMat::from_entries(mm.rows(), mm.rows(), std::move(entries));

    // Source: sigma_D < curl(e^{W G_h} m), curl zeta >_D with the curl of the
    // product differentiated exactly per element.
    Eigen::VectorXd b = mu0_k * ctx.ned.mass.apply(state.P.as_vector());
    const QuadratureRule& rule = volume_rule();
    const double sw = std::sin(w_j);
    const double cw = 1.0 - std::cos(w_j);
    for (int t : mesh.d_tets) {
        const double vol = mesh.volume[t];
        const auto dm = state.m.gradient_on(t);
        const auto dg = ctx.gdata.g.gradient_on(t);
        Eigen::Vector3d curl_shape[6];
        for (int le = 0; le < 6; ++le) {
            int p = kTetLocalEdges[le][0], q = kTetLocalEdges[le][1];
            curl_shape[le] = 2.0 * mesh.grad_l[t][p].cross(mesh.grad_l[t][q]);
        }
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto& bary = rule.points[q];
            const Eigen::Vector3d mq = state.m.value_at(t, bary);
            const Eigen::Vector3d gq = ctx.gdata.g_at(t, bary);
            // d_i (e^{sG_h} m) = e^{sG_h}(d_i m) + sin(s) m x d_i g
            //   + (1 - cos s)[(m x d_i g) x g + (m x g) x d_i g].
            Eigen::Vector3d d[3];
            for (int i = 0; i < 3; ++i) {
                d[i] = apply_exp_sG(dm[i], gq, w_j) + sw * mq.cross(dg[i]) +
                       cw * (mq.cross(dg[i]).cross(gq) + mq.cross(gq).cross(dg[i]));
            }
            const Eigen::Vector3d curl_em(d[1][2] - d[2][1], d[2][0] - d[0][2],
                                          d[0][1] - d[1][0]);
            const double wq = rule.weights[q] * vol * ctx.cfg.sigma_d;
            for (int le = 0; le < 6; ++le) {
                auto [e, sign] = mesh.tet_edges[t][le];
                b[e] += wq * sign * curl_em.dot(curl_shape[le]);
            }
        }
    }

    Eigen::VectorXd x = state.P.as_vector();  // warm start from P^{(j)}
    const CgResult res = conjugate_gradient(a, b, x, 1e-10, 50L * a.rows() + 1000);
    if (!res.converged)
        throw SolverError("maxwell_step: CG failed to converge (relative residual " +
                              std::to_string(res.rel_residual) + ")",
                          res.iterations);
    return EdgeField::from_vector(mesh, x);
}

Energies compute_energies(const SimContext& ctx, const NodalField& m, const EdgeField& p) {
    Energies e;
    e.exchange = quadratic_form_vec(ctx.p1.stiffness, m);
    const Eigen::VectorXd c = p.as_vector();
    e.field = ctx.ned.mass.quadratic_form(c);
    e.curl = ctx.curlcurl_plain.quadratic_form(c);
    return e;
}

double sphere_defect_sq(const SimContext& ctx, const NodalField& m) {
    const QuadratureRule& rule = volume_rule();
    double total = 0.0;
    for (int t : ctx.mesh.d_tets) {
        double local = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double dev = 1.0 - m.value_at(t, rule.points[q]).norm();
            local += rule.weights[q] * dev * dev;
        }
        total += ctx.mesh.volume[t] * local;
    }
    return total;
}

PathResult run_path(const SimContext& ctx, const WienerPath& path, const RunOptions& opts) {
    const double k = ctx.cfg.k();
    if (static_cast<int>(path.values.size()) != ctx.cfg.J + 1)
        throw InputError("run_path: path length does not match config J");

    PathResult result;
    StepState state{0, ctx.m0, ctx.P0, &path};
    result.trace.reserve(ctx.cfg.J + 1);

    auto record = [&](int j) {
        const Energies e = compute_energies(ctx, state.m, state.P);
        result.trace.push_back({j * k, e.exchange, e.field, e.exchange + e.field, e.curl});
    };
    record(0);

    for (int j = 0; j < ctx.cfg.J; ++j) {
        state.j = j;
        result.sphere_error_sq += k * sphere_defect_sq(ctx, state.m);

        const TangentFrame frame = build_tangent_frame(state.m);
        NodalField v;
        EdgeField p_next;
        try {
            v = llg_step(ctx, state, frame);
            p_next = maxwell_step(ctx, state);
        } catch (SolverError& err) {
            throw SolverError(std::string(err.what()) + " at step " + std::to_string(j),
                              err.iterations);
        }

        const double exchange_pre =
            opts.check_invariants ? quadratic_form_vec(ctx.p1.stiffness, state.m) : 0.0;
        NodalField m_next = normalize_update(state.m, v, k);

        if (opts.check_invariants) {
            for (std::size_t n = 0; n < m_next.values.size(); ++n) {
                if (std::abs(m_next.values[n].norm() - 1.0) > 1e-12)
                    throw InvariantError("run_path: nodal |m| deviates from 1", j);
                if (std::abs(v.values[n].dot(state.m.values[n])) >
                    1e-10 * std::max(1.0, v.values[n].norm()))
                    throw InvariantError("run_path: v not tangent to m", j);
                if (!m_next.values[n].allFinite() || !v.values[n].allFinite())
                    throw InvariantError("run_path: non-finite field values (blow-up)", j);
            }
            // Dirichlet-energy decrease under renormalization: requires the
            // mesh off-diagonal condition, which Kuhn meshes satisfy.
            NodalField u(ctx.mesh);
            for (std::size_t n = 0; n < u.values.size(); ++n)
                u.values[n] = state.m.values[n] + k * v.values[n];
            const double exchange_next = quadratic_form_vec(ctx.p1.stiffness, m_next);
            const double exchange_u = quadratic_form_vec(ctx.p1.stiffness, u);
            if (exchange_next > exchange_u + 1e-10 * std::max(1.0, exchange_u))
                throw InvariantError("run_path: renormalization increased exchange energy", j);
            if (!p_next.as_vector().allFinite())
                throw InvariantError("run_path: non-finite Maxwell solution (blow-up)", j);
            (void)exchange_pre;
        }

        state.m = std::move(m_next);
        state.P = std::move(p_next);
        record(j + 1);
        if (opts.probe) opts.probe(j, v, state.m);
    }

    result.m_final = std::move(state.m);
    result.P_final = std::move(state.P);
    return result;
}

}  // namespace mllg
