#include "nkbif/ramsey.hpp"

#include <algorithm>
#include <cmath>

#include "nkbif/stability.hpp"

namespace nkbif {

namespace {

constexpr double kAnchorRcond = 1e-10;

double max_abs(const Mat2d& m) { return m.cwiseAbs().maxCoeff(); }

std::optional<Mat2d> anchor_matrix(const Mat2d& p, const Mat2d& pz) {
    const EigenReportd e = eig2(p);
    const double hi = e.max_modulus();
    if (!(hi > 0.0) || e.min_modulus() < kAnchorRcond * hi) return std::nullopt;
    return Mat2d(-p.inverse() * pz);
}

Mat2d structural_lead(const ModelParams& params) {
    Mat2d g1;
    g1 << 1.0, params.gamma,
          0.0, params.beta;
    return g1;
}

}  // namespace

void Preferences::validate() const {
    if (!std::isfinite(mu_pi) || !std::isfinite(mu_x) || !std::isfinite(mu_i)) {
        throw Error(ErrorKind::InvalidArgument, "preference weights must be finite");
    }
    if (mu_pi < 0.0 || mu_x < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "mu_pi and mu_x must be non-negative");
    }
    if (!(mu_i > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "mu_i must be strictly positive");
    }
}

Mat2d Preferences::state_weight() const {
    Mat2d q;
    q << mu_x, 0.0,
         0.0, mu_pi;
    return q;
}

std::vector<LabeledPreferences> table2_preferences() {
    return {
        {"Inflation", {1.0, 0.0, 1e-7}},
        {"Inflation output gap", {4.0, 1.0, 1e-7}},
        {"Inflation output gap", {1.0, 1.0, 1e-7}},
        {"Inflation output gap", {0.25, 1.0, 1e-7}},
        {"Output gap", {0.0, 1.0, 1e-7}},
        {"Output gap interest", {0.0, 4.0, 1.0}},
        {"Output gap interest", {0.0, 1.0, 1.0}},
        {"Output gap interest", {0.0, 0.25, 1.0}},
        {"Interest rate", {0.0, 0.0, 1.0}},
        {"Inflation interest", {0.25, 0.0, 1.0}},
        {"Inflation interest", {1.0, 0.0, 1.0}},
        {"Inflation interest", {4.0, 0.0, 1.0}},
    };
}

std::string_view to_string(ShockBlock b) { return b == ShockBlock::Listing ? "listing" : "exact"; }

TaylorRule RamseySolution::rule(ShockBlock block) const {
    const RowVec2d& fz = block == ShockBlock::Listing ? F_z : F_z_exact;
    return {F_y(0), F_y(1), fz(0), fz(1)};
}

RamseySolution solve_ramsey(const ModelParams& params, const Preferences& prefs) {
    prefs.validate();
    const StructuralMatrices m = build_matrices(params);
    if (kalman_controllability_rank(m.A_yy, m.B_y) < 2) {
        throw Error(ErrorKind::Uncontrollable, "solve_ramsey: controllability rank below 2");
    }

    const double sb = std::sqrt(params.beta);
    const Mat2d a = sb * m.A_yy;
    const Vec2d b = sb * m.B_y;
    const Mat2d q = prefs.state_weight();
    const double r = prefs.mu_i;

    RamseySolution sol;
    sol.params = params;
    sol.prefs = prefs;

    const DareSolution<double> dare = solve_dare<double>(a, b, q, r);
    sol.P_y = dare.P;
    sol.F_y = dare.F;
    sol.dare_iterations = dare.iterations;
    sol.riccati_residual = dare.residual;

    const Mat2d ac = a + b * sol.F_y;
    const double s = r + b.dot(sol.P_y * b);

    {
        const Mat2d as = ac.transpose();
        const Mat2d bs = -m.A_zz;
        const Mat2d cs = as * sol.P_y * m.A_yz;
        sol.P_z = solve_discrete_sylvester<double>(as, bs, cs);
        sol.sylvester_residual = max_abs(as * sol.P_z * bs + sol.P_z - cs);
        sol.F_z = (b.transpose() * (sol.P_y * m.A_yz + sol.P_z * m.A_zz)) / s;
        sol.N = anchor_matrix(sol.P_y, sol.P_z);
        if (sol.N) sol.anchor_residual = max_abs(sol.P_y * *sol.N + sol.P_z);
    }
    {
        const Mat2d as = -sb * ac.transpose();
        const Mat2d cs = sb * ac.transpose() * sol.P_y * m.A_yz;
        sol.H = solve_discrete_sylvester<double>(as, m.A_zz, cs);
        sol.exact_sylvester_residual = max_abs(as * sol.H * m.A_zz + sol.H - cs);
        sol.F_z_exact = -sb * (b.transpose() * (sol.P_y * m.A_yz + sol.H * m.A_zz)) / s;
        sol.N_exact = anchor_matrix(sol.P_y, sol.H);
    }

    sol.discounted = eig2(ac);
    sol.undiscounted = eig2(Mat2d(m.A_yy + m.B_y * sol.F_y));
    return sol;
}

Vec2d initial_anchor(const RamseySolution& sol, double z0, double u0, ShockBlock block) {
    const std::optional<Mat2d>& n = block == ShockBlock::Listing ? sol.N : sol.N_exact;
    if (!n) {
        throw Error(ErrorKind::AnchorUnavailable,
                    "initial_anchor: P_y is singular for these weights, N = -P_y^{-1} P_z undefined");
    }
    return *n * Vec2d(z0, u0);
}

double loss_value(const Trajectory& traj, const Preferences& prefs, double beta) {
    traj.validate();
    if (traj.horizon() < 3) throw Error(ErrorKind::InvalidArgument, "loss_value: horizon T must be at least 3");
    if (!(beta > 0.0 && beta <= 1.0)) throw Error(ErrorKind::InvalidArgument, "loss_value: beta must lie in (0, 1]");
    double total = 0.0;
    double disc = 1.0;
    for (std::size_t t = 0; t < traj.size(); ++t) {
        total += disc * 0.5 *
                 (prefs.mu_pi * traj.pi[t] * traj.pi[t] + prefs.mu_x * traj.x[t] * traj.x[t] +
                  prefs.mu_i * traj.i[t] * traj.i[t]);
        disc *= beta;
    }
    return total;
}

double FocReport::max_residual() const { return std::max({max_state, max_instrument, transversality}); }

std::vector<Vec2d> constraint_multipliers(const ModelParams& params, const Trajectory& traj) {
    if (!traj.has_multipliers()) {
        throw Error(ErrorKind::InvalidArgument, "constraint_multipliers: trajectory carries no costates");
    }
    const Mat2d g1_inv_t = structural_lead(params).transpose().inverse();
    std::vector<Vec2d> phi;
    phi.reserve(traj.size());
    for (std::size_t t = 0; t + 1 < traj.size(); ++t) {
        phi.push_back(params.beta * g1_inv_t * Vec2d(traj.phi_x[t + 1], traj.phi_pi[t + 1]));
    }
    return phi;
}

FocReport foc_residuals(const ModelParams& params, const Preferences& prefs, const Trajectory& traj) {
    traj.validate();
    FocReport rep;
    if (traj.size() == 0) return rep;
    if (!traj.has_multipliers()) {
        throw Error(ErrorKind::InvalidArgument, "foc_residuals: trajectory carries no costates");
    }
    if (params.gamma == 0.0) throw Error(ErrorKind::InvalidArgument, "foc_residuals: gamma = 0");

    const StructuralMatrices m = build_matrices(params);
    const Mat2d g1 = structural_lead(params);
    const Mat2d g0 = g1 * m.A_yy;
    const Vec2d gi = g1 * m.B_y;
    const Mat2d q = prefs.state_weight();
    const std::vector<Vec2d> phi = constraint_multipliers(params, traj);

    rep.transversality = std::max(std::abs(traj.phi_x[0]), std::abs(traj.phi_pi[0]));
    Vec2d prev = Vec2d::Zero();
    for (std::size_t t = 0; t < phi.size(); ++t) {
        const Vec2d y(traj.x[t], traj.pi[t]);
        const Vec2d state = q * y + g0.transpose() * phi[t] - g1.transpose() * prev / params.beta;
        if (t > 0) rep.max_state = std::max(rep.max_state, state.cwiseAbs().maxCoeff());
        rep.max_instrument = std::max(rep.max_instrument, std::abs(prefs.mu_i * traj.i[t] + gi.dot(phi[t])));
        prev = phi[t];
    }
    rep.periods = static_cast<int>(phi.size());
    return rep;
}

std::vector<SweepRow> lqr_triangle_sweep(const ModelParams& params,
                                         const std::vector<LabeledPreferences>& grid) {
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (const LabeledPreferences& lp : grid) {
        SweepRow row;
        row.label = lp.label;
        row.prefs = lp.prefs;
        try {
            RamseySolution sol = solve_ramsey(params, lp.prefs);
            row.ok = true;
            row.modulus1 = sol.discounted.min_modulus();
            row.modulus2 = sol.discounted.max_modulus();
            row.f_x = sol.F_y(0);
            row.f_pi = sol.F_y(1);
            row.f_z = sol.F_z(0);
            row.f_u = sol.F_z(1);
            row.inside_triangle = stable_count(sol.undiscounted) == 2;
            row.solution = std::move(sol);
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace nkbif
