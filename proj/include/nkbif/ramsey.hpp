#pragma once

// Ramsey policy under quasi-commitment as an augmented, discounted LQR.
//
// Pipeline: scale the endogenous block by sqrt(beta), solve the Riccati equation for
// the feedback on (x, pi), then a Sylvester equation for the feedback on the shocks,
// and finally the initial anchor y_0 = N z_0.
//
// Two shock blocks are carried side by side. The "listing" block follows the classic
// reference listing for this model and reproduces the published LQR tables. The "exact"
// block is the shock feedback of the discounted augmented regulator itself; it is the
// one that satisfies the first-order conditions and is used for simulation.

#include <optional>
#include <string>
#include <vector>

#include "nkbif/model.hpp"
#include "nkbif/trajectory.hpp"

namespace nkbif {

struct Preferences {
    double mu_pi = 1.0;
    double mu_x = 0.0;
    double mu_i = 1e-7;

    void validate() const;
    /// diag(mu_x, mu_pi), ordered like y = (x, pi).
    Mat2d state_weight() const;
};

struct LabeledPreferences {
    std::string label;
    Preferences prefs;
};

/// The twelve weight combinations of the published LQR table, in printed order.
std::vector<LabeledPreferences> table2_preferences();

enum class ShockBlock { Listing, Exact };
std::string_view to_string(ShockBlock b);

struct RamseySolution {
    ModelParams params;
    Preferences prefs;

    Mat2d P_y;
    RowVec2d F_y;  // (F_x, F_pi)

    // Listing block: P_z from Pz - Ac' Pz A_zz = Ac' P_y A_yz, F_z = +S^{-1} B'(P_y A_yz + P_z A_zz).
    Mat2d P_z;
    RowVec2d F_z;  // (F_z, F_u)
    std::optional<Mat2d> N;

    // Exact block: H - sqrt(b) Ac' H A_zz = sqrt(b) Ac' P_y A_yz, F_z = -S^{-1} sqrt(b) B'(P_y A_yz + H A_zz).
    Mat2d H;
    RowVec2d F_z_exact;
    std::optional<Mat2d> N_exact;

    EigenReportd discounted;    // sqrt(beta) (A_yy + B_y F_y): the published moduli
    EigenReportd undiscounted;  // A_yy + B_y F_y

    int dare_iterations = 0;
    double riccati_residual = 0.0;
    double sylvester_residual = 0.0;
    double exact_sylvester_residual = 0.0;
    double anchor_residual = 0.0;  // max |P_y N + P_z| when N is available

    TaylorRule rule(ShockBlock block = ShockBlock::Listing) const;
};

RamseySolution solve_ramsey(const ModelParams& params, const Preferences& prefs);

/// y_0 = N (z0, u0). Throws anchor-unavailable when P_y is singular.
Vec2d initial_anchor(const RamseySolution& sol, double z0, double u0,
                     ShockBlock block = ShockBlock::Listing);

/// sum_{t=0}^{T} beta^t (mu_pi pi_t^2 + mu_x x_t^2 + mu_i i_t^2) / 2, for T >= 3.
double loss_value(const Trajectory& traj, const Preferences& prefs, double beta);

struct FocReport {
    double max_state = 0.0;       // stationarity in (x_t, pi_t), t >= 1
    double max_instrument = 0.0;  // stationarity in i_t
    double transversality = 0.0;  // |lambda_0|, zero when y_0 is chosen optimally
    int periods = 0;

    double max_residual() const;
};

/// Evaluates the Lagrangian first-order conditions along a path whose phi_x/phi_pi
/// carry the costate lambda_t. The constraints are written in structural form
/// G1 y_{t+1} = G0 y_t + G_i i_t + G_z z_t with G1 = [[1, gamma], [0, beta]], and the
/// constraint multipliers are recovered as phi_t = beta G1^{-T} lambda_{t+1}. Periods
/// 0..T-1 are checked; the last period has no successor costate.
FocReport foc_residuals(const ModelParams& params, const Preferences& prefs, const Trajectory& traj);

/// Structural-form multipliers phi_t = beta G1^{-T} lambda_{t+1}, t = 0..T-1.
std::vector<Vec2d> constraint_multipliers(const ModelParams& params, const Trajectory& traj);

struct SweepRow {
    std::string label;
    Preferences prefs;
    bool ok = false;
    std::string error;
    double modulus1 = 0.0;  // smaller discounted modulus
    double modulus2 = 0.0;  // larger discounted modulus
    double f_pi = 0.0;
    double f_x = 0.0;
    double f_z = 0.0;
    double f_u = 0.0;
    bool inside_triangle = false;  // undiscounted closed loop has two stable roots
    std::optional<RamseySolution> solution;
};

std::vector<SweepRow> lqr_triangle_sweep(const ModelParams& params,
                                         const std::vector<LabeledPreferences>& grid);

}  // namespace nkbif
