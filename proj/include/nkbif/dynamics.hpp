#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nkbif/ramsey.hpp"
#include "nkbif/stability.hpp"
#include "nkbif/trajectory.hpp"

namespace nkbif {

/// Initial shock state plus innovations. Innovations are either given explicitly
/// (eps_z[t], eps_u[t] enter z_t, u_t for t >= 1; index 0 is ignored) or drawn from a
/// seeded generator. Missing entries count as zero.
struct ShockSpec {
    double z0 = 0.0;
    double u0 = 0.0;
    std::vector<double> eps_z;
    std::vector<double> eps_u;

    std::optional<std::uint64_t> seed;
    double sd_z = 0.0;
    double sd_u = 0.0;

    static ShockSpec impulse(double z0, double u0) {
        ShockSpec s;
        s.z0 = z0;
        s.u0 = u0;
        return s;
    }
    static ShockSpec generated(double z0, double u0, std::uint64_t seed, double sd_z, double sd_u);

    /// Innovation pairs for t = 0..horizon (t = 0 always zero).
    std::vector<Vec2d> innovations(int horizon) const;
};

/// y_{t+1} = (A_yy + B F_y) y_t + (A_yz + B F_z) z_t, z_{t+1} = A_zz z_t + eps_{t+1},
/// with i_t = F_y y_t + F_z z_t recorded.
Trajectory simulate_closed_loop(const StructuralMatrices& m, const TaylorRule& rule, const Vec2d& y0,
                                const ShockSpec& shocks, int horizon);

/// Optimal Ramsey path: y_0 = N z_0, then the closed loop under the chosen shock block.
/// The costate lambda_t = P_y y_t + H z_t (P_z for the listing block) is stored in
/// phi_x / phi_pi. `y0_override` replaces the anchored start.
Trajectory simulate_ramsey(const RamseySolution& sol, const ShockSpec& shocks, int horizon,
                           ShockBlock block = ShockBlock::Exact,
                           const std::optional<Vec2d>& y0_override = std::nullopt);

/// Minimal-state-variable solution y_t = N z_t of the determinate Taylor-rule regime:
/// N A_zz = (A_yy + B F_y) N + (A_yz + B F_z).
Mat2d solve_msv(const StructuralMatrices& m, const TaylorRule& rule);

/// Residual of the functional equation above, max abs entry.
double msv_residual(const StructuralMatrices& m, const TaylorRule& rule, const Mat2d& n);

/// Path of the determinate Taylor-rule regime: the shock block evolves with its
/// innovations and y_t = N z_t throughout.
Trajectory simulate_msv(const StructuralMatrices& m, const TaylorRule& rule, const ShockSpec& shocks,
                        int horizon);

enum class ShockChannel { Demand, CostPush };

Trajectory impulse_response_ramsey(const RamseySolution& sol, ShockChannel channel, double magnitude,
                                   int horizon, ShockBlock block = ShockBlock::Exact);
Trajectory impulse_response_msv(const StructuralMatrices& m, const TaylorRule& rule,
                                ShockChannel channel, double magnitude, int horizon);

struct RegimeComparison {
    RamseySolution ramsey;
    TaylorRule nk_rule;

    EigenReportd ramsey_discounted;
    EigenReportd ramsey_undiscounted;
    RegionClass ramsey_region;
    EigenReportd nk_eigen;
    RegionClass nk_region;

    double d_ramsey = 0.0;
    double d_nk = 0.0;

    /// D is affine in the gains, so along F(s) = (1 - s) F_ramsey + s F_nk it is linear in s.
    bool crosses = false;
    double crossing_s = 0.0;
    RuleGains crossing;

    std::vector<std::string> warnings;
};

/// Compares the Ramsey sink with a Taylor-rule source across the Hopf border D = 1.
RegimeComparison hopf_demo(const ModelParams& params, const Preferences& prefs, const TaylorRule& nk_rule);

}  // namespace nkbif
