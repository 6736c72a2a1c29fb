#include "nkbif/dynamics.hpp"

#include <cmath>
#include <random>

namespace nkbif {

void Trajectory::validate() const {
    const std::size_t n = x.size();
    for (const auto* v : {&pi, &i, &z, &u}) {
        if (v->size() != n) throw Error(ErrorKind::InvalidArgument, "trajectory series lengths differ");
    }
    if (!phi_x.empty() || !phi_pi.empty()) {
        if (phi_x.size() != n || phi_pi.size() != n) {
            throw Error(ErrorKind::InvalidArgument, "trajectory multiplier lengths differ");
        }
    }
    for (const auto* v : {&x, &pi, &i, &z, &u, &phi_x, &phi_pi}) {
        for (double e : *v) {
            if (!std::isfinite(e)) throw Error(ErrorKind::InvalidArgument, "trajectory entry is not finite");
        }
    }
}

ShockSpec ShockSpec::generated(double z0, double u0, std::uint64_t seed, double sd_z, double sd_u) {
    if (!(sd_z >= 0.0) || !(sd_u >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "shock standard deviations must be non-negative");
    }
    ShockSpec s = impulse(z0, u0);
    s.seed = seed;
    s.sd_z = sd_z;
    s.sd_u = sd_u;
    return s;
}

std::vector<Vec2d> ShockSpec::innovations(int horizon) const {
    std::vector<Vec2d> eps(static_cast<std::size_t>(horizon) + 1, Vec2d::Zero());
    if (seed) {
        std::mt19937_64 gen(*seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int t = 1; t <= horizon; ++t) {
            const double ez = normal(gen);
            const double eu = normal(gen);
            eps[t] = Vec2d(sd_z * ez, sd_u * eu);
        }
    }
    for (int t = 1; t <= horizon; ++t) {
        if (static_cast<std::size_t>(t) < eps_z.size()) eps[t](0) += eps_z[t];
        if (static_cast<std::size_t>(t) < eps_u.size()) eps[t](1) += eps_u[t];
    }
    return eps;
}

namespace {

void require_horizon(int horizon) {
    if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "simulation horizon must be at least 1");
}

void push(Trajectory& tr, const Vec2d& y, double i, const Vec2d& z) {
    tr.x.push_back(y(0));
    tr.pi.push_back(y(1));
    tr.i.push_back(i);
    tr.z.push_back(z(0));
    tr.u.push_back(z(1));
}

Vec2d channel_state(ShockChannel channel, double magnitude) {
    return channel == ShockChannel::Demand ? Vec2d(magnitude, 0.0) : Vec2d(0.0, magnitude);
}

}  // namespace

Trajectory simulate_closed_loop(const StructuralMatrices& m, const TaylorRule& rule, const Vec2d& y0,
                                const ShockSpec& shocks, int horizon) {
    require_horizon(horizon);
    if (!rule.finite() || !y0.allFinite()) {
        throw Error(ErrorKind::InvalidArgument, "simulate_closed_loop: non-finite rule or initial state");
    }
    const Mat2d acl = closed_loop(m, rule);
    const Mat2d g = m.A_yz + m.B_y * rule.shock();
    const std::vector<Vec2d> eps = shocks.innovations(horizon);

    Trajectory tr;
    tr.reserve(static_cast<std::size_t>(horizon) + 1);
    Vec2d y = y0;
    Vec2d z(shocks.z0, shocks.u0);
    for (int t = 0; t <= horizon; ++t) {
        push(tr, y, rule.endogenous().dot(y) + rule.shock().dot(z), z);
        if (t == horizon) break;
        const Vec2d y_next = acl * y + g * z;
        z = m.A_zz * z + eps[t + 1];
        y = y_next;
    }
    return tr;
}

Trajectory simulate_ramsey(const RamseySolution& sol, const ShockSpec& shocks, int horizon, ShockBlock block,
                           const std::optional<Vec2d>& y0_override) {
    const Vec2d y0 = y0_override ? *y0_override : initial_anchor(sol, shocks.z0, shocks.u0, block);
    const StructuralMatrices m = build_matrices(sol.params);
    Trajectory tr = simulate_closed_loop(m, sol.rule(block), y0, shocks, horizon);

    const Mat2d& shock_costate = block == ShockBlock::Listing ? sol.P_z : sol.H;
    tr.phi_x.reserve(tr.size());
    tr.phi_pi.reserve(tr.size());
    for (std::size_t t = 0; t < tr.size(); ++t) {
        const Vec2d lambda = sol.P_y * Vec2d(tr.x[t], tr.pi[t]) + shock_costate * Vec2d(tr.z[t], tr.u[t]);
        tr.phi_x.push_back(lambda(0));
        tr.phi_pi.push_back(lambda(1));
    }
    return tr;
}

Mat2d solve_msv(const StructuralMatrices& m, const TaylorRule& rule) {
    const Mat2d acl = closed_loop(m, rule);
    const Mat2d g = m.A_yz + m.B_y * rule.shock();
    return solve_sylvester_ax_xb<double>(acl, m.A_zz, Mat2d(-g));
}

double msv_residual(const StructuralMatrices& m, const TaylorRule& rule, const Mat2d& n) {
    const Mat2d acl = closed_loop(m, rule);
    const Mat2d g = m.A_yz + m.B_y * rule.shock();
    return (n * m.A_zz - acl * n - g).cwiseAbs().maxCoeff();
}

Trajectory impulse_response_ramsey(const RamseySolution& sol, ShockChannel channel, double magnitude,
                                   int horizon, ShockBlock block) {
    const Vec2d z0 = channel_state(channel, magnitude);
    return simulate_ramsey(sol, ShockSpec::impulse(z0(0), z0(1)), horizon, block);
}

Trajectory simulate_msv(const StructuralMatrices& m, const TaylorRule& rule, const ShockSpec& shocks,
                        int horizon) {
    require_horizon(horizon);
    const Mat2d n = solve_msv(m, rule);
    const std::vector<Vec2d> eps = shocks.innovations(horizon);
    Trajectory tr;
    tr.reserve(static_cast<std::size_t>(horizon) + 1);
    Vec2d z(shocks.z0, shocks.u0);
    for (int t = 0; t <= horizon; ++t) {
        const Vec2d y = n * z;
        push(tr, y, rule.endogenous().dot(y) + rule.shock().dot(z), z);
        if (t < horizon) z = m.A_zz * z + eps[t + 1];
    }
    return tr;
}

Trajectory impulse_response_msv(const StructuralMatrices& m, const TaylorRule& rule, ShockChannel channel,
                                double magnitude, int horizon) {
    const Vec2d z0 = channel_state(channel, magnitude);
    return simulate_msv(m, rule, ShockSpec::impulse(z0(0), z0(1)), horizon);
}

RegimeComparison hopf_demo(const ModelParams& params, const Preferences& prefs, const TaylorRule& nk_rule) {
    if (!nk_rule.finite()) throw Error(ErrorKind::InvalidArgument, "hopf_demo: non-finite Taylor rule");

    RegimeComparison rep;
    rep.nk_rule = nk_rule;
    if (!(nk_rule.f_pi > 1.0 && nk_rule.f_pi < 2.0)) {
        rep.warnings.push_back("F_pi outside the plausible range (1, 2)");
    }
    if (!(nk_rule.f_x > 0.0 && nk_rule.f_x < 1.0)) {
        rep.warnings.push_back("F_x outside the plausible range (0, 1)");
    }

    rep.ramsey = solve_ramsey(params, prefs);
    rep.ramsey_discounted = rep.ramsey.discounted;
    rep.ramsey_undiscounted = rep.ramsey.undiscounted;
    const double fx_r = rep.ramsey.F_y(0);
    const double fpi_r = rep.ramsey.F_y(1);
    rep.ramsey_region = classify_region(params, fx_r, fpi_r);
    rep.nk_region = classify_region(params, nk_rule.f_x, nk_rule.f_pi);
    rep.nk_eigen = rep.nk_region.eigen;

    rep.d_ramsey = trace_det_from_rule(params, fx_r, fpi_r).det;
    rep.d_nk = rep.nk_eigen.det;

    const double span = rep.d_nk - rep.d_ramsey;
    if (span != 0.0) {
        const double s = (1.0 - rep.d_ramsey) / span;
        if (s > 0.0 && s < 1.0) {
            rep.crosses = true;
            rep.crossing_s = s;
            rep.crossing.f_x = (1.0 - s) * fx_r + s * nk_rule.f_x;
            rep.crossing.f_pi = (1.0 - s) * fpi_r + s * nk_rule.f_pi;
        }
    }
    if (!rep.crosses) rep.warnings.push_back("D = 1 is not crossed strictly between the two rules");
    return rep;
}

}  // namespace nkbif
