#pragma once

#include <array>
#include <complex>
#include <string_view>

#include "nkbif/linalg.hpp"

namespace nkbif {

/// Sign convention for the (1,1) entry of the endogenous transition matrix.
/// Text:      1 + gamma*kappa/beta (consistent with the structural IS/Phillips equations)
/// AppendixA: 1 - gamma*kappa/beta (the classic reference listing; reproduces the LQR tables)
enum class MatrixVariant { Text, AppendixA };

std::string_view to_string(MatrixVariant v);
MatrixVariant parse_variant(std::string_view s);

struct ModelParams {
    double gamma = 0.5;  // intertemporal elasticity of substitution, may be negative
    double kappa = 0.1;  // Phillips-curve slope, may be negative
    double beta = 0.99;  // discount factor in (0, 1]
    double rho_z = 0.9;  // AR(1) coefficient, demand shock
    double rho_u = 0.9;  // AR(1) coefficient, cost-push shock
    MatrixVariant variant = MatrixVariant::Text;

    /// 1/gamma; throws when gamma == 0.
    double sigma() const;
    void validate() const;

    static ModelParams baseline(MatrixVariant v = MatrixVariant::Text) {
        ModelParams p;
        p.variant = v;
        return p;
    }
};

/// y_{t+1} = A_yy y_t + B_y i_t + A_yz z_t, z_{t+1} = A_zz z_t + eps_{t+1},
/// with y = (x, pi) and z = (z, u).
struct StructuralMatrices {
    Mat2d A_yy;
    Vec2d B_y;
    Mat2d A_yz;
    Mat2d A_zz;
};

struct TaylorRule {
    double f_x = 0.0;
    double f_pi = 0.0;
    double f_z = 0.0;
    double f_u = 0.0;

    RowVec2d endogenous() const { return {f_x, f_pi}; }
    RowVec2d shock() const { return {f_z, f_u}; }
    bool finite() const;
};

StructuralMatrices build_matrices(const ModelParams& params);

/// Rank of [B, AB] with singularity tolerance 1e-12.
int kalman_controllability_rank(const Mat2d& a, const Vec2d& b);

/// A_yy + B_y (F_x, F_pi). Only the first row differs from A_yy.
Mat2d closed_loop(const StructuralMatrices& m, const TaylorRule& rule);

/// Rational transfer function num(s) / den(s) from the instrument to -(1,1)(A - sI)^{-1} B.
/// Coefficients are stored highest power first.
struct TransferFunction {
    std::array<double, 2> numerator{};
    std::array<double, 3> denominator{};

    std::complex<double> operator()(std::complex<double> s) const;
    /// Root of the numerator, when the leading coefficient is nonzero.
    double zero() const { return -numerator[1] / numerator[0]; }
};

TransferFunction transfer_function(const ModelParams& params);

}  // namespace nkbif
