#include "nkbif/model.hpp"

#include <cmath>
#include <string>

namespace nkbif {

std::string_view to_string(MatrixVariant v) {
    return v == MatrixVariant::Text ? "text" : "appendix-a";
}

MatrixVariant parse_variant(std::string_view s) {
    if (s == "text") return MatrixVariant::Text;
    if (s == "appendix-a" || s == "appendix_a" || s == "appendixa") return MatrixVariant::AppendixA;
    throw Error(ErrorKind::InvalidArgument, "unknown matrix variant '" + std::string(s) + "'");
}

double ModelParams::sigma() const {
    if (gamma == 0.0) throw Error(ErrorKind::InvalidArgument, "sigma = 1/gamma undefined for gamma = 0");
    return 1.0 / gamma;
}

void ModelParams::validate() const {
    for (double v : {gamma, kappa, beta, rho_z, rho_u}) {
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "model parameters must be finite");
    }
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "beta must lie in (0, 1]");
    }
    if (!(std::abs(rho_z) < 1.0) || !(std::abs(rho_u) < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "shock autocorrelations must satisfy |rho| < 1");
    }
}

bool TaylorRule::finite() const {
    return std::isfinite(f_x) && std::isfinite(f_pi) && std::isfinite(f_z) && std::isfinite(f_u);
}

StructuralMatrices build_matrices(const ModelParams& params) {
    params.validate();
    const double g = params.gamma;
    const double k = params.kappa;
    const double b = params.beta;
    const double sign = params.variant == MatrixVariant::Text ? 1.0 : -1.0;

    StructuralMatrices m;
    m.A_yy << 1.0 + sign * g * k / b, -g / b,
              -k / b, 1.0 / b;
    m.B_y << g, 0.0;
    m.A_yz << -1.0, g / b,
              0.0, -1.0 / b;
    m.A_zz << params.rho_z, 0.0,
              0.0, params.rho_u;
    return m;
}

int kalman_controllability_rank(const Mat2d& a, const Vec2d& b) {
    constexpr double tol = 1e-12;
    const Mat2d c = controllability_matrix<double>(a, b);
    const double scale = c.cwiseAbs().maxCoeff();
    if (scale <= tol) return 0;
    if (std::abs(c.determinant()) <= tol * std::max(1.0, scale * scale)) return 1;
    return 2;
}

Mat2d closed_loop(const StructuralMatrices& m, const TaylorRule& rule) {
    Mat2d out = m.A_yy;
    out.row(0) += m.B_y(0) * rule.endogenous();
    out.row(1) += m.B_y(1) * rule.endogenous();
    return out;
}

std::complex<double> TransferFunction::operator()(std::complex<double> s) const {
    const std::complex<double> den = (denominator[0] * s + denominator[1]) * s + denominator[2];
    if (std::abs(den) <= 1e-12) throw Error(ErrorKind::PoleError, "transfer function evaluated at a pole");
    return (numerator[0] * s + numerator[1]) / den;
}

TransferFunction transfer_function(const ModelParams& params) {
    const StructuralMatrices m = build_matrices(params);
    const Mat2d& a = m.A_yy;
    const Vec2d& b = m.B_y;
    // (1,1) adj(sI - A) B, expanded in s.
    TransferFunction tf;
    tf.numerator = {b(0) + b(1), -b(0) * a(1, 1) + a(0, 1) * b(1) + a(1, 0) * b(0) - a(0, 0) * b(1)};
    tf.denominator = {1.0, -a.trace(), a.determinant()};
    return tf;
}

}  // namespace nkbif
