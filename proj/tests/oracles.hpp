#pragma once

// Independent reference computations used only by the tests. None of these call into
// the library's solvers: they use Eigen's general eigensolver, long-double elimination
// and plain fixed-point iteration instead of the closed forms and Newton steps the
// library relies on.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "nkbif/model.hpp"

namespace oracle {

using nkbif::Mat2d;
using nkbif::RowVec2d;
using nkbif::Vec2d;

using Mat2l = Eigen::Matrix<long double, 2, 2>;
using Mat4l = Eigen::Matrix<long double, 4, 4>;

inline std::array<std::complex<double>, 2> eigenvalues(const Mat2d& m) {
    Eigen::EigenSolver<Mat2d> es(m, false);
    auto ev = es.eigenvalues();
    return {ev(0), ev(1)};
}

/// Region label from raw eigenvalues, without looking at p(1), p(-1) or the discriminant.
inline std::string region_from_eigenvalues(const Mat2d& m) {
    const auto ev = eigenvalues(m);
    const bool complex_pair = std::abs(ev[0].imag()) > 0.0 || std::abs(ev[1].imag()) > 0.0;
    if (complex_pair) {
        return std::abs(ev[0]) < 1.0 ? "R4_2_sink_complex" : "R4_3_source_complex";
    }
    double lo = ev[0].real();
    double hi = ev[1].real();
    if (lo > hi) std::swap(lo, hi);
    const auto in = [](double l) { return l > -1.0 && l < 1.0; };
    if (in(lo) && hi > 1.0) return "R1_saddle";
    if (lo < -1.0 && hi > 1.0) return "R2_source_real_straddle";
    if (lo < -1.0 && in(hi)) return "R3_saddle_neg";
    if (in(lo) && in(hi)) return "R4_1_sink_real";
    if (lo > 1.0) return "R4_4_source_real";
    if (hi < -1.0) return "R4_5_both_below_minus1";
    return "unclassified";
}

inline int stable_from_eigenvalues(const Mat2d& m) {
    const auto ev = eigenvalues(m);
    return (std::abs(ev[0]) < 1.0 ? 1 : 0) + (std::abs(ev[1]) < 1.0 ? 1 : 0);
}

/// Gaussian elimination with partial pivoting in long double, written out by hand.
template <int N>
Eigen::Matrix<long double, N, 1> gauss_solve(Eigen::Matrix<long double, N, N> a,
                                             Eigen::Matrix<long double, N, 1> b) {
    for (int col = 0; col < N; ++col) {
        int piv = col;
        for (int r = col + 1; r < N; ++r) {
            if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
        }
        a.row(col).swap(a.row(piv));
        std::swap(b(col), b(piv));
        for (int r = col + 1; r < N; ++r) {
            const long double f = a(r, col) / a(col, col);
            a.row(r) -= f * a.row(col);
            b(r) -= f * b(col);
        }
    }
    Eigen::Matrix<long double, N, 1> x;
    for (int r = N - 1; r >= 0; --r) {
        long double s = b(r);
        for (int c = r + 1; c < N; ++c) s -= a(r, c) * x(c);
        x(r) = s / a(r, r);
    }
    return x;
}

/// Solves As X Bs + X = Cs by building the 4x4 system entry by entry:
/// (As X Bs)_{ij} = sum_{k,l} As_{ik} X_{kl} Bs_{lj}.
inline Mat2d kron_sylvester(const Mat2d& as, const Mat2d& bs, const Mat2d& cs) {
    Mat4l k = Mat4l::Zero();
    Eigen::Matrix<long double, 4, 1> rhs;
    const auto idx = [](int r, int c) { return r + 2 * c; };
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const int row = idx(i, j);
            rhs(row) = cs(i, j);
            k(row, row) += 1.0L;
            for (int kk = 0; kk < 2; ++kk) {
                for (int l = 0; l < 2; ++l) {
                    k(row, idx(kk, l)) += static_cast<long double>(as(i, kk)) * bs(l, j);
                }
            }
        }
    }
    const auto v = gauss_solve<4>(k, rhs);
    Mat2d x;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) x(i, j) = static_cast<double>(v(idx(i, j)));
    return x;
}

struct DareResult {
    Mat2d P;
    RowVec2d F;
    long iterations = 0;
    bool converged = false;
};

/// Plain Riccati value iteration P <- Q + A'PA - A'PB (R + B'PB)^{-1} B'PA in long double.
inline DareResult value_iteration_dare(const Mat2d& a, const Vec2d& b, const Mat2d& q, double r,
                                       const Mat2d& p0, long max_iter = 2'000'000, long double tol = 1e-15L) {
    const Mat2l al = a.cast<long double>();
    const Eigen::Matrix<long double, 2, 1> bl = b.cast<long double>();
    const Mat2l ql = q.cast<long double>();
    Mat2l p = p0.cast<long double>();
    DareResult out;
    for (long it = 1; it <= max_iter; ++it) {
        const long double s = r + (bl.transpose() * p * bl)(0, 0);
        const Eigen::Matrix<long double, 2, 1> g = al.transpose() * p * bl;
        Mat2l next = ql + al.transpose() * p * al - g * g.transpose() / s;
        next = 0.5L * (next + next.transpose());
        const long double step = (next - p).cwiseAbs().maxCoeff();
        p = next;
        out.iterations = it;
        if (step < tol * std::max(1.0L, p.cwiseAbs().maxCoeff())) {
            out.converged = true;
            break;
        }
    }
    out.P = p.cast<double>();
    const long double s = r + (bl.transpose() * p * bl)(0, 0);
    out.F = (-(bl.transpose() * p * al) / s).cast<double>();
    return out;
}

/// C (sI - A)^{-1} B through an explicit complex inverse.
inline std::complex<double> resolvent(const Mat2d& a, const Vec2d& b, const RowVec2d& c, std::complex<double> s) {
    using C = std::complex<double>;
    Eigen::Matrix<C, 2, 2> m = s * Eigen::Matrix<C, 2, 2>::Identity() - a.cast<C>();
    const Eigen::Matrix<C, 2, 1> v = m.inverse() * b.cast<C>();
    return c.cast<C>() * v;
}

/// The shock block exactly as in the classic reference listing, computed with the
/// oracle solvers: Pz from Ac' Pz (-A_zz) + Pz = Ac' P A_yz and
/// F_z = (R + B'PB)^{-1} B'(P A_yz + Pz A_zz), with A and B already scaled.
struct ListingPipeline {
    Mat2d P, Pz;
    RowVec2d F_y, F_z;
};

inline ListingPipeline listing_pipeline(const nkbif::ModelParams& params, double mu_pi, double mu_x, double mu_i) {
    const nkbif::StructuralMatrices m = nkbif::build_matrices(params);
    const double sb = std::sqrt(params.beta);
    const Mat2d a = sb * m.A_yy;
    const Vec2d b = sb * m.B_y;
    Mat2d q;
    q << mu_x, 0.0, 0.0, mu_pi;
    // Start the value iteration from a large multiple of the identity so it converges to
    // the stabilizing root even when Q is singular.
    const DareResult d = value_iteration_dare(a, b, q, mu_i, 1e3 * Mat2d::Identity());
    ListingPipeline out;
    out.P = d.P;
    out.F_y = d.F;
    const Mat2d ac = a + b * d.F;
    out.Pz = kron_sylvester(ac.transpose(), -m.A_zz, ac.transpose() * d.P * m.A_yz);
    const double s = mu_i + b.dot(d.P * b);
    out.F_z = (b.transpose() * (d.P * m.A_yz + out.Pz * m.A_zz)) / s;
    return out;
}

inline Mat2d random_matrix(std::mt19937_64& gen, double scale = 2.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Mat2d m;
    m << u(gen), u(gen), u(gen), u(gen);
    return m;
}

}  // namespace oracle
