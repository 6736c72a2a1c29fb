#pragma once

// Exact small-dense linear algebra for two-state, single-input systems.
//
// Everything here is templated on the scalar type and works on fixed-size Eigen
// objects. Eigenvalues are computed in closed form from trace and determinant;
// no general eigensolver is involved.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "nkbif/error.hpp"

namespace nkbif {

template <typename Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using RowVec2 = Eigen::Matrix<Scalar, 1, 2>;

using Mat2d = Mat2<double>;
using Vec2d = Vec2<double>;
using RowVec2d = RowVec2<double>;

template <typename Scalar>
struct EigenReport {
    Scalar trace{};
    Scalar det{};
    Scalar discriminant{};
    std::complex<Scalar> lambda1{};
    std::complex<Scalar> lambda2{};
    Scalar modulus1{};
    Scalar modulus2{};

    bool is_complex() const { return discriminant < Scalar(0); }
    Scalar max_modulus() const { return std::max(modulus1, modulus2); }
    Scalar min_modulus() const { return std::min(modulus1, modulus2); }
};

using EigenReportd = EigenReport<double>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

/// Roots of x^2 - T x + D. Real roots come back ordered (lambda1 <= lambda2);
/// complex roots as lambda1 = (T - i sqrt(-disc)) / 2 and its conjugate.
/// A discriminant within a few ulps of zero is treated as an exact double root.
template <typename Scalar>
EigenReport<Scalar> eig2_from_trace_det(Scalar trace, Scalar det) {
    using std::abs;
    using std::sqrt;
    if (!std::isfinite(trace) || !std::isfinite(det)) {
        throw Error(ErrorKind::InvalidArgument, "eig2: non-finite trace or determinant");
    }
    EigenReport<Scalar> r;
    r.trace = trace;
    r.det = det;
    Scalar disc = trace * trace - Scalar(4) * det;
    const Scalar noise =
        Scalar(16) * std::numeric_limits<Scalar>::epsilon() * (trace * trace + Scalar(4) * abs(det));
    if (abs(disc) <= noise) disc = Scalar(0);
    r.discriminant = disc;

    if (disc >= Scalar(0)) {
        const Scalar root = sqrt(disc);
        // Avoid cancellation: compute the larger-magnitude root first, the other via Vieta.
        Scalar big = (trace >= Scalar(0)) ? (trace + root) / Scalar(2) : (trace - root) / Scalar(2);
        Scalar small = (big != Scalar(0)) ? det / big : Scalar(0);
        if (big == Scalar(0)) small = Scalar(0);
        Scalar lo = std::min(big, small);
        Scalar hi = std::max(big, small);
        r.lambda1 = {lo, Scalar(0)};
        r.lambda2 = {hi, Scalar(0)};
        r.modulus1 = abs(lo);
        r.modulus2 = abs(hi);
    } else {
        const Scalar re = trace / Scalar(2);
        const Scalar im = sqrt(-disc) / Scalar(2);
        r.lambda1 = {re, -im};
        r.lambda2 = {re, im};
        r.modulus1 = sqrt(det);
        r.modulus2 = r.modulus1;
    }
    return r;
}

template <typename Scalar>
EigenReport<Scalar> eig2(const Mat2<Scalar>& m) {
    if (!all_finite(m)) throw Error(ErrorKind::InvalidArgument, "eig2: non-finite matrix entry");
    return eig2_from_trace_det<Scalar>(m.trace(), m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
}

/// p(a) = a^2 - T a + D. Positive iff both (real) eigenvalues lie on the same side of a.
template <typename Scalar>
Scalar char_poly_eval(Scalar trace, Scalar det, Scalar a) {
    return a * a - trace * a + det;
}

template <typename Scalar>
Scalar char_poly_eval(const Mat2<Scalar>& m, Scalar a) {
    return char_poly_eval<Scalar>(m.trace(), m.determinant(), a);
}

template <typename Scalar>
Vec2<Scalar> solve_linear_2x2(const Mat2<Scalar>& m, const Vec2<Scalar>& rhs) {
    using std::abs;
    if (!all_finite(m) || !all_finite(rhs)) {
        throw Error(ErrorKind::InvalidArgument, "solve_linear_2x2: non-finite input");
    }
    const Scalar det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (abs(det) <= Scalar(1e-12)) {
        throw Error(ErrorKind::SingularSystem, "solve_linear_2x2: determinant below 1e-12");
    }
    return {(m(1, 1) * rhs(0) - m(0, 1) * rhs(1)) / det, (m(0, 0) * rhs(1) - m(1, 0) * rhs(0)) / det};
}

/// The 4x4 operator of As X Bs + X acting on column-major vec(X): Bs^T (x) As + I.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> sylvester_operator(const Mat2<Scalar>& as, const Mat2<Scalar>& bs) {
    Eigen::Matrix<Scalar, 4, 4> k;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            k.template block<2, 2>(2 * i, 2 * j) = bs(j, i) * as;
        }
    }
    k += Eigen::Matrix<Scalar, 4, 4>::Identity();
    return k;
}

namespace detail {

template <typename Scalar>
Mat2<Scalar> solve_vectorized(const Eigen::Matrix<Scalar, 4, 4>& op, const Mat2<Scalar>& rhs,
                              const char* who) {
    Eigen::PartialPivLU<Eigen::Matrix<Scalar, 4, 4>> lu(op);
    if (!(lu.rcond() > Scalar(1e-14))) {
        throw Error(ErrorKind::NoUniqueSolution, std::string(who) + ": singular Kronecker system");
    }
    const Eigen::Matrix<Scalar, 4, 1> b = Eigen::Map<const Eigen::Matrix<Scalar, 4, 1>>(rhs.data());
    const Eigen::Matrix<Scalar, 4, 1> v = lu.solve(b);
    return Eigen::Map<const Mat2<Scalar>>(v.data());
}

}  // namespace detail

/// Solves As X Bs + X = Cs.
template <typename Scalar>
Mat2<Scalar> solve_discrete_sylvester(const Mat2<Scalar>& as, const Mat2<Scalar>& bs,
                                      const Mat2<Scalar>& cs) {
    if (!all_finite(as) || !all_finite(bs) || !all_finite(cs)) {
        throw Error(ErrorKind::InvalidArgument, "solve_discrete_sylvester: non-finite input");
    }
    return detail::solve_vectorized<Scalar>(sylvester_operator<Scalar>(as, bs), cs,
                                            "solve_discrete_sylvester");
}

/// Solves A X - X B = C (used for undetermined-coefficient solutions).
template <typename Scalar>
Mat2<Scalar> solve_sylvester_ax_xb(const Mat2<Scalar>& a, const Mat2<Scalar>& b,
                                   const Mat2<Scalar>& c) {
    if (!all_finite(a) || !all_finite(b) || !all_finite(c)) {
        throw Error(ErrorKind::InvalidArgument, "solve_sylvester_ax_xb: non-finite input");
    }
    Eigen::Matrix<Scalar, 4, 4> op;
    const Mat2<Scalar> id = Mat2<Scalar>::Identity();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            op.template block<2, 2>(2 * i, 2 * j) = id(j, i) * a - b(j, i) * id;
        }
    }
    return detail::solve_vectorized<Scalar>(op, c, "solve_sylvester_ax_xb");
}

/// Solves X = W + Ac^T X Ac.
template <typename Scalar>
Mat2<Scalar> solve_discrete_lyapunov(const Mat2<Scalar>& ac, const Mat2<Scalar>& w) {
    return solve_discrete_sylvester<Scalar>(-ac.transpose(), ac, w);
}

template <typename Scalar>
Mat2<Scalar> controllability_matrix(const Mat2<Scalar>& a, const Vec2<Scalar>& b) {
    Mat2<Scalar> c;
    c.col(0) = b;
    c.col(1) = a * b;
    return c;
}

/// Ackermann's formula in A + BF form: F = -e2^T [B AB]^{-1} (A^2 - T A + D I)
/// places the closed-loop characteristic polynomial at x^2 - T x + D.
template <typename Scalar>
RowVec2<Scalar> ackermann_gain(const Mat2<Scalar>& a, const Vec2<Scalar>& b, Scalar trace,
                               Scalar det) {
    using std::abs;
    const Mat2<Scalar> c = controllability_matrix<Scalar>(a, b);
    const Scalar scale = std::max<Scalar>(Scalar(1), c.cwiseAbs().maxCoeff());
    if (abs(c.determinant()) <= Scalar(1e-12) * scale * scale) {
        throw Error(ErrorKind::Uncontrollable, "ackermann_gain: controllability matrix is singular");
    }
    const Mat2<Scalar> phi = a * a - trace * a + det * Mat2<Scalar>::Identity();
    RowVec2<Scalar> e2(Scalar(0), Scalar(1));
    // e2^T C^{-1} = solve C^T w = e2
    const Vec2<Scalar> w = c.transpose().partialPivLu().solve(e2.transpose());
    return -(w.transpose() * phi);
}

/// F = -(R + B'PB)^{-1} B'PA, the feedback for x' = (A + BF) x.
template <typename Scalar>
RowVec2<Scalar> lqr_gain(const Mat2<Scalar>& a, const Vec2<Scalar>& b, Scalar r,
                         const Mat2<Scalar>& p) {
    const Scalar s = r + b.dot(p * b);
    return -(b.transpose() * p * a) / s;
}

template <typename Scalar>
Scalar riccati_residual(const Mat2<Scalar>& a, const Vec2<Scalar>& b, const Mat2<Scalar>& q,
                        Scalar r, const Mat2<Scalar>& p) {
    const Scalar s = r + b.dot(p * b);
    const Vec2<Scalar> pa_b = a.transpose() * p * b;
    const Mat2<Scalar> res = q + a.transpose() * p * a - pa_b * pa_b.transpose() / s - p;
    return res.cwiseAbs().maxCoeff();
}

struct DareOptions {
    double tol = 1e-10;
    int max_iter = 200;
};

template <typename Scalar>
struct DareSolution {
    Mat2<Scalar> P;
    RowVec2<Scalar> F;
    int iterations = 0;
    Scalar residual{};
};

template <typename Scalar>
bool is_symmetric_psd(const Mat2<Scalar>& q, Scalar tol) {
    using std::abs;
    const Scalar scale = std::max<Scalar>(Scalar(1), q.cwiseAbs().maxCoeff());
    if (abs(q(0, 1) - q(1, 0)) > tol * scale) return false;
    const auto e = eig2<Scalar>(q);
    return e.lambda1.real() >= -tol * scale;
}

/// Stabilizing solution of P = Q + A'PA - A'PB (R + B'PB)^{-1} B'PA, to a residual
/// below tol * max(1, |P|).
///
/// Newton (Hewer) iteration on the gain: each step solves the closed-loop Lyapunov
/// equation for the current gain, then updates the gain from it. The start gain is
/// zero when A is already stable and the dead-beat gain otherwise, so the iterates
/// stay stabilizing and converge to the stabilizing root even when Q is singular.
template <typename Scalar>
DareSolution<Scalar> solve_dare(const Mat2<Scalar>& a, const Vec2<Scalar>& b, const Mat2<Scalar>& q,
                                Scalar r, const DareOptions& opts = {}) {
    if (!all_finite(a) || !all_finite(b) || !all_finite(q) || !std::isfinite(r)) {
        throw Error(ErrorKind::InvalidArgument, "solve_dare: non-finite input");
    }
    if (!(r > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "solve_dare: R must be positive");
    if (!is_symmetric_psd<Scalar>(q, Scalar(1e-12))) {
        throw Error(ErrorKind::InvalidArgument, "solve_dare: Q must be symmetric positive semidefinite");
    }

    RowVec2<Scalar> f = RowVec2<Scalar>::Zero();
    if (eig2<Scalar>(a).max_modulus() >= Scalar(1)) {
        try {
            f = ackermann_gain<Scalar>(a, b, Scalar(0), Scalar(0));
        } catch (const Error&) {
            throw Error(ErrorKind::InvalidArgument, "solve_dare: (A, B) is not stabilizable");
        }
    }

    // Once the residual is below tolerance a few more Newton steps are taken while they
    // still help; each one roughly squares the error until rounding takes over.
    DareSolution<Scalar> sol;
    Scalar residual = std::numeric_limits<Scalar>::infinity();
    bool converged = false;
    int polish = 0;
    for (int it = 1; it <= opts.max_iter; ++it) {
        const Mat2<Scalar> ac = a + b * f;
        Mat2<Scalar> p = solve_discrete_lyapunov<Scalar>(ac, q + r * f.transpose() * f);
        p = Scalar(0.5) * (p + p.transpose());
        residual = riccati_residual<Scalar>(a, b, q, r, p);
        if (converged && !(residual < sol.residual)) break;
        sol.P = p;
        sol.F = lqr_gain<Scalar>(a, b, r, p);
        sol.iterations = it;
        sol.residual = residual;
        const Scalar scale = std::max<Scalar>(Scalar(1), p.cwiseAbs().maxCoeff());
        if (residual < Scalar(opts.tol) * scale) converged = true;
        if (converged && ++polish > 3) break;
        f = sol.F;
    }
    if (converged) return sol;
    throw Error(ErrorKind::ConvergenceFailure, "solve_dare: no convergence within max_iter",
                static_cast<double>(residual));
}

}  // namespace nkbif
