// Polar decomposition T = U|T| with U the unique partial isometry whose
// initial projection U*U equals the projection onto the range of T*.
//
// U is always built from the rank-truncated SVD product W_r V_r*, which
// handles rank-deficient input uniformly; the inverse-free route also keeps
// the zero operator and nilpotent powers well defined.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "oplab/kernel.hpp"
#include "oplab/matrix.hpp"
#include "oplab/tolerance.hpp"

namespace oplab {

namespace detail {

// x diag(sigma) x*, Hermitized.
inline ComplexMatrix psd_from_singular(const ComplexMatrix& x,
                                       const std::vector<double>& sigma) {
    Eigen::MatrixXcd q = x.map();
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(
        sigma.data(), static_cast<Eigen::Index>(sigma.size()));
    Eigen::MatrixXcd out = q * s.asDiagonal() * q.adjoint();
    out = (out + out.adjoint().eval()) * 0.5;
    return ComplexMatrix::from_eigen(out);
}

}  // namespace detail

// |T| = (T*T)^(1/2), computed as V diag(sigma) V* from the SVD of T rather
// than through the Gram matrix, whose squared condition number would cost
// half the digits on ill-conditioned input (e.g. high powers of T).
inline ComplexMatrix modulus(const ComplexMatrix& t,
                             const ToleranceConfig& tol = {}) {
    (void)tol;
    const SvdResult s = svd(t);
    return detail::psd_from_singular(s.v, s.singular_values);
}

// |T*| = (TT*)^(1/2) = W diag(sigma) W*.
inline ComplexMatrix adjoint_modulus(const ComplexMatrix& t,
                                     const ToleranceConfig& tol = {}) {
    (void)tol;
    const SvdResult s = svd(t);
    return detail::psd_from_singular(s.w, s.singular_values);
}

// Orthogonal projection onto the range of A, from the leading numeric-rank
// left singular vectors. P*P = P = P*, and P A = A.
inline ComplexMatrix range_projection(const ComplexMatrix& a,
                                      const ToleranceConfig& tol = {}) {
    SvdResult s = svd(a);
    const std::size_t r = numeric_rank(s.singular_values, tol);
    ComplexMatrix p(a.rows(), a.rows());
    if (r == 0) return p;
    Eigen::MatrixXcd w = s.w.map();
    Eigen::MatrixXcd wr = w.leftCols(static_cast<Eigen::Index>(r));
    return ComplexMatrix::from_eigen(Eigen::MatrixXcd(wr * wr.adjoint()));
}

struct PolarForm {
    ComplexMatrix u;        // partial isometry
    ComplexMatrix modulus;  // |T|, Hermitian PSD
    std::size_t rank = 0;
    double residual_factor = 0.0;    // ||T - U|T|||_F / (1 + ||T||_F)
    double residual_init = 0.0;      // ||U*U - P_range(T*)||_F
    double isometry_residual = 0.0;  // ||UU*U - U||_F
    bool rank_indeterminate = false;

    bool valid(const ToleranceConfig& tol = {}) const {
        return residual_factor <= tol.zero_tol && residual_init <= tol.zero_tol &&
               isometry_residual <= tol.zero_tol * (1.0 + u.frobenius_norm());
    }
};

// Polar decomposition of a square T. With T = W diag(sigma) V* and
// r = numeric_rank(sigma): U = W_r V_r* and |T| = V diag(sigma) V*.
// A singular value within a factor 100 of the rank cutoff sets
// rank_indeterminate instead of being silently cut.
inline PolarForm polar_decompose(const ComplexMatrix& t,
                                 const ToleranceConfig& tol = {}) {
    t.require_square("polar_decompose");
    SvdResult s = svd(t);
    const std::size_t r = numeric_rank(s.singular_values, tol);
    const std::size_t n = t.rows();

    PolarForm pf;
    pf.rank = r;
    pf.rank_indeterminate = rank_is_indeterminate(s.singular_values, tol);

    Eigen::MatrixXcd w = s.w.map();
    Eigen::MatrixXcd v = s.v.map();
    if (r == 0) {
        pf.u = ComplexMatrix(n, n);
    } else {
        Eigen::MatrixXcd wr = w.leftCols(static_cast<Eigen::Index>(r));
        Eigen::MatrixXcd vr = v.leftCols(static_cast<Eigen::Index>(r));
        pf.u = ComplexMatrix::from_eigen(Eigen::MatrixXcd(wr * vr.adjoint()));
    }

    Eigen::VectorXd sig = Eigen::Map<const Eigen::VectorXd>(
        s.singular_values.data(), static_cast<Eigen::Index>(n));
    Eigen::MatrixXcd h = v * sig.asDiagonal() * v.adjoint();
    h = (h + h.adjoint().eval()) * 0.5;
    pf.modulus = ComplexMatrix::from_eigen(h);

    pf.residual_factor = distance_frobenius(t, pf.u * pf.modulus) /
                         (1.0 + t.frobenius_norm());
    // P_range(T*) from the same factorization: V_r V_r*.
    ComplexMatrix p(n, n);
    if (r > 0) {
        Eigen::MatrixXcd vr = v.leftCols(static_cast<Eigen::Index>(r));
        p = ComplexMatrix::from_eigen(Eigen::MatrixXcd(vr * vr.adjoint()));
    }
    pf.residual_init = distance_frobenius(pf.u.adjoint() * pf.u, p);
    pf.isometry_residual =
        distance_frobenius(pf.u * pf.u.adjoint() * pf.u, pf.u);
    return pf;
}

// Polar form of T* from a polar form of T: partial isometry U*, modulus
// |T*| = (TT*)^(1/2). Residuals are recomputed against T*, never assumed.
inline PolarForm adjoint_polar(const PolarForm& pf, const ComplexMatrix& t,
                               const ToleranceConfig& tol = {}) {
    PolarForm out;
    out.u = pf.u.adjoint();
    out.modulus = adjoint_modulus(t, tol);
    out.rank = pf.rank;
    out.rank_indeterminate = pf.rank_indeterminate;
    const ComplexMatrix tstar = t.adjoint();
    out.residual_factor = distance_frobenius(tstar, out.u * out.modulus) /
                          (1.0 + tstar.frobenius_norm());
    out.residual_init = distance_frobenius(out.u.adjoint() * out.u,
                                           range_projection(t, tol));
    out.isometry_residual =
        distance_frobenius(out.u * out.u.adjoint() * out.u, out.u);
    return out;
}

// Definitional test that (T, U) is a polar pair: T = U|T|, U*U is the range
// projection of T*, and U is a partial isometry. Holds only when all three
// residuals land in the zero band; fails when any lands in the nonzero band.
inline Verdict is_polar_pair(const ComplexMatrix& t, const ComplexMatrix& u,
                             const ToleranceConfig& tol = {}) {
    t.require_square("is_polar_pair");
    t.require_same_shape(u);
    const Verdict factor = classify_zero(
        distance_frobenius(t, u * modulus(t, tol)), 1.0 + t.frobenius_norm(), tol);
    const Verdict init = classify_zero(
        distance_frobenius(u.adjoint() * u, range_projection(t.adjoint(), tol)),
        1.0, tol);
    const Verdict isometry =
        classify_zero(distance_frobenius(u * u.adjoint() * u, u),
                      1.0 + u.frobenius_norm(), tol);
    return combine_all(std::vector<Verdict>{factor, init, isometry});
}

}  // namespace oplab
