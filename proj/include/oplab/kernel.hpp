// Factorizations and matrix functions over ComplexMatrix.
//
// SVD and Hermitian eigendecomposition are delegated to Eigen; the rest is
// built on top of them. All verdicts produced here follow the banded
// tolerance policy in tolerance.hpp.

#pragma once

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "oplab/matrix.hpp"
#include "oplab/tolerance.hpp"

namespace oplab {

// A ~ w * diag(singular_values) * v.adjoint(), singular values descending,
// w and v with orthonormal columns.
struct SvdResult {
    ComplexMatrix w;
    std::vector<double> singular_values;
    ComplexMatrix v;
};

inline SvdResult svd(const ComplexMatrix& a) {
    a.require_finite();
    Eigen::BDCSVD<Eigen::MatrixXcd> solver(
        a.map(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success)
        throw KernelError("svd did not converge on " + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()) + " input");
    SvdResult r;
    r.w = ComplexMatrix::from_eigen(solver.matrixU());
    r.v = ComplexMatrix::from_eigen(solver.matrixV());
    const auto& sv = solver.singularValues();
    r.singular_values.assign(sv.data(), sv.data() + sv.size());
    return r;
}

// A ~ q * diag(eigenvalues) * q.adjoint(), eigenvalues ascending.
// Rejects input whose asymmetry residual exceeds zero_tol * ||A||_F.
struct EighResult {
    ComplexMatrix q;
    std::vector<double> eigenvalues;
};

inline EighResult eigh(const ComplexMatrix& a, const ToleranceConfig& tol = {}) {
    a.require_square("eigh");
    a.require_finite();
    const double asym = a.hermitian_residual();
    if (asym > tol.zero_tol * a.frobenius_norm() && asym > tol.zero_tol)
        throw KernelError("eigh rejects non-Hermitian input, asymmetry residual " +
                          std::to_string(asym));
    // Work on the Hermitian part; the residual above bounds the perturbation.
    Eigen::MatrixXcd h = a.map();
    h = (h + h.adjoint().eval()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
        throw KernelError("eigh did not converge on " + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()) + " input");
    EighResult r;
    r.q = ComplexMatrix::from_eigen(solver.eigenvectors());
    const auto& ev = solver.eigenvalues();
    r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    return r;
}

// Count of singular values above rank_rtol * sigma_max. Zero matrix has rank 0.
inline std::size_t numeric_rank(const std::vector<double>& sigma,
                                const ToleranceConfig& tol = {}) {
    if (sigma.empty()) return 0;
    const double cutoff = tol.rank_rtol * sigma.front();
    std::size_t r = 0;
    for (double s : sigma)
        if (s > cutoff && s > 0.0) ++r;
    return r;
}

// True when some singular value falls within a factor of 100 of the rank
// cutoff, so the numeric rank depends on an arbitrary cut.
inline bool rank_is_indeterminate(const std::vector<double>& sigma,
                                  const ToleranceConfig& tol = {}) {
    if (sigma.empty() || sigma.front() <= 0.0) return false;
    const double cut = tol.rank_rtol * sigma.front();
    for (double s : sigma)
        if (s > cut * 1e-2 && s < cut * 1e2) return true;
    return false;
}

// A^alpha for Hermitian PSD A via spectral calculus, with 0^alpha := 0.
// Eigenvalues with |lambda| <= zero_tol * ||A||_op are clamped to 0 before
// powering; an eigenvalue below -sep_tol * ||A||_op rejects the input.
inline ComplexMatrix psd_power(const ComplexMatrix& a, double alpha,
                               const ToleranceConfig& tol = {}) {
    if (!(alpha > 0.0)) throw KernelError("psd_power requires alpha > 0");
    EighResult e = eigh(a, tol);
    double spectral = 0.0;
    for (double l : e.eigenvalues) spectral = std::max(spectral, std::abs(l));
    const double floor = tol.zero_tol * spectral;
    if (!e.eigenvalues.empty() && e.eigenvalues.front() < -tol.sep_tol * spectral)
        throw KernelError("psd_power rejects non-PSD input, min eigenvalue " +
                          std::to_string(e.eigenvalues.front()));
    const std::size_t n = a.rows();
    Eigen::VectorXd powered(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        double l = e.eigenvalues[i];
        if (std::abs(l) <= floor || l <= 0.0)
            powered[static_cast<Eigen::Index>(i)] = 0.0;
        else
            powered[static_cast<Eigen::Index>(i)] = std::pow(l, alpha);
    }
    Eigen::MatrixXcd q = e.q.map();
    Eigen::MatrixXcd out = q * powered.asDiagonal() * q.adjoint();
    out = (out + out.adjoint().eval()) * 0.5;  // keep exactly Hermitian
    return ComplexMatrix::from_eigen(out);
}

// [A, B] = AB - BA.
inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_square("commutator");
    a.require_same_shape(b);
    return a * b - b * a;
}

// Banded zero-test of [A, B]; scale = ||A||_F * ||B||_F (1 if either is zero).
inline Verdict commutes(const ComplexMatrix& a, const ComplexMatrix& b,
                        const ToleranceConfig& tol = {}) {
    const double na = a.frobenius_norm();
    const double nb = b.frobenius_norm();
    const double scale = (na == 0.0 || nb == 0.0) ? 1.0 : na * nb;
    return classify_zero(commutator(a, b).frobenius_norm(), scale, tol);
}

// Banded equality test; scale = 1 + max of the two norms.
inline Verdict matrices_equal(const ComplexMatrix& x, const ComplexMatrix& y,
                              const ToleranceConfig& tol = {}) {
    const double scale = 1.0 + std::max(x.frobenius_norm(), y.frobenius_norm());
    return classify_zero(distance_frobenius(x, y), scale, tol);
}

// Projection test: Hermitian and idempotent within the zero band.
inline Verdict is_projection(const ComplexMatrix& p, const ToleranceConfig& tol = {}) {
    p.require_square("is_projection");
    const double scale = 1.0 + p.frobenius_norm();
    const Verdict herm = classify_zero(p.hermitian_residual(), scale, tol);
    const Verdict idem = classify_zero(distance_frobenius(p * p, p), scale, tol);
    return combine_all(std::vector<Verdict>{herm, idem});
}

}  // namespace oplab
