// Deterministic constructors for operator families with known centered
// structure. Every family is reproducible from (family, parameters, seed);
// randomness comes from a seeded std::mt19937_64, so two calls with the
// same spec produce identical bytes within one build of this library.

#pragma once

#include <Eigen/QR>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oplab/centered.hpp"
#include "oplab/kernel.hpp"
#include "oplab/matrix.hpp"
#include "oplab/tolerance.hpp"

namespace oplab {

enum class OperatorFamily {
    identity,
    unitary_random,
    psd_random,
    quasinormal,
    weighted_shift,
    block_shift,
    jordan,
    direct_sum,
    dense_random,
};

inline const char* to_string(OperatorFamily f) {
    switch (f) {
        case OperatorFamily::identity: return "identity";
        case OperatorFamily::unitary_random: return "unitary_random";
        case OperatorFamily::psd_random: return "psd_random";
        case OperatorFamily::quasinormal: return "quasinormal";
        case OperatorFamily::weighted_shift: return "weighted_shift";
        case OperatorFamily::block_shift: return "block_shift";
        case OperatorFamily::jordan: return "jordan";
        case OperatorFamily::direct_sum: return "direct_sum";
        default: return "dense_random";
    }
}

inline OperatorFamily family_from_string(const std::string& s) {
    for (OperatorFamily f :
         {OperatorFamily::identity, OperatorFamily::unitary_random,
          OperatorFamily::psd_random, OperatorFamily::quasinormal,
          OperatorFamily::weighted_shift, OperatorFamily::block_shift,
          OperatorFamily::jordan, OperatorFamily::direct_sum,
          OperatorFamily::dense_random})
        if (s == to_string(f)) return f;
    throw KernelError("unknown operator family: " + s);
}

// Declarative description of a generated operator; build() turns it into a
// matrix. Not every field applies to every family.
struct OperatorSpec {
    OperatorFamily family = OperatorFamily::identity;
    std::size_t dim = 2;
    std::uint64_t seed = 0;
    std::vector<double> weights;               // weighted_shift
    int target_n = 1;                          // block_shift
    std::optional<ComplexMatrix> block_a;      // block_shift (default [[2,1],[1,1]])
    std::optional<ComplexMatrix> block_b;      // block_shift (default diag(1,2))
    Complex eigenvalue = 1.0;                  // jordan
    std::size_t rank_deficit = 0;              // dense_random
    std::vector<OperatorSpec> summands;        // direct_sum
};

namespace rng {

inline Complex gaussian(std::mt19937_64& gen) {
    std::normal_distribution<double> dist(0.0, 1.0);
    const double re = dist(gen);
    const double im = dist(gen);
    return Complex(re, im) / std::sqrt(2.0);
}

inline ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols,
                                     std::mt19937_64& gen) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = gaussian(gen);
    return m;
}

}  // namespace rng

// Shift with T e_i = w_i e_(i+1) and T e_d = 0; the modulus is the diagonal
// matrix diag(w_1..w_(d-1), 0), so the operator is n-centered for every n.
inline ComplexMatrix weighted_shift(const std::vector<double>& weights) {
    if (weights.empty()) throw KernelError("weighted_shift needs >= 1 weight");
    for (double w : weights)
        if (w < 0.0) throw KernelError("weighted_shift weights must be >= 0");
    const std::size_t d = weights.size() + 1;
    ComplexMatrix t(d, d);
    for (std::size_t i = 0; i + 1 < d; ++i) t(i + 1, i) = weights[i];
    return t;
}

inline ComplexMatrix unitary_random(std::size_t d, std::uint64_t seed) {
    if (d < 1) throw KernelError("dimension must be >= 1");
    std::mt19937_64 gen(seed);
    Eigen::MatrixXcd g = rng::gaussian_matrix(d, d, gen).map();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity so the result is a deterministic Haar sample.
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
        const Complex rii = r(i, i);
        const Complex phase = std::abs(rii) > 0.0 ? rii / std::abs(rii) : 1.0;
        q.col(i) *= phase;
    }
    return ComplexMatrix::from_eigen(q);
}

inline ComplexMatrix psd_random(std::size_t d, std::uint64_t seed) {
    if (d < 1) throw KernelError("dimension must be >= 1");
    std::mt19937_64 gen(seed);
    const ComplexMatrix g = rng::gaussian_matrix(d, d, gen);
    ComplexMatrix a = g * g.adjoint();
    a *= Complex(1.0 / static_cast<double>(d), 0.0);
    Eigen::MatrixXcd h = a.map();
    h = (h + h.adjoint().eval()) * 0.5;
    return ComplexMatrix::from_eigen(h);
}

// W diag(lambda) W* with W unitary and lambda complex: a normal operator,
// centered to every order.
inline ComplexMatrix quasinormal(std::size_t d, std::uint64_t seed) {
    if (d < 1) throw KernelError("dimension must be >= 1");
    const ComplexMatrix w = unitary_random(d, seed);
    std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<Complex> lambda(d);
    for (Complex& l : lambda) l = rng::gaussian(gen);
    return w * ComplexMatrix::diagonal(lambda) * w.adjoint();
}

inline ComplexMatrix jordan(std::size_t d, Complex eigenvalue) {
    if (d < 1) throw KernelError("dimension must be >= 1");
    ComplexMatrix t(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        t(i, i) = eigenvalue;
        if (i + 1 < d) t(i, i + 1) = 1.0;
    }
    return t;
}

inline ComplexMatrix dense_random(std::size_t d, std::uint64_t seed,
                                  std::size_t rank_deficit = 0) {
    if (d < 1) throw KernelError("dimension must be >= 1");
    if (rank_deficit >= d) return ComplexMatrix(d, d);
    std::mt19937_64 gen(seed);
    if (rank_deficit == 0) return rng::gaussian_matrix(d, d, gen);
    const std::size_t r = d - rank_deficit;
    const ComplexMatrix left = rng::gaussian_matrix(d, r, gen);
    const ComplexMatrix right = rng::gaussian_matrix(r, d, gen);
    return left * right;
}

inline ComplexMatrix default_block_a() { return ComplexMatrix{{2.0, 1.0}, {1.0, 1.0}}; }
inline ComplexMatrix default_block_b() {
    return ComplexMatrix::diagonal(std::vector<double>{1.0, 2.0});
}

// The counterexample family: exactly (n+1)-centered and not (n+2)-centered.
//
// With m = n+3 blocks of size d, U is the block down-shift and
// |T| = blockdiag(A, I, ..., I, B, 0); T = U |T|. The conjugated commutators
// have blocks [P_i, P_(i+k)], which vanish for k <= n and contain the
// nonzero [A, B] at k = n+1. The zero last block makes U*U the range
// projection of |T|, so U really is the polar partial isometry.
//
// The guarantee is re-verified at construction by both oracles; a mismatch
// throws with the residuals included.
inline ComplexMatrix block_shift_family(int n,
                                        const ComplexMatrix& a = default_block_a(),
                                        const ComplexMatrix& b = default_block_b(),
                                        const ToleranceConfig& tol = {}) {
    if (n < 1) throw KernelError("block_shift_family requires n >= 1");
    a.require_square("block_shift_family");
    a.require_same_shape(b);
    const double comm = commutator(a, b).frobenius_norm();
    if (comm < tol.sep_tol * a.frobenius_norm() * b.frobenius_norm())
        throw KernelError("block_shift_family requires [A, B] != 0, got ||[A,B]|| = " +
                          std::to_string(comm));
    for (const ComplexMatrix* p : {&a, &b}) {
        const EighResult e = eigh(*p, tol);
        if (e.eigenvalues.front() <= 0.0)
            throw KernelError("block_shift_family blocks must be positive definite");
    }

    const std::size_t d = a.rows();
    const std::size_t m = static_cast<std::size_t>(n) + 3;
    ComplexMatrix shift(m * d, m * d);
    const ComplexMatrix eye = ComplexMatrix::identity(d);
    for (std::size_t i = 0; i + 1 < m; ++i)
        shift.set_block((i + 1) * d, i * d, eye);

    ComplexMatrix h(m * d, m * d);
    h.set_block(0, 0, a);
    for (std::size_t i = 1; i + 2 < m; ++i) h.set_block(i * d, i * d, eye);
    h.set_block((m - 2) * d, (m - 2) * d, b);
    // last diagonal block stays zero

    const ComplexMatrix t = shift * h;

    const CenteredReport rep = centered_report(t, n + 2, tol);
    if (rep.max_order_definitional != n + 1 || rep.max_order_commutator != n + 1) {
        std::string msg = "block_shift_family self-check failed: expected order " +
                          std::to_string(n + 1) + ", definitional " +
                          std::to_string(rep.max_order_definitional) +
                          ", commutator " + std::to_string(rep.max_order_commutator) +
                          "; step residuals:";
        for (const CenteredStep& s : rep.per_k) {
            msg += " k=" + std::to_string(s.k) + " def=" +
                   std::to_string(s.definitional ? s.definitional->ratio() : -1.0) +
                   " comm=" +
                   std::to_string(s.commutator ? s.commutator->ratio() : -1.0);
        }
        throw KernelError(msg);
    }
    return t;
}

inline ComplexMatrix build(const OperatorSpec& spec) {
    switch (spec.family) {
        case OperatorFamily::identity:
            return ComplexMatrix::identity(spec.dim);
        case OperatorFamily::unitary_random:
            return unitary_random(spec.dim, spec.seed);
        case OperatorFamily::psd_random:
            return psd_random(spec.dim, spec.seed);
        case OperatorFamily::quasinormal:
            return quasinormal(spec.dim, spec.seed);
        case OperatorFamily::weighted_shift:
            return weighted_shift(spec.weights);
        case OperatorFamily::block_shift:
            return block_shift_family(spec.target_n,
                                      spec.block_a ? *spec.block_a : default_block_a(),
                                      spec.block_b ? *spec.block_b : default_block_b());
        case OperatorFamily::jordan:
            return jordan(spec.dim, spec.eigenvalue);
        case OperatorFamily::direct_sum: {
            std::vector<ComplexMatrix> parts;
            parts.reserve(spec.summands.size());
            for (const OperatorSpec& s : spec.summands) parts.push_back(build(s));
            return direct_sum(parts);
        }
        case OperatorFamily::dense_random:
            return dense_random(spec.dim, spec.seed, spec.rank_deficit);
    }
    throw KernelError("unhandled operator family");
}

}  // namespace oplab
