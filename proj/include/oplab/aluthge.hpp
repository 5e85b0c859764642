// Generalized Aluthge transforms and their iteration.
//
//   transform:  T_ab = |T|^a U |T|^b            (a, b > 0; a = b = 1/2 is the
//                                                classical transform)
//   chain:      t_0 = T, t_{k+1} = transform of t_k with fresh polar forms
//   u-chain:    u_0 = U, u_k = u_{k-1}* u_{k-1}^2
//
// Chain polar forms are recomputed per step from scratch: the claim that the
// u-chain matches the per-step polar isometry is a check, not a construction.
// The equivalence verifiers below evaluate each side of a characterization
// independently and report whether the verdicts agree.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "oplab/centered.hpp"
#include "oplab/kernel.hpp"
#include "oplab/matrix.hpp"
#include "oplab/polar.hpp"
#include "oplab/tolerance.hpp"

namespace oplab {

struct AluthgeParams {
    double alpha = 0.5;
    double beta = 0.5;

    void validate() const {
        if (!(alpha > 0.0 && beta > 0.0))
            throw KernelError("Aluthge parameters must be positive");
    }
};

// Default parameter grid {0.3, 0.5, 1, 2}^2: covers alpha+beta below, at and
// above 1, plus asymmetric pairs.
inline std::vector<AluthgeParams> default_param_grid() {
    static const double vals[] = {0.3, 0.5, 1.0, 2.0};
    std::vector<AluthgeParams> grid;
    for (double a : vals)
        for (double b : vals) grid.push_back({a, b});
    return grid;
}

// |T|^alpha U |T|^beta.
inline ComplexMatrix aluthge_transform(const ComplexMatrix& t,
                                       const AluthgeParams& params,
                                       const ToleranceConfig& tol = {}) {
    params.validate();
    const PolarForm pf = polar_decompose(t, tol);
    return psd_power(pf.modulus, params.alpha, tol) * pf.u *
           psd_power(pf.modulus, params.beta, tol);
}

// U~ = U* U^2.
inline ComplexMatrix u_tilde(const ComplexMatrix& u) {
    u.require_square("u_tilde");
    return u.adjoint() * u * u;
}

// (U~)^n = U* U^(n+1), unconditional for partial isometries.
struct UTildePowerCheck {
    Verdict partial_isometry;
    std::vector<Verdict> per_n;   // n = 1..n_max
    bool informational = false;   // input was not a partial isometry
    Verdict overall() const { return combine_all(per_n); }
};

inline UTildePowerCheck check_u_tilde_power(const ComplexMatrix& u, int n_max,
                                            const ToleranceConfig& tol = {}) {
    u.require_square("check_u_tilde_power");
    if (n_max < 1) throw KernelError("check_u_tilde_power requires n >= 1");
    UTildePowerCheck out;
    out.partial_isometry =
        classify_zero(distance_frobenius(u * u.adjoint() * u, u),
                      1.0 + u.frobenius_norm(), tol);
    out.informational = !out.partial_isometry.holds();
    const ComplexMatrix ut = u_tilde(u);
    ComplexMatrix lhs = ut;                 // (U~)^n
    ComplexMatrix upow = u * u;             // U^(n+1)
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1) {
            lhs = lhs * ut;
            upow = upow * u;
        }
        out.per_n.push_back(matrices_equal(lhs, u.adjoint() * upow, tol));
    }
    return out;
}

// Closed forms of the transform's moduli, valid under binormality:
//   |T_ab|  = U* |T|^a U |T|^b
//   |T_ab*| = |T|^a |T*|^b
// The transform and both formulas are computed unconditionally; the equality
// verdicts are asserted only under the binormality hypothesis.
struct ModulusClosedForms {
    ComplexMatrix direct;         // modulus(aluthge_transform(T))
    ComplexMatrix formula_m;      // U* |T|^a U |T|^b
    ComplexMatrix formula_mstar;  // |T|^a |T*|^b
    Verdict binormal;
    Verdict verdict_m;      // direct vs formula_m
    Verdict verdict_mstar;  // modulus of the adjoint transform vs formula_mstar
};

inline ModulusClosedForms aluthge_modulus_closed_forms(
    const ComplexMatrix& t, const AluthgeParams& params,
    const ToleranceConfig& tol = {}) {
    params.validate();
    const PolarForm pf = polar_decompose(t, tol);
    const ComplexMatrix ha = psd_power(pf.modulus, params.alpha, tol);
    const ComplexMatrix hb = psd_power(pf.modulus, params.beta, tol);
    const ComplexMatrix transformed = ha * pf.u * hb;

    ModulusClosedForms out;
    out.direct = modulus(transformed, tol);
    out.formula_m = pf.u.adjoint() * ha * pf.u * hb;
    out.formula_mstar = ha * psd_power(adjoint_modulus(t, tol), params.beta, tol);
    out.binormal = is_binormal(t, tol);
    out.verdict_m = matrices_equal(out.direct, out.formula_m, tol);
    out.verdict_mstar =
        matrices_equal(modulus(transformed.adjoint(), tol), out.formula_mstar, tol);
    return out;
}

// Step norms below this absolute floor end the iteration at the zero
// operator, a valid fixed point reached by nilpotent inputs.
inline constexpr double kChainCollapseFloor = 1e-13;

struct AluthgeStep {
    ComplexMatrix t;
    PolarForm polar;
};

struct AluthgeChain {
    AluthgeParams params;
    std::vector<AluthgeStep> steps;      // k = 0..n
    std::vector<ComplexMatrix> u_chain;  // k = 0..n, the u-chain recursion
    std::optional<int> collapsed_at;     // first k with ||t_k|| below the floor
    bool rank_indeterminate = false;     // any step had an ambiguous rank cut
};

namespace detail {

// Shared chain driver. When `normalize` is set every step is rescaled to
// unit Frobenius norm; the transform is positively homogeneous, so the
// normalized step k is exactly t_k / ||t_k|| and every scale-invariant
// property (binormality, polar structure, the u-chain) is unchanged.
inline AluthgeChain build_chain(const ComplexMatrix& t, const AluthgeParams& params,
                                int n, bool normalize, const ToleranceConfig& tol) {
    params.validate();
    if (n < 0) throw KernelError("iterated_aluthge requires n >= 0");
    t.require_square("iterated_aluthge");
    AluthgeChain chain;
    chain.params = params;

    ComplexMatrix current = t;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            const AluthgeStep& prev = chain.steps.back();
            if (chain.collapsed_at) {
                current = ComplexMatrix(t.rows(), t.cols());
            } else {
                current = psd_power(prev.polar.modulus, params.alpha, tol) *
                          prev.polar.u *
                          psd_power(prev.polar.modulus, params.beta, tol);
            }
        }
        const double norm = current.frobenius_norm();
        if (!current.all_finite() || norm > 1e100)
            throw KernelError("Aluthge chain overflow at step " + std::to_string(k) +
                              "; rescale the input or iterate less");
        if (!chain.collapsed_at && norm < kChainCollapseFloor)
            chain.collapsed_at = k;
        if (normalize && !chain.collapsed_at)
            current *= Complex(1.0 / norm, 0.0);
        AluthgeStep step;
        step.t = current;
        step.polar = polar_decompose(current, tol);
        chain.rank_indeterminate |= step.polar.rank_indeterminate;
        chain.steps.push_back(std::move(step));

        if (k == 0) {
            chain.u_chain.push_back(chain.steps.front().polar.u);
        } else {
            const ComplexMatrix& prev_u = chain.u_chain.back();
            chain.u_chain.push_back(prev_u.adjoint() * prev_u * prev_u);
        }
    }
    return chain;
}

}  // namespace detail

// Builds t_0..t_n and the u-chain. Once a step collapses to zero the
// remaining steps are exact zero matrices; the u-chain recursion continues
// algebraically either way.
inline AluthgeChain iterated_aluthge(const ComplexMatrix& t,
                                     const AluthgeParams& params, int n,
                                     const ToleranceConfig& tol = {}) {
    return detail::build_chain(t, params, n, /*normalize=*/false, tol);
}

// Scale-free chain: each step divided by its norm. Used by the theorem
// verifiers, whose chain conditions are all invariant under positive
// scaling; keeps deep chains with ||T|| far from 1 inside double range.
inline AluthgeChain iterated_aluthge_normalized(const ComplexMatrix& t,
                                                const AluthgeParams& params, int n,
                                                const ToleranceConfig& tol = {}) {
    return detail::build_chain(t, params, n, /*normalize=*/true, tol);
}

// For (n+1)-centered T and 1 <= k <= n+2:
//   U^k |T_ab| (U^k)* = U^k |T|^b (U^k)* . U^(k-1) |T|^a (U^(k-1))*.
inline LemmaCheck check_lemma_4_1(const ComplexMatrix& t, int n,
                                  const AluthgeParams& params,
                                  const ToleranceConfig& tol = {}) {
    params.validate();
    LemmaCheck out;
    out.precondition =
        is_n_centered_definitional(t, n + 1, tol).definitional_up_to(n + 1);
    const PolarForm pf = polar_decompose(t, tol);
    const ComplexMatrix ha = psd_power(pf.modulus, params.alpha, tol);
    const ComplexMatrix hb = psd_power(pf.modulus, params.beta, tol);
    const ComplexMatrix ht = modulus(ha * pf.u * hb, tol);
    ComplexMatrix uk = pf.u;
    ComplexMatrix uk_prev = ComplexMatrix::identity(t.rows());
    for (int k = 1; k <= n + 2; ++k) {
        if (k > 1) {
            uk_prev = uk_prev * pf.u;
            uk = uk * pf.u;
        }
        const ComplexMatrix lhs = uk * ht * uk.adjoint();
        const ComplexMatrix rhs =
            (uk * hb * uk.adjoint()) * (uk_prev * ha * uk_prev.adjoint());
        out.checks.push_back(
            {"k=" + std::to_string(k), matrices_equal(lhs, rhs, tol)});
    }
    return out;
}

// For (n+1)-centered T and 1 <= k <= n, powers of U~ = U*U^2 can replace
// powers of U on the left of |T_ab| . (...) . |T_ab|:
//   (U~)^k |T_ab| ((U~)^k)* . |T_ab| = U^k |T_ab| (U^k)* . |T_ab|.
inline LemmaCheck check_lemma_4_4(const ComplexMatrix& t, int n,
                                  const AluthgeParams& params,
                                  const ToleranceConfig& tol = {}) {
    params.validate();
    LemmaCheck out;
    out.precondition =
        is_n_centered_definitional(t, n + 1, tol).definitional_up_to(n + 1);
    const PolarForm pf = polar_decompose(t, tol);
    const ComplexMatrix ha = psd_power(pf.modulus, params.alpha, tol);
    const ComplexMatrix hb = psd_power(pf.modulus, params.beta, tol);
    const ComplexMatrix ht = modulus(ha * pf.u * hb, tol);
    const ComplexMatrix ut = u_tilde(pf.u);
    ComplexMatrix uk = pf.u;
    ComplexMatrix utk = ut;
    for (int k = 1; k <= n; ++k) {
        if (k > 1) {
            uk = uk * pf.u;
            utk = utk * ut;
        }
        const ComplexMatrix lhs = utk * ht * utk.adjoint() * ht;
        const ComplexMatrix rhs = uk * ht * uk.adjoint() * ht;
        out.checks.push_back(
            {"k=" + std::to_string(k), matrices_equal(lhs, rhs, tol)});
    }
    return out;
}

// Record of one equivalence characterization: every condition evaluated
// independently, then compared. `skipped` marks an unmet hypothesis, which
// is distinct from the conditions failing together (that is agreement).
struct EquivalenceVerdict {
    std::string theorem;
    std::vector<ConditionResult> conditions;
    bool agreement = true;
    std::optional<int> truncation;
    std::vector<AluthgeParams> grid;
    bool skipped = false;

    bool any_indeterminate() const {
        for (const ConditionResult& c : conditions)
            if (c.verdict.indeterminate()) return true;
        return false;
    }
};

namespace detail {

inline void refresh_agreement(EquivalenceVerdict& ev) {
    ev.agreement = true;
    for (std::size_t i = 0; i < ev.conditions.size(); ++i)
        for (std::size_t j = i + 1; j < ev.conditions.size(); ++j)
            if (!verdicts_agree(ev.conditions[i].verdict, ev.conditions[j].verdict))
                ev.agreement = false;
}

// Commutator block shared by several characterizations:
// [U^k M (U^k)*, M] = 0 for k = k_lo..k_hi.
inline Verdict conjugated_commutators(const ComplexMatrix& u,
                                      const ComplexMatrix& m, int k_lo, int k_hi,
                                      const ToleranceConfig& tol) {
    std::vector<Verdict> parts;
    ComplexMatrix uk = ComplexMatrix::identity(u.rows());
    for (int k = 1; k <= k_hi; ++k) {
        uk = uk * u;
        if (k < k_lo) continue;
        parts.push_back(commutes(uk * m * uk.adjoint(), m, tol));
    }
    return combine_all(parts);
}

}  // namespace detail

// Characterization of (n+1)-centeredness for binormal T, n >= 2:
//   (i)   T is (n+1)-centered;
//   (ii)  [U^k|T|(U^k)*, |T|] = 0 for 2 <= k <= n;
//   (iii) for every grid point, [U^k|T_ab|(U^k)*, |T_ab|] = 0, 1 <= k <= n-1;
//   (iv)  the same for some grid point.
// Binormality is the hypothesis; a non-binormal input yields skipped = true.
inline EquivalenceVerdict verify_theorem_4_3(
    const ComplexMatrix& t, int n, const std::vector<AluthgeParams>& grid,
    const ToleranceConfig& tol = {}) {
    if (n < 2) throw KernelError("verify_theorem_4_3 requires n >= 2");
    EquivalenceVerdict ev;
    ev.theorem = "thm43";
    ev.grid = grid;
    const Verdict binormal = is_binormal(t, tol);
    if (!binormal.holds()) {
        ev.skipped = true;
        ev.conditions.push_back({"hypothesis: binormal", binormal});
        return ev;
    }

    const PolarForm pf = polar_decompose(t, tol);
    ev.conditions.push_back(
        {"(i) (n+1)-centered",
         is_n_centered_definitional(t, n + 1, tol).definitional_up_to(n + 1)});
    ev.conditions.push_back(
        {"(ii) modulus commutators k=2..n",
         detail::conjugated_commutators(pf.u, pf.modulus, 2, n, tol)});

    std::vector<Verdict> per_point;
    for (const AluthgeParams& p : grid) {
        const ComplexMatrix ht = modulus(aluthge_transform(t, p, tol), tol);
        per_point.push_back(
            detail::conjugated_commutators(pf.u, ht, 1, n - 1, tol));
    }
    ev.conditions.push_back(
        {"(iii) transform commutators, all grid points", combine_all(per_point)});
    ev.conditions.push_back(
        {"(iv) transform commutators, some grid point", combine_any(per_point)});
    detail::refresh_agreement(ev);
    return ev;
}

// Characterization via one transform step, n >= 1:
//   (i)   T is (n+1)-centered;
//   (ii)  T binormal and T_ab n-centered for every grid point;
//   (iii) T binormal and T_ab n-centered for some grid point.
inline EquivalenceVerdict verify_theorem_4_5(
    const ComplexMatrix& t, int n, const std::vector<AluthgeParams>& grid,
    const ToleranceConfig& tol = {}) {
    if (n < 1) throw KernelError("verify_theorem_4_5 requires n >= 1");
    EquivalenceVerdict ev;
    ev.theorem = "thm45";
    ev.grid = grid;
    ev.conditions.push_back(
        {"(i) (n+1)-centered",
         is_n_centered_definitional(t, n + 1, tol).definitional_up_to(n + 1)});

    const Verdict binormal = is_binormal(t, tol);
    std::vector<Verdict> per_point;
    for (const AluthgeParams& p : grid) {
        const ComplexMatrix transformed = aluthge_transform(t, p, tol);
        const Verdict centered = is_n_centered_definitional(transformed, n, tol)
                                     .definitional_up_to(n);
        per_point.push_back(
            combine_all(std::vector<Verdict>{binormal, centered}));
    }
    ev.conditions.push_back(
        {"(ii) binormal and transform n-centered, all grid points",
         combine_all(per_point)});
    ev.conditions.push_back(
        {"(iii) binormal and transform n-centered, some grid point",
         combine_any(per_point)});
    detail::refresh_agreement(ev);
    return ev;
}

// Characterization via the iterated chain, n >= 2:
//   (i)   T is (n+1)-centered;
//   (ii)  every chain step t_0..t_{n-1} is binormal, for every grid point;
//   (iii) the same for some grid point.
inline EquivalenceVerdict verify_theorem_5_1(
    const ComplexMatrix& t, int n, const std::vector<AluthgeParams>& grid,
    const ToleranceConfig& tol = {}) {
    if (n < 2) throw KernelError("verify_theorem_5_1 requires n >= 2");
    EquivalenceVerdict ev;
    ev.theorem = "thm51";
    ev.grid = grid;
    ev.conditions.push_back(
        {"(i) (n+1)-centered",
         is_n_centered_definitional(t, n + 1, tol).definitional_up_to(n + 1)});

    std::vector<Verdict> per_point;
    for (const AluthgeParams& p : grid) {
        const AluthgeChain chain = iterated_aluthge_normalized(t, p, n - 1, tol);
        std::vector<Verdict> steps;
        for (const AluthgeStep& s : chain.steps)
            steps.push_back(is_binormal(s.t, tol));
        per_point.push_back(combine_all(steps));
    }
    ev.conditions.push_back(
        {"(ii) chain steps binormal, all grid points", combine_all(per_point)});
    ev.conditions.push_back(
        {"(iii) chain steps binormal, some grid point", combine_any(per_point)});
    detail::refresh_agreement(ev);
    return ev;
}

// Characterization via the u-chain, n >= 1:
//   (i)   T is (n+1)-centered;
//   (ii)  t_k = u_k |t_k| is the polar decomposition for k = 1..n, every grid
//         point, with u_k from the u-chain recursion;
//   (iii) the same for some grid point.
// When (i) holds the closed form u_k = (U^k)* U^(k+1) is checked as well.
inline EquivalenceVerdict verify_theorem_5_3(
    const ComplexMatrix& t, int n, const std::vector<AluthgeParams>& grid,
    const ToleranceConfig& tol = {}) {
    if (n < 1) throw KernelError("verify_theorem_5_3 requires n >= 1");
    EquivalenceVerdict ev;
    ev.theorem = "thm53";
    ev.grid = grid;
    const Verdict centered =
        is_n_centered_definitional(t, n + 1, tol).definitional_up_to(n + 1);
    ev.conditions.push_back({"(i) (n+1)-centered", centered});

    std::vector<Verdict> per_point;
    std::optional<AluthgeChain> first_chain;
    for (const AluthgeParams& p : grid) {
        AluthgeChain chain = iterated_aluthge_normalized(t, p, n, tol);
        std::vector<Verdict> steps;
        for (int k = 1; k <= n; ++k)
            steps.push_back(is_polar_pair(chain.steps[static_cast<std::size_t>(k)].t,
                                          chain.u_chain[static_cast<std::size_t>(k)],
                                          tol));
        per_point.push_back(combine_all(steps));
        if (!first_chain) first_chain = std::move(chain);
    }
    ev.conditions.push_back(
        {"(ii) u-chain gives polar decompositions, all grid points",
         combine_all(per_point)});
    ev.conditions.push_back(
        {"(iii) u-chain gives polar decompositions, some grid point",
         combine_any(per_point)});

    if (centered.holds() && first_chain) {
        // u_k = (U^k)* U^(k+1); the u-chain depends only on the step-0 polar
        // form, so one grid point suffices.
        const ComplexMatrix& u = first_chain->steps.front().polar.u;
        std::vector<Verdict> parts;
        ComplexMatrix uk = u;
        ComplexMatrix uk1 = u * u;
        for (int k = 1; k <= n; ++k) {
            if (k > 1) {
                uk = uk * u;
                uk1 = uk1 * u;
            }
            parts.push_back(matrices_equal(
                first_chain->u_chain[static_cast<std::size_t>(k)],
                uk.adjoint() * uk1, tol));
        }
        ev.conditions.push_back({"u-chain closed form", combine_all(parts)});
    }
    detail::refresh_agreement(ev);
    return ev;
}

// Truncated characterization of centered operators: the eleven equivalent
// conditions with every "for all k" cut at k_max. The truncation level is
// recorded on the verdict.
inline EquivalenceVerdict verify_corollary_5_4(
    const ComplexMatrix& t, int k_max, const std::vector<AluthgeParams>& grid,
    const ToleranceConfig& tol = {}) {
    if (k_max < 2) throw KernelError("verify_corollary_5_4 requires k_max >= 2");
    EquivalenceVerdict ev;
    ev.theorem = "cor54";
    ev.grid = grid;
    ev.truncation = k_max;

    const PolarForm pf = polar_decompose(t, tol);
    const Verdict binormal = is_binormal(t, tol);

    // (i) centered, truncated to k_max-centered.
    ev.conditions.push_back(
        {"(i) centered",
         is_n_centered_definitional(t, k_max, tol).definitional_up_to(k_max)});

    // (ii)/(iii) two-parameter commutators for k = 1..k_max.
    {
        std::vector<Verdict> per_point;
        for (const AluthgeParams& p : grid)
            per_point.push_back(
                parametrized_centered_test(t, k_max, p.alpha, p.beta, tol));
        ev.conditions.push_back({"(ii) parameter commutators, all grid points",
                                 combine_all(per_point)});
        ev.conditions.push_back({"(iii) parameter commutators, some grid point",
                                 combine_any(per_point)});
    }

    // (iv)/(v) transform-modulus commutators for k = 1..k_max.
    {
        std::vector<Verdict> per_point;
        for (const AluthgeParams& p : grid) {
            const ComplexMatrix ht = modulus(aluthge_transform(t, p, tol), tol);
            per_point.push_back(
                detail::conjugated_commutators(pf.u, ht, 1, k_max, tol));
        }
        ev.conditions.push_back({"(iv) transform commutators, all grid points",
                                 combine_all(per_point)});
        ev.conditions.push_back({"(v) transform commutators, some grid point",
                                 combine_any(per_point)});
    }

    // (vi)/(vii) binormal and the transform centered (truncated).
    {
        std::vector<Verdict> per_point;
        for (const AluthgeParams& p : grid) {
            const Verdict centered =
                is_n_centered_definitional(aluthge_transform(t, p, tol), k_max, tol)
                    .definitional_up_to(k_max);
            per_point.push_back(
                combine_all(std::vector<Verdict>{binormal, centered}));
        }
        ev.conditions.push_back(
            {"(vi) binormal and transform centered, all grid points",
             combine_all(per_point)});
        ev.conditions.push_back(
            {"(vii) binormal and transform centered, some grid point",
             combine_any(per_point)});
    }

    // (viii)/(ix) chain steps 0..k_max binormal; (x)/(xi) u-chain polar
    // structure. One chain per grid point serves both pairs.
    {
        std::vector<Verdict> binormal_point;
        std::vector<Verdict> polar_point;
        for (const AluthgeParams& p : grid) {
            const AluthgeChain chain = iterated_aluthge_normalized(t, p, k_max, tol);
            std::vector<Verdict> steps;
            for (const AluthgeStep& s : chain.steps)
                steps.push_back(is_binormal(s.t, tol));
            binormal_point.push_back(combine_all(steps));

            std::vector<Verdict> polars;
            for (int k = 1; k <= k_max; ++k)
                polars.push_back(
                    is_polar_pair(chain.steps[static_cast<std::size_t>(k)].t,
                                  chain.u_chain[static_cast<std::size_t>(k)], tol));
            polar_point.push_back(combine_all(polars));
        }
        ev.conditions.push_back({"(viii) chain steps binormal, all grid points",
                                 combine_all(binormal_point)});
        ev.conditions.push_back({"(ix) chain steps binormal, some grid point",
                                 combine_any(binormal_point)});
        ev.conditions.push_back(
            {"(x) u-chain gives polar decompositions, all grid points",
             combine_all(polar_point)});
        ev.conditions.push_back(
            {"(xi) u-chain gives polar decompositions, some grid point",
             combine_any(polar_point)});
    }

    detail::refresh_agreement(ev);
    return ev;
}

}  // namespace oplab
