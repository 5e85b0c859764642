// n-centered operators: T^k = U^k |T^k| is the polar decomposition for all
// k = 1..n.
//
// Two independent decision routes are kept side by side:
//   definitional — is_polar_pair(T^k, U^k) for each power;
//   commutator   — [U^j |T| (U^j)*, |T|] = 0 for j = 1..n-1.
//
// Index mapping, pinned once here because it is the easiest place to slip:
// the commutator characterization says T is (n+1)-centered iff the
// commutators vanish for j = 1..n. A CenteredReport entry at k therefore
// carries, on the commutator side, the obstruction with index j = k-1
// (trivial at k = 1, where centeredness is polar-decomposition existence).
// Both entries at k speak about the step from (k-1)- to k-centered, and the
// cumulative verdicts up to k decide "T is k-centered" by each route.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "oplab/kernel.hpp"
#include "oplab/matrix.hpp"
#include "oplab/polar.hpp"
#include "oplab/tolerance.hpp"

namespace oplab {

// [T*T, TT*] = 0; equivalent to 2-centeredness when T = U|T| exists.
inline Verdict is_binormal(const ComplexMatrix& t, const ToleranceConfig& tol = {}) {
    t.require_square("is_binormal");
    return commutes(t.adjoint() * t, t * t.adjoint(), tol);
}

struct CenteredStep {
    int k = 0;
    std::optional<Verdict> definitional;  // is_polar_pair(T^k, U^k)
    std::optional<Verdict> commutator;    // [U^(k-1)|T|(U^(k-1))*, |T|] = 0
};

struct CenteredReport {
    int n_requested = 0;
    std::vector<CenteredStep> per_k;
    int max_order_definitional = -1;  // -1: route not evaluated
    int max_order_commutator = -1;
    bool agreement = true;
    bool truncated_indeterminate = false;

    // Cumulative verdict that T is m-centered by the definitional route.
    Verdict definitional_up_to(int m) const {
        std::vector<Verdict> parts;
        for (const CenteredStep& s : per_k)
            if (s.k <= m && s.definitional) parts.push_back(*s.definitional);
        return combine_all(parts);
    }
    Verdict commutator_up_to(int m) const {
        std::vector<Verdict> parts;
        for (const CenteredStep& s : per_k)
            if (s.k <= m && s.commutator) parts.push_back(*s.commutator);
        return combine_all(parts);
    }
};

namespace detail {

// Largest m <= n with every step verdict up to m holding; an indeterminate
// step truncates the scan and is flagged rather than resolved.
inline int cumulative_order(const std::vector<Verdict>& steps, bool* truncated) {
    int order = 0;
    for (const Verdict& v : steps) {
        if (v.holds()) {
            ++order;
        } else {
            if (v.indeterminate() && truncated) *truncated = true;
            break;
        }
    }
    return order;
}

inline void refresh_agreement(CenteredReport& rep) {
    if (rep.max_order_definitional < 0 || rep.max_order_commutator < 0) {
        rep.agreement = true;
        return;
    }
    rep.agreement = true;
    for (const CenteredStep& s : rep.per_k) {
        const Verdict d = rep.definitional_up_to(s.k);
        const Verdict c = rep.commutator_up_to(s.k);
        if (!verdicts_agree(d, c)) rep.agreement = false;
    }
}

}  // namespace detail

// Definitional route: checks is_polar_pair(T^k, U^k) for k = 1..n.
// k = 1 holds by construction of polar_decompose.
inline CenteredReport is_n_centered_definitional(const ComplexMatrix& t, int n,
                                                 const ToleranceConfig& tol = {}) {
    if (n < 1) throw KernelError("centered order must be >= 1");
    const PolarForm pf = polar_decompose(t, tol);
    CenteredReport rep;
    rep.n_requested = n;
    std::vector<Verdict> steps;
    ComplexMatrix tk = t;
    ComplexMatrix uk = pf.u;
    for (int k = 1; k <= n; ++k) {
        if (k > 1) {
            tk = tk * t;
            uk = uk * pf.u;
        }
        CenteredStep step;
        step.k = k;
        step.definitional = is_polar_pair(tk, uk, tol);
        steps.push_back(*step.definitional);
        rep.per_k.push_back(std::move(step));
    }
    rep.max_order_definitional =
        detail::cumulative_order(steps, &rep.truncated_indeterminate);
    return rep;
}

// Commutator route: for k >= 2 the step verdict is
// commutes(U^(k-1) |T| (U^(k-1))*, |T|); k = 1 is polar-decomposition
// existence, automatic in finite dimension.
inline CenteredReport is_n_centered_commutator(const ComplexMatrix& t, int n,
                                               const ToleranceConfig& tol = {}) {
    if (n < 1) throw KernelError("centered order must be >= 1");
    const PolarForm pf = polar_decompose(t, tol);
    const ComplexMatrix& h = pf.modulus;
    CenteredReport rep;
    rep.n_requested = n;
    std::vector<Verdict> steps;
    ComplexMatrix uj = pf.u;  // U^(k-1) while building step k
    for (int k = 1; k <= n; ++k) {
        CenteredStep step;
        step.k = k;
        if (k == 1) {
            step.commutator = trivially_holds();
        } else {
            if (k > 2) uj = uj * pf.u;
            step.commutator = commutes(uj * h * uj.adjoint(), h, tol);
        }
        steps.push_back(*step.commutator);
        rep.per_k.push_back(std::move(step));
    }
    rep.max_order_commutator =
        detail::cumulative_order(steps, &rep.truncated_indeterminate);
    return rep;
}

// Both routes merged into one report, with the per-k agreement of the
// cumulative k-centered decisions.
inline CenteredReport centered_report(const ComplexMatrix& t, int n,
                                      const ToleranceConfig& tol = {}) {
    CenteredReport def = is_n_centered_definitional(t, n, tol);
    const CenteredReport com = is_n_centered_commutator(t, n, tol);
    for (std::size_t i = 0; i < def.per_k.size(); ++i)
        def.per_k[i].commutator = com.per_k[i].commutator;
    def.max_order_commutator = com.max_order_commutator;
    def.truncated_indeterminate |= com.truncated_indeterminate;
    detail::refresh_agreement(def);
    return def;
}

// Two-parameter characterization: [U^k |T|^alpha (U^k)*, |T|^beta] = 0 for
// k = 1..n, which is equivalent to T being (n+1)-centered, for any fixed
// alpha, beta > 0.
inline Verdict parametrized_centered_test(const ComplexMatrix& t, int n,
                                          double alpha, double beta,
                                          const ToleranceConfig& tol = {}) {
    if (!(alpha > 0.0 && beta > 0.0))
        throw KernelError("parametrized_centered_test requires alpha, beta > 0");
    if (n < 1) throw KernelError("centered order must be >= 1");
    const PolarForm pf = polar_decompose(t, tol);
    const ComplexMatrix ha = psd_power(pf.modulus, alpha, tol);
    const ComplexMatrix hb = psd_power(pf.modulus, beta, tol);
    std::vector<Verdict> parts;
    ComplexMatrix uk = pf.u;
    for (int k = 1; k <= n; ++k) {
        if (k > 1) uk = uk * pf.u;
        parts.push_back(commutes(uk * ha * uk.adjoint(), hb, tol));
    }
    return combine_all(parts);
}

// P_k(T) = U^k (U^k)* and P_k(T*) = (U^k)* U^k, with projection verdicts.
struct PkPair {
    ComplexMatrix p_t;
    ComplexMatrix p_tstar;
    int k = 0;
    Verdict p_t_projection;
    Verdict p_tstar_projection;
};

inline PkPair pk_projections(const ComplexMatrix& u, int k,
                             const ToleranceConfig& tol = {}) {
    u.require_square("pk_projections");
    if (k < 1) throw KernelError("pk_projections requires k >= 1");
    PkPair out;
    out.k = k;
    const ComplexMatrix uk = matrix_power(u, static_cast<unsigned>(k));
    out.p_t = uk * uk.adjoint();
    out.p_tstar = uk.adjoint() * uk;
    out.p_t_projection = is_projection(out.p_t, tol);
    out.p_tstar_projection = is_projection(out.p_tstar, tol);
    return out;
}

// A hypothesis-gated batch of identity checks.
struct LemmaCheck {
    Verdict precondition;  // the hypothesis, decided by the definitional oracle
    std::vector<ConditionResult> checks;
    bool applicable() const { return precondition.holds(); }
    Verdict overall() const {
        std::vector<Verdict> parts;
        parts.reserve(checks.size());
        for (const ConditionResult& c : checks) parts.push_back(c.verdict);
        return combine_all(parts);
    }
};

// For (n+1)-centered T: [P_k(T*), |T|] = [P_k(T), |T*|] = 0 for k = 1..n+1.
inline LemmaCheck check_lemma_3_2(const ComplexMatrix& t, int n,
                                  const ToleranceConfig& tol = {}) {
    LemmaCheck out;
    out.precondition = is_n_centered_definitional(t, n + 1, tol)
                           .definitional_up_to(n + 1);
    const PolarForm pf = polar_decompose(t, tol);
    const ComplexMatrix hstar = adjoint_modulus(t, tol);
    ComplexMatrix uk = pf.u;
    for (int k = 1; k <= n + 1; ++k) {
        if (k > 1) uk = uk * pf.u;
        out.checks.push_back({"k=" + std::to_string(k) + " [P_k(T*),|T|]",
                              commutes(uk.adjoint() * uk, pf.modulus, tol)});
        out.checks.push_back({"k=" + std::to_string(k) + " [P_k(T),|T*|]",
                              commutes(uk * uk.adjoint(), hstar, tol)});
    }
    return out;
}

// For (n+1)-centered T: U^k |T|^alpha (U^k)* = (U^k |T| (U^k)*)^alpha for
// k = 1..n+1.
inline LemmaCheck check_lemma_3_3(const ComplexMatrix& t, int n, double alpha,
                                  const ToleranceConfig& tol = {}) {
    if (!(alpha > 0.0)) throw KernelError("check_lemma_3_3 requires alpha > 0");
    LemmaCheck out;
    out.precondition = is_n_centered_definitional(t, n + 1, tol)
                           .definitional_up_to(n + 1);
    const PolarForm pf = polar_decompose(t, tol);
    const ComplexMatrix ha = psd_power(pf.modulus, alpha, tol);
    ComplexMatrix uk = pf.u;
    for (int k = 1; k <= n + 1; ++k) {
        if (k > 1) uk = uk * pf.u;
        const ComplexMatrix lhs = uk * ha * uk.adjoint();
        const ComplexMatrix rhs =
            psd_power(uk * pf.modulus * uk.adjoint(), alpha, tol);
        out.checks.push_back(
            {"k=" + std::to_string(k), matrices_equal(lhs, rhs, tol)});
    }
    return out;
}

// For (n+1)-centered T: [U^k |T|^alpha (U^k)*, U*U] = 0 for k = 1..n.
inline LemmaCheck check_remark_3_5(const ComplexMatrix& t, int n, double alpha,
                                   const ToleranceConfig& tol = {}) {
    if (!(alpha > 0.0)) throw KernelError("check_remark_3_5 requires alpha > 0");
    LemmaCheck out;
    out.precondition = is_n_centered_definitional(t, n + 1, tol)
                           .definitional_up_to(n + 1);
    const PolarForm pf = polar_decompose(t, tol);
    const ComplexMatrix ha = psd_power(pf.modulus, alpha, tol);
    const ComplexMatrix init = pf.u.adjoint() * pf.u;
    ComplexMatrix uk = pf.u;
    for (int k = 1; k <= n; ++k) {
        if (k > 1) uk = uk * pf.u;
        out.checks.push_back({"k=" + std::to_string(k),
                              commutes(uk * ha * uk.adjoint(), init, tol)});
    }
    return out;
}

struct MaxOrderResult {
    int order = 0;
    CenteredReport report;
};

// Largest n <= k_max with T n-centered by the definitional route. The scan
// stops at the first step that does not hold; an indeterminate stop is
// flagged on the report.
inline MaxOrderResult max_centered_order(const ComplexMatrix& t, int k_max,
                                         const ToleranceConfig& tol = {}) {
    if (k_max < 1) throw KernelError("max_centered_order requires k_max >= 1");
    MaxOrderResult out;
    out.report = is_n_centered_definitional(t, k_max, tol);
    out.order = out.report.max_order_definitional;
    return out;
}

}  // namespace oplab
