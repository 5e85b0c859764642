// Tolerance bands and three-valued verdicts.
//
// Exact operator identities are tested numerically against a banded policy:
// a residual lands in the zero band (holds), the nonzero band (fails), or
// the gap between them (indeterminate). Indeterminate is surfaced, never
// silently resolved to either side.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace oplab {

struct ToleranceConfig {
    double rank_rtol = 1e-10;  // relative singular-value cutoff
    double zero_tol = 1e-8;    // residual <= zero_tol*scale  => zero
    double sep_tol = 1e-4;     // residual >= sep_tol*scale   => nonzero

    void validate() const {
        if (!(rank_rtol >= 0.0 && rank_rtol < 1.0))
            throw std::invalid_argument("rank_rtol must lie in [0, 1)");
        if (!(zero_tol > 0.0 && zero_tol < sep_tol))
            throw std::invalid_argument("require 0 < zero_tol < sep_tol");
    }
};

enum class VerdictValue { holds, fails, indeterminate };

inline const char* to_string(VerdictValue v) {
    switch (v) {
        case VerdictValue::holds: return "holds";
        case VerdictValue::fails: return "fails";
        default: return "indeterminate";
    }
}

// Outcome of one banded zero-test: residual against zero_tol*scale and
// sep_tol*scale.
struct Verdict {
    VerdictValue value = VerdictValue::indeterminate;
    double residual = 0.0;
    double scale = 1.0;

    bool holds() const { return value == VerdictValue::holds; }
    bool fails() const { return value == VerdictValue::fails; }
    bool indeterminate() const { return value == VerdictValue::indeterminate; }

    // Scaled residual; the quantity the bands act on.
    double ratio() const { return scale > 0.0 ? residual / scale : residual; }
};

// Verdict that `residual` is zero at scale `scale`.
inline Verdict classify_zero(double residual, double scale,
                             const ToleranceConfig& tol) {
    Verdict v;
    v.residual = residual;
    v.scale = scale;
    const double z = tol.zero_tol * scale;
    const double s = tol.sep_tol * scale;
    if (residual <= z)
        v.value = VerdictValue::holds;
    else if (residual >= s)
        v.value = VerdictValue::fails;
    else
        v.value = VerdictValue::indeterminate;
    return v;
}

inline Verdict trivially_holds() { return Verdict{VerdictValue::holds, 0.0, 1.0}; }

// Conjunction: fails dominates, then indeterminate. Residual of the result
// is the worst scaled residual seen, re-expressed at scale 1.
inline Verdict combine_all(std::span<const Verdict> parts) {
    Verdict out = trivially_holds();
    for (const Verdict& p : parts) {
        out.residual = std::max(out.residual, p.ratio());
        if (p.fails())
            out.value = VerdictValue::fails;
        else if (p.indeterminate() && !out.fails())
            out.value = VerdictValue::indeterminate;
    }
    return out;
}

inline Verdict combine_all(const std::vector<Verdict>& parts) {
    return combine_all(std::span<const Verdict>(parts));
}

// Disjunction (existence over a family): holds dominates, then
// indeterminate. Residual is the best scaled residual seen.
inline Verdict combine_any(std::span<const Verdict> parts) {
    Verdict out{VerdictValue::fails, std::numeric_limits<double>::infinity(), 1.0};
    if (parts.empty()) return trivially_holds();
    for (const Verdict& p : parts) {
        out.residual = std::min(out.residual, p.ratio());
        if (p.holds())
            out.value = VerdictValue::holds;
        else if (p.indeterminate() && !out.holds())
            out.value = VerdictValue::indeterminate;
    }
    return out;
}

inline Verdict combine_any(const std::vector<Verdict>& parts) {
    return combine_any(std::span<const Verdict>(parts));
}

// Two verdicts disagree when one decisively holds and the other decisively
// fails; indeterminate never counts as disagreement.
inline bool verdicts_agree(const Verdict& a, const Verdict& b) {
    return !((a.holds() && b.fails()) || (a.fails() && b.holds()));
}

// A named verdict, the building block of theorem reports.
struct ConditionResult {
    std::string label;
    Verdict verdict;
};

}  // namespace oplab
