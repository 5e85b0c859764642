// JSON serialization for every exported type.
//
// Matrix file format, consumed and produced repo-wide:
//   {"rows": r, "cols": c, "data": [[re, im], ...]}   (row-major)
// Report serializers use nlohmann's ordered_json so field order is stable
// repeated runs produce byte-identical output.

#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oplab/aluthge.hpp"
#include "oplab/centered.hpp"
#include "oplab/generators.hpp"
#include "oplab/matrix.hpp"
#include "oplab/polar.hpp"
#include "oplab/tolerance.hpp"

namespace oplab {

using Json = nlohmann::ordered_json;

// Input errors carry a human-readable position when one is known.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Byte offset -> "line L, column C" for parse diagnostics.
inline std::string offset_to_position(const std::string& text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError("malformed JSON at " +
                      detail::offset_to_position(text, e.byte ? e.byte - 1 : 0) +
                      ": " + e.what());
    }
}

inline Json matrix_to_json(const ComplexMatrix& m) {
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    Json data = Json::array();
    for (const Complex& z : m.entries()) data.push_back({z.real(), z.imag()});
    j["data"] = std::move(data);
    return j;
}

inline ComplexMatrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
        !j.contains("data"))
        throw IoError("matrix object requires fields rows, cols, data");
    if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
        throw IoError("matrix rows/cols must be positive integers");
    const std::size_t rows = j["rows"].get<std::size_t>();
    const std::size_t cols = j["cols"].get<std::size_t>();
    if (rows == 0 || cols == 0) throw IoError("matrix rows/cols must be positive");
    const Json& data = j["data"];
    if (!data.is_array() || data.size() != rows * cols)
        throw IoError("matrix data must hold rows*cols = " +
                      std::to_string(rows * cols) + " entries, got " +
                      std::to_string(data.size()));
    std::vector<Complex> entries;
    entries.reserve(rows * cols);
    for (const Json& e : data) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw IoError("matrix entries must be [re, im] pairs");
        entries.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    try {
        return ComplexMatrix(rows, cols, std::move(entries));
    } catch (const KernelError& e) {
        throw IoError(e.what());
    }
}

inline ComplexMatrix parse_matrix_text(const std::string& text) {
    return matrix_from_json(parse_json_text(text));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ComplexMatrix read_matrix_file(const std::string& path) {
    return parse_matrix_text(read_file(path));
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
}

inline Json to_json(const Verdict& v) {
    Json j;
    j["value"] = to_string(v.value);
    j["residual"] = v.residual;
    j["scale"] = v.scale;
    return j;
}

inline Json to_json(const ToleranceConfig& tol) {
    Json j;
    j["rank_rtol"] = tol.rank_rtol;
    j["zero_tol"] = tol.zero_tol;
    j["sep_tol"] = tol.sep_tol;
    return j;
}

inline Json to_json(const PolarForm& pf) {
    Json j;
    j["u"] = matrix_to_json(pf.u);
    j["modulus"] = matrix_to_json(pf.modulus);
    j["rank"] = pf.rank;
    j["residual_factor"] = pf.residual_factor;
    j["residual_init"] = pf.residual_init;
    j["isometry_residual"] = pf.isometry_residual;
    j["rank_indeterminate"] = pf.rank_indeterminate;
    return j;
}

inline Json to_json(const CenteredReport& rep) {
    Json j;
    j["n_requested"] = rep.n_requested;
    Json per_k = Json::array();
    for (const CenteredStep& s : rep.per_k) {
        Json e;
        e["k"] = s.k;
        e["definitional"] = s.definitional ? to_json(*s.definitional) : Json(nullptr);
        e["commutator"] = s.commutator ? to_json(*s.commutator) : Json(nullptr);
        per_k.push_back(std::move(e));
    }
    j["per_k"] = std::move(per_k);
    j["max_order_definitional"] = rep.max_order_definitional >= 0
                                      ? Json(rep.max_order_definitional)
                                      : Json(nullptr);
    j["max_order_commutator"] =
        rep.max_order_commutator >= 0 ? Json(rep.max_order_commutator) : Json(nullptr);
    j["agreement"] = rep.agreement;
    j["truncated_indeterminate"] = rep.truncated_indeterminate;
    return j;
}

inline Json to_json(const EquivalenceVerdict& ev) {
    Json j;
    j["theorem"] = ev.theorem;
    Json conds = Json::array();
    for (const ConditionResult& c : ev.conditions) {
        Json e;
        e["label"] = c.label;
        e["verdict"] = to_string(c.verdict.value);
        e["residual"] = c.verdict.ratio();
        conds.push_back(std::move(e));
    }
    j["conditions"] = std::move(conds);
    j["agreement"] = ev.agreement;
    j["truncation"] = ev.truncation ? Json(*ev.truncation) : Json(nullptr);
    Json grid = Json::array();
    for (const AluthgeParams& p : ev.grid) grid.push_back({p.alpha, p.beta});
    j["grid"] = std::move(grid);
    j["skipped"] = ev.skipped;
    return j;
}

// Chain report: per-step polar residuals plus the two u-chain comparisons
// (does u_k act as the polar partial isometry of t_k, and does it match the
// closed form (U^k)* U^(k+1)).
inline Json to_json(const AluthgeChain& chain, const ToleranceConfig& tol = {}) {
    Json j;
    j["params"] = {{"alpha", chain.params.alpha}, {"beta", chain.params.beta}};
    Json steps = Json::array();
    const ComplexMatrix& u0 = chain.steps.front().polar.u;
    ComplexMatrix uk = ComplexMatrix::identity(u0.rows());
    ComplexMatrix uk1 = u0;
    for (std::size_t k = 0; k < chain.steps.size(); ++k) {
        const AluthgeStep& s = chain.steps[k];
        Json e;
        e["k"] = k;
        e["t"] = matrix_to_json(s.t);
        e["polar"] = to_json(s.polar);
        e["u_chain"] = matrix_to_json(chain.u_chain[k]);
        if (k > 0) {
            uk = uk * u0;
            uk1 = uk1 * u0;
            e["u_chain_is_polar_isometry"] =
                to_json(is_polar_pair(s.t, chain.u_chain[k], tol));
            e["u_chain_closed_form"] =
                to_json(matrices_equal(chain.u_chain[k], uk.adjoint() * uk1, tol));
        }
        steps.push_back(std::move(e));
    }
    j["steps"] = std::move(steps);
    j["collapsed_at"] = chain.collapsed_at ? Json(*chain.collapsed_at) : Json(nullptr);
    j["rank_indeterminate"] = chain.rank_indeterminate;
    return j;
}

inline Json to_json(const OperatorSpec& spec) {
    Json j;
    j["family"] = to_string(spec.family);
    switch (spec.family) {
        case OperatorFamily::identity:
            j["dim"] = spec.dim;
            break;
        case OperatorFamily::unitary_random:
        case OperatorFamily::psd_random:
        case OperatorFamily::quasinormal:
            j["dim"] = spec.dim;
            j["seed"] = spec.seed;
            break;
        case OperatorFamily::weighted_shift:
            j["weights"] = spec.weights;
            break;
        case OperatorFamily::block_shift:
            j["target_n"] = spec.target_n;
            if (spec.block_a) j["block_a"] = matrix_to_json(*spec.block_a);
            if (spec.block_b) j["block_b"] = matrix_to_json(*spec.block_b);
            break;
        case OperatorFamily::jordan:
            j["dim"] = spec.dim;
            j["eigenvalue"] = {spec.eigenvalue.real(), spec.eigenvalue.imag()};
            break;
        case OperatorFamily::direct_sum: {
            Json summands = Json::array();
            for (const OperatorSpec& s : spec.summands) summands.push_back(to_json(s));
            j["summands"] = std::move(summands);
            break;
        }
        case OperatorFamily::dense_random:
            j["dim"] = spec.dim;
            j["seed"] = spec.seed;
            j["rank_deficit"] = spec.rank_deficit;
            break;
    }
    return j;
}

inline OperatorSpec operator_spec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("family"))
        throw IoError("operator spec requires a family field");
    OperatorSpec spec;
    spec.family = family_from_string(j["family"].get<std::string>());
    if (j.contains("dim")) spec.dim = j["dim"].get<std::size_t>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("weights"))
        spec.weights = j["weights"].get<std::vector<double>>();
    if (j.contains("target_n")) spec.target_n = j["target_n"].get<int>();
    if (j.contains("block_a")) spec.block_a = matrix_from_json(j["block_a"]);
    if (j.contains("block_b")) spec.block_b = matrix_from_json(j["block_b"]);
    if (j.contains("eigenvalue")) {
        const Json& e = j["eigenvalue"];
        if (!e.is_array() || e.size() != 2)
            throw IoError("eigenvalue must be an [re, im] pair");
        spec.eigenvalue = Complex(e[0].get<double>(), e[1].get<double>());
    }
    if (j.contains("rank_deficit"))
        spec.rank_deficit = j["rank_deficit"].get<std::size_t>();
    if (j.contains("summands"))
        for (const Json& s : j["summands"])
            spec.summands.push_back(operator_spec_from_json(s));
    return spec;
}

}  // namespace oplab
