#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "bimop/matrix.hpp"
#include "bimop/multiindex.hpp"
#include "bimop/poly.hpp"
#include "bimop/relations.hpp"
#include "bimop/scalar.hpp"

namespace bimop {

/// Key order follows insertion so output is byte-stable.
using OJson = nlohmann::ordered_json;

template <Scalar T>
OJson scalar_json(const T& v) {
    return to_string(v);
}

inline OJson index_json(const MultiIndex& n) { return OJson(n.components()); }

inline OJson path_json(const Path& p) {
    OJson a = OJson::array();
    for (const auto& s : p.steps()) a.push_back(index_json(s));
    return a;
}

/// {"terms":[{"t":1,"s":1,"c":"1"}, ...]} in descending Cantor position.
template <Scalar T>
OJson poly_json(const BiPoly<T>& p) {
    OJson terms = OJson::array();
    for (const auto& term : p.terms()) terms.push_back({{"t", term.t}, {"s", term.s}, {"c", scalar_json(term.c)}});
    return {{"terms", terms}};
}

/// {"terms":[{"k":2,"c":"1"}, ...]} in descending power.
template <Scalar T>
OJson unipoly_json(const UniPoly<T>& p) {
    OJson terms = OJson::array();
    for (std::size_t k = p.coeffs().size(); k-- > 0;)
        if (!is_zero(p.coeffs()[k])) terms.push_back({{"k", k}, {"c", scalar_json(p.coeffs()[k])}});
    return {{"terms", terms}};
}

template <Scalar T>
OJson matrix_json(const Matrix<T>& m) {
    OJson rows = OJson::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        OJson row = OJson::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// {"variant":"xP","holds":true,"path":[...],"coefficients":[{"modulus":5,"value":"3/2"}],"residual":"0", ...}
template <Scalar T>
OJson report_json(const NNRReport<T>& r) {
    OJson j;
    j["variant"] = to_string(r.variant);
    j["holds"] = r.holds;
    j["index"] = index_json(r.index);
    j["path"] = path_json(r.path);
    OJson coeffs = OJson::array();
    for (const auto& c : r.coefficients) coeffs.push_back({{"modulus", c.modulus}, {"value", scalar_json(c.value)}});
    j["coefficients"] = coeffs;
    if (!r.blocks.empty()) {
        OJson blocks = OJson::array();
        for (std::size_t b = 0; b < r.blocks.size(); ++b)
            blocks.push_back({{"degree", r.block_degrees[b]}, {"matrix", matrix_json(r.blocks[b])}});
        j["blocks"] = blocks;
    }
    if (r.residual_zero()) {
        j["residual"] = "0";
    } else {
        OJson parts = OJson::array();
        for (const auto& p : r.residuals) parts.push_back(p.pretty());
        j["residual"] = parts;
    }
    OJson checks = OJson::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"required", c.required}});
    j["checks"] = checks;
    return j;
}

}  // namespace bimop
