#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bimop/config.hpp"
#include "bimop/errors.hpp"
#include "bimop/matrix.hpp"
#include "bimop/measures.hpp"
#include "bimop/mopcore.hpp"
#include "bimop/multiindex.hpp"
#include "bimop/poly.hpp"

namespace bimop {

/// Two univariate systems and the tensor system of all products
/// x_i(x) y_j(y), ordered (i, j) row-major.
template <Scalar T>
class ProductSystem {
public:
    ProductSystem(UniSystem<T> xs, UniSystem<T> ys)
        : x_(std::move(xs)), y_(std::move(ys)), tensor_(tensor_system(x_, y_)) {}

    const UniSystem<T>& xsystem() const noexcept { return x_; }
    const UniSystem<T>& ysystem() const noexcept { return y_; }
    const MeasureSystem<T>& system() const noexcept { return tensor_; }

private:
    UniSystem<T> x_;
    UniSystem<T> y_;
    MeasureSystem<T> tensor_;
};

template <Scalar T>
ProductSystem<T> parse_product_config(const Json& doc) {
    scalar_mode(doc);
    return ProductSystem<T>(parse_uni_system<T>(doc, "xsystem"), parse_uni_system<T>(doc, "ysystem"));
}

/// Component (i, j) is pair(n_i, m_j), row-major.
inline MultiIndex tilde_v(const MultiIndex& n, const MultiIndex& m) {
    std::vector<Natural> c;
    c.reserve(n.size() * m.size());
    for (Natural ni : n)
        for (Natural mj : m) c.push_back(pair(ni, mj));
    return MultiIndex(std::move(c));
}

/// v <= tilde_v(n, m) with |v| = pair(|n|, |m|). The surplus is removed from
/// the largest components first (ties: the later component first).
inline MultiIndex find_v(const MultiIndex& n, const MultiIndex& m) {
    MultiIndex v = tilde_v(n, m);
    const Natural target = pair(n.modulus(), m.modulus());
    if (v.modulus() < target)
        throw SurplusNegative("|tilde v| = " + std::to_string(v.modulus()) + " is below pair(|n|,|m|) = " +
                              std::to_string(target));
    Natural surplus = v.modulus() - target;
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return v[a] != v[b] ? v[a] > v[b] : a > b;
    });
    for (std::size_t j : order) {
        const Natural take = std::min(v[j], surplus);
        v[j] -= take;
        surplus -= take;
        if (surplus == 0) break;
    }
    return v;
}

/// Every v <= tilde_v(n, m) with |v| = pair(|n|, |m|), ascending lexicographic.
inline std::vector<MultiIndex> enumerate_v(const MultiIndex& n, const MultiIndex& m) {
    const MultiIndex bound = tilde_v(n, m);
    const Natural target = pair(n.modulus(), m.modulus());
    std::vector<MultiIndex> out;
    std::vector<Natural> cur(bound.size(), 0);
    // Remaining capacity of the suffix, to prune branches that cannot reach the target.
    std::vector<Natural> suffix(bound.size() + 1, 0);
    for (std::size_t j = bound.size(); j-- > 0;) suffix[j] = suffix[j + 1] + bound[j];
    auto rec = [&](auto&& self, std::size_t j, Natural left) -> void {
        if (j == bound.size()) {
            if (left == 0) out.emplace_back(cur);
            return;
        }
        for (Natural x = 0; x <= std::min(bound[j], left); ++x) {
            if (left - x > suffix[j + 1]) continue;
            cur[j] = x;
            self(self, j + 1, left - x);
        }
        cur[j] = 0;
    };
    rec(rec, 0, target);
    return out;
}

/// R(x, y) = P_n(x) P_m(y).
template <Scalar T>
BiPoly<T> product_poly(const ProductSystem<T>& ps, const MultiIndex& n, const MultiIndex& m,
                       const Tolerance& tol = {}) {
    const UniPoly<T> px = uni_type2(ps.xsystem(), n, tol);
    const UniPoly<T> py = uni_type2(ps.ysystem(), m, tol);
    std::vector<Term<T>> terms;
    for (Natural t = 0; t < px.coeffs().size(); ++t)
        for (Natural s = 0; s < py.coeffs().size(); ++s) {
            const T c = px.coeffs()[t] * py.coeffs()[s];
            if (!is_zero(c)) terms.push_back({t, s, c});
        }
    return BiPoly<T>::from_terms(terms);
}

template <Scalar T>
struct ProductCheck {
    MultiIndex v;
    BiPoly<T> bivariate;
    BiPoly<T> product;
    bool holds = false;
};

/// Compares type2 on the tensor system at v with the product polynomial.
template <Scalar T>
ProductCheck<T> check_product(const ProductSystem<T>& ps, const MultiIndex& n, const MultiIndex& m,
                              const MultiIndex& v, const Tolerance& tol = {}) {
    ps.xsystem().require_length(n);
    ps.ysystem().require_length(m);
    const MultiIndex bound = tilde_v(n, m);
    if (v.size() != bound.size()) throw BadV("v must have " + std::to_string(bound.size()) + " components");
    if (!v.leq(bound)) throw BadV("v = " + v.to_string() + " is not <= tilde v = " + bound.to_string());
    if (v.modulus() != pair(n.modulus(), m.modulus()))
        throw BadV("|v| = " + std::to_string(v.modulus()) + " differs from pair(|n|,|m|) = " +
                   std::to_string(pair(n.modulus(), m.modulus())));
    ProductCheck<T> out;
    out.v = v;
    out.bivariate = type2(ps.system(), v, tol);
    out.product = product_poly(ps, n, m, tol);
    if constexpr (ScalarTraits<T>::exact) {
        out.holds = out.bivariate == out.product;
    } else {
        const BiPoly<T> diff = out.bivariate - out.product;
        double scale = 1.0;
        for (const auto& c : out.product.coeffs()) scale = std::max(scale, std::fabs(c));
        out.holds = std::all_of(diff.coeffs().begin(), diff.coeffs().end(),
                                [&](double c) { return std::fabs(c) <= 1e-8 * scale; });
    }
    return out;
}

template <Scalar T>
bool verify_product(const ProductSystem<T>& ps, const MultiIndex& n, const MultiIndex& m, const MultiIndex& v,
                    const Tolerance& tol = {}) {
    return check_product(ps, n, m, v, tol).holds;
}

template <Scalar T>
struct DetFactorResult {
    T det_v{};
    T denominator{};
    std::optional<T> ratio;  // empty when both sides vanish
    bool indeterminate() const { return !ratio.has_value(); }
};

/// det(M_v) over the product of the univariate block determinants of the
/// listed factor indices and any extra scalar factors.
template <Scalar T>
DetFactorResult<T> det_factor_check(const ProductSystem<T>& ps, const MultiIndex& v,
                                    const std::vector<MultiIndex>& x_factors,
                                    const std::vector<MultiIndex>& y_factors,
                                    const std::vector<T>& scalars = {}) {
    DetFactorResult<T> out;
    out.det_v = det(moment_matrix(ps.system(), v).matrix());
    T denom = ScalarTraits<T>::one();
    for (const auto& f : x_factors) denom *= det(uni_moment_matrix(ps.xsystem(), f));
    for (const auto& f : y_factors) denom *= det(uni_moment_matrix(ps.ysystem(), f));
    for (const auto& c : scalars) denom *= c;
    out.denominator = denom;
    if (is_zero(denom)) {
        if (!is_zero(out.det_v))
            throw DivisionByZeroFactor("a factor determinant vanishes while det(M_" + v.to_string() + ") = " +
                                       to_string(out.det_v));
        return out;
    }
    out.ratio = T(out.det_v / denom);
    return out;
}

}  // namespace bimop
