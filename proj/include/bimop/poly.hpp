#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bimop/multiindex.hpp"
#include "bimop/scalar.hpp"

namespace bimop {

namespace detail {

inline std::string monomial_string(Natural t, Natural s, const char* xname = "x", const char* yname = "y") {
    std::string m;
    auto power = [&](const char* v, Natural e) {
        if (e == 0) return;
        if (!m.empty()) m += "*";
        m += v;
        if (e > 1) m += "^" + std::to_string(e);
    };
    power(xname, t);
    power(yname, s);
    return m;
}

/// Joins (coefficient, monomial) pairs as "a*m1 - b*m2 + c".
template <Scalar T>
std::string join_terms(const std::vector<std::pair<T, std::string>>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& [c, mono] = terms[i];
        const bool negative = c < ScalarTraits<T>::zero();
        const T mag = negative ? T(-c) : c;
        if (i == 0)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        if (mono.empty())
            out += to_string(mag);
        else if (mag == ScalarTraits<T>::one())
            out += mono;
        else
            out += to_string(mag) + "*" + mono;
    }
    return out;
}

}  // namespace detail

/// One nonzero term c * x^t y^s.
template <Scalar T>
struct Term {
    Natural t = 0;
    Natural s = 0;
    T c{};
};

/// Bivariate polynomial stored densely by Cantor position: coefficient z
/// multiplies the monomial unpair(z). Trailing zeros are trimmed, so the last
/// stored coefficient is the leading one.
template <Scalar T>
class BiPoly {
public:
    BiPoly() = default;
    explicit BiPoly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

    static BiPoly constant(const T& c) { return BiPoly(std::vector<T>{c}); }
    static BiPoly monomial(Natural t, Natural s, const T& c = ScalarTraits<T>::one()) {
        std::vector<T> v(pair(t, s) + 1, ScalarTraits<T>::zero());
        v.back() = c;
        return BiPoly(std::move(v));
    }
    static BiPoly from_terms(const std::vector<Term<T>>& terms) {
        BiPoly p;
        for (const auto& term : terms) p.add_to(pair(term.t, term.s), term.c);
        p.trim();
        return p;
    }

    bool is_zero() const noexcept { return c_.empty(); }
    /// Number of stored coefficients (top position + 1, or 0).
    std::size_t size() const noexcept { return c_.size(); }
    const std::vector<T>& coeffs() const noexcept { return c_; }

    /// Position of the leading monomial; the polynomial must be nonzero.
    Natural top_position() const { return c_.size() - 1; }
    Exponents mdeg() const { return unpair(top_position()); }
    Natural deg() const {
        const Exponents e = mdeg();
        return e.t + e.s;
    }
    const T& leading_coeff() const { return c_.back(); }

    T coeff(Natural z) const { return z < c_.size() ? c_[z] : ScalarTraits<T>::zero(); }
    T coeff(Natural t, Natural s) const { return coeff(pair(t, s)); }

    /// Nonzero terms in descending Cantor position.
    std::vector<Term<T>> terms() const {
        std::vector<Term<T>> out;
        for (std::size_t z = c_.size(); z-- > 0;) {
            if (bimop::is_zero(c_[z])) continue;
            const Exponents e = unpair(z);
            out.push_back({e.t, e.s, c_[z]});
        }
        return out;
    }

    BiPoly mul_x() const { return shifted(true); }
    BiPoly mul_y() const { return shifted(false); }

    T eval(const T& x, const T& y) const {
        T acc = ScalarTraits<T>::zero();
        for (std::size_t z = 0; z < c_.size(); ++z) {
            if (bimop::is_zero(c_[z])) continue;
            const Exponents e = unpair(z);
            T m = c_[z];
            for (Natural i = 0; i < e.t; ++i) m *= x;
            for (Natural i = 0; i < e.s; ++i) m *= y;
            acc += m;
        }
        return acc;
    }

    BiPoly& operator+=(const BiPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), ScalarTraits<T>::zero());
        for (std::size_t z = 0; z < o.c_.size(); ++z) c_[z] += o.c_[z];
        trim();
        return *this;
    }
    BiPoly& operator-=(const BiPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), ScalarTraits<T>::zero());
        for (std::size_t z = 0; z < o.c_.size(); ++z) c_[z] -= o.c_[z];
        trim();
        return *this;
    }
    BiPoly& operator*=(const T& k) {
        for (auto& v : c_) v *= k;
        trim();
        return *this;
    }
    friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
    friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
    friend BiPoly operator*(BiPoly a, const T& k) { return a *= k; }
    friend BiPoly operator*(const T& k, BiPoly a) { return a *= k; }
    BiPoly operator-() const { return *this * T(-ScalarTraits<T>::one()); }

    /// Full product of two polynomials.
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> out(pair_sum_bound(a, b), ScalarTraits<T>::zero());
        for (std::size_t u = 0; u < a.c_.size(); ++u) {
            if (bimop::is_zero(a.c_[u])) continue;
            const Exponents eu = unpair(u);
            for (std::size_t v = 0; v < b.c_.size(); ++v) {
                if (bimop::is_zero(b.c_[v])) continue;
                const Exponents ev = unpair(v);
                out[pair(eu.t + ev.t, eu.s + ev.s)] += a.c_[u] * b.c_[v];
            }
        }
        return BiPoly(std::move(out));
    }

    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.c_ == b.c_; }
    friend std::ostream& operator<<(std::ostream& os, const BiPoly& p) { return os << p.pretty(); }

    /// e.g. "x^2*y - 3/2*x + 1".
    std::string pretty() const {
        std::vector<std::pair<T, std::string>> parts;
        for (const auto& term : terms()) parts.emplace_back(term.c, detail::monomial_string(term.t, term.s));
        return detail::join_terms(parts);
    }

    /// Coefficientwise conversion to another scalar type.
    template <Scalar U, class F>
    BiPoly<U> map(F&& f) const {
        std::vector<U> out;
        out.reserve(c_.size());
        for (const auto& v : c_) out.push_back(f(v));
        return BiPoly<U>(std::move(out));
    }

private:
    void add_to(Natural z, const T& v) {
        if (z >= c_.size()) c_.resize(z + 1, ScalarTraits<T>::zero());
        c_[z] += v;
    }
    void trim() {
        while (!c_.empty() && bimop::is_zero(c_.back())) c_.pop_back();
    }
    BiPoly shifted(bool by_x) const {
        if (c_.empty()) return {};
        const Exponents top = unpair(top_position());
        const Natural new_top = by_x ? shift_x(top.t, top.s) : shift_y(top.t, top.s);
        std::vector<T> out(new_top + 1, ScalarTraits<T>::zero());
        for (std::size_t z = 0; z < c_.size(); ++z) {
            const Exponents e = unpair(z);
            out[by_x ? shift_x(e.t, e.s) : shift_y(e.t, e.s)] = c_[z];
        }
        return BiPoly(std::move(out));
    }
    static std::size_t pair_sum_bound(const BiPoly& a, const BiPoly& b) {
        const Natural d = a.deg() + b.deg();
        return pair(0, d) + 1;
    }

    std::vector<T> c_;
};

/// Univariate polynomial, coefficients by ascending power.
template <Scalar T>
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<T>& coeffs() const noexcept { return c_; }
    /// Degree; the polynomial must be nonzero.
    Natural degree() const { return c_.size() - 1; }
    T coeff(Natural k) const { return k < c_.size() ? c_[k] : ScalarTraits<T>::zero(); }

    T eval(const T& x) const {
        T acc = ScalarTraits<T>::zero();
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
        return acc;
    }

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
    friend std::ostream& operator<<(std::ostream& os, const UniPoly& p) { return os << p.pretty(); }

    std::string pretty(const char* var = "x") const {
        std::vector<std::pair<T, std::string>> parts;
        for (std::size_t k = c_.size(); k-- > 0;) {
            if (bimop::is_zero(c_[k])) continue;
            std::string m;
            if (k > 0) m = var;
            if (k > 1) m += "^" + std::to_string(k);
            parts.emplace_back(c_[k], m);
        }
        return detail::join_terms(parts);
    }

private:
    void trim() {
        while (!c_.empty() && bimop::is_zero(c_.back())) c_.pop_back();
    }
    std::vector<T> c_;
};

}  // namespace bimop
