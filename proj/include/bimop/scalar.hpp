#pragma once

#include <gmpxx.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include "bimop/errors.hpp"

namespace bimop {

/// Exact rational over arbitrary-precision integers. GMP keeps every value
/// canonical (lowest terms, positive denominator) after each operation.
using Rational = mpq_class;

/// Thresholds used by the binary64 path. Determinants and pivots are compared
/// after scaling, see `det_scale` in matrix.hpp.
struct Tolerance {
    double singular = 1e-12;       // |pivot| <= singular * max-row-norm  -> singular
    double indeterminate = 1e-6;   // scaled |det| in [singular, indeterminate] -> unknown
};

/// Parses "p", "p/q", and finite decimals such as "-2.25" or "3.4e-2" into an
/// exact rational. Binary floating point is never involved.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&](const char* why) {
        throw ParseError("cannot parse rational literal '" + std::string(text) + "': " + why);
    };
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) fail("empty");

    auto all_digits = [](std::string_view v) {
        if (v.empty()) return false;
        for (char c : v)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };

    bool negative = false;
    std::string_view body(s);
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }

    Rational value;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) fail("malformed fraction");
        mpz_class q{std::string(den)};
        if (q == 0) fail("zero denominator");
        value = Rational(mpz_class{std::string(num)}, q);
        value.canonicalize();
    } else {
        long exponent = 0;
        if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
            auto exp_text = body.substr(e + 1);
            bool exp_neg = false;
            if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
                exp_neg = exp_text.front() == '-';
                exp_text.remove_prefix(1);
            }
            if (!all_digits(exp_text) || exp_text.size() > 6) fail("malformed exponent");
            exponent = std::stol(std::string(exp_text));
            if (exp_neg) exponent = -exponent;
            body = body.substr(0, e);
        }
        std::string_view int_part = body, frac_part;
        if (auto dot = body.find('.'); dot != std::string_view::npos) {
            int_part = body.substr(0, dot);
            frac_part = body.substr(dot + 1);
        }
        if (int_part.empty() && frac_part.empty()) fail("no digits");
        if (!int_part.empty() && !all_digits(int_part)) fail("malformed integer part");
        if (!frac_part.empty() && !all_digits(frac_part)) fail("malformed fraction part");
        std::string digits = std::string(int_part) + std::string(frac_part);
        mpz_class num(digits);
        exponent -= static_cast<long>(frac_part.size());
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
        if (exponent >= 0)
            value = Rational(num * scale);
        else
            value = Rational(num, scale);
        value.canonicalize();
    }
    if (negative) value = -value;
    return value;
}

/// "p/q", or "p" when q = 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Shortest representation that round-trips.
inline std::string to_string(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "exact";
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
    static double to_double(const Rational& x) { return x.get_d(); }
    static Rational from_rational(const Rational& x) { return x; }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr const char* name = "float64";
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static bool is_zero(double x) { return x == 0.0; }
    static double magnitude(double x) { return std::fabs(x); }
    static double to_double(double x) { return x; }
    static double from_rational(const Rational& x) { return x.get_d(); }
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <Scalar T>
bool is_zero(const T& x) { return ScalarTraits<T>::is_zero(x); }

}  // namespace bimop
