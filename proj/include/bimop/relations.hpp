#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bimop/errors.hpp"
#include "bimop/matrix.hpp"
#include "bimop/mopcore.hpp"
#include "bimop/multiindex.hpp"
#include "bimop/poly.hpp"
#include "bimop/scalar.hpp"

namespace bimop {

enum class Axis { x, y };

inline const char* to_string(Axis a) { return a == Axis::x ? "x" : "y"; }

namespace detail {

/// Zero test for verification results. Exact mode is exact; float mode
/// compares against 1e-8 of the given magnitude scale.
template <Scalar T>
bool negligible(const T& v, double scale) {
    if constexpr (ScalarTraits<T>::exact)
        return is_zero(v);
    else
        return std::fabs(v) <= 1e-8 * std::max(1.0, scale);
}

template <Scalar T>
double max_magnitude(const BiPoly<T>& p) {
    double m = 0.0;
    for (const auto& c : p.coeffs()) m = std::max(m, ScalarTraits<T>::magnitude(c));
    return m;
}

template <Scalar T>
bool negligible(const BiPoly<T>& p, double scale) {
    for (const auto& c : p.coeffs())
        if (!negligible(c, scale)) return false;
    return true;
}

template <Scalar T>
BiPoly<T> times(const BiPoly<T>& p, Axis a) {
    return a == Axis::x ? p.mul_x() : p.mul_y();
}

inline MultiIndex require_chain(const std::vector<MultiIndex>& chain, const char* what) {
    if (chain.empty()) throw ChainInvalid(std::string(what) + " chain is empty");
    const Natural d = chain.size() - 1;
    if (!validate_chain(chain, d))
        throw ChainInvalid(std::string(what) + " chain is not a valid degree-" + std::to_string(d) + " chain");
    return chain.front();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Biorthogonality
// ---------------------------------------------------------------------------

enum class BiorthCase { m_below_n, far_below, adjacent, unconstrained };

inline const char* to_string(BiorthCase c) {
    switch (c) {
        case BiorthCase::m_below_n: return "m<=n";
        case BiorthCase::far_below: return "|n|<=|m|-2";
        case BiorthCase::adjacent: return "|n|=|m|-1";
        case BiorthCase::unconstrained: return "unconstrained";
    }
    return "?";
}

inline BiorthCase biorth_case(const MultiIndex& n, const MultiIndex& m) {
    if (m.leq(n)) return BiorthCase::m_below_n;
    if (n.modulus() + 2 <= m.modulus()) return BiorthCase::far_below;
    if (n.modulus() + 1 == m.modulus()) return BiorthCase::adjacent;
    return BiorthCase::unconstrained;
}

template <Scalar T>
struct BiorthResult {
    T value{};
    BiorthCase label = BiorthCase::unconstrained;
    bool consistent = true;  // value matches the predicted branch (vacuous when unconstrained)
};

template <Scalar T>
BiorthResult<T> biorth(MopSolver<T>& solver, const MultiIndex& n, const MultiIndex& m) {
    n.require_same_length(m);
    BiorthResult<T> r;
    r.label = biorth_case(n, m);
    r.value = solver.pairing(solver.p(n), m);
    switch (r.label) {
        case BiorthCase::m_below_n:
        case BiorthCase::far_below: r.consistent = detail::negligible(r.value, 1.0); break;
        case BiorthCase::adjacent:
            r.consistent = detail::negligible(T(r.value - ScalarTraits<T>::one()), 1.0);
            break;
        case BiorthCase::unconstrained: break;
    }
    return r;
}

template <Scalar T>
BiorthResult<T> biorth(const MeasureSystem<T>& sys, const MultiIndex& n, const MultiIndex& m,
                       const Tolerance& tol = {}) {
    MopSolver<T> solver(sys, tol);
    return biorth(solver, n, m);
}

enum class BiorthPattern { zero_below, shifted_identity, corner_one, zero_above, none };

inline const char* to_string(BiorthPattern p) {
    switch (p) {
        case BiorthPattern::zero_below: return "zero (m_h <= n_0)";
        case BiorthPattern::shifted_identity: return "shifted identity";
        case BiorthPattern::corner_one: return "bottom-left one";
        case BiorthPattern::zero_above: return "zero (h >= d+2)";
        case BiorthPattern::none: return "none";
    }
    return "?";
}

template <Scalar T>
struct BiorthMatrix {
    Matrix<T> values;
    BiorthPattern pattern = BiorthPattern::none;
    std::optional<Matrix<T>> expected;  // set when a structural pattern applies
    bool holds = true;                  // values == expected, and every scalar branch holds
};

/// Pairing matrix <P_{n_k}, Q_{m_l}> between a degree-d Type II chain and a
/// degree-h Type I chain, with the structural verdict for the four cases.
template <Scalar T>
BiorthMatrix<T> biorth_matrix(MopSolver<T>& solver, const std::vector<MultiIndex>& chain_n,
                              const std::vector<MultiIndex>& chain_m) {
    detail::require_chain(chain_n, "Type II");
    detail::require_chain(chain_m, "Type I");
    const std::size_t d = chain_n.size() - 1;
    const std::size_t h = chain_m.size() - 1;

    BiorthMatrix<T> out;
    out.values = Matrix<T>(d + 1, h + 1);
    for (std::size_t k = 0; k <= d; ++k)
        for (std::size_t l = 0; l <= h; ++l) {
            const auto r = biorth(solver, chain_n[k], chain_m[l]);
            out.values(k, l) = r.value;
            out.holds = out.holds && r.consistent;
        }

    Matrix<T> e(d + 1, h + 1);
    if (chain_m.back().leq(chain_n.front())) {
        out.pattern = BiorthPattern::zero_below;
    } else if (chain_m == chain_n) {
        out.pattern = BiorthPattern::shifted_identity;
        for (std::size_t k = 0; k < d; ++k) e(k, k + 1) = ScalarTraits<T>::one();
    } else if (h == d + 1) {
        out.pattern = BiorthPattern::corner_one;
        e(d, 0) = ScalarTraits<T>::one();
    } else if (h >= d + 2) {
        out.pattern = BiorthPattern::zero_above;
    }
    if (out.pattern != BiorthPattern::none) {
        for (std::size_t k = 0; k <= d; ++k)
            for (std::size_t l = 0; l <= h; ++l)
                if (!detail::negligible(T(out.values(k, l) - e(k, l)), 1.0)) out.holds = false;
        out.expected = std::move(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Polynomial vectors
// ---------------------------------------------------------------------------

/// Type II vector of degree d: P_{n_0}, ..., P_{n_d} with leading monomials
/// x^d, x^(d-1) y, ..., y^d.
template <Scalar T>
struct MOPV {
    Natural degree = 0;
    std::vector<MultiIndex> chain;
    std::vector<BiPoly<T>> polys;
    /// leading_zeros[j][k]: count of leading zeros of row k of the Gram matrix
    /// against measure j over positions 0..|n_d|.
    std::vector<std::vector<std::size_t>> leading_zeros;
    bool pattern_ok = true;  // leading_zeros[j][k] >= n_{k,j} everywhere and the leading monomials are right

    /// Coefficients of the degree-k monomials (x^k, ..., y^k) in each entry.
    Matrix<T> coefficient_block(Natural k) const {
        Matrix<T> g(polys.size(), k + 1);
        const Natural base = k * (k + 1) / 2;
        for (std::size_t row = 0; row < polys.size(); ++row)
            for (Natural i = 0; i <= k; ++i) g(row, i) = polys[row].coeff(base + i);
        return g;
    }
};

/// Type I vectors: rows[j][k] = A_{n_k, j}.
template <Scalar T>
struct TypeIMOPV {
    Natural degree = 0;
    std::vector<MultiIndex> chain;
    std::vector<std::vector<BiPoly<T>>> rows;
    bool pattern_ok = true;  // summed Gram rows are |n_k|-1 zeros then 1
};

template <Scalar T>
MOPV<T> assemble_type2_vector(MopSolver<T>& solver, const std::vector<MultiIndex>& chain) {
    detail::require_chain(chain, "Type II");
    const auto& sys = solver.system();
    sys.require_length(chain.front());
    MOPV<T> v;
    v.degree = chain.size() - 1;
    v.chain = chain;
    const Natural span = chain.back().modulus() + 1;
    v.leading_zeros.assign(sys.size(), std::vector<std::size_t>(chain.size(), 0));
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const BiPoly<T>& p = solver.p(chain[k]);
        v.polys.push_back(p);
        const Exponents lead = p.mdeg();
        if (lead.t + lead.s != v.degree || lead.s != k) v.pattern_ok = false;
        const double scale = detail::max_magnitude(p);
        for (std::size_t j = 0; j < sys.size(); ++j) {
            std::size_t zeros = 0;
            while (zeros < span &&
                   detail::negligible(inner(sys, j, p, BiPoly<T>::monomial(unpair(zeros).t, unpair(zeros).s)), scale))
                ++zeros;
            v.leading_zeros[j][k] = zeros;
            if (zeros < chain[k][j]) v.pattern_ok = false;
        }
    }
    return v;
}

template <Scalar T>
TypeIMOPV<T> assemble_type1_vectors(MopSolver<T>& solver, const std::vector<MultiIndex>& chain) {
    detail::require_chain(chain, "Type I");
    const auto& sys = solver.system();
    sys.require_length(chain.front());
    TypeIMOPV<T> v;
    v.degree = chain.size() - 1;
    v.chain = chain;
    v.rows.assign(sys.size(), {});
    const Natural span = chain.back().modulus() + 1;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const TypeISet<T>& a = solver.a(chain[k]);
        for (std::size_t j = 0; j < sys.size(); ++j) v.rows[j].push_back(a.polys[j]);
        const Natural size = chain[k].modulus();
        if (size == 0) continue;
        for (Natural z = 0; z < span; ++z) {
            const Exponents e = unpair(z);
            const T val = type1_pairing(sys, BiPoly<T>::monomial(e.t, e.s), a);
            if (z + 1 < size && !detail::negligible(val, 1.0)) v.pattern_ok = false;
            if (z + 1 == size && !detail::negligible(T(val - ScalarTraits<T>::one()), 1.0)) v.pattern_ok = false;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Nearest neighbour recurrences
// ---------------------------------------------------------------------------

enum class NNRVariant { xP, yP, xQ, yQ, vector_x, vector_y };

inline const char* to_string(NNRVariant v) {
    switch (v) {
        case NNRVariant::xP: return "xP";
        case NNRVariant::yP: return "yP";
        case NNRVariant::xQ: return "xQ";
        case NNRVariant::yQ: return "yQ";
        case NNRVariant::vector_x: return "vector-x";
        case NNRVariant::vector_y: return "vector-y";
    }
    return "?";
}

template <Scalar T>
struct NNRCoefficient {
    Natural modulus = 0;
    T value{};
};

struct NNRCheck {
    std::string name;
    bool passed = true;
    bool required = true;  // informational checks do not affect `holds`
};

/// Outcome of one recurrence verification.
///
/// Scalar variants fill `coefficients` (one per path modulus). Type II
/// variants have one residual; Type I variants one per measure; vector
/// variants one per row, plus the coefficient blocks A_h / B_h.
template <Scalar T>
struct NNRReport {
    NNRVariant variant = NNRVariant::xP;
    MultiIndex index;
    Path path;
    std::vector<NNRCoefficient<T>> coefficients;
    std::vector<Natural> block_degrees;
    std::vector<Matrix<T>> blocks;
    std::vector<BiPoly<T>> residuals;
    std::vector<NNRCheck> checks;
    bool holds = false;

    bool residual_zero() const {
        return std::all_of(residuals.begin(), residuals.end(), [](const BiPoly<T>& p) { return p.is_zero(); });
    }

    const T* coefficient_at(Natural modulus) const {
        for (const auto& c : coefficients)
            if (c.modulus == modulus) return &c.value;
        return nullptr;
    }
};

namespace detail {

template <Scalar T>
void finish(NNRReport<T>& r, bool residual_ok) {
    r.checks.insert(r.checks.begin(), NNRCheck{"residual is zero", residual_ok, true});
    r.holds = std::all_of(r.checks.begin(), r.checks.end(), [](const NNRCheck& c) { return c.passed || !c.required; });
}

/// Path that ends at `w`, taking the entries of `given` when supplied.
inline Path truncate_at(const Path& given, const MultiIndex& w) {
    if (!given.is_valid()) throw PathInvalid("path is not a chain of neighbours: " + given.to_string());
    if (!given.contains(w)) throw PathInvalid("path does not pass through " + w.to_string());
    std::vector<MultiIndex> steps;
    for (const auto& s : given.steps()) {
        steps.push_back(s);
        if (s == w) break;
    }
    return Path(std::move(steps));
}

inline Natural upper_shift(const MultiIndex& n, Axis axis) {
    return params(n).degree + (axis == Axis::x ? 1 : 2);
}

/// Expansion of `target` over the Type II polynomials of `path`. Every
/// coefficient below the top comes from pairing with the next Type I set;
/// the top coefficient is read off the leading position.
template <Scalar T>
void expand_type2(MopSolver<T>& solver, const BiPoly<T>& target, const Path& path, NNRReport<T>& r) {
    const auto& steps = path.steps();
    BiPoly<T> residual = target;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const Natural modulus = steps[k].modulus();
        const T a = k + 1 < steps.size() ? solver.pairing(target, steps[k + 1]) : target.coeff(modulus);
        r.coefficients.push_back({modulus, a});
        if (!is_zero(a)) residual -= solver.p(steps[k]) * a;
    }
    const double scale = max_magnitude(target);
    if constexpr (!ScalarTraits<T>::exact) {
        if (negligible(residual, scale)) residual = BiPoly<T>();
    }
    r.residuals.push_back(std::move(residual));
}

}  // namespace detail

/// x P_n (or y P_n) expanded along a path from the origin through
/// v = n - (d_n+1)(1,...,1), n and w. Requires n_j >= d_n + 1 for every j.
/// Coefficients below |n| - (d_n+1) r must vanish.
template <Scalar T>
NNRReport<T> nnr_type2(MopSolver<T>& solver, const MultiIndex& n, Axis axis,
                       const std::optional<Path>& path = std::nullopt,
                       const std::optional<MultiIndex>& w = std::nullopt) {
    solver.system().require_length(n);
    const Natural d = params(n).degree;
    for (std::size_t j = 0; j < n.size(); ++j)
        if (n[j] <= d)
            throw IndexTooSmall("component " + std::to_string(j) + " of " + n.to_string() + " must exceed d_n = " +
                                std::to_string(d));
    std::vector<Natural> lowered(n.components());
    for (auto& c : lowered) c -= d + 1;
    const MultiIndex v(std::move(lowered));
    const Natural top = n.modulus() + detail::upper_shift(n, axis);

    MultiIndex target;
    if (w) {
        target = *w;
    } else if (path) {
        target = path->at_modulus(top);
    } else {
        std::vector<Natural> c(n.components());
        c[0] += top - n.modulus();
        target = MultiIndex(std::move(c));
    }
    target.require_same_length(n);
    if (target.modulus() != top || !n.leq(target))
        throw PathInvalid("w = " + target.to_string() + " must satisfy w >= n and |w| = " + std::to_string(top));

    const Path full = path ? detail::truncate_at(*path, target)
                           : canonical_path({MultiIndex::zeros(n.size()), v, n, target});
    if (!full.contains(n)) throw PathInvalid("path does not pass through n = " + n.to_string());
    if (!full.contains(v)) throw PathInvalid("path does not pass through v = " + v.to_string());

    NNRReport<T> r;
    r.variant = axis == Axis::x ? NNRVariant::xP : NNRVariant::yP;
    r.index = n;
    r.path = full;
    const BiPoly<T> target_poly = detail::times(solver.p(n), axis);
    detail::expand_type2(solver, target_poly, full, r);

    const Natural low = v.modulus();
    bool vanish = true;
    for (const auto& c : r.coefficients)
        if (c.modulus < low && !detail::negligible(c.value, detail::max_magnitude(target_poly))) vanish = false;
    r.checks.push_back({"coefficients below modulus " + std::to_string(low) + " vanish", vanish, true});
    const bool monic_top = detail::negligible(T(r.coefficients.back().value - ScalarTraits<T>::one()), 1.0);
    r.checks.push_back({"coefficient of P_w is 1", monic_top, true});
    detail::finish(r, r.residual_zero());
    return r;
}

/// Same expansion without the size precondition: the path runs from its
/// first entry (the origin by default) through n to w.
template <Scalar T>
NNRReport<T> nnr_type2_full(MopSolver<T>& solver, const MultiIndex& n, Axis axis,
                            const std::optional<Path>& path = std::nullopt,
                            const std::optional<MultiIndex>& w = std::nullopt) {
    solver.system().require_length(n);
    const Natural top = n.modulus() + detail::upper_shift(n, axis);
    MultiIndex target;
    if (w) {
        target = *w;
    } else if (path) {
        target = path->at_modulus(top);
    } else {
        std::vector<Natural> c(n.components());
        c[0] += top - n.modulus();
        target = MultiIndex(std::move(c));
    }
    target.require_same_length(n);
    if (target.modulus() != top || !n.leq(target))
        throw PathInvalid("w = " + target.to_string() + " must satisfy w >= n and |w| = " + std::to_string(top));
    const Path full = path ? detail::truncate_at(*path, target) : canonical_path({MultiIndex::zeros(n.size()), n, target});
    if (!full.contains(n)) throw PathInvalid("path does not pass through n = " + n.to_string());

    NNRReport<T> r;
    r.variant = axis == Axis::x ? NNRVariant::xP : NNRVariant::yP;
    r.index = n;
    r.path = full;
    const BiPoly<T> target_poly = detail::times(solver.p(n), axis);
    detail::expand_type2(solver, target_poly, full, r);
    const bool monic_top = detail::negligible(T(r.coefficients.back().value - ScalarTraits<T>::one()), 1.0);
    r.checks.push_back({"coefficient of P_w is 1", monic_top, true});
    detail::finish(r, r.residual_zero());
    return r;
}

/// Modulus range [low, high] and end point of the Type I recurrence path.
struct Type1Span {
    Natural low = 0;
    Natural high = 0;
    MultiIndex end;
};

inline Type1Span type1_span(const MultiIndex& n, Axis axis) {
    const IndexParams p = params(n);
    const Natural r = n.size();
    const Natural d = p.degree;
    Type1Span s;
    if (axis == Axis::x) {
        s.low = n.modulus() - d;
        s.high = n.modulus() + (d + 1) * r;
        s.end = n.plus_all(d + 1);
    } else {
        s.low = n.modulus() >= d + 1 ? n.modulus() - d - 1 : 0;
        s.high = n.modulus() + (d + 2) * r;
        s.end = n.plus_all(d + 2);
    }
    return s;
}

/// x Q_n (or y Q_n) expanded over Type I functions along a path spanning
/// moduli |n| - d_n .. |n| + (d_n+1) r (axis y: |n| - d_n - 1 .. |n| + (d_n+2) r).
/// Checks the identity measure by measure and, separately, as a functional.
template <Scalar T>
NNRReport<T> nnr_type1(MopSolver<T>& solver, const MultiIndex& n, Axis axis,
                       const std::optional<Path>& path = std::nullopt) {
    const auto& sys = solver.system();
    sys.require_length(n);
    if (n.modulus() == 0) throw EmptyIndex("Type I recurrence needs |n| >= 1");
    const Type1Span span = type1_span(n, axis);

    Path full;
    if (path) {
        if (!path->is_valid()) throw PathInvalid("path is not a chain of neighbours: " + path->to_string());
        if (!path->covers(span.low) || !path->covers(span.high))
            throw PathInvalid("path must span moduli " + std::to_string(span.low) + ".." + std::to_string(span.high));
        std::vector<MultiIndex> steps;
        for (Natural q = span.low; q <= span.high; ++q) steps.push_back(path->at_modulus(q));
        full = Path(std::move(steps));
    } else {
        const MultiIndex start = reduce_from_back(n, n.modulus() - span.low);
        full = canonical_path({start, n, span.end});
    }
    if (!full.contains(n)) throw PathInvalid("path does not pass through n = " + n.to_string());
    if (full.back() != span.end) throw PathInvalid("path must end at " + span.end.to_string());

    NNRReport<T> r;
    r.variant = axis == Axis::x ? NNRVariant::xQ : NNRVariant::yQ;
    r.index = n;
    r.path = full;

    const TypeISet<T> an = solver.a(n);
    std::vector<BiPoly<T>> shifted;
    for (const auto& p : an.polys) shifted.push_back(detail::times(p, axis));

    // Low end: <x Q_n, P_m> for the (off-path) predecessor m of the first
    // entry. x P_m has top position shift(|m|), which the Type I conditions
    // of n turn into 0 or 1.
    const auto& steps = full.steps();
    const Natural low = span.low;
    T low_value = ScalarTraits<T>::zero();
    if (low > 0) {
        const Exponents e = unpair(low - 1);
        const Natural shifted_top = axis == Axis::x ? shift_x(e.t, e.s) : shift_y(e.t, e.s);
        if (shifted_top + 1 == n.modulus()) low_value = ScalarTraits<T>::one();
        r.checks.push_back({"low-end coefficient equals 1 (holds only when the shifted predecessor reaches |n|-1)",
                            shifted_top + 1 == n.modulus(), false});
    }
    r.coefficients.push_back({low, low_value});
    for (std::size_t k = 1; k < steps.size(); ++k) {
        const BiPoly<T>& pk = solver.p(steps[k - 1]);
        T v = ScalarTraits<T>::zero();
        for (std::size_t j = 0; j < sys.size(); ++j) v += inner(sys, j, shifted[j], pk);
        r.coefficients.push_back({steps[k].modulus(), v});
    }

    double scale = 0.0;
    for (const auto& p : shifted) scale = std::max(scale, detail::max_magnitude(p));
    for (std::size_t j = 0; j < sys.size(); ++j) {
        BiPoly<T> residual = shifted[j];
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const T& c = r.coefficients[k].value;
            if (is_zero(c)) continue;
            residual -= solver.a(steps[k]).polys[j] * c;
        }
        if constexpr (!ScalarTraits<T>::exact) {
            if (detail::negligible(residual, scale)) residual = BiPoly<T>();
        }
        r.residuals.push_back(std::move(residual));
    }

    // Functional form: sum_j <residual_j, x^t y^s>_j = 0 for every monomial up
    // to a position past all degrees involved.
    Natural reach = 0;
    for (const auto& p : r.residuals) reach = std::max<Natural>(reach, p.size());
    reach += span.high + 1;
    bool weak = true;
    for (Natural z = 0; z < reach && weak; ++z) {
        const Exponents e = unpair(z);
        const BiPoly<T> mono = BiPoly<T>::monomial(e.t, e.s);
        T acc = ScalarTraits<T>::zero();
        for (std::size_t j = 0; j < sys.size(); ++j) acc += inner(sys, j, r.residuals[j], mono);
        weak = detail::negligible(acc, scale);
    }
    r.checks.push_back({"summed identity against monomials up to position " + std::to_string(reach), weak, true});
    detail::finish(r, r.residual_zero());
    return r;
}

/// K of the vector recurrence: the largest h in 0..d-1 with h(h+1)/2 below
/// |n_0| - (d+1) r, or 0 when there is none.
inline Natural vector_recurrence_k(const MultiIndex& n0, Natural d) {
    const long long bound = static_cast<long long>(n0.modulus()) - static_cast<long long>((d + 1) * n0.size());
    Natural k = 0;
    for (Natural h = 0; h < d; ++h)
        if (static_cast<long long>(h * (h + 1) / 2) < bound) k = h;
    return k;
}

/// Vector recurrence x P^(d) = A_{d+1} P^(d+1) + A_d P^(d) + sum_h A_h P^(h).
///
/// The lower chains are the entries of `lower` (default: a path from the
/// origin through n_0 - (d+1)(1,...,1) when that is a multi-index) starting
/// at degree max(K-1, 0). The upper chain defaults to n_d + (k+1) e_1.
template <Scalar T>
NNRReport<T> nnr_vector(MopSolver<T>& solver, const std::vector<MultiIndex>& chain, Axis axis,
                        const std::optional<std::vector<MultiIndex>>& upper = std::nullopt,
                        const std::optional<Path>& lower = std::nullopt) {
    const MultiIndex n0 = detail::require_chain(chain, "vector");
    solver.system().require_length(n0);
    const Natural d = chain.size() - 1;
    const std::size_t r_count = n0.size();

    std::vector<MultiIndex> up;
    if (upper) {
        up = *upper;
    } else {
        for (Natural k = 0; k <= d + 1; ++k) {
            std::vector<Natural> c(chain.back().components());
            c[0] += k + 1;
            up.emplace_back(std::move(c));
        }
    }
    if (up.size() != d + 2 || !validate_chain(up, d + 1) || !chain.back().is_neighbour_below(up.front()))
        throw ChainInvalid("upper chain must be a degree-" + std::to_string(d + 1) + " chain continuing n_d");

    const Natural big_k = vector_recurrence_k(n0, d);
    const Natural first_degree = big_k > 0 ? big_k - 1 : 0;
    const Natural start = first_degree * (first_degree + 1) / 2;

    Path below;
    if (lower) {
        below = *lower;
    } else {
        std::vector<MultiIndex> waypoints{MultiIndex::zeros(r_count)};
        bool fits = true;
        std::vector<Natural> c(n0.components());
        for (auto& x : c) {
            if (x < d + 1) fits = false;
            else x -= d + 1;
        }
        if (fits) waypoints.emplace_back(std::move(c));
        waypoints.push_back(n0);
        below = canonical_path(waypoints);
    }
    if (!below.contains(n0) || !below.covers(start))
        throw ChainInvalid("lower path must reach n_0 from modulus " + std::to_string(start));

    std::vector<MultiIndex> steps;
    for (Natural q = start; q < n0.modulus(); ++q) steps.push_back(below.at_modulus(q));
    steps.insert(steps.end(), chain.begin(), chain.end());
    steps.insert(steps.end(), up.begin(), up.end());
    const Path combined(std::move(steps));
    if (!combined.is_valid()) throw ChainInvalid("lower path, chain and upper chain do not join: " + combined.to_string());

    NNRReport<T> r;
    r.variant = axis == Axis::x ? NNRVariant::vector_x : NNRVariant::vector_y;
    r.index = n0;
    r.path = combined;
    for (Natural h = first_degree; h <= d + 1; ++h) {
        r.block_degrees.push_back(h);
        r.blocks.emplace_back(d + 1, h + 1);
    }

    bool rows_match_scalar = true;
    for (Natural k = 0; k <= d; ++k) {
        NNRReport<T> row;
        const BiPoly<T> target = detail::times(solver.p(chain[k]), axis);
        detail::expand_type2(solver, target, combined, row);
        for (const auto& c : row.coefficients) {
            const IndexParams p = params_of_modulus(c.modulus);
            r.blocks[p.degree - first_degree](k, p.remainder) = c.value;
        }
        r.residuals.push_back(row.residuals.front());

        // Scalar recurrence for the same row on the same path, ending at its own w.
        const MultiIndex w = combined.at_modulus(chain[k].modulus() + detail::upper_shift(chain[k], axis));
        const NNRReport<T> scalar = nnr_type2_full(solver, chain[k], axis, combined, w);
        for (const auto& c : row.coefficients) {
            const T* s = scalar.coefficient_at(c.modulus);
            const T expected = s ? *s : ScalarTraits<T>::zero();
            if (!detail::negligible(T(c.value - expected), detail::max_magnitude(target))) rows_match_scalar = false;
        }
        if (!scalar.holds) rows_match_scalar = false;
    }
    r.checks.push_back({"rows agree with the scalar recurrences", rows_match_scalar, true});

    // Leading block: unit triangular in the shifted sense the multiplication forces.
    const Matrix<T>& lead = r.blocks.back();
    bool triangular = true;
    bool equals_selection = true;
    const std::size_t offset = axis == Axis::x ? 0 : 1;
    for (std::size_t k = 0; k <= d; ++k)
        for (std::size_t i = 0; i <= d + 1; ++i) {
            const T& v = lead(k, i);
            const bool on_diag = i == k + offset;
            const T want = on_diag ? ScalarTraits<T>::one() : ScalarTraits<T>::zero();
            if (!detail::negligible(T(v - want), 1.0)) {
                equals_selection = false;
                if (i >= k + offset) triangular = false;
            }
        }
    r.checks.push_back({"leading block is unit triangular", triangular, true});
    r.checks.push_back({"leading block equals the selection matrix", equals_selection, false});
    detail::finish(r, r.residual_zero());
    return r;
}

}  // namespace bimop
