#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bimop/errors.hpp"
#include "bimop/matrix.hpp"
#include "bimop/measures.hpp"
#include "bimop/multiindex.hpp"
#include "bimop/poly.hpp"
#include "bimop/scalar.hpp"

namespace bimop {

// ---------------------------------------------------------------------------
// Moment matrices and normality
// ---------------------------------------------------------------------------

/// Block moment matrix M_n = (M^(1) | ... | M^(r)) of size |n| x |n|. Block j
/// has n_j columns; entry (k, l) of block j is m^(j) at unpair(k) + unpair(l).
template <Scalar T>
class MomentMatrix {
public:
    MomentMatrix(MultiIndex index, Matrix<T> matrix) : index_(std::move(index)), matrix_(std::move(matrix)) {}

    const MultiIndex& index() const noexcept { return index_; }
    const Matrix<T>& matrix() const noexcept { return matrix_; }

    /// Computed on first use. Not synchronised; do not share one instance
    /// between threads before the determinant has been taken.
    const T& determinant() const {
        if (!det_) det_ = det(matrix_);
        return *det_;
    }

    /// First column of block j.
    std::size_t block_offset(std::size_t j) const {
        std::size_t off = 0;
        for (std::size_t i = 0; i < j; ++i) off += index_[i];
        return off;
    }

private:
    MultiIndex index_;
    Matrix<T> matrix_;
    mutable std::optional<T> det_;
};

template <Scalar T>
MomentMatrix<T> moment_matrix(const MeasureSystem<T>& sys, const MultiIndex& n) {
    sys.require_length(n);
    const std::size_t size = n.modulus();
    Matrix<T> m(size, size);
    std::size_t col = 0;
    for (std::size_t j = 0; j < n.size(); ++j) {
        for (Natural l = 0; l < n[j]; ++l, ++col) {
            const Exponents el = unpair(l);
            for (std::size_t k = 0; k < size; ++k) m(k, col) = sys.moment(j, unpair(k) + el);
        }
    }
    return MomentMatrix<T>(n, std::move(m));
}

enum class Normality { normal, singular, indeterminate };

inline const char* to_string(Normality n) {
    switch (n) {
        case Normality::normal: return "normal";
        case Normality::singular: return "singular";
        case Normality::indeterminate: return "indeterminate";
    }
    return "?";
}

template <Scalar T>
struct NormalityReport {
    Normality verdict = Normality::normal;
    T det{};
    double conditioning = 1.0;  // see relative_min_pivot
    bool normal() const noexcept { return verdict == Normality::normal; }
};

/// Exact mode: normal iff det != 0. Float mode compares the relative minimum
/// pivot against the tolerance band and answers "indeterminate" inside
/// [tol.singular, tol.indeterminate].
template <Scalar T>
NormalityReport<T> normality_of(const Matrix<T>& m, const Tolerance& tol = {}) {
    NormalityReport<T> r;
    r.det = det(m);
    r.conditioning = relative_min_pivot(m);
    if constexpr (ScalarTraits<T>::exact) {
        r.verdict = is_zero(r.det) ? Normality::singular : Normality::normal;
    } else {
        if (r.conditioning < tol.singular)
            r.verdict = Normality::singular;
        else if (r.conditioning <= tol.indeterminate)
            r.verdict = Normality::indeterminate;
        else
            r.verdict = Normality::normal;
    }
    return r;
}

template <Scalar T>
NormalityReport<T> is_normal(const MeasureSystem<T>& sys, const MultiIndex& n, const Tolerance& tol = {}) {
    return normality_of(moment_matrix(sys, n).matrix(), tol);
}

// ---------------------------------------------------------------------------
// Bivariate Type II / Type I
// ---------------------------------------------------------------------------

/// Type I polynomials A_{n,1..r}; A_{n,j} has pair(mdeg) <= n_j - 1.
template <Scalar T>
struct TypeISet {
    MultiIndex index;
    std::vector<BiPoly<T>> polys;
};

namespace detail {

template <Scalar T>
[[noreturn]] void throw_not_normal(const MeasureSystem<T>& sys, const MultiIndex& n, const Singular& s) {
    if constexpr (ScalarTraits<T>::exact) {
        (void)sys;
        throw NotNormal(n.to_string(), s.det());
    } else {
        throw NotNormal(n.to_string(), to_string(det(moment_matrix(sys, n).matrix())));
    }
}

}  // namespace detail

/// Monic P_n with pair(mdeg P_n) = |n| and <P_n, x^t y^s>_j = 0 for
/// pair(t,s) <= n_j - 1. Coefficients solve M_n^t c = -b.
template <Scalar T>
BiPoly<T> type2(const MeasureSystem<T>& sys, const MultiIndex& n, const Tolerance& tol = {}) {
    sys.require_length(n);
    const Natural size = n.modulus();
    if (size == 0) return BiPoly<T>::constant(ScalarTraits<T>::one());

    const MomentMatrix<T> mm = moment_matrix(sys, n);
    const Exponents top = unpair(size);
    std::vector<T> rhs;
    rhs.reserve(size);
    for (std::size_t j = 0; j < n.size(); ++j)
        for (Natural l = 0; l < n[j]; ++l) rhs.push_back(T(-sys.moment(j, top + unpair(l))));

    std::vector<T> c;
    try {
        c = solve(mm.matrix().transposed(), rhs, tol);
    } catch (const Singular& s) {
        detail::throw_not_normal(sys, n, s);
    }
    c.push_back(ScalarTraits<T>::one());
    return BiPoly<T>(std::move(c));
}

/// Type I polynomials: sum_j <A_{n,j}, x^t y^s>_j = 0 for pair(t,s) <= |n|-2
/// and 1 at |n|-1. Coefficients solve M_n c = (0, ..., 0, 1)^t.
template <Scalar T>
TypeISet<T> type1(const MeasureSystem<T>& sys, const MultiIndex& n, const Tolerance& tol = {}) {
    sys.require_length(n);
    const Natural size = n.modulus();
    if (size == 0) throw EmptyIndex("Type I polynomials need |n| >= 1");

    const MomentMatrix<T> mm = moment_matrix(sys, n);
    std::vector<T> rhs(size, ScalarTraits<T>::zero());
    rhs.back() = ScalarTraits<T>::one();

    std::vector<T> c;
    try {
        c = solve(mm.matrix(), rhs, tol);
    } catch (const Singular& s) {
        detail::throw_not_normal(sys, n, s);
    }
    TypeISet<T> out{n, {}};
    std::size_t off = 0;
    for (std::size_t j = 0; j < n.size(); ++j) {
        std::vector<T> block(c.begin() + off, c.begin() + off + n[j]);
        out.polys.emplace_back(std::move(block));
        off += n[j];
    }
    return out;
}

/// <P, Q>_j through moments: sum_{u,v} P[u] Q[v] m^(j)_{unpair(u)+unpair(v)}.
template <Scalar T>
T inner(const MeasureSystem<T>& sys, std::size_t j, const BiPoly<T>& p, const BiPoly<T>& q) {
    T acc = ScalarTraits<T>::zero();
    const auto& pc = p.coeffs();
    const auto& qc = q.coeffs();
    for (std::size_t u = 0; u < pc.size(); ++u) {
        if (is_zero(pc[u])) continue;
        const Exponents eu = unpair(u);
        for (std::size_t v = 0; v < qc.size(); ++v) {
            if (is_zero(qc[v])) continue;
            acc += pc[u] * qc[v] * sys.moment(j, eu + unpair(v));
        }
    }
    return acc;
}

/// <P, Q_m>_mu = sum_j <P, A_{m,j}>_j.
template <Scalar T>
T type1_pairing(const MeasureSystem<T>& sys, const BiPoly<T>& p, const TypeISet<T>& a) {
    T acc = ScalarTraits<T>::zero();
    for (std::size_t j = 0; j < a.polys.size(); ++j) acc += inner(sys, j, p, a.polys[j]);
    return acc;
}

/// As above, solving for Q_m first. Q of the zero index is the zero function.
template <Scalar T>
T type1_pairing(const MeasureSystem<T>& sys, const BiPoly<T>& p, const MultiIndex& m, const Tolerance& tol = {}) {
    sys.require_length(m);
    if (m.modulus() == 0) return ScalarTraits<T>::zero();
    return type1_pairing(sys, p, type1(sys, m, tol));
}

template <Scalar T>
BiPoly<T> mul_x(const BiPoly<T>& p) { return p.mul_x(); }
template <Scalar T>
BiPoly<T> mul_y(const BiPoly<T>& p) { return p.mul_y(); }

template <Scalar T>
T eval(const BiPoly<T>& p, const T& x, const T& y) { return p.eval(x, y); }

/// Q_n(x, y) = sum_j A_{n,j}(x, y) w_j(x, y), in binary64.
template <Scalar T>
double eval_q(const MeasureSystem<T>& sys, const TypeISet<T>& s, double x, double y) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s.polys.size(); ++j) {
        const auto& m = sys.measure(j);
        if (!m.has_weight()) throw NoWeightEvaluator("measure " + std::to_string(j) + " has no weight function");
        const BiPoly<double> a = s.polys[j].template map<double>([](const T& v) { return ScalarTraits<T>::to_double(v); });
        acc += a.eval(x, y) * m.weight(x, y);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Univariate theory
// ---------------------------------------------------------------------------

/// Stacked blocks M^(j), rows k = 0..n_j-1, columns 0..|n|-1, entry m^(j)_{k+col}.
template <Scalar T>
Matrix<T> uni_moment_matrix(const UniSystem<T>& sys, const MultiIndex& n) {
    sys.require_length(n);
    const std::size_t size = n.modulus();
    Matrix<T> m(size, size);
    std::size_t row = 0;
    for (std::size_t j = 0; j < n.size(); ++j)
        for (Natural k = 0; k < n[j]; ++k, ++row)
            for (std::size_t col = 0; col < size; ++col) m(row, col) = sys.moment(j, k + col);
    return m;
}

template <Scalar T>
NormalityReport<T> uni_is_normal(const UniSystem<T>& sys, const MultiIndex& n, const Tolerance& tol = {}) {
    return normality_of(uni_moment_matrix(sys, n), tol);
}

/// Monic degree-|n| polynomial with <P, x^k>_j = 0 for k < n_j.
template <Scalar T>
UniPoly<T> uni_type2(const UniSystem<T>& sys, const MultiIndex& n, const Tolerance& tol = {}) {
    const Matrix<T> m = uni_moment_matrix(sys, n);
    const Natural size = n.modulus();
    std::vector<T> rhs;
    for (std::size_t j = 0; j < n.size(); ++j)
        for (Natural k = 0; k < n[j]; ++k) rhs.push_back(T(-sys.moment(j, size + k)));
    std::vector<T> c;
    try {
        c = solve(m, rhs, tol);
    } catch (const Singular&) {
        throw NotNormal(n.to_string(), to_string(det(m)));
    }
    c.push_back(ScalarTraits<T>::one());
    return UniPoly<T>(std::move(c));
}

/// A_{n,j} with deg <= n_j - 1 and sum_j <A_{n,j}, x^k>_j = delta_{k,|n|-1}.
template <Scalar T>
std::vector<UniPoly<T>> uni_type1(const UniSystem<T>& sys, const MultiIndex& n, const Tolerance& tol = {}) {
    const Natural size = n.modulus();
    if (size == 0) throw EmptyIndex("Type I polynomials need |n| >= 1");
    const Matrix<T> m = uni_moment_matrix(sys, n);
    std::vector<T> rhs(size, ScalarTraits<T>::zero());
    rhs.back() = ScalarTraits<T>::one();
    std::vector<T> c;
    try {
        c = solve(m.transposed(), rhs, tol);
    } catch (const Singular&) {
        throw NotNormal(n.to_string(), to_string(det(m)));
    }
    std::vector<UniPoly<T>> out;
    std::size_t off = 0;
    for (std::size_t j = 0; j < n.size(); ++j) {
        out.emplace_back(std::vector<T>(c.begin() + off, c.begin() + off + n[j]));
        off += n[j];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Memoising front end
// ---------------------------------------------------------------------------

/// Caches Type II and Type I solutions per multi-index for one system. Used by
/// the relation checks, which revisit the same indices many times. Not
/// thread-safe; use one instance per thread.
template <Scalar T>
class MopSolver {
public:
    explicit MopSolver(const MeasureSystem<T>& sys, Tolerance tol = {}) : sys_(sys), tol_(tol) {}

    const MeasureSystem<T>& system() const noexcept { return sys_; }
    const Tolerance& tolerance() const noexcept { return tol_; }

    const BiPoly<T>& p(const MultiIndex& n) {
        auto it = p_.find(n);
        if (it == p_.end()) it = p_.emplace(n, type2(sys_, n, tol_)).first;
        return it->second;
    }

    /// Type I set; the zero index maps to r zero polynomials (Q_0 = 0).
    const TypeISet<T>& a(const MultiIndex& n) {
        auto it = a_.find(n);
        if (it == a_.end()) {
            if (n.modulus() == 0) {
                sys_.require_length(n);
                it = a_.emplace(n, TypeISet<T>{n, std::vector<BiPoly<T>>(n.size())}).first;
            } else {
                it = a_.emplace(n, type1(sys_, n, tol_)).first;
            }
        }
        return it->second;
    }

    T pairing(const BiPoly<T>& poly, const MultiIndex& m) { return type1_pairing(sys_, poly, a(m)); }

private:
    const MeasureSystem<T>& sys_;
    Tolerance tol_;
    std::map<MultiIndex, BiPoly<T>> p_;
    std::map<MultiIndex, TypeISet<T>> a_;
};

}  // namespace bimop
