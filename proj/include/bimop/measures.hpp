#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "bimop/errors.hpp"
#include "bimop/multiindex.hpp"
#include "bimop/scalar.hpp"

namespace bimop {

/// Univariate moment sequence. Built-in families store moments relative to
/// m_0, so m_0 = 1 and every moment is rational for rational parameters.
///
///   laguerre(alpha): weight x^alpha e^-x / Gamma(alpha+1) on (0, inf),
///                    m_k = (alpha+1)(alpha+2)...(alpha+k)
///   jacobi(a):       weight (a+1) x^a on [0, 1],  m_k = (a+1)/(a+k+1)
///   table(ms):       raw moments, no weight evaluator
template <Scalar T>
class UnivariateFamily {
public:
    struct Laguerre {
        Rational alpha;
    };
    struct Jacobi {
        Rational a;
    };
    struct Table {
        std::vector<T> moments;
    };

    static UnivariateFamily laguerre(const Rational& alpha) {
        if (sgn(alpha) < 0) throw NegativeAlpha("laguerre exponent must be >= 0, got " + to_string(alpha));
        return UnivariateFamily(Laguerre{alpha});
    }
    static UnivariateFamily jacobi(const Rational& a) {
        if (a <= -1) throw NegativeAlpha("jacobi exponent must be > -1, got " + to_string(a));
        return UnivariateFamily(Jacobi{a});
    }
    static UnivariateFamily table(std::vector<T> moments) { return UnivariateFamily(Table{std::move(moments)}); }

    T moment(Natural k) const {
        return std::visit(
            [k](const auto& f) -> T {
                using F = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<F, Laguerre>) {
                    Rational m(1);
                    for (Natural i = 1; i <= k; ++i) m *= f.alpha + Rational(static_cast<unsigned long>(i));
                    return ScalarTraits<T>::from_rational(m);
                } else if constexpr (std::is_same_v<F, Jacobi>) {
                    Rational m = (f.a + 1) / (f.a + Rational(static_cast<unsigned long>(k + 1)));
                    return ScalarTraits<T>::from_rational(m);
                } else {
                    if (k >= f.moments.size())
                        throw TableExhausted("moment table has " + std::to_string(f.moments.size()) +
                                             " entries, order " + std::to_string(k) + " requested");
                    return f.moments[k];
                }
            },
            kind_);
    }

    bool has_weight() const { return !std::holds_alternative<Table>(kind_); }

    /// Density whose moments are exactly `moment(k)`.
    double weight(double x) const {
        if (const auto* l = std::get_if<Laguerre>(&kind_)) {
            if (x <= 0.0) return 0.0;
            const double a = l->alpha.get_d();
            return std::exp(a * std::log(x) - x - std::lgamma(a + 1.0));
        }
        if (const auto* j = std::get_if<Jacobi>(&kind_)) {
            if (x < 0.0 || x > 1.0) return 0.0;
            const double a = j->a.get_d();
            return (a + 1.0) * std::pow(x, a);
        }
        throw NoWeightEvaluator("moment tables carry no weight function");
    }

    std::string describe() const {
        if (const auto* l = std::get_if<Laguerre>(&kind_)) return "laguerre(" + to_string(l->alpha) + ")";
        if (const auto* j = std::get_if<Jacobi>(&kind_)) return "jacobi(" + to_string(j->a) + ")";
        return "table[" + std::to_string(std::get<Table>(kind_).moments.size()) + "]";
    }

    const auto& kind() const noexcept { return kind_; }

private:
    template <class K>
    explicit UnivariateFamily(K k) : kind_(std::move(k)) {}
    std::variant<Laguerre, Jacobi, Table> kind_;
};

/// A bivariate measure given by its moments m_(t,s), optionally scaled by a
/// positive constant.
template <Scalar T>
class BivariateMeasure {
public:
    struct Tensor {
        UnivariateFamily<T> x;
        UnivariateFamily<T> y;
    };
    struct Table {
        std::map<std::pair<Natural, Natural>, T> moments;
    };

    static BivariateMeasure tensor(UnivariateFamily<T> x, UnivariateFamily<T> y) {
        return BivariateMeasure(Tensor{std::move(x), std::move(y)});
    }
    static BivariateMeasure table(std::map<std::pair<Natural, Natural>, T> moments) {
        return BivariateMeasure(Table{std::move(moments)});
    }

    /// Same measure multiplied by c > 0.
    BivariateMeasure scaled(const T& c) const {
        if (!(c > ScalarTraits<T>::zero())) throw NegativeAlpha("scale factor must be positive");
        BivariateMeasure out = *this;
        out.scale_ = scale_ * c;
        return out;
    }

    T moment(Natural t, Natural s) const {
        if (const auto* p = std::get_if<Tensor>(&kind_)) return T(scale_ * p->x.moment(t) * p->y.moment(s));
        const auto& tab = std::get<Table>(kind_).moments;
        auto it = tab.find({t, s});
        if (it == tab.end())
            throw TableExhausted("moment table has no entry for (t,s) = (" + std::to_string(t) + "," +
                                 std::to_string(s) + ")");
        return T(scale_ * it->second);
    }

    bool has_weight() const {
        const auto* p = std::get_if<Tensor>(&kind_);
        return p && p->x.has_weight() && p->y.has_weight();
    }

    double weight(double x, double y) const {
        const auto* p = std::get_if<Tensor>(&kind_);
        if (!p) throw NoWeightEvaluator("moment tables carry no weight function");
        return ScalarTraits<T>::to_double(scale_) * p->x.weight(x) * p->y.weight(y);
    }

    const T& scale() const noexcept { return scale_; }
    const auto& kind() const noexcept { return kind_; }

    std::string describe() const {
        std::string s;
        if (const auto* p = std::get_if<Tensor>(&kind_))
            s = p->x.describe() + " x " + p->y.describe();
        else
            s = "table[" + std::to_string(std::get<Table>(kind_).moments.size()) + "]";
        if (scale_ != ScalarTraits<T>::one()) s = to_string(scale_) + " * " + s;
        return s;
    }

private:
    template <class K>
    explicit BivariateMeasure(K k) : kind_(std::move(k)) {}
    std::variant<Tensor, Table> kind_;
    T scale_ = ScalarTraits<T>::one();
};

/// r bivariate measures over one scalar field, with a shared memo of moments.
/// Copies share the memo; the measures themselves are immutable.
template <Scalar T>
class MeasureSystem {
public:
    using value_type = T;

    explicit MeasureSystem(std::vector<BivariateMeasure<T>> measures)
        : measures_(std::move(measures)), cache_(std::make_shared<Cache>()) {
        if (measures_.empty()) throw IndexOutOfRange("a measure system needs at least one measure");
    }

    std::size_t size() const noexcept { return measures_.size(); }
    const BivariateMeasure<T>& measure(std::size_t j) const {
        check_index(j);
        return measures_[j];
    }
    const std::vector<BivariateMeasure<T>>& measures() const noexcept { return measures_; }

    /// m^(j)_(t,s), 0-based measure index j.
    T moment(std::size_t j, Natural t, Natural s) const {
        check_index(j);
        const Key key{j, t, s};
        {
            std::shared_lock lock(cache_->mutex);
            if (auto it = cache_->values.find(key); it != cache_->values.end()) return it->second;
        }
        T value = measures_[j].moment(t, s);
        std::unique_lock lock(cache_->mutex);
        return cache_->values.try_emplace(key, std::move(value)).first->second;
    }
    T moment(std::size_t j, Exponents e) const { return moment(j, e.t, e.s); }

    void require_length(const MultiIndex& n) const {
        if (n.size() != size())
            throw LengthMismatch("multi-index " + n.to_string() + " has length " + std::to_string(n.size()) +
                                 ", system has " + std::to_string(size()) + " measures");
    }

    std::size_t cached_moments() const {
        std::shared_lock lock(cache_->mutex);
        return cache_->values.size();
    }

private:
    void check_index(std::size_t j) const {
        if (j >= measures_.size())
            throw IndexOutOfRange("measure index " + std::to_string(j) + " out of range for r = " +
                                  std::to_string(measures_.size()));
    }

    struct Key {
        std::size_t j;
        Natural t, s;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::uint64_t h = k.j;
            h = h * 0x9E3779B97F4A7C15ull ^ k.t;
            h = h * 0x9E3779B97F4A7C15ull ^ k.s;
            return static_cast<std::size_t>(h);
        }
    };
    struct Cache {
        mutable std::shared_mutex mutex;
        std::unordered_map<Key, T, KeyHash> values;
    };

    std::vector<BivariateMeasure<T>> measures_;
    std::shared_ptr<Cache> cache_;
};

/// r univariate measures (moment sequences) for the one-variable theory.
template <Scalar T>
class UniSystem {
public:
    using value_type = T;

    explicit UniSystem(std::vector<UnivariateFamily<T>> families) : families_(std::move(families)) {
        if (families_.empty()) throw IndexOutOfRange("a measure system needs at least one measure");
    }

    std::size_t size() const noexcept { return families_.size(); }
    const UnivariateFamily<T>& family(std::size_t j) const {
        if (j >= families_.size()) throw IndexOutOfRange("measure index " + std::to_string(j) + " out of range");
        return families_[j];
    }
    const std::vector<UnivariateFamily<T>>& families() const noexcept { return families_; }
    T moment(std::size_t j, Natural k) const { return family(j).moment(k); }

    void require_length(const MultiIndex& n) const {
        if (n.size() != size())
            throw LengthMismatch("multi-index " + n.to_string() + " does not match system of " +
                                 std::to_string(size()) + " measures");
    }

private:
    std::vector<UnivariateFamily<T>> families_;
};

/// Bivariate system of all products x_i(x) * y_j(y), ordered (i, j) row-major.
template <Scalar T>
MeasureSystem<T> tensor_system(const UniSystem<T>& xs, const UniSystem<T>& ys) {
    std::vector<BivariateMeasure<T>> ms;
    for (const auto& fx : xs.families())
        for (const auto& fy : ys.families()) ms.push_back(BivariateMeasure<T>::tensor(fx, fy));
    return MeasureSystem<T>(std::move(ms));
}

}  // namespace bimop
