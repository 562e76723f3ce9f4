#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bimop/errors.hpp"

namespace bimop {

using Natural = std::uint64_t;

// ---------------------------------------------------------------------------
// Cantor pairing.  Position z of the monomial x^t y^s in the graded reverse
// lexicographic basis {1, x, y, x^2, xy, y^2, ...}.
// ---------------------------------------------------------------------------

constexpr Natural pair(Natural t, Natural s) noexcept {
    const Natural d = t + s;
    return d * (d + 1) / 2 + s;
}

/// floor(sqrt(v)) by Newton iteration on integers.
constexpr Natural isqrt(Natural v) noexcept {
    if (v < 2) return v;
    Natural x = v;
    Natural y = x / 2 + 1;
    while (y < x) {
        x = y;
        y = (x + v / x) / 2;
    }
    return x;
}

/// Total degree d of the monomial at position z: the largest d with
/// d(d+1)/2 <= z.
constexpr Natural position_degree(Natural z) noexcept {
    // Start from floor(sqrt(2z)) and correct by one; the products go through
    // 128 bits so every z representable in 64 bits works.
    using Wide = unsigned __int128;
    Natural d = isqrt(z / 2) * 2;
    const auto tri = [](Natural k) { return Wide(k) * (Wide(k) + 1) / 2; };
    while (d > 0 && tri(d) > z) --d;
    while (tri(d + 1) <= z) ++d;
    return d;
}

struct Exponents {
    Natural t = 0;  // power of x
    Natural s = 0;  // power of y
    friend constexpr bool operator==(const Exponents&, const Exponents&) = default;
    friend std::ostream& operator<<(std::ostream& os, const Exponents& e) {
        return os << "(" << e.t << "," << e.s << ")";
    }
};

constexpr Exponents unpair(Natural z) noexcept {
    const Natural d = position_degree(z);
    const Natural s = z - d * (d + 1) / 2;
    return {d - s, s};
}

constexpr Exponents operator+(Exponents a, Exponents b) noexcept { return {a.t + b.t, a.s + b.s}; }

/// Position of x * x^l y^m.
constexpr Natural shift_x(Natural l, Natural m) noexcept { return pair(l, m) + (l + m) + 1; }
/// Position of y * x^l y^m.
constexpr Natural shift_y(Natural l, Natural m) noexcept { return pair(l, m) + (l + m) + 2; }

// ---------------------------------------------------------------------------
// Multi-indices
// ---------------------------------------------------------------------------

class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<Natural> components) : c_(std::move(components)) {}
    MultiIndex(std::initializer_list<Natural> components) : c_(components) {}

    static MultiIndex zeros(std::size_t r) { return MultiIndex(std::vector<Natural>(r, 0)); }
    static MultiIndex unit(std::size_t r, std::size_t j) {
        auto e = zeros(r);
        e.c_.at(j) = 1;
        return e;
    }

    std::size_t size() const noexcept { return c_.size(); }
    Natural operator[](std::size_t j) const { return c_[j]; }
    Natural& operator[](std::size_t j) { return c_[j]; }
    const std::vector<Natural>& components() const noexcept { return c_; }
    auto begin() const noexcept { return c_.begin(); }
    auto end() const noexcept { return c_.end(); }

    Natural modulus() const noexcept { return std::accumulate(c_.begin(), c_.end(), Natural{0}); }

    /// Componentwise order.
    bool leq(const MultiIndex& other) const {
        require_same_length(other);
        for (std::size_t j = 0; j < c_.size(); ++j)
            if (c_[j] > other.c_[j]) return false;
        return true;
    }

    /// Exactly one component larger by one.
    bool is_neighbour_below(const MultiIndex& next) const {
        if (next.size() != size()) return false;
        std::size_t diffs = 0;
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (next.c_[j] == c_[j]) continue;
            if (next.c_[j] != c_[j] + 1) return false;
            ++diffs;
        }
        return diffs == 1;
    }

    MultiIndex plus(const MultiIndex& other) const {
        require_same_length(other);
        MultiIndex out = *this;
        for (std::size_t j = 0; j < c_.size(); ++j) out.c_[j] += other.c_[j];
        return out;
    }

    /// Adds `k` to every component.
    MultiIndex plus_all(Natural k) const {
        MultiIndex out = *this;
        for (auto& v : out.c_) v += k;
        return out;
    }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (j) s += ",";
            s += std::to_string(c_[j]);
        }
        return s + ")";
    }
    friend std::ostream& operator<<(std::ostream& os, const MultiIndex& n) { return os << n.to_string(); }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

    void require_same_length(const MultiIndex& other) const {
        if (other.size() != size())
            throw LengthMismatch("multi-index lengths differ: " + to_string() + " vs " + other.to_string());
    }

private:
    std::vector<Natural> c_;
};

/// Modulus, multidegree, degree and remainder of a multi-index.
struct IndexParams {
    Natural modulus = 0;
    Exponents multidegree;  // pair(multidegree) == modulus
    Natural degree = 0;     // t + s
    Natural remainder = 0;  // s
    friend bool operator==(const IndexParams&, const IndexParams&) = default;
};

inline IndexParams params_of_modulus(Natural modulus) {
    const Exponents e = unpair(modulus);
    return {modulus, e, e.t + e.s, e.s};
}

inline IndexParams params(const MultiIndex& n) { return params_of_modulus(n.modulus()); }

// ---------------------------------------------------------------------------
// Paths of neighbour multi-indices
// ---------------------------------------------------------------------------

/// Sequence of multi-indices in which each step raises exactly one component
/// by one. Entries are addressable by modulus.
class Path {
public:
    Path() = default;
    explicit Path(std::vector<MultiIndex> steps) : steps_(std::move(steps)) {}

    const std::vector<MultiIndex>& steps() const noexcept { return steps_; }
    std::size_t size() const noexcept { return steps_.size(); }
    bool empty() const noexcept { return steps_.empty(); }
    const MultiIndex& front() const { return steps_.front(); }
    const MultiIndex& back() const { return steps_.back(); }

    Natural first_modulus() const { return steps_.front().modulus(); }
    Natural last_modulus() const { return steps_.back().modulus(); }

    bool covers(Natural modulus) const {
        return !steps_.empty() && modulus >= first_modulus() && modulus <= last_modulus();
    }

    /// Entry of the given modulus; the path must cover it.
    const MultiIndex& at_modulus(Natural modulus) const {
        if (!covers(modulus))
            throw PathInvalid("path does not reach modulus " + std::to_string(modulus));
        return steps_[modulus - first_modulus()];
    }

    bool contains(const MultiIndex& n) const {
        return covers(n.modulus()) && at_modulus(n.modulus()) == n;
    }

    bool is_valid() const {
        if (steps_.empty()) return false;
        for (std::size_t k = 0; k + 1 < steps_.size(); ++k)
            if (!steps_[k].is_neighbour_below(steps_[k + 1])) return false;
        return true;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t k = 0; k < steps_.size(); ++k) {
            if (k) s += " -> ";
            s += steps_[k].to_string();
        }
        return s;
    }

private:
    std::vector<MultiIndex> steps_;
};

/// Path through the waypoints, raising components in ascending order between
/// consecutive waypoints.
inline Path canonical_path(const std::vector<MultiIndex>& waypoints) {
    if (waypoints.empty()) throw PathInvalid("canonical_path needs at least one waypoint");
    std::vector<MultiIndex> steps{waypoints.front()};
    for (std::size_t w = 1; w < waypoints.size(); ++w) {
        const MultiIndex& target = waypoints[w];
        steps.back().require_same_length(target);
        if (!steps.back().leq(target))
            throw NotComparable("waypoint " + steps.back().to_string() + " is not <= " + target.to_string());
        MultiIndex cur = steps.back();
        for (std::size_t j = 0; j < cur.size(); ++j) {
            while (cur[j] < target[j]) {
                ++cur[j];
                steps.push_back(cur);
            }
        }
    }
    return Path(std::move(steps));
}

/// A chain for total degree d: d+1 neighbour indices with |n_k| = d(d+1)/2 + k.
inline bool validate_chain(const std::vector<MultiIndex>& indices, Natural d) {
    if (indices.size() != d + 1) return false;
    for (Natural k = 0; k <= d; ++k) {
        if (indices[k].size() != indices[0].size()) return false;
        if (indices[k].modulus() != d * (d + 1) / 2 + k) return false;
        if (k > 0 && !indices[k - 1].is_neighbour_below(indices[k])) return false;
    }
    return true;
}

/// Removes `amount` units from `n`, taking from the last component first.
inline MultiIndex reduce_from_back(MultiIndex n, Natural amount) {
    for (std::size_t j = n.size(); j-- > 0 && amount > 0;) {
        const Natural take = std::min(n[j], amount);
        n[j] -= take;
        amount -= take;
    }
    if (amount > 0) throw IndexTooSmall("cannot remove enough units from " + n.to_string());
    return n;
}

}  // namespace bimop
