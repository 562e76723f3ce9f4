#pragma once

#include <string>
#include <vector>

#include "bimop/bimop.hpp"
#include "oracle.hpp"

namespace testing_support {

using namespace bimop;

inline UnivariateFamily<Rational> lag(const char* a) { return UnivariateFamily<Rational>::laguerre(Rational(a)); }

/// The four products mu_i(x) phi_j(y), mu = Laguerre(1, 11/5), phi = Laguerre(23/10, 17/5).
inline ProductSystem<Rational> product_laguerre() {
    return ProductSystem<Rational>(UniSystem<Rational>({lag("1"), lag("11/5")}),
                                   UniSystem<Rational>({lag("23/10"), lag("17/5")}));
}

inline std::vector<oracle::Tensor> product_laguerre_oracle() {
    using oracle::lag;
    return {{lag("1"), lag("23/10")}, {lag("1"), lag("17/5")}, {lag("11/5"), lag("23/10")}, {lag("11/5"), lag("17/5")}};
}

/// Two-measure system mu_1 phi_1, mu_2 phi_2.
inline MeasureSystem<Rational> laguerre_pair() {
    return MeasureSystem<Rational>({BivariateMeasure<Rational>::tensor(lag("1"), lag("23/10")),
                                    BivariateMeasure<Rational>::tensor(lag("11/5"), lag("17/5"))});
}

inline std::vector<oracle::Tensor> laguerre_pair_oracle() {
    using oracle::lag;
    return {{lag("1"), lag("23/10")}, {lag("11/5"), lag("17/5")}};
}

template <class T>
MeasureSystem<T> laguerre_pair_as() {
    auto l = [](const char* a) { return UnivariateFamily<T>::laguerre(Rational(a)); };
    return MeasureSystem<T>({BivariateMeasure<T>::tensor(l("1"), l("23/10")),
                             BivariateMeasure<T>::tensor(l("11/5"), l("17/5"))});
}

inline oracle::Poly to_oracle(const BiPoly<Rational>& p) {
    oracle::Poly out;
    for (const auto& term : p.terms()) out[{term.t, term.s}] = term.c;
    return out;
}

inline std::vector<oracle::Poly> to_oracle(const TypeISet<Rational>& s) {
    std::vector<oracle::Poly> out;
    for (const auto& p : s.polys) out.push_back(to_oracle(p));
    return out;
}

/// All multi-indices of length r with modulus <= max, ascending modulus.
inline std::vector<MultiIndex> indices_up_to(std::size_t r, Natural max) {
    std::vector<MultiIndex> out;
    std::vector<Natural> cur(r, 0);
    auto rec = [&](auto&& self, std::size_t j, Natural left) -> void {
        if (j + 1 == r) {
            cur[j] = left;
            out.emplace_back(cur);
            return;
        }
        for (Natural x = 0; x <= left; ++x) {
            cur[j] = x;
            self(self, j + 1, left - x);
        }
    };
    for (Natural q = 0; q <= max; ++q) rec(rec, 0, q);
    return out;
}

/// Two recurrence paths through n = (6,8) from the origin, each ending at its w_y.
inline Path worked_path() {
    return Path({{0, 0}, {0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {2, 5}, {2, 6}, {3, 6}, {3, 7},
                 {4, 7}, {5, 7}, {6, 7}, {6, 8}, {7, 8}, {7, 9}, {8, 9}, {9, 9}, {9, 10}, {9, 11}});
}

inline Path alternate_path() {
    return Path({{0, 0}, {1, 0}, {1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}, {2, 6}, {3, 6}, {3, 7},
                 {3, 8}, {4, 8}, {5, 8}, {6, 8}, {7, 8}, {8, 8}, {9, 8}, {10, 8}, {11, 8}, {12, 8}});
}

inline std::vector<std::uint64_t> plain(const MultiIndex& n) { return {n.begin(), n.end()}; }

inline std::string config_path(const std::string& name) { return std::string(BIMOP_CONFIG_DIR) + "/" + name; }

}  // namespace testing_support
