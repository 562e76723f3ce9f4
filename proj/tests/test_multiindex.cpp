#include <gtest/gtest.h>

#include "bimop/multiindex.hpp"
#include "oracle.hpp"

using namespace bimop;

TEST(Pairing, KnownValues) {
    EXPECT_EQ(pair(0, 0), 0u);
    EXPECT_EQ(pair(1, 2), 8u);
    EXPECT_EQ(pair(2, 1), 7u);
    EXPECT_EQ(pair(0, 5), 20u);
}

TEST(Pairing, UnpairKnownValues) {
    EXPECT_EQ(unpair(0), (Exponents{0, 0}));
    EXPECT_EQ(unpair(8), (Exponents{1, 2}));
    EXPECT_EQ(unpair(12), (Exponents{2, 2}));
}

TEST(Pairing, MatchesMonomialEnumeration) {
    const auto mono = oracle::monomials(2000);
    for (std::size_t z = 0; z < mono.size(); ++z) {
        EXPECT_EQ(pair(mono[z].first, mono[z].second), z);
        EXPECT_EQ(unpair(z), (Exponents{mono[z].first, mono[z].second}));
    }
}

TEST(Pairing, LargeArgumentsUseExactSquareRoot) {
    for (Natural t : {Natural{0}, Natural{1}, Natural{123456}, Natural{2000000000}})
        for (Natural s : {Natural{0}, Natural{7}, Natural{987654}, Natural{1999999999}}) {
            const Natural z = pair(t, s);
            EXPECT_EQ(unpair(z), (Exponents{t, s}));
        }
}

TEST(Params, TableRows) {
    struct Row {
        MultiIndex n;
        Natural modulus;
        Exponents mdeg;
        Natural d, k;
    };
    const std::vector<Row> rows = {
        {{6, 2}, 8, {1, 2}, 3, 2},
        {{2, 1, 1}, 4, {1, 1}, 2, 1},
        {{4, 6, 7, 3}, 20, {0, 5}, 5, 5},
        {{1, 6, 2, 1, 2}, 12, {2, 2}, 4, 2},
    };
    for (const auto& r : rows) {
        const IndexParams p = params(r.n);
        EXPECT_EQ(p.modulus, r.modulus) << r.n.to_string();
        EXPECT_EQ(p.multidegree, r.mdeg) << r.n.to_string();
        EXPECT_EQ(p.degree, r.d) << r.n.to_string();
        EXPECT_EQ(p.remainder, r.k) << r.n.to_string();
    }
}

TEST(Params, OtherExamples) {
    EXPECT_EQ(params(MultiIndex{2, 4, 1}).modulus, 7u);
    EXPECT_EQ(params(MultiIndex{2, 4, 1}).degree, 3u);
    EXPECT_EQ(params(MultiIndex{2, 4, 1}).remainder, 1u);
    const IndexParams z = params(MultiIndex{0, 0});
    EXPECT_EQ(z.modulus, 0u);
    EXPECT_EQ(z.multidegree, (Exponents{0, 0}));
    EXPECT_EQ(z.degree, 0u);
    EXPECT_EQ(z.remainder, 0u);
}

TEST(Shifts, Examples) {
    EXPECT_EQ(shift_x(0, 4), 19u);
    EXPECT_EQ(shift_y(0, 4), 20u);
    EXPECT_EQ(shift_x(0, 0), 1u);
    EXPECT_EQ(shift_y(0, 0), 2u);
    EXPECT_EQ(shift_y(2, 1), 12u);
}

TEST(MultiIndexOps, ModulusOrderAndNeighbours) {
    const MultiIndex a{1, 2}, b{1, 3}, c{2, 2};
    EXPECT_EQ(a.modulus(), 3u);
    EXPECT_TRUE(a.leq(b));
    EXPECT_FALSE(b.leq(c));
    EXPECT_TRUE(a.is_neighbour_below(b));
    EXPECT_FALSE(a.is_neighbour_below(MultiIndex{2, 3}));
    EXPECT_EQ(a.plus_all(2), (MultiIndex{3, 4}));
    EXPECT_EQ(a.to_string(), "(1,2)");
    EXPECT_THROW((void)a.leq(MultiIndex{1, 2, 3}), LengthMismatch);
}

TEST(Paths, CanonicalPath) {
    const Path p = canonical_path({MultiIndex{0, 0}, MultiIndex{1, 1}});
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p.steps()[1], (MultiIndex{1, 0}));
    EXPECT_EQ(p.back(), (MultiIndex{1, 1}));

    const Path single = canonical_path({MultiIndex{1, 3}});
    EXPECT_EQ(single.size(), 1u);
    EXPECT_TRUE(single.is_valid());

    EXPECT_THROW(canonical_path({MultiIndex{1, 3}, MultiIndex{2, 2}}), NotComparable);
    EXPECT_THROW(canonical_path({}), PathInvalid);
}

TEST(Paths, WorkedPathIsValid) {
    const std::vector<MultiIndex> steps = {{0, 0}, {0, 1}, {0, 2}, {1, 2}, {1, 3},  {2, 3},  {2, 4},
                                           {2, 5}, {2, 6}, {3, 6}, {3, 7}, {4, 7},  {5, 7},  {6, 7},
                                           {6, 8}, {7, 8}, {7, 9}, {8, 9}, {9, 9},  {9, 10}, {9, 11}};
    const Path p(steps);
    EXPECT_TRUE(p.is_valid());
    EXPECT_EQ(p.at_modulus(14), (MultiIndex{6, 8}));
    EXPECT_TRUE(p.contains(MultiIndex{1, 3}));
    EXPECT_THROW((void)p.at_modulus(21), PathInvalid);

    std::vector<MultiIndex> gap = steps;
    gap.erase(gap.begin() + 5);
    EXPECT_FALSE(Path(gap).is_valid());
}

TEST(Chains, Validation) {
    EXPECT_TRUE(validate_chain({{1, 2}, {1, 3}, {2, 3}}, 2));
    EXPECT_FALSE(validate_chain({{1, 2}, {2, 3}}, 2));
    EXPECT_FALSE(validate_chain({{1, 2}, {1, 3}, {3, 3}}, 2));
    EXPECT_TRUE(validate_chain({{0, 0}}, 0));
}

TEST(Reduce, FromBack) {
    EXPECT_EQ(reduce_from_back(MultiIndex{2, 3}, 4), (MultiIndex{1, 0}));
    EXPECT_THROW(reduce_from_back(MultiIndex{1, 1}, 3), IndexTooSmall);
}
