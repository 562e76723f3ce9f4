#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "support.hpp"

using namespace bimop;
using testing_support::lag;

TEST(Families, LaguerreMoments) {
    const auto f = lag("1");
    EXPECT_EQ(f.moment(0), 1);
    EXPECT_EQ(f.moment(1), 2);
    EXPECT_EQ(f.moment(2), 6);
    EXPECT_EQ(lag("23/10").moment(1), Rational(33, 10));
    EXPECT_THROW(UnivariateFamily<Rational>::laguerre(Rational(-1, 2)), NegativeAlpha);
}

TEST(Families, JacobiMoments) {
    const auto f = UnivariateFamily<Rational>::jacobi(Rational(1, 2));
    EXPECT_EQ(f.moment(0), 1);
    EXPECT_EQ(f.moment(1), Rational(3, 5));
    EXPECT_EQ(f.moment(3), Rational(1, 3));
    EXPECT_THROW(UnivariateFamily<Rational>::jacobi(Rational(-1)), NegativeAlpha);
}

TEST(Families, TableMoments) {
    const auto f = UnivariateFamily<Rational>::table({Rational(1), Rational(2), Rational(6)});
    EXPECT_EQ(f.moment(2), 6);
    EXPECT_THROW(f.moment(3), TableExhausted);
    EXPECT_FALSE(f.has_weight());
    EXPECT_THROW(f.weight(1.0), NoWeightEvaluator);
}

TEST(Families, MomentsAgreeWithOracleRecurrence) {
    for (const char* a : {"0", "1", "11/5", "23/10", "17/5", "7/3"}) {
        const auto mine = lag(a);
        const auto ref = oracle::lag(a);
        for (Natural k = 0; k <= 20; ++k) ASSERT_EQ(mine.moment(k), ref.moment(k)) << a << " k=" << k;
    }
}

TEST(Families, WeightsReproduceMoments) {
    // Trapezoid quadrature of x^k w(x) on a fine grid against the stored moments.
    for (const auto& f : {lag("1"), lag("23/10"), UnivariateFamily<Rational>::jacobi(Rational(1, 2))}) {
        const bool finite = std::holds_alternative<UnivariateFamily<Rational>::Jacobi>(f.kind());
        const double hi = finite ? 1.0 : 80.0;
        const int steps = 400000;
        const double h = hi / steps;
        for (Natural k = 0; k <= 3; ++k) {
            double acc = 0.0;
            for (int i = 0; i <= steps; ++i) {
                const double x = i * h;
                const double v = std::pow(x, static_cast<double>(k)) * f.weight(x);
                acc += (i == 0 || i == steps) ? v / 2 : v;
            }
            EXPECT_NEAR(acc * h, f.moment(k).get_d(), 2e-3 * f.moment(k).get_d()) << f.describe() << " k=" << k;
        }
    }
}

TEST(Bivariate, TensorMoments) {
    const auto m = BivariateMeasure<Rational>::tensor(lag("1"), lag("23/10"));
    EXPECT_EQ(m.moment(0, 0), 1);
    EXPECT_EQ(m.moment(1, 0), 2);
    EXPECT_EQ(m.moment(0, 1), Rational(33, 10));
    for (Natural t = 0; t <= 20; ++t)
        for (Natural s = 0; s <= 20; ++s) ASSERT_EQ(m.moment(t, s), lag("1").moment(t) * lag("23/10").moment(s));
}

TEST(Bivariate, ScalingMultipliesMoments) {
    std::map<std::pair<Natural, Natural>, Rational> tab{{{0, 0}, Rational(2)}, {{1, 0}, Rational(3, 7)}};
    const auto m = BivariateMeasure<Rational>::table(tab);
    const auto s = m.scaled(Rational(5, 3));
    EXPECT_EQ(s.moment(0, 0), Rational(10, 3));
    EXPECT_EQ(s.moment(1, 0), Rational(5, 7));
    EXPECT_THROW(s.moment(0, 1), TableExhausted);
    EXPECT_THROW(m.scaled(Rational(0)), NegativeAlpha);
}

TEST(System, MomentLookupAndErrors) {
    const auto sys = testing_support::laguerre_pair();
    EXPECT_EQ(sys.size(), 2u);
    EXPECT_EQ(sys.moment(1, 1, 1), Rational(16, 5) * Rational(22, 5));
    EXPECT_THROW(sys.moment(2, 0, 0), IndexOutOfRange);
    EXPECT_THROW(sys.require_length(MultiIndex{1, 2, 3}), LengthMismatch);
    EXPECT_THROW(MeasureSystem<Rational>({}), IndexOutOfRange);
}

TEST(System, CacheIsConsistentUnderConcurrentReaders) {
    const auto sys = testing_support::laguerre_pair();
    std::vector<std::thread> threads;
    std::vector<int> ok(4, 1);
    for (int i = 0; i < 4; ++i)
        threads.emplace_back([&, i] {
            for (Natural t = 0; t < 15; ++t)
                for (Natural s = 0; s < 15; ++s)
                    if (sys.moment(i % 2, t, s) != sys.measure(i % 2).moment(t, s)) ok[i] = 0;
        });
    for (auto& t : threads) t.join();
    for (int v : ok) EXPECT_EQ(v, 1);
    EXPECT_EQ(sys.cached_moments(), 2u * 15 * 15);
}

TEST(Config, ProductLaguerreDocument) {
    const auto sys = parse_config_text<Rational>(R"({"xsystem":[{"family":"laguerre","alpha":"1"},
        {"family":"laguerre","alpha":"2.2"}],"ysystem":[{"family":"laguerre","alpha":"2.3"},
        {"family":"laguerre","alpha":"3.4"}]})");
    EXPECT_EQ(sys.size(), 4u);
    EXPECT_EQ(sys.moment(2, 1, 0), Rational(16, 5));
    EXPECT_EQ(sys.moment(1, 0, 1), Rational(22, 5));
}

TEST(Config, MeasuresDocument) {
    const auto sys = parse_config_text<Rational>(R"({"scalar":"exact","measures":[
        {"kind":"tensor","x":{"family":"laguerre","alpha":"2.2"},"y":{"family":"jacobi","a":"1/2"},"scale":"3"},
        {"kind":"table","moments":[{"t":0,"s":0,"value":"1"},{"t":1,"s":0,"value":"5/2"}]}]})");
    EXPECT_EQ(sys.size(), 2u);
    EXPECT_EQ(sys.moment(0, 1, 0), Rational(48, 5));
    EXPECT_EQ(sys.moment(1, 1, 0), Rational(5, 2));
    const auto& fam = std::get<BivariateMeasure<Rational>::Tensor>(sys.measure(0).kind()).x;
    EXPECT_EQ(std::get<UnivariateFamily<Rational>::Laguerre>(fam.kind()).alpha, Rational(11, 5));
}

TEST(Config, SchemaErrorsCarryPaths) {
    auto path_of = [](const char* text) {
        try {
            parse_config_text<Rational>(text);
        } catch (const SchemaError& e) {
            return e.path();
        }
        return std::string("no error");
    };
    EXPECT_EQ(path_of(R"({"measures":[]})"), "/measures");
    EXPECT_EQ(path_of(R"({"measures":[{"kind":"tensor","x":{"family":"laguerre"},"y":{"family":"laguerre","alpha":"1"}}]})"),
              "/measures/0/x/alpha");
    EXPECT_EQ(path_of(R"({"measures":[{"kind":"tensor","x":{"family":"laguerre","alpha":2.2},"y":{"family":"laguerre","alpha":"1"}}]})"),
              "/measures/0/x/alpha");
    EXPECT_EQ(path_of(R"({"measures":[{"kind":"blob"}]})"), "/measures/0/kind");
    EXPECT_EQ(path_of(R"({"scalar":"quad","measures":[]})"), "/scalar");
    EXPECT_EQ(path_of("not json"), "");
    EXPECT_THROW(parse_config_text<Rational>(
                     R"({"measures":[{"kind":"tensor","x":{"family":"laguerre","alpha":"-1"},"y":{"family":"laguerre","alpha":"1"}}]})"),
                 NegativeAlpha);
}

TEST(Config, FloatDispatch) {
    const auto any = parse_config_any(R"({"scalar":"float64","measures":[{"kind":"tensor",
        "x":{"family":"laguerre","alpha":"1"},"y":{"family":"laguerre","alpha":"23/10"}}]})");
    ASSERT_TRUE(std::holds_alternative<MeasureSystem<double>>(any));
    EXPECT_DOUBLE_EQ(std::get<MeasureSystem<double>>(any).moment(0, 1, 1), 6.6);
}
