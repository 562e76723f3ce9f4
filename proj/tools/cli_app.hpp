#pragma once

// Command-line front end. `run` is separate from main() so tests can drive it
// in-process.
//
// Exit codes: 0 ok, 2 index not normal, 3 invalid input, 4 a verification
// reported holds = false.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bimop/bimop.hpp"

namespace bimop::cli {

enum Exit : int { ok = 0, not_normal = 2, invalid = 3, failed = 4 };

inline MultiIndex parse_index(const std::string& text) {
    std::vector<Natural> c;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ParseError("empty component in index '" + text + "'");
        item = item.substr(b, e - b + 1);
        if (item.find_first_not_of("0123456789") != std::string::npos || item.size() > 18)
            throw ParseError("index component '" + item + "' is not a natural number");
        c.push_back(std::stoull(item));
    }
    if (c.empty()) throw ParseError("empty index");
    return MultiIndex(std::move(c));
}

/// "0,0;0,1;1,1" -> three indices.
inline std::vector<MultiIndex> parse_index_list(const std::string& text) {
    std::vector<MultiIndex> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ';'))
        if (item.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_index(item));
    if (out.empty()) throw ParseError("empty index list");
    return out;
}

inline Axis parse_axis(const std::string& a) {
    if (a == "x") return Axis::x;
    if (a == "y") return Axis::y;
    throw ParseError("axis must be 'x' or 'y', got '" + a + "'");
}

struct Options {
    std::string config;
    std::string index;
    std::string other;
    std::string axis = "x";
    std::string path;
    std::string w;
    std::string chain;
    std::string upper;
    std::string n;
    std::string m;
    std::string v;
    bool use_float = false;
    bool pretty = false;
    bool general = false;
    std::optional<double> tol;
    Natural max_modulus = 6;
    Natural a = 0;
    Natural b = 0;
};

class Runner {
public:
    Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

    void emit(const OJson& j) const { out_ << (o_.pretty ? j.dump(2) : j.dump()) << "\n"; }

    template <Scalar T>
    OJson poly(const BiPoly<T>& p) const {
        return o_.pretty ? OJson(p.pretty()) : poly_json(p);
    }
    template <Scalar T>
    OJson poly(const UniPoly<T>& p, const char* var) const {
        return o_.pretty ? OJson(p.pretty(var)) : unipoly_json(p);
    }

    Tolerance tolerance() const {
        Tolerance t;
        if (o_.tol) {
            t.singular = *o_.tol;
            t.indeterminate = std::max(t.indeterminate, *o_.tol);
        }
        return t;
    }

    Json document() const {
        if (o_.config.empty()) throw SchemaError("", "--config is required for this command");
        std::ifstream in(o_.config);
        if (!in) throw SchemaError("", "cannot read config file '" + o_.config + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_json(buf.str());
    }

    bool wants_float(const Json& doc) const { return o_.use_float || scalar_mode(doc) == ScalarMode::float64; }

    template <class F>
    int with_system(F&& f) const {
        const Json doc = document();
        if (wants_float(doc)) {
            MeasureSystem<double> sys = parse_config<double>(doc);
            return f(sys);
        }
        MeasureSystem<Rational> sys = parse_config<Rational>(doc);
        return f(sys);
    }

    template <class F>
    int with_product(F&& f) const {
        const Json doc = document();
        if (!is_product_document(doc)) throw SchemaError("/xsystem", "product commands need an xsystem/ysystem config");
        if (wants_float(doc)) return f(parse_product_config<double>(doc));
        return f(parse_product_config<Rational>(doc));
    }

    MultiIndex index() const {
        if (o_.index.empty()) throw ParseError("--index is required");
        return parse_index(o_.index);
    }

    // -- commands -----------------------------------------------------------

    int pair_cmd() const {
        emit({{"pi", pair(o_.a, o_.b)}});
        return ok;
    }

    int unpair_cmd() const {
        const Exponents e = unpair(o_.a);
        emit({{"t", e.t}, {"s", e.s}});
        return ok;
    }

    int params_cmd() const {
        const MultiIndex n = index();
        const IndexParams p = params(n);
        emit({{"modulus", p.modulus},
              {"multidegree", {p.multidegree.t, p.multidegree.s}},
              {"degree", p.degree},
              {"remainder", p.remainder}});
        return ok;
    }

    int normal_cmd() const {
        return with_system([&](const auto& sys) {
            const auto r = is_normal(sys, index(), tolerance());
            OJson j{{"normal", r.normal()}, {"det", scalar_json(r.det)}, {"verdict", to_string(r.verdict)}};
            if (!ScalarTraits<std::decay_t<decltype(r.det)>>::exact) j["conditioning"] = r.conditioning;
            emit(j);
            return r.normal() ? ok : not_normal;
        });
    }

    int type2_cmd() const {
        return with_system([&](const auto& sys) {
            const MultiIndex n = index();
            emit({{"index", index_json(n)}, {"poly", poly(type2(sys, n, tolerance()))}});
            return ok;
        });
    }

    int type1_cmd() const {
        return with_system([&](const auto& sys) {
            const MultiIndex n = index();
            const auto s = type1(sys, n, tolerance());
            OJson polys = OJson::array();
            for (const auto& p : s.polys) polys.push_back(poly(p));
            emit({{"index", index_json(n)}, {"polys", polys}});
            return ok;
        });
    }

    int biorth_cmd() const {
        return with_system([&](const auto& sys) {
            using T = typename std::decay_t<decltype(sys)>::value_type;
            MopSolver<T> solver(sys, tolerance());
            if (o_.other.empty()) throw ParseError("--m is required");
            const auto r = biorth(solver, index(), parse_index(o_.other));
            emit({{"value", scalar_json(r.value)}, {"case", to_string(r.label)}, {"consistent", r.consistent}});
            return r.consistent ? ok : failed;
        });
    }

    int nnr_cmd() const {
        return with_system([&](const auto& sys) {
            using T = typename std::decay_t<decltype(sys)>::value_type;
            MopSolver<T> solver(sys, tolerance());
            std::optional<Path> path;
            if (!o_.path.empty()) path = Path(parse_index_list(o_.path));
            std::optional<MultiIndex> w;
            if (!o_.w.empty()) w = parse_index(o_.w);
            const Axis axis = parse_axis(o_.axis);
            const auto r = o_.general ? nnr_type2_full(solver, index(), axis, path, w)
                                      : nnr_type2(solver, index(), axis, path, w);
            emit(report_json(r));
            return r.holds ? ok : failed;
        });
    }

    int nnr_q_cmd() const {
        return with_system([&](const auto& sys) {
            using T = typename std::decay_t<decltype(sys)>::value_type;
            MopSolver<T> solver(sys, tolerance());
            std::optional<Path> path;
            if (!o_.path.empty()) path = Path(parse_index_list(o_.path));
            const auto r = nnr_type1(solver, index(), parse_axis(o_.axis), path);
            emit(report_json(r));
            return r.holds ? ok : failed;
        });
    }

    int vector_cmd() const {
        return with_system([&](const auto& sys) {
            using T = typename std::decay_t<decltype(sys)>::value_type;
            MopSolver<T> solver(sys, tolerance());
            if (o_.chain.empty()) throw ParseError("--chain is required");
            std::optional<std::vector<MultiIndex>> upper;
            if (!o_.upper.empty()) upper = parse_index_list(o_.upper);
            std::optional<Path> lower;
            if (!o_.path.empty()) lower = Path(parse_index_list(o_.path));
            const auto r = nnr_vector(solver, parse_index_list(o_.chain), parse_axis(o_.axis), upper, lower);
            emit(report_json(r));
            return r.holds ? ok : failed;
        });
    }

    int product_cmd() const {
        return with_product([&](const auto& ps) {
            if (o_.n.empty() || o_.m.empty()) throw ParseError("--n and --m are required");
            const MultiIndex n = parse_index(o_.n);
            const MultiIndex m = parse_index(o_.m);
            const MultiIndex v = o_.v.empty() ? find_v(n, m) : parse_index(o_.v);
            const auto r = check_product(ps, n, m, v, tolerance());
            emit({{"tilde_v", index_json(tilde_v(n, m))},
                  {"v", index_json(v)},
                  {"x_poly", poly(uni_type2(ps.xsystem(), n, tolerance()), "x")},
                  {"y_poly", poly(uni_type2(ps.ysystem(), m, tolerance()), "y")},
                  {"product", poly(r.product)},
                  {"bivariate", poly(r.bivariate)},
                  {"holds", r.holds}});
            return r.holds ? ok : failed;
        });
    }

    int check_cmd() const {
        return with_system([&](const auto& sys) {
            using T = typename std::decay_t<decltype(sys)>::value_type;
            return battery<T>(sys);
        });
    }

private:
    template <Scalar T>
    int battery(const MeasureSystem<T>& sys) const {
        MopSolver<T> solver(sys, tolerance());
        const std::size_t r = sys.size();
        std::vector<MultiIndex> indices;
        std::vector<Natural> cur(r, 0);
        auto rec = [&](auto&& self, std::size_t j, Natural left) -> void {
            if (j + 1 == r) {
                cur[j] = left;
                indices.emplace_back(cur);
                return;
            }
            for (Natural x = 0; x <= left; ++x) {
                cur[j] = x;
                self(self, j + 1, left - x);
            }
        };
        for (Natural q = 0; q <= o_.max_modulus; ++q) rec(rec, 0, q);

        struct Tally {
            std::string name;
            std::size_t run = 0, passed = 0, skipped = 0;
        };
        Tally ortho{"type II and type I orthogonality"}, bio{"biorthogonality branches"},
            nnr2{"type II recurrences"}, nnr1{"type I recurrences"};

        std::vector<MultiIndex> normal;
        for (const auto& n : indices) {
            if (!is_normal(sys, n, tolerance()).normal()) {
                ++ortho.skipped;
                continue;
            }
            normal.push_back(n);
            ++ortho.run;
            bool good = true;
            const BiPoly<T>& p = solver.p(n);
            for (std::size_t j = 0; j < r; ++j)
                for (Natural z = 0; z < n[j]; ++z) {
                    const Exponents e = unpair(z);
                    good = good && detail::negligible(inner(sys, j, p, BiPoly<T>::monomial(e.t, e.s)),
                                                      detail::max_magnitude(p));
                }
            if (n.modulus() > 0) {
                const TypeISet<T>& a = solver.a(n);
                for (Natural z = 0; z < n.modulus(); ++z) {
                    const Exponents e = unpair(z);
                    const T v = type1_pairing(sys, BiPoly<T>::monomial(e.t, e.s), a);
                    const T want = z + 1 == n.modulus() ? ScalarTraits<T>::one() : ScalarTraits<T>::zero();
                    good = good && detail::negligible(T(v - want), 1.0);
                }
            }
            if (good) ++ortho.passed;
        }
        for (const auto& n : normal)
            for (const auto& m : normal) {
                if (biorth_case(n, m) == BiorthCase::unconstrained) continue;
                ++bio.run;
                if (biorth(solver, n, m).consistent) ++bio.passed;
            }
        for (const auto& n : normal) {
            if (n.modulus() == 0 || n.modulus() + 2 > o_.max_modulus) continue;
            for (Axis axis : {Axis::x, Axis::y}) {
                try {
                    ++nnr2.run;
                    if (nnr_type2_full(solver, n, axis).holds) ++nnr2.passed;
                } catch (const NotNormal&) {
                    --nnr2.run;
                    ++nnr2.skipped;
                }
                try {
                    ++nnr1.run;
                    if (nnr_type1(solver, n, axis).holds) ++nnr1.passed;
                } catch (const NotNormal&) {
                    --nnr1.run;
                    ++nnr1.skipped;
                }
            }
        }

        OJson checks = OJson::array();
        bool all = true;
        for (const Tally* t : {&ortho, &bio, &nnr2, &nnr1}) {
            const bool pass = t->passed == t->run;
            all = all && pass;
            checks.push_back({{"name", t->name}, {"run", t->run}, {"passed", t->passed}, {"skipped", t->skipped},
                              {"holds", pass}});
        }
        emit({{"max_modulus", o_.max_modulus}, {"checks", checks}, {"holds", all}});
        return all ? ok : failed;
    }

    const Options& o_;
    std::ostream& out_;
};

inline void error_json(std::ostream& err, const std::string& kind, const std::string& message) {
    err << OJson{{"error", kind}, {"message", message}}.dump() << "\n";
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Bivariate multiple orthogonal polynomials"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all");

    auto common = [&](CLI::App* c, bool needs_config) {
        auto* cfg = c->add_option("--config", o.config, "measure system JSON file");
        if (needs_config) cfg->required();
        c->add_flag("--float", o.use_float, "binary64 arithmetic instead of exact rationals");
        c->add_option("--tol", o.tol, "float singularity tolerance (default 1e-12)");
        c->add_flag("--pretty", o.pretty, "indented output, polynomials as strings");
    };

    auto* pair_c = app.add_subcommand("pair", "Cantor pairing of (t, s)");
    pair_c->add_option("t", o.a)->required();
    pair_c->add_option("s", o.b)->required();
    pair_c->add_flag("--pretty", o.pretty);
    auto* unpair_c = app.add_subcommand("unpair", "inverse Cantor pairing");
    unpair_c->add_option("z", o.a)->required();
    unpair_c->add_flag("--pretty", o.pretty);
    auto* params_c = app.add_subcommand("params", "modulus, multidegree, degree and remainder of an index");
    params_c->add_option("--index", o.index)->required();
    params_c->add_flag("--pretty", o.pretty);

    auto* normal_c = app.add_subcommand("normal", "normality of an index");
    auto* type2_c = app.add_subcommand("type2", "Type II polynomial");
    auto* type1_c = app.add_subcommand("type1", "Type I polynomials");
    for (auto* c : {normal_c, type2_c, type1_c}) {
        common(c, true);
        c->add_option("--index", o.index)->required();
    }

    auto* biorth_c = app.add_subcommand("biorth", "pairing <P_n, Q_m> with its predicted branch");
    common(biorth_c, true);
    biorth_c->add_option("--index", o.index, "n")->required();
    biorth_c->add_option("--m", o.other, "m")->required();

    auto* nnr_c = app.add_subcommand("nnr", "recurrence for x P_n or y P_n");
    common(nnr_c, true);
    nnr_c->add_option("--index", o.index)->required();
    nnr_c->add_option("--axis", o.axis, "x or y");
    nnr_c->add_option("--path", o.path, "indices separated by ';'");
    nnr_c->add_option("--w", o.w, "upper neighbour w");
    nnr_c->add_flag("--general", o.general, "path from the origin without the size precondition");

    auto* nnrq_c = app.add_subcommand("nnr-q", "recurrence for x Q_n or y Q_n");
    common(nnrq_c, true);
    nnrq_c->add_option("--index", o.index)->required();
    nnrq_c->add_option("--axis", o.axis, "x or y");
    nnrq_c->add_option("--path", o.path, "indices separated by ';'");

    auto* vector_c = app.add_subcommand("vector", "vector recurrence for a degree-d chain");
    common(vector_c, true);
    vector_c->add_option("--chain", o.chain, "d+1 indices separated by ';'")->required();
    vector_c->add_option("--axis", o.axis, "x or y");
    vector_c->add_option("--upper", o.upper, "d+2 indices of the next degree");
    vector_c->add_option("--path", o.path, "lower path ending at n_0");

    auto* product_c = app.add_subcommand("product", "product of univariate Type II polynomials");
    common(product_c, true);
    product_c->add_option("--n", o.n, "x-system index")->required();
    product_c->add_option("--m", o.m, "y-system index")->required();
    product_c->add_option("--v", o.v, "bivariate index (default: find_v)");

    auto* check_c = app.add_subcommand("check", "verification battery");
    common(check_c, true);
    check_c->add_option("--max-modulus", o.max_modulus, "largest |n| exercised (default 6)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        error_json(err, "UsageError", e.what());
        return invalid;
    }

    Runner runner(o, out);
    try {
        if (*pair_c) return runner.pair_cmd();
        if (*unpair_c) return runner.unpair_cmd();
        if (*params_c) return runner.params_cmd();
        if (*normal_c) return runner.normal_cmd();
        if (*type2_c) return runner.type2_cmd();
        if (*type1_c) return runner.type1_cmd();
        if (*biorth_c) return runner.biorth_cmd();
        if (*nnr_c) return runner.nnr_cmd();
        if (*nnrq_c) return runner.nnr_q_cmd();
        if (*vector_c) return runner.vector_cmd();
        if (*product_c) return runner.product_cmd();
        if (*check_c) return runner.check_cmd();
    } catch (const NotNormal& e) {
        error_json(err, e.kind(), e.what());
        return not_normal;
    } catch (const Error& e) {
        error_json(err, e.kind(), e.what());
        return invalid;
    }
    return invalid;
}

}  // namespace bimop::cli
