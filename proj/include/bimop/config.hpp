#pragma once

// Measure-system configuration documents.
//
//   { "scalar": "exact" | "float64",
//     "measures": [ { "kind": "tensor", "x": FAMILY, "y": FAMILY, "scale": "c" },
//                   { "kind": "table",  "moments": [ {"t":0,"s":0,"value":"1"}, ... ] } ] }
//
//   FAMILY := {"family":"laguerre","alpha":"1"} | {"family":"jacobi","a":"1/2"}
//           | {"family":"table","moments":["1","2","6"]}
//
// A product document lists two univariate systems instead of "measures":
//
//   { "scalar": "exact", "xsystem": [FAMILY, ...], "ysystem": [FAMILY, ...] }
//
// and stands for the tensor system of all products, ordered (i, j) row-major.
// Rational literals are strings ("p/q", "p" or an exact decimal) or integers.

#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "bimop/errors.hpp"
#include "bimop/measures.hpp"
#include "bimop/scalar.hpp"

namespace bimop {

using Json = nlohmann::json;

enum class ScalarMode { exact, float64 };

namespace config_detail {

inline const Json& field(const Json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) throw SchemaError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + "/" + key, "missing required field");
    return *it;
}

inline Rational rational(const Json& v, const std::string& path) {
    if (v.is_number_integer()) {
        return v.is_number_unsigned() ? Rational(std::to_string(v.get<std::uint64_t>()))
                                      : Rational(std::to_string(v.get<std::int64_t>()));
    }
    if (!v.is_string()) throw SchemaError(path, "expected a rational literal string such as \"3/2\" or \"2.2\"");
    try {
        return parse_rational(v.get<std::string>());
    } catch (const ParseError& e) {
        throw SchemaError(path, e.what());
    }
}

inline Natural natural(const Json& v, const std::string& path) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw SchemaError(path, "expected a non-negative integer");
    return v.get<Natural>();
}

template <Scalar T>
UnivariateFamily<T> family(const Json& obj, const std::string& path) {
    const Json& name = field(obj, path, "family");
    if (!name.is_string()) throw SchemaError(path + "/family", "expected a string");
    const std::string f = name.get<std::string>();
    if (f == "laguerre") return UnivariateFamily<T>::laguerre(rational(field(obj, path, "alpha"), path + "/alpha"));
    if (f == "jacobi") {
        Rational a = rational(field(obj, path, "a"), path + "/a");
        if (a <= -1) throw SchemaError(path + "/a", "jacobi exponent must be > -1");
        return UnivariateFamily<T>::jacobi(a);
    }
    if (f == "table") {
        const Json& ms = field(obj, path, "moments");
        if (!ms.is_array()) throw SchemaError(path + "/moments", "expected an array");
        std::vector<T> values;
        for (std::size_t k = 0; k < ms.size(); ++k)
            values.push_back(ScalarTraits<T>::from_rational(rational(ms[k], path + "/moments/" + std::to_string(k))));
        return UnivariateFamily<T>::table(std::move(values));
    }
    throw SchemaError(path + "/family", "unknown family '" + f + "'");
}

template <Scalar T>
BivariateMeasure<T> measure(const Json& obj, const std::string& path) {
    const Json& kind = field(obj, path, "kind");
    if (!kind.is_string()) throw SchemaError(path + "/kind", "expected a string");
    const std::string k = kind.get<std::string>();
    auto with_scale = [&](BivariateMeasure<T> m) {
        if (auto it = obj.find("scale"); it != obj.end()) {
            Rational c = rational(*it, path + "/scale");
            if (sgn(c) <= 0) throw SchemaError(path + "/scale", "scale must be positive");
            m = m.scaled(ScalarTraits<T>::from_rational(c));
        }
        return m;
    };
    if (k == "tensor") {
        auto x = family<T>(field(obj, path, "x"), path + "/x");
        auto y = family<T>(field(obj, path, "y"), path + "/y");
        return with_scale(BivariateMeasure<T>::tensor(std::move(x), std::move(y)));
    }
    if (k == "table") {
        const Json& ms = field(obj, path, "moments");
        if (!ms.is_array()) throw SchemaError(path + "/moments", "expected an array");
        std::map<std::pair<Natural, Natural>, T> values;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const std::string p = path + "/moments/" + std::to_string(i);
            const Natural t = natural(field(ms[i], p, "t"), p + "/t");
            const Natural s = natural(field(ms[i], p, "s"), p + "/s");
            values[{t, s}] = ScalarTraits<T>::from_rational(rational(field(ms[i], p, "value"), p + "/value"));
        }
        return with_scale(BivariateMeasure<T>::table(std::move(values)));
    }
    throw SchemaError(path + "/kind", "unknown measure kind '" + k + "'");
}

template <Scalar T>
UniSystem<T> uni_system(const Json& arr, const std::string& path) {
    if (!arr.is_array()) throw SchemaError(path, "expected an array of families");
    if (arr.empty()) throw SchemaError(path, "at least one measure is required");
    std::vector<UnivariateFamily<T>> fs;
    for (std::size_t i = 0; i < arr.size(); ++i) fs.push_back(family<T>(arr[i], path + "/" + std::to_string(i)));
    return UniSystem<T>(std::move(fs));
}

}  // namespace config_detail

inline Json parse_json(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
}

/// Scalar mode requested by the document ("exact" when absent).
inline ScalarMode scalar_mode(const Json& doc) {
    if (!doc.is_object()) throw SchemaError("", "expected a JSON object");
    auto it = doc.find("scalar");
    if (it == doc.end()) return ScalarMode::exact;
    if (*it == "exact") return ScalarMode::exact;
    if (*it == "float64") return ScalarMode::float64;
    throw SchemaError("/scalar", "expected \"exact\" or \"float64\"");
}

inline bool is_product_document(const Json& doc) { return doc.is_object() && doc.contains("xsystem"); }

template <Scalar T>
UniSystem<T> parse_uni_system(const Json& doc, const char* key) {
    return config_detail::uni_system<T>(config_detail::field(doc, "", key), std::string("/") + key);
}

/// Builds the measure system described by `doc` in scalar type T.
template <Scalar T>
MeasureSystem<T> parse_config(const Json& doc) {
    scalar_mode(doc);
    if (is_product_document(doc))
        return tensor_system(parse_uni_system<T>(doc, "xsystem"), parse_uni_system<T>(doc, "ysystem"));
    const Json& ms = config_detail::field(doc, "", "measures");
    if (!ms.is_array()) throw SchemaError("/measures", "expected an array");
    if (ms.empty()) throw SchemaError("/measures", "at least one measure is required");
    std::vector<BivariateMeasure<T>> out;
    for (std::size_t i = 0; i < ms.size(); ++i)
        out.push_back(config_detail::measure<T>(ms[i], "/measures/" + std::to_string(i)));
    return MeasureSystem<T>(std::move(out));
}

template <Scalar T>
MeasureSystem<T> parse_config_text(std::string_view text) {
    return parse_config<T>(parse_json(text));
}

using AnySystem = std::variant<MeasureSystem<Rational>, MeasureSystem<double>>;

/// Dispatches on the document's "scalar" field.
inline AnySystem parse_config_any(std::string_view text) {
    Json doc = parse_json(text);
    if (scalar_mode(doc) == ScalarMode::float64) return parse_config<double>(doc);
    return parse_config<Rational>(doc);
}

}  // namespace bimop
