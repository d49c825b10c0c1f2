#pragma once

// Helpers shared by the document readers and writers. Schema errors are
// reported as ParseError with a JSON-pointer location.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "ddc/errors.hpp"
#include "ddc/geometry.hpp"
#include "json.hpp"

namespace ddc::detail {

using json = nlohmann::json;

inline json parse_document(std::string_view bytes) {
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError("malformed document: " + std::string(e.what()), "byte " + std::to_string(e.byte));
    }
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError("expected an object", path.empty() ? "/" : path);
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(std::string("missing key '") + key + "'", path.empty() ? "/" : path);
    return *it;
}

inline double as_double(const json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError("expected a number", path);
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError("non-finite number", path);
    return x;
}

inline std::int64_t as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError("expected an integer", path);
    return v.get<std::int64_t>();
}

inline std::int32_t as_int32(const json& v, const std::string& path) {
    const std::int64_t x = as_int(v, path);
    if (x < std::numeric_limits<std::int32_t>::min() || x > std::numeric_limits<std::int32_t>::max()) {
        throw ParseError("integer out of range", path);
    }
    return std::int32_t(x);
}

inline std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError("expected a string", path);
    return v.get<std::string>();
}

inline const json& as_array(const json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError("expected an array", path);
    return v;
}

inline std::vector<double> as_reals(const json& v, const std::string& path) {
    as_array(v, path);
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_double(v[i], path + "/" + std::to_string(i)));
    return out;
}

inline Point as_point(const json& v, const std::string& path) { return Point(as_reals(v, path)); }
inline Vector as_vector(const json& v, const std::string& path) { return Vector(as_reals(v, path)); }

inline json to_json(std::span<const double> xs) {
    json a = json::array();
    for (double x : xs) a.push_back(x);
    return a;
}

inline std::string dump(const json& j) { return j.dump() + "\n"; }

}  // namespace ddc::detail
