// json_schema.hpp - strict-parse helpers for the tool-side JSON formats.
// Every field is checked for presence and type, unknown fields are
// rejected, and error messages carry the JSON path of the offender.

#pragma once

#include "mtsfm/types.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>

namespace mtsfm::tools {

using nlohmann::json;
using nlohmann::ordered_json;

inline void check_known_fields(const json& object,
                               std::initializer_list<const char*> allowed,
                               const std::string& where)
{
    for (const auto& item : object.items()) {
        const bool known =
            std::any_of(allowed.begin(), allowed.end(),
                        [&](const char* name) { return item.key() == name; });
        if (!known) {
            throw ValidationError(where + ": unknown field \"" + item.key() +
                                  "\"");
        }
    }
}

inline const json& require_field(const json& object, const char* key,
                                 const std::string& where)
{
    const auto it = object.find(key);
    if (it == object.end()) {
        throw ValidationError(where + ": missing field \"" + key + "\"");
    }
    return *it;
}

inline const json& require_object(const json& object, const char* key,
                                  const std::string& where)
{
    const json& field = require_field(object, key, where);
    if (!field.is_object()) {
        throw ValidationError(where + "." + key + ": expected an object");
    }
    return field;
}

inline double as_number(const json& field, const std::string& where)
{
    if (!field.is_number()) {
        throw ValidationError(where + ": expected a number");
    }
    return field.get<double>();
}

inline double require_number(const json& object, const char* key,
                             const std::string& where)
{
    return as_number(require_field(object, key, where), where + "." + key);
}

inline double optional_number(const json& object, const char* key,
                              double fallback, const std::string& where)
{
    const auto it = object.find(key);
    return it == object.end() ? fallback
                              : as_number(*it, where + "." + key);
}

inline int as_int(const json& field, const std::string& where)
{
    if (!field.is_number_integer()) {
        throw ValidationError(where + ": expected an integer");
    }
    return field.get<int>();
}

inline int require_int(const json& object, const char* key,
                       const std::string& where)
{
    return as_int(require_field(object, key, where), where + "." + key);
}

inline int optional_int(const json& object, const char* key, int fallback,
                        const std::string& where)
{
    const auto it = object.find(key);
    return it == object.end() ? fallback : as_int(*it, where + "." + key);
}

inline std::uint64_t optional_uint64(const json& object, const char* key,
                                     std::uint64_t fallback,
                                     const std::string& where)
{
    const auto it = object.find(key);
    if (it == object.end()) {
        return fallback;
    }
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
        throw ValidationError(where + "." + key +
                              ": expected a non-negative integer");
    }
    return it->get<std::uint64_t>();
}

inline std::string require_string(const json& object, const char* key,
                                  const std::string& where)
{
    const json& field = require_field(object, key, where);
    if (!field.is_string()) {
        throw ValidationError(where + "." + key + ": expected a string");
    }
    return field.get<std::string>();
}

inline bool optional_bool(const json& object, const char* key, bool fallback,
                          const std::string& where)
{
    const auto it = object.find(key);
    if (it == object.end()) {
        return fallback;
    }
    if (!it->is_boolean()) {
        throw ValidationError(where + "." + key + ": expected a boolean");
    }
    return it->get<bool>();
}

} // namespace mtsfm::tools
