#pragma once
// Internal helpers for strict JSON document validation shared by the loaders.

#include "qmatch/errors.hpp"

#include <json.hpp>

#include <initializer_list>
#include <string>

namespace qmatch::detail {

inline void expect_object(const nlohmann::json& j, const std::string& context) {
    if (!j.is_object()) throw InputError(context + ": expected a JSON object");
}

inline void expect_array(const nlohmann::json& j, const std::string& context) {
    if (!j.is_array()) throw InputError(context + ": expected a JSON array");
}

// Rejects keys outside `allowed`; field names are exact and case-sensitive.
inline void reject_unknown_keys(const nlohmann::json& obj, const std::string& context,
                                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) throw InputError(context + ": unknown key \"" + it.key() + "\"");
    }
}

inline const nlohmann::json& require_key(const nlohmann::json& obj, const std::string& context,
                                         const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError(context + ": missing key \"" + key + "\"");
    return *it;
}

inline std::string require_string(const nlohmann::json& obj, const std::string& context,
                                  const char* key) {
    const nlohmann::json& v = require_key(obj, context, key);
    if (!v.is_string()) throw InputError(context + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

inline double require_number(const nlohmann::json& obj, const std::string& context, const char* key) {
    const nlohmann::json& v = require_key(obj, context, key);
    if (!v.is_number()) throw InputError(context + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

}  // namespace qmatch::detail
