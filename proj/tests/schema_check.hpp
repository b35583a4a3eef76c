// Minimal JSON-schema checker for the subset the shipped schemas use:
// type, enum, required, properties, items, oneOf, and local $ref into
// #/definitions. Test-only.
#pragma once

#include <string>

#include <json.hpp>

namespace schema_check {

using nlohmann::json;

inline bool type_matches(const std::string& type, const json& value) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "number") return value.is_number();
    return false;
}

inline bool validate(const json& schema, const json& value, const json& root,
                     std::string* why = nullptr, const std::string& where = "$") {
    const auto fail = [&](const std::string& message) {
        if (why) *why = where + ": " + message;
        return false;
    };

    if (schema.contains("$ref")) {
        const std::string ref = schema["$ref"].get<std::string>();
        const std::string prefix = "#/definitions/";
        if (ref.rfind(prefix, 0) != 0) return fail("unsupported $ref " + ref);
        return validate(root["definitions"][ref.substr(prefix.size())], value, root, why, where);
    }

    if (schema.contains("oneOf")) {
        for (const json& option : schema["oneOf"]) {
            if (validate(option, value, root, nullptr, where)) return true;
        }
        return fail("no oneOf branch matched");
    }

    if (schema.contains("type")) {
        const json& t = schema["type"];
        if (t.is_string()) {
            if (!type_matches(t.get<std::string>(), value))
                return fail("expected type " + t.get<std::string>());
        } else {
            bool any = false;
            for (const json& option : t)
                if (type_matches(option.get<std::string>(), value)) any = true;
            if (!any) return fail("no type alternative matched");
        }
    }

    if (schema.contains("enum")) {
        bool any = false;
        for (const json& option : schema["enum"])
            if (option == value) any = true;
        if (!any) return fail("value not in enum");
    }

    if (value.is_object()) {
        if (schema.contains("required")) {
            for (const json& key : schema["required"])
                if (!value.contains(key.get<std::string>()))
                    return fail("missing required key " + key.get<std::string>());
        }
        if (schema.contains("properties")) {
            for (const auto& [key, sub] : schema["properties"].items()) {
                if (value.contains(key) &&
                    !validate(sub, value.at(key), root, why, where + "." + key))
                    return false;
            }
        }
    }

    if (value.is_array() && schema.contains("items")) {
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (!validate(schema["items"], value[i], root, why,
                          where + "[" + std::to_string(i) + "]"))
                return false;
        }
    }
    return true;
}

}  // namespace schema_check
