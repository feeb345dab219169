#include "json_util.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include "capcalc/error.hpp"

namespace capcalc::detail {

using nlohmann::json;

json parse_strict(std::string_view text, std::string_view what) {
    std::vector<std::set<std::string>> open_objects;
    auto callback = [&](int /*depth*/, json::parse_event_t event, json& parsed) {
        switch (event) {
            case json::parse_event_t::object_start: open_objects.emplace_back(); break;
            case json::parse_event_t::object_end: open_objects.pop_back(); break;
            case json::parse_event_t::key: {
                const auto key = parsed.get<std::string>();
                if (!open_objects.back().insert(key).second)
                    throw ParseError(std::string(what) + ": duplicate key \"" + key + "\"");
                break;
            }
            default: break;
        }
        return true;
    };
    try {
        return json::parse(text.begin(), text.end(), callback);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": malformed JSON: " + e.what());
    }
}

void expect_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
    as_object(j, where);
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError(std::string(where) + ": unknown key \"" + key + "\"");
    }
}

const json& require(const json& j, std::string_view where, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string(where) + ": missing key \"" + key + "\"");
    return *it;
}

std::string as_string(const json& j, std::string_view where) {
    if (!j.is_string()) throw ParseError(std::string(where) + ": expected a string, got " + j.dump());
    return j.get<std::string>();
}

double as_number(const json& j, std::string_view where) {
    if (!j.is_number()) throw ParseError(std::string(where) + ": expected a number, got " + j.dump());
    return j.get<double>();
}

const json& as_array(const json& j, std::string_view where) {
    if (!j.is_array()) throw ParseError(std::string(where) + ": expected an array");
    return j;
}

const json& as_object(const json& j, std::string_view where) {
    if (!j.is_object()) throw ParseError(std::string(where) + ": expected an object");
    return j;
}

}  // namespace capcalc::detail
