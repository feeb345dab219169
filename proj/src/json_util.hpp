#pragma once

// Strict JSON reading shared by the scenario, game and profile loaders.

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

namespace capcalc::detail {

/// Parses `text`, rejecting duplicate object keys. Throws ParseError.
nlohmann::json parse_strict(std::string_view text, std::string_view what);

/// Throws ParseError if `j` is not an object or carries a key outside `allowed`.
void expect_keys(const nlohmann::json& j, std::string_view where, std::initializer_list<std::string_view> allowed);

/// Throws ParseError if `key` is absent.
const nlohmann::json& require(const nlohmann::json& j, std::string_view where, const std::string& key);

std::string as_string(const nlohmann::json& j, std::string_view where);
double as_number(const nlohmann::json& j, std::string_view where);
const nlohmann::json& as_array(const nlohmann::json& j, std::string_view where);
const nlohmann::json& as_object(const nlohmann::json& j, std::string_view where);

}  // namespace capcalc::detail
