#pragma once

// Strict JSON helpers shared by the problem and report readers.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "robent/io.hpp"

namespace robent::io {

namespace detail {

void check_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                const std::string& path);
const nlohmann::json& require(const nlohmann::json& j, const char* key, const std::string& path);
// Accepts the string "inf" for +infinity.
double number(const nlohmann::json& j, const std::string& field);
double finite_number(const nlohmann::json& j, const std::string& field);
std::uint64_t unsigned_integer(const nlohmann::json& j, const std::string& field);
bool boolean(const nlohmann::json& j, const std::string& field);
std::string string(const nlohmann::json& j, const std::string& field);
std::vector<double> numbers(const nlohmann::json& j, const std::string& field, bool allow_inf);
nlohmann::json number_json(double v);
nlohmann::json numbers_json(std::span<const double> values);
nlohmann::json parse_text(std::string_view text);

}  // namespace detail

nlohmann::json problem_json(const ProblemFile& problem);

}  // namespace robent::io
