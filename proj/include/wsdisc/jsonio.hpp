#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "wsdisc/errors.hpp"

namespace wsd::jsonio {

using nlohmann::json;

/// Parses text as JSON, rethrowing syntax errors as ParseError with the
/// byte position that nlohmann reports.
json parse_text(std::string_view text, const std::string& what);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Fails unless `j` is an object whose keys are all in `allowed`.
void expect_object(const json& j, std::initializer_list<const char*> allowed,
                   const std::string& path);

const json& require_field(const json& obj, const char* key, const std::string& path);

std::string require_string(const json& obj, const char* key, const std::string& path);
double require_finite_number(const json& obj, const char* key, const std::string& path);
long long require_integer(const json& obj, const char* key, const std::string& path);

/// Optional string field; returns `fallback` when the key is absent.
std::string optional_string(const json& obj, const char* key, const std::string& path,
                            const std::string& fallback = "");

/// Rounds to 9 significant digits and re-parses, so that dumping the result
/// is byte-stable across runs and platforms. Used for every score the CLI
/// and the simulation report emit.
json sig9(double value);

}  // namespace wsd::jsonio
