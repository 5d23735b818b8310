#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace iris {

// Invalid user input: bad config values, unknown names, out-of-domain labels.
struct InvalidArgument : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// External service failures (transport errors, replay misses).
struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A "this should not happen" condition in pipeline state.
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// Canonical key used for case-insensitive name comparison: trim + lowercase.
std::string norm_key(std::string_view s);

// Collapses runs of whitespace to single spaces (also trims).
std::string collapse_whitespace(std::string_view s);

bool contains_ci(std::string_view haystack, std::string_view needle);

std::vector<std::string> split(std::string_view s, char sep);

// FNV-1a 64-bit, rendered as 16 hex digits. Stable across runs and platforms.
std::string stable_hash(std::string_view data);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace iris
