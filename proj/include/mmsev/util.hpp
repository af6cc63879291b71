#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmsev::util {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// Splits on a single-character delimiter; no quoting, empty fields kept.
std::vector<std::string> split(std::string_view line, char delim);

// Locale-independent full-string numeric parsing ('.' decimal point only).
std::optional<double> parse_double(std::string_view cell);
std::optional<long long> parse_int(std::string_view cell);

// Shortest round-trip decimal rendering; byte-stable across runs.
std::string format_double(double v);

// FNV-1a 64-bit, used for config fingerprints embedded in artifacts.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Runs fn(i) for i in [0, n). jobs <= 1 executes inline; results must not
// depend on scheduling. The first worker exception is rethrown after join.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace mmsev::util
