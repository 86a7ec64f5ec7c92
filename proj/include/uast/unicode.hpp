#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace uast {

// Minimal UTF-8 round-tripping for char values and string payloads.

void utf8_append(std::string& out, uint32_t cp);
std::string utf8_encode(const std::vector<uint32_t>& cps);
// Decodes the whole string; throws std::invalid_argument on malformed input.
std::vector<uint32_t> utf8_decode(std::string_view s);
// Exactly one code point, e.g. a char literal.
uint32_t utf8_decode_one(std::string_view s);

}  // namespace uast
