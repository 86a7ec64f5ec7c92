#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "uast/core.hpp"

namespace uast {

using Json = nlohmann::ordered_json;

// Raised on malformed type text or serialized documents. `where` names the
// offending position: a character offset for type text, a node path for
// documents.
struct ParseError : std::runtime_error {
  ParseError(std::string message, std::string where_)
      : std::runtime_error(where_.empty() ? message : where_ + ": " + message),
        where(std::move(where_)) {}
  std::string where;
};

// Table-3 type text: bool | char | int | real | T* | T% | <K|V> | name#.
// The suffixes * and % bind left to right; "void" is accepted as the
// sentinel's spelling.
TypeRef parse_type(std::string_view text);
std::string type_text(const Type& t);
inline std::string type_text(const TypeRef& t) { return type_text(*t); }

Program parse_program(const Json& doc);
Program parse_program_text(std::string_view json_text);
Program load_program_file(const std::filesystem::path& path);

Json emit_program(const Program& p);
void save_program_file(const Program& p, const std::filesystem::path& path);

// Deterministic human-readable rendering in the style used throughout this
// toolchain: one line per signature, a `vars:` line, two-space indents,
// fully parenthesized operator invokes, `for(; cond; incr)` loops, `pass`
// for noop.
std::string pretty_print(const Program& p);

}  // namespace uast
