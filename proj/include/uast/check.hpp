#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "uast/core.hpp"

namespace uast {

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string code;     // kebab-case identifier, e.g. "type-inconsistency"
  std::string path;     // node path from the program root
  std::string message;

  std::string to_line() const { return path + ": " + code + ": " + message; }
};

// Grammar-shape findings disqualify a candidate from judging; declaration and
// type findings do not (models emit type-inconsistent programs that still run
// and fail at runtime instead).
enum class DiagClass { Shape, Decl, Type, Lint };
DiagClass diag_class(std::string_view code);
bool has_shape_errors(const std::vector<Diagnostic>& diags);

// Full static validation: declaration rules, grammar shape, type-annotation
// consistency. Empty result means the program is clean. `lint` adds the
// optional unused-local warning pass.
std::vector<Diagnostic> validate(const Program& p, bool lint = false);

nlohmann::ordered_json diagnostics_to_json(const std::vector<Diagnostic>& diags);

// ---------------------------------------------------------------------------
// Entry schema
// ---------------------------------------------------------------------------

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EntrySchema {
  std::vector<VarDecl> params;
  TypeRef return_type;
};

bool schema_eq(const EntrySchema& a, const EntrySchema& b);

// Signature of __main__; throws SchemaError if it is missing.
EntrySchema entry_schema(const Program& p);

// Text form "int(int var0, int* var1)"; parameter names are optional on
// input and default to var0, var1, ...
std::string schema_text(const EntrySchema& s);
EntrySchema parse_schema(std::string_view text);

nlohmann::ordered_json schema_to_json(const EntrySchema& s);
EntrySchema schema_from_json(const nlohmann::ordered_json& j);

// ---------------------------------------------------------------------------
// Builtin signatures (shared with the decoder's typed holes)
// ---------------------------------------------------------------------------

// Result type of a builtin applied to argument types, or nullptr with `err`
// set when the call does not type-check. `node_type` is the invoke node's
// annotation, needed by `new` whose result is the annotation itself.
TypeRef builtin_result_type(const std::string& name, const std::vector<TypeRef>& args,
                            const TypeRef& node_type, std::string* err);
bool is_builtin(const std::string& name);

}  // namespace uast
