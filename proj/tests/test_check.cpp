#include "doctest.h"
#include "testutil.hpp"
#include "uast/check.hpp"
#include "uast/exec.hpp"
#include "uast/serde.hpp"

using namespace uast;
namespace tu = uast::testutil;

namespace {

bool has_code(const std::vector<Diagnostic>& diags, std::string_view code) {
  for (const auto& d : diags)
    if (d.code == code) return true;
  return false;
}

Program parse(const char* text) { return parse_program_text(text); }

}  // namespace

TEST_CASE("all bundled fixtures except the known-bad one validate cleanly") {
  for (const char* name :
       {"count_steps_inferred.uast.json", "a1_golden.uast.json", "a1_inferred.uast.json",
        "a2_golden.uast.json", "a2_inferred.uast.json", "a3_golden.uast.json",
        "a3_inferred.uast.json", "a4_golden.uast.json", "a4_inferred.uast.json",
        "a5_golden.uast.json", "a5_inferred.uast.json", "b1_golden.uast.json",
        "b2_golden.uast.json", "b2_inferred.uast.json", "b3_golden.uast.json",
        "b3_inferred.uast.json"}) {
    CAPTURE(name);
    CHECK(validate(tu::load_fixture(name)).empty());
  }
}

TEST_CASE("undeclared variables are reported") {
  Program p = parse(R"({"funcs": [["func", "int", "__main__", [], [],
    [["return", "int", ["var", "int", "var9"]]]]]})");
  auto diags = validate(p);
  CHECK(has_code(diags, "undeclared-variable"));
}

TEST_CASE("the known-bad inferred program is rejected with type inconsistencies") {
  auto diags = validate(tu::load_fixture("b1_inferred.uast.json"));
  CHECK(!diags.empty());
  CHECK(has_code(diags, "type-inconsistency"));
  // ...but they are not grammar-shape errors, so a judge may still execute it.
  CHECK_FALSE(has_shape_errors(diags));
}

TEST_CASE("diag classes separate shape from declaration and typing findings") {
  CHECK(diag_class("missing-main") == DiagClass::Shape);
  CHECK(diag_class("invalid-assign-lhs") == DiagClass::Shape);
  CHECK(diag_class("break-outside-loop") == DiagClass::Shape);
  CHECK(diag_class("undeclared-variable") == DiagClass::Decl);
  CHECK(diag_class("call-arity") == DiagClass::Decl);
  CHECK(diag_class("type-inconsistency") == DiagClass::Type);
  CHECK(diag_class("return-type-mismatch") == DiagClass::Type);
  CHECK(diag_class("unused-variable") == DiagClass::Lint);
}

TEST_CASE("missing entry point, loops, ctors, duplicates") {
  Program no_main = parse(R"({"funcs": [["func", "int", "f", [], [],
    [["return", "int", ["val", "int", 1]]]]]})");
  CHECK(has_code(validate(no_main), "missing-main"));
  CHECK_THROWS_AS((void)entry_schema(no_main), SchemaError);

  Program stray_break = parse(R"({"funcs": [["func", "int", "__main__", [], [],
    [["break", "void"], ["return", "int", ["val", "int", 1]]]]]})");
  CHECK(has_code(validate(stray_break), "break-outside-loop"));

  Program stray_continue = parse(R"({"funcs": [["func", "int", "__main__", [], [],
    [["continue", "void"], ["return", "int", ["val", "int", 1]]]]]})");
  CHECK(has_code(validate(stray_continue), "continue-outside-loop"));

  Program bad_ctor = parse(R"({"funcs": [
    ["ctor", "int", "make", [], [], [["return", "int", ["val", "int", 1]]]],
    ["func", "int", "__main__", [], [], [["return", "int", ["val", "int", 1]]]]]})");
  CHECK(has_code(validate(bad_ctor), "ctor-return-type"));

  Program dup = parse(R"({"funcs": [["func", "int", "__main__",
    [["var", "int", "var0"]], [["var", "int", "var0"]],
    [["return", "int", ["val", "int", 1]]]]]})");
  CHECK(has_code(validate(dup), "duplicate-variable"));
}

TEST_CASE("call arity and argument types are checked against declarations") {
  Program p = parse(R"({"funcs": [
    ["func", "int", "helper", [["var", "int", "var0"]], [],
      [["return", "int", ["var", "int", "var0"]]]],
    ["func", "int", "__main__", [], [],
      [["return", "int", ["invoke", "int", "helper",
        [["val", "int", 1], ["val", "int", 2]]]]]]]})");
  CHECK(has_code(validate(p), "call-arity"));

  Program unknown = parse(R"({"funcs": [["func", "int", "__main__", [], [],
    [["return", "int", ["invoke", "int", "frobnicate", []]]]]]})");
  CHECK(has_code(validate(unknown), "unknown-function"));
}

TEST_CASE("condition and return types are enforced") {
  Program bad_cond = parse(R"({"funcs": [["func", "int", "__main__", [], [],
    [["if", "bool", ["val", "int", 1], [], []],
     ["return", "int", ["val", "int", 0]]]]]})");
  CHECK(has_code(validate(bad_cond), "type-inconsistency"));

  Program bad_return = parse(R"({"funcs": [["func", "int", "__main__", [], [],
    [["return", "int", ["val", "bool", true]]]]]})");
  CHECK(has_code(validate(bad_return), "return-type-mismatch"));
}

TEST_CASE("annotations must match computed types") {
  // min of two ints annotated as bool
  Program p = parse(R"({"funcs": [["func", "int", "__main__",
    [["var", "int", "var0"]], [],
    [["return", "int", ["invoke", "bool", "min",
      [["var", "int", "var0"], ["val", "int", 3]]]]]]]})");
  CHECK(has_code(validate(p), "type-inconsistency"));
}

TEST_CASE("globals resolve through the special record") {
  Program p = parse(R"({
    "types": [["record", "__globals__", {"g0": ["var", "int", "g0"]}]],
    "funcs": [["func", "int", "__main__", [], [],
      [["return", "int", ["var", "int", "g0"]]]]]})");
  CHECK(validate(p).empty());
}

TEST_CASE("entry_schema extracts the signature") {
  EntrySchema schema = entry_schema(tu::load_fixture("count_steps_inferred.uast.json"));
  CHECK(schema.params.size() == 1);
  CHECK(schema.params[0].type->kind() == TypeKind::Int);
  CHECK(schema.return_type->kind() == TypeKind::Int);

  EntrySchema a2 = entry_schema(tu::load_fixture("a2_golden.uast.json"));
  REQUIRE(a2.params.size() == 3);
  CHECK(a2.params[0].type->kind() == TypeKind::Int);
  CHECK(a2.params[1].type->kind() == TypeKind::Array);
  CHECK(a2.params[2].type->kind() == TypeKind::Array);
  CHECK(a2.return_type->kind() == TypeKind::Int);
  CHECK(schema_text(a2) == "int(int var1, int* var2, int* var3)");
}

TEST_CASE("schema text and JSON round trip") {
  EntrySchema s = parse_schema("int(int var0, <int|char*> m)");
  CHECK(s.params.size() == 2);
  CHECK(s.params[1].type->kind() == TypeKind::Map);
  CHECK(schema_text(parse_schema(schema_text(s))) == schema_text(s));
  EntrySchema viaJson = schema_from_json(schema_to_json(s));
  CHECK(schema_eq(s, viaJson));
  // names are optional
  EntrySchema unnamed = parse_schema("int(int, int*)");
  CHECK(unnamed.params[0].name == "var0");
  CHECK(unnamed.params[1].name == "var1");
}

TEST_CASE("validate is deterministic") {
  Program p = tu::load_fixture("b1_inferred.uast.json");
  auto a = validate(p);
  auto b = validate(p);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].code == b[i].code);
    CHECK(a[i].path == b[i].path);
  }
}

TEST_CASE("the lint pass flags unused locals as warnings only") {
  Program p = tu::load_fixture("b3_inferred.uast.json");  // var2 never used
  CHECK(validate(p).empty());
  auto diags = validate(p, /*lint=*/true);
  CHECK(has_code(diags, "unused-variable"));
  for (const auto& d : diags)
    if (d.code == "unused-variable") CHECK(d.severity == Diagnostic::Severity::Warning);
}

TEST_CASE("check-clean fuzz programs never hit type confusion at runtime") {
  tu::ProgramGen gen(99);
  std::mt19937_64 rng(1234);
  int executed = 0;
  for (int i = 0; i < 150; ++i) {
    Program p = gen.next();
    auto diags = validate(p);
    CAPTURE(pretty_print(p));
    CHECK(diags.empty());
    EntrySchema schema = entry_schema(p);
    RecordTable records(p);
    std::vector<Value> args;
    for (const auto& param : schema.params)
      args.push_back(tu::random_value(*param.type, rng, records));
    ExecOutcome out = execute(p, args, {20000, 20000});
    ++executed;
    if (!out.ok) {
      CAPTURE(out.detail);
      CHECK(out.error != RunErrorKind::TypeConfusion);
    }
  }
  CHECK(executed == 150);
}
