#include "doctest.h"
#include "testutil.hpp"
#include "uast/core.hpp"
#include "uast/serde.hpp"

using namespace uast;
namespace tu = uast::testutil;

namespace {

Program single_return_main(ExprPtr e) {
  Program p;
  FuncDecl main;
  main.name = kMainName;
  main.return_type = e->type;
  main.body.push_back(make_return(std::move(e)));
  p.funcs.push_back(std::move(main));
  return p;
}

}  // namespace

TEST_CASE("structural_eq reflexive on fixtures and distinguishes a renamed leaf") {
  Program p = tu::load_fixture("count_steps_inferred.uast.json");
  CHECK(structural_eq(p, p));

  Program copy = tu::load_fixture("count_steps_inferred.uast.json");
  CHECK(structural_eq(p, copy));  // independent deep parse

  // rename one variable reference
  Program renamed = copy;
  auto& body = renamed.funcs[0].body;
  body.back() = make_return(make_var(Type::int_type(), "var2"), Type::int_type());
  CHECK_FALSE(structural_eq(p, renamed));
}

TEST_CASE("structural_eq is an equivalence relation on random programs") {
  tu::ProgramGen gen(7);
  std::vector<Program> programs;
  for (int i = 0; i < 20; ++i) programs.push_back(gen.next());
  for (const auto& p : programs) CHECK(structural_eq(p, p));  // reflexive
  for (size_t i = 0; i < programs.size(); ++i)
    for (size_t j = 0; j < programs.size(); ++j) {
      bool ij = structural_eq(programs[i], programs[j]);
      bool ji = structural_eq(programs[j], programs[i]);
      CHECK(ij == ji);  // symmetric
    }
  // transitivity through serialization copies
  for (const auto& p : programs) {
    Program a = parse_program(emit_program(p));
    Program b = parse_program(emit_program(a));
    CHECK(structural_eq(p, a));
    CHECK(structural_eq(a, b));
    CHECK(structural_eq(p, b));
  }
}

TEST_CASE("traverse visits a single-return body in pre-order") {
  Program p = single_return_main(make_int(42));
  std::vector<std::string> kinds;
  traverse(p, [&](const AstNode& n) {
    if (std::holds_alternative<const FuncDecl*>(n)) kinds.push_back("func");
    if (std::holds_alternative<const Stmt*>(n)) {
      CHECK(std::get<const Stmt*>(n)->kind() == StmtKind::Return);
      kinds.push_back("return");
    }
    if (std::holds_alternative<const Expr*>(n)) {
      CHECK(std::get<const Expr*>(n)->kind() == ExprKind::Constant);
      kinds.push_back("constant");
    }
  });
  CHECK(kinds == std::vector<std::string>{"func", "return", "constant"});
}

TEST_CASE("traverse of an empty program visits nothing") {
  Program p;
  size_t n = 0;
  traverse(p, [&](const AstNode&) { ++n; });
  CHECK(n == 0);
}

TEST_CASE("node count of the a3 golden fixture matches the manual tally") {
  // By hand: FuncDecl + 2 VarDecls = 3; var1 = (var0 % 10) contributes 5;
  // the if header 4, then-branch 5, else-branch 7; return 2. Total 26.
  Program p = tu::load_fixture("a3_golden.uast.json");
  CHECK(count_nodes(p) == 26);
}

TEST_CASE("every node is visited exactly once") {
  tu::ProgramGen gen(11);
  for (int i = 0; i < 10; ++i) {
    Program p = gen.next();
    std::set<const void*> seen;
    bool duplicate = false;
    traverse(p, [&](const AstNode& n) {
      const void* addr = std::visit([](auto* ptr) { return static_cast<const void*>(ptr); }, n);
      if (!seen.insert(addr).second) duplicate = true;
    });
    CHECK_FALSE(duplicate);
  }
}

TEST_CASE("count_lines: signature, vars line, and statements") {
  Program p = single_return_main(make_var(Type::int_type(), "var0"));
  p.funcs[0].params.push_back({Type::int_type(), "var0"});
  CHECK(count_lines(p) == 3);  // signature + vars + return

  Program empty;
  FuncDecl main;
  main.name = kMainName;
  main.return_type = Type::int_type();
  empty.funcs.push_back(std::move(main));
  CHECK(count_lines(empty) == 2);  // signature + vars line only
}

TEST_CASE("count_lines of the count_steps fixture") {
  // 19 rows: one signature, one vars line, and 17 statement/else lines.
  Program p = tu::load_fixture("count_steps_inferred.uast.json");
  CHECK(count_lines(p) == 19);
}

TEST_CASE("type factories compare structurally") {
  CHECK(*Type::array(Type::int_type()) == *Type::array(Type::int_type()));
  CHECK_FALSE(*Type::array(Type::int_type()) == *Type::set(Type::int_type()));
  CHECK(*Type::map(Type::int_type(), Type::string_type()) ==
        *Type::map(Type::int_type(), Type::array(Type::char_type())));
  CHECK(*Type::record("pt") == *Type::record("pt"));
  CHECK_FALSE(*Type::record("pt") == *Type::record("qt"));
}
