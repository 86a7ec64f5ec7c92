#include "uast/check.hpp"

#include <map>
#include <set>

#include "uast/serde.hpp"

namespace uast {

DiagClass diag_class(std::string_view code) {
  if (code == "undeclared-variable" || code == "unknown-function" || code == "call-arity" ||
      code == "unknown-record")
    return DiagClass::Decl;
  if (code == "type-inconsistency" || code == "return-type-mismatch") return DiagClass::Type;
  if (code == "unused-variable") return DiagClass::Lint;
  return DiagClass::Shape;
}

bool has_shape_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Diagnostic::Severity::Error && diag_class(d.code) == DiagClass::Shape)
      return true;
  return false;
}

nlohmann::ordered_json diagnostics_to_json(const std::vector<Diagnostic>& diags) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& d : diags) {
    nlohmann::ordered_json j;
    j["severity"] = d.severity == Diagnostic::Severity::Error ? "error" : "warning";
    j["code"] = d.code;
    j["path"] = d.path;
    j["message"] = d.message;
    out.push_back(std::move(j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builtin signature table
// ---------------------------------------------------------------------------

namespace {

bool numeric_or_char(const Type& t) {
  return t.kind() == TypeKind::Int || t.kind() == TypeKind::Real || t.kind() == TypeKind::Char;
}

// int op int -> int; any real operand -> real; chars widen to int.
TypeRef arith_result(const Type& a, const Type& b) {
  if (!numeric_or_char(a) || !numeric_or_char(b)) return nullptr;
  if (a.kind() == TypeKind::Real || b.kind() == TypeKind::Real) return Type::real_type();
  return Type::int_type();
}

bool comparable(const Type& a, const Type& b) {
  if (numeric_or_char(a) && numeric_or_char(b)) return true;
  return a == b;
}

}  // namespace

bool is_builtin(const std::string& name) {
  static const std::set<std::string> names = {
      "+",  "-",  "*",   "/",  "%",  "==", "!=", "<",  "<=", ">",  ">=", "&",  "|",
      "!",  "<<", ">>",  "len", "min", "max", "pow", "abs", "array_push", "array_index",
      "array_pop", "sort", "map_keys", "map_get", "map_put", "set_add", "set_contains",
      "string_find", "concat", "new"};
  return names.count(name) > 0;
}

TypeRef builtin_result_type(const std::string& name, const std::vector<TypeRef>& args,
                            const TypeRef& node_type, std::string* err) {
  auto fail = [&](const std::string& m) -> TypeRef {
    if (err) *err = m;
    return nullptr;
  };
  auto want_arity = [&](size_t n) {
    return args.size() == n;
  };

  if (name == "+" || name == "-" || name == "*" || name == "/" || name == "%") {
    if (name == "-" && want_arity(1)) {
      if (!args[0]->is_numeric()) return fail("unary '-' needs a numeric operand");
      return args[0];
    }
    if (!want_arity(2)) return fail("operator '" + name + "' expects 2 arguments");
    TypeRef r = arith_result(*args[0], *args[1]);
    if (!r) return fail("operator '" + name + "' needs numeric operands");
    return r;
  }
  if (name == "<" || name == "<=" || name == ">" || name == ">=") {
    if (!want_arity(2)) return fail("comparison expects 2 arguments");
    if (!comparable(*args[0], *args[1])) return fail("comparison operands are not comparable");
    return Type::bool_type();
  }
  if (name == "==" || name == "!=") {
    if (!want_arity(2)) return fail("equality expects 2 arguments");
    if (!comparable(*args[0], *args[1])) return fail("equality operands are not comparable");
    return Type::bool_type();
  }
  if (name == "&" || name == "|") {
    if (!want_arity(2)) return fail("operator '" + name + "' expects 2 arguments");
    if (args[0]->is(TypeKind::Bool) && args[1]->is(TypeKind::Bool)) return Type::bool_type();
    TypeRef r = arith_result(*args[0], *args[1]);
    if (r && r->is(TypeKind::Int)) return r;
    return fail("operator '" + name + "' needs two bools or two ints");
  }
  if (name == "!") {
    if (!want_arity(1) || !args[0]->is(TypeKind::Bool)) return fail("'!' needs one bool operand");
    return Type::bool_type();
  }
  if (name == "<<" || name == ">>") {
    if (!want_arity(2)) return fail("shift expects 2 arguments");
    TypeRef r = arith_result(*args[0], *args[1]);
    if (r && r->is(TypeKind::Int)) return Type::int_type();
    return fail("shift needs int operands");
  }
  if (name == "len") {
    if (!want_arity(1)) return fail("len expects 1 argument");
    switch (args[0]->kind()) {
      case TypeKind::Array:
      case TypeKind::Set:
      case TypeKind::Map:
        return Type::int_type();
      default:
        return fail("len needs a container");
    }
  }
  if (name == "min" || name == "max") {
    if (!want_arity(2)) return fail(name + " expects 2 arguments");
    if (!args[0]->is_numeric() || !args[1]->is_numeric())
      return fail(name + " needs numeric arguments");
    return arith_result(*args[0], *args[1]);
  }
  if (name == "pow") {
    if (!want_arity(2)) return fail("pow expects 2 arguments");
    if (!args[0]->is_numeric() || !args[1]->is_numeric()) return fail("pow needs numeric arguments");
    if (args[0]->is(TypeKind::Real) || args[1]->is(TypeKind::Real)) return Type::real_type();
    return Type::int_type();
  }
  if (name == "abs") {
    if (!want_arity(1) || !args[0]->is_numeric()) return fail("abs needs one numeric argument");
    return args[0];
  }
  if (name == "array_push") {
    if (!want_arity(2)) return fail("array_push expects 2 arguments");
    if (!args[0]->is(TypeKind::Array)) return fail("array_push needs an array");
    // exact element type: the runtime cannot widen inside untyped containers
    if (!same_type(args[0]->elem(), args[1]))
      return fail("array_push element type mismatch");
    return args[0];
  }
  if (name == "array_index") {
    if (!want_arity(2)) return fail("array_index expects 2 arguments");
    if (!args[0]->is(TypeKind::Array)) return fail("array_index needs an array");
    if (!args[1]->is(TypeKind::Int) && !args[1]->is(TypeKind::Char))
      return fail("array index must be an int");
    return args[0]->elem();
  }
  if (name == "array_pop") {
    if (!want_arity(1) || !args[0]->is(TypeKind::Array)) return fail("array_pop needs an array");
    return args[0]->elem();
  }
  if (name == "sort") {
    if (!want_arity(1) || !args[0]->is(TypeKind::Array)) return fail("sort needs an array");
    return args[0];
  }
  if (name == "map_keys") {
    if (!want_arity(1) || !args[0]->is(TypeKind::Map)) return fail("map_keys needs a map");
    return Type::array(args[0]->key());
  }
  if (name == "map_get") {
    if (!want_arity(2) || !args[0]->is(TypeKind::Map)) return fail("map_get needs a map and key");
    if (!same_type(args[0]->key(), args[1])) return fail("map_get key type mismatch");
    return args[0]->value();
  }
  if (name == "map_put") {
    if (!want_arity(3) || !args[0]->is(TypeKind::Map))
      return fail("map_put needs a map, key, and value");
    if (!same_type(args[0]->key(), args[1])) return fail("map_put key type mismatch");
    if (!same_type(args[0]->value(), args[2])) return fail("map_put value type mismatch");
    return args[0];
  }
  if (name == "set_add") {
    if (!want_arity(2) || !args[0]->is(TypeKind::Set)) return fail("set_add needs a set and value");
    if (!same_type(args[0]->elem(), args[1])) return fail("set_add element type mismatch");
    return args[0];
  }
  if (name == "set_contains") {
    if (!want_arity(2) || !args[0]->is(TypeKind::Set))
      return fail("set_contains needs a set and value");
    if (!same_type(args[0]->elem(), args[1])) return fail("set_contains element type mismatch");
    return Type::bool_type();
  }
  if (name == "string_find") {
    if (!want_arity(2)) return fail("string_find expects 2 arguments");
    if (!same_type(args[0], Type::string_type()) || !same_type(args[1], Type::string_type()))
      return fail("string_find needs two char* arguments");
    return Type::int_type();
  }
  if (name == "concat") {
    if (!want_arity(2)) return fail("concat expects 2 arguments");
    if (!args[0]->is(TypeKind::Array) || !same_type(args[0], args[1]))
      return fail("concat needs two arrays of the same type");
    return args[0];
  }
  if (name == "new") {
    if (!want_arity(0)) return fail("new expects no arguments");
    if (!node_type || !node_type->is_composite())
      return fail("new needs a composite result type annotation");
    return node_type;
  }
  return fail("unknown builtin '" + name + "'");
}

// ---------------------------------------------------------------------------
// Validator
// ---------------------------------------------------------------------------

namespace {

// rhs storable into a slot of type lhs: exact match plus the Java widenings
// char -> int -> real.
bool assignable(const Type& lhs, const Type& rhs) {
  if (lhs == rhs) return true;
  if (lhs.kind() == TypeKind::Real &&
      (rhs.kind() == TypeKind::Int || rhs.kind() == TypeKind::Char))
    return true;
  if (lhs.kind() == TypeKind::Int && rhs.kind() == TypeKind::Char) return true;
  return false;
}

struct Checker {
  Checker(const Program& p, bool lint_) : prog(p), lint(lint_) {}

  const Program& prog;
  bool lint;
  std::vector<Diagnostic> diags;
  const RecordDecl* globals = nullptr;
  std::map<std::string, const FuncDecl*> funcs_by_name;
  std::set<std::string> known_records;

  // Per-function state.
  const FuncDecl* fn = nullptr;
  std::map<std::string, TypeRef> frame;                     // params + locals
  std::vector<std::pair<std::string, TypeRef>> scopes;      // foreach bindings
  std::set<std::string> used_names;
  int loop_depth = 0;

  void error(const std::string& path, const std::string& code, const std::string& message) {
    diags.push_back({Diagnostic::Severity::Error, code, path, message});
  }
  void warning(const std::string& path, const std::string& code, const std::string& message) {
    diags.push_back({Diagnostic::Severity::Warning, code, path, message});
  }

  void check_type_wellformed(const TypeRef& t, const std::string& path) {
    switch (t->kind()) {
      case TypeKind::Array:
      case TypeKind::Set:
        check_type_wellformed(t->elem(), path);
        break;
      case TypeKind::Map:
        check_type_wellformed(t->key(), path);
        check_type_wellformed(t->value(), path);
        break;
      case TypeKind::Record:
        if (!known_records.count(t->record_name()))
          error(path, "unknown-record", "record '" + t->record_name() + "' is not declared");
        break;
      default:
        break;
    }
  }

  TypeRef resolve_var(const std::string& name) {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it)
      if (it->first == name) return it->second;
    if (auto it = frame.find(name); it != frame.end()) return it->second;
    if (globals)
      for (const auto& f : globals->fields)
        if (f.name == name) return f.type;
    return nullptr;
  }

  // Computes the expression's type from its children and reports any
  // mismatch with the node's annotation. Returns the annotation so that
  // downstream checks follow the program's own claims.
  TypeRef check_expr(const Expr& e, const std::string& path) {
    switch (e.kind()) {
      case ExprKind::Var: {
        const auto& n = std::get<Expr::VarRef>(e.node);
        TypeRef declared = resolve_var(n.name);
        if (!declared) {
          error(path, "undeclared-variable", "variable '" + n.name + "' is not declared");
        } else if (!same_type(declared, e.type)) {
          error(path, "type-inconsistency",
                "variable '" + n.name + "' is declared " + type_text(declared) +
                    " but annotated " + type_text(e.type));
        }
        break;
      }
      case ExprKind::Constant: {
        const auto& v = std::get<Expr::Constant>(e.node).value;
        bool ok = std::visit(
            [&](const auto& x) {
              using T = std::decay_t<decltype(x)>;
              if constexpr (std::is_same_v<T, bool>) return e.type->is(TypeKind::Bool);
              else if constexpr (std::is_same_v<T, int64_t>) return e.type->is(TypeKind::Int);
              else if constexpr (std::is_same_v<T, double>) return e.type->is(TypeKind::Real);
              else if constexpr (std::is_same_v<T, CharLit>) return e.type->is(TypeKind::Char);
              else return same_type(e.type, Type::string_type());
            },
            v);
        if (!ok)
          error(path, "type-inconsistency",
                "constant payload does not match type " + type_text(e.type));
        break;
      }
      case ExprKind::Assign: {
        const auto& n = std::get<Expr::Assign>(e.node);
        bool lhs_ok = n.lhs->kind() == ExprKind::Var || n.lhs->kind() == ExprKind::Field;
        if (n.lhs->kind() == ExprKind::Invoke) {
          const auto& inv = std::get<Expr::Invoke>(n.lhs->node);
          lhs_ok = inv.callee == "array_index";
        }
        if (!lhs_ok)
          error(path + ".lhs", "invalid-assign-lhs",
                "assign target must be a variable, field, or array cell");
        TypeRef lt = check_expr(*n.lhs, path + ".lhs");
        TypeRef rt = check_expr(*n.rhs, path + ".rhs");
        if (lt && rt && !assignable(*lt, *rt))
          error(path, "type-inconsistency",
                "cannot store " + type_text(rt) + " into " + type_text(lt));
        if (lt && !same_type(lt, e.type))
          error(path, "type-inconsistency",
                "assign annotated " + type_text(e.type) + " but target is " + type_text(lt));
        break;
      }
      case ExprKind::Field: {
        const auto& n = std::get<Expr::FieldRef>(e.node);
        TypeRef ot = check_expr(*n.object, path + ".object");
        if (ot) {
          if (!ot->is(TypeKind::Record)) {
            error(path, "type-inconsistency",
                  "field access on non-record type " + type_text(ot));
          } else if (auto* rec = prog.find_record(ot->record_name())) {
            const VarDecl* fd = nullptr;
            for (const auto& f : rec->fields)
              if (f.name == n.field) fd = &f;
            if (!fd)
              error(path, "type-inconsistency",
                    "record '" + rec->name + "' has no field '" + n.field + "'");
            else if (!same_type(fd->type, e.type))
              error(path, "type-inconsistency",
                    "field '" + n.field + "' has type " + type_text(fd->type) +
                        " but annotated " + type_text(e.type));
          }
        }
        break;
      }
      case ExprKind::Invoke: {
        const auto& n = std::get<Expr::Invoke>(e.node);
        std::vector<TypeRef> arg_types;
        for (size_t i = 0; i < n.args.size(); ++i)
          arg_types.push_back(check_expr(*n.args[i], path + ".args[" + std::to_string(i) + "]"));
        for (const auto& t : arg_types)
          if (!t) return e.type;  // child already failed; don't cascade
        if (auto it = funcs_by_name.find(n.callee); it != funcs_by_name.end()) {
          const FuncDecl* callee = it->second;
          if (callee->params.size() != n.args.size()) {
            error(path, "call-arity",
                  "'" + n.callee + "' takes " + std::to_string(callee->params.size()) +
                      " arguments, got " + std::to_string(n.args.size()));
          } else {
            for (size_t i = 0; i < arg_types.size(); ++i)
              if (!assignable(*callee->params[i].type, *arg_types[i]))
                error(path + ".args[" + std::to_string(i) + "]", "type-inconsistency",
                      "argument " + std::to_string(i) + " of '" + n.callee + "' expects " +
                          type_text(callee->params[i].type) + ", got " + type_text(arg_types[i]));
          }
          if (!same_type(callee->return_type, e.type))
            error(path, "type-inconsistency",
                  "call to '" + n.callee + "' annotated " + type_text(e.type) + " but returns " +
                      type_text(callee->return_type));
        } else if (is_builtin(n.callee)) {
          std::string err;
          TypeRef r = builtin_result_type(n.callee, arg_types, e.type, &err);
          if (!r)
            error(path, "type-inconsistency", err);
          else if (!same_type(r, e.type))
            error(path, "type-inconsistency",
                  "'" + n.callee + "' yields " + type_text(r) + " but annotated " +
                      type_text(e.type));
        } else {
          error(path, "unknown-function", "'" + n.callee + "' is neither declared nor a builtin");
        }
        break;
      }
      case ExprKind::Ternary: {
        const auto& n = std::get<Expr::Ternary>(e.node);
        TypeRef ct = check_expr(*n.cond, path + ".cond");
        if (ct && !ct->is(TypeKind::Bool))
          error(path + ".cond", "type-inconsistency", "ternary condition must be bool");
        TypeRef tt = check_expr(*n.if_true, path + ".then");
        TypeRef ft = check_expr(*n.if_false, path + ".else");
        if (tt && ft) {
          TypeRef unified;
          if (same_type(tt, ft)) unified = tt;
          else if (tt->is_numeric() && ft->is_numeric()) unified = Type::real_type();
          if (!unified)
            error(path, "type-inconsistency", "ternary branches have incompatible types");
          else if (!same_type(unified, e.type))
            error(path, "type-inconsistency",
                  "ternary annotated " + type_text(e.type) + " but branches give " +
                      type_text(unified));
        }
        break;
      }
      case ExprKind::Cast: {
        const auto& n = std::get<Expr::Cast>(e.node);
        TypeRef ot = check_expr(*n.operand, path + ".operand");
        if (ot) {
          bool ok = same_type(ot, e.type) ||
                    (numeric_or_char(*ot) && numeric_or_char(*e.type));
          if (!ok)
            error(path, "type-inconsistency",
                  "cannot cast " + type_text(ot) + " to " + type_text(e.type));
        }
        break;
      }
    }
    return e.type;
  }

  void check_cond(const ExprPtr& cond, const std::string& path) {
    TypeRef t = check_expr(*cond, path);
    if (t && !t->is(TypeKind::Bool))
      error(path, "type-inconsistency", "condition must be bool, got " + type_text(t));
  }

  void check_block(const std::vector<StmtPtr>& body, const std::string& path) {
    for (size_t i = 0; i < body.size(); ++i)
      check_stmt(*body[i], path + "[" + std::to_string(i) + "]");
  }

  void check_stmt(const Stmt& s, const std::string& path) {
    switch (s.kind()) {
      case StmtKind::Expr:
        check_expr(*std::get<Stmt::ExprStmt>(s.node).expr, path);
        break;
      case StmtKind::If: {
        const auto& n = std::get<Stmt::If>(s.node);
        check_cond(n.cond, path + ".cond");
        check_block(n.then_body, path + ".then");
        check_block(n.else_body, path + ".else");
        break;
      }
      case StmtKind::Foreach: {
        const auto& n = std::get<Stmt::Foreach>(s.node);
        check_type_wellformed(n.var.type, path + ".var");
        TypeRef it = check_expr(*n.iterable, path + ".iterable");
        if (it) {
          TypeRef elem;
          switch (it->kind()) {
            case TypeKind::Array:
            case TypeKind::Set: elem = it->elem(); break;
            case TypeKind::Map: elem = it->key(); break;
            default:
              error(path + ".iterable", "type-inconsistency",
                    "foreach needs an array, set, or map, got " + type_text(it));
          }
          if (elem && !assignable(*n.var.type, *elem))
            error(path + ".var", "type-inconsistency",
                  "loop variable type " + type_text(n.var.type) + " cannot hold elements of " +
                      type_text(it));
        }
        scopes.emplace_back(n.var.name, n.var.type);
        ++loop_depth;
        check_block(n.body, path + ".body");
        --loop_depth;
        scopes.pop_back();
        break;
      }
      case StmtKind::While: {
        const auto& n = std::get<Stmt::While>(s.node);
        check_cond(n.cond, path + ".cond");
        ++loop_depth;
        check_block(n.body, path + ".body");
        check_block(n.increment, path + ".increment");
        --loop_depth;
        break;
      }
      case StmtKind::Break:
        if (loop_depth == 0)
          error(path, "break-outside-loop", "break statement outside any loop");
        break;
      case StmtKind::Continue:
        if (loop_depth == 0)
          error(path, "continue-outside-loop", "continue statement outside any loop");
        break;
      case StmtKind::Return: {
        TypeRef t = check_expr(*std::get<Stmt::Return>(s.node).expr, path + ".expr");
        if (t && fn && !assignable(*fn->return_type, *t))
          error(path, "return-type-mismatch",
                "returning " + type_text(t) + " from a function declared " +
                    type_text(fn->return_type));
        break;
      }
      case StmtKind::Noop:
        break;
    }
  }

  void check_func(const FuncDecl& f, const std::string& path) {
    fn = &f;
    frame.clear();
    scopes.clear();
    used_names.clear();
    loop_depth = 0;

    check_type_wellformed(f.return_type, path);
    for (size_t i = 0; i < f.params.size(); ++i) {
      const auto& v = f.params[i];
      check_type_wellformed(v.type, path + ".params[" + std::to_string(i) + "]");
      if (!frame.emplace(v.name, v.type).second)
        error(path + ".params[" + std::to_string(i) + "]", "duplicate-variable",
              "'" + v.name + "' is declared twice");
    }
    for (size_t i = 0; i < f.locals.size(); ++i) {
      const auto& v = f.locals[i];
      check_type_wellformed(v.type, path + ".locals[" + std::to_string(i) + "]");
      if (!frame.emplace(v.name, v.type).second)
        error(path + ".locals[" + std::to_string(i) + "]", "duplicate-variable",
              "'" + v.name + "' is declared twice");
    }
    if (f.kind == FuncKind::Ctor && !f.return_type->is(TypeKind::Record))
      error(path, "ctor-return-type", "a ctor must return its record type");

    // Track local usage for the optional lint pass.
    std::set<std::string>* used = lint ? &used_names : nullptr;
    if (used) {
      for (const auto& s : f.body)
        traverse(*s, [&](const AstNode& n) {
          if (const auto* const* ep = std::get_if<const Expr*>(&n)) {
            const Expr& e = **ep;
            if (e.kind() == ExprKind::Var) used->insert(std::get<Expr::VarRef>(e.node).name);
          }
        });
    }

    check_block(f.body, path + ".body");

    if (lint) {
      for (size_t i = 0; i < f.locals.size(); ++i)
        if (!used_names.count(f.locals[i].name))
          warning(path + ".locals[" + std::to_string(i) + "]", "unused-variable",
                  "local '" + f.locals[i].name + "' is never referenced");
    }
  }

  void run() {
    std::set<std::string> record_names;
    for (size_t i = 0; i < prog.records.size(); ++i) {
      const auto& r = prog.records[i];
      known_records.insert(r.name);
      if (!record_names.insert(r.name).second)
        error("types[" + std::to_string(i) + "]", "duplicate-record",
              "record '" + r.name + "' is declared twice");
      std::set<std::string> fields;
      for (const auto& f : r.fields)
        if (!fields.insert(f.name).second)
          error("types[" + std::to_string(i) + "]", "duplicate-field",
                "field '" + f.name + "' is declared twice in '" + r.name + "'");
      if (r.name == kGlobalsName) globals = &r;
    }
    for (size_t i = 0; i < prog.records.size(); ++i)
      for (size_t k = 0; k < prog.records[i].fields.size(); ++k)
        check_type_wellformed(prog.records[i].fields[k].type,
                              "types[" + std::to_string(i) + "].fields[" + std::to_string(k) + "]");

    for (size_t i = 0; i < prog.funcs.size(); ++i) {
      const auto& f = prog.funcs[i];
      if (!funcs_by_name.emplace(f.name, &f).second)
        error("funcs[" + std::to_string(i) + "]", "duplicate-function",
              "function '" + f.name + "' is declared twice");
    }
    if (!prog.find_func(kMainName))
      error("funcs", "missing-main", "program has no '__main__' entry point");

    for (size_t i = 0; i < prog.funcs.size(); ++i)
      check_func(prog.funcs[i], "funcs[" + std::to_string(i) + "]");
  }
};

}  // namespace

std::vector<Diagnostic> validate(const Program& p, bool lint) {
  Checker c{p, lint};
  c.run();
  return std::move(c.diags);
}

// ---------------------------------------------------------------------------
// Entry schema
// ---------------------------------------------------------------------------

bool schema_eq(const EntrySchema& a, const EntrySchema& b) {
  if (!same_type(a.return_type, b.return_type)) return false;
  if (a.params.size() != b.params.size()) return false;
  for (size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].name != b.params[i].name) return false;
    if (!same_type(a.params[i].type, b.params[i].type)) return false;
  }
  return true;
}

EntrySchema entry_schema(const Program& p) {
  const FuncDecl* main = p.find_func(kMainName);
  if (!main) throw SchemaError("program has no '__main__' entry point");
  return {main->params, main->return_type};
}

std::string schema_text(const EntrySchema& s) {
  std::string out = type_text(s.return_type) + "(";
  for (size_t i = 0; i < s.params.size(); ++i) {
    if (i) out += ", ";
    out += type_text(s.params[i].type) + " " + s.params[i].name;
  }
  return out + ")";
}

EntrySchema parse_schema(std::string_view text) {
  auto open = text.find('(');
  auto close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    throw SchemaError("schema text must look like 'ret(type name, ...)'");
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  EntrySchema out;
  out.return_type = parse_type(trim(text.substr(0, open)));
  std::string_view inner = trim(text.substr(open + 1, close - open - 1));
  size_t index = 0;
  while (!inner.empty()) {
    auto comma = inner.find(',');
    std::string_view part = trim(inner.substr(0, comma));
    if (!part.empty()) {
      auto space = part.rfind(' ');
      std::string name;
      std::string_view type_part = part;
      if (space != std::string_view::npos) {
        name = std::string(trim(part.substr(space + 1)));
        type_part = trim(part.substr(0, space));
      } else {
        name = "var" + std::to_string(index);
      }
      out.params.push_back({parse_type(type_part), std::move(name)});
    }
    if (comma == std::string_view::npos) break;
    inner = trim(inner.substr(comma + 1));
    ++index;
  }
  return out;
}

nlohmann::ordered_json schema_to_json(const EntrySchema& s) {
  auto args = nlohmann::ordered_json::array();
  for (const auto& p : s.params) args.push_back({p.name, type_text(p.type)});
  nlohmann::ordered_json out;
  out["args"] = std::move(args);
  out["return_type"] = type_text(s.return_type);
  return out;
}

EntrySchema schema_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("args") || !j.contains("return_type"))
    throw SchemaError("schema JSON needs 'args' and 'return_type'");
  EntrySchema out;
  for (const auto& a : j["args"]) {
    if (!a.is_array() || a.size() != 2) throw SchemaError("schema args must be [name, type] pairs");
    out.params.push_back({parse_type(a[1].get<std::string>()), a[0].get<std::string>()});
  }
  out.return_type = parse_type(j["return_type"].get<std::string>());
  return out;
}

}  // namespace uast
