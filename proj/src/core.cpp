#include "uast/core.hpp"

#include <algorithm>

namespace uast {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

#define UAST_LEAF_TYPE(fn, kind)                                        \
  const TypeRef& Type::fn() {                                           \
    static const TypeRef t{new Type(kind, nullptr, nullptr, {})};       \
    return t;                                                           \
  }

UAST_LEAF_TYPE(bool_type, TypeKind::Bool)
UAST_LEAF_TYPE(char_type, TypeKind::Char)
UAST_LEAF_TYPE(int_type, TypeKind::Int)
UAST_LEAF_TYPE(real_type, TypeKind::Real)
UAST_LEAF_TYPE(void_type, TypeKind::Void)
#undef UAST_LEAF_TYPE

TypeRef Type::array(TypeRef elem) {
  return TypeRef{new Type(TypeKind::Array, std::move(elem), nullptr, {})};
}
TypeRef Type::set(TypeRef elem) {
  return TypeRef{new Type(TypeKind::Set, std::move(elem), nullptr, {})};
}
TypeRef Type::map(TypeRef key, TypeRef value) {
  return TypeRef{new Type(TypeKind::Map, std::move(key), std::move(value), {})};
}
TypeRef Type::record(std::string name) {
  return TypeRef{new Type(TypeKind::Record, nullptr, nullptr, std::move(name))};
}
const TypeRef& Type::string_type() {
  static const TypeRef t = Type::array(Type::char_type());
  return t;
}

bool operator==(const Type& a, const Type& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TypeKind::Array:
    case TypeKind::Set:
      return *a.elem() == *b.elem();
    case TypeKind::Map:
      return *a.key() == *b.key() && *a.value() == *b.value();
    case TypeKind::Record:
      return a.record_name() == b.record_name();
    default:
      return true;
  }
}

bool same_type(const TypeRef& a, const TypeRef& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------------------
// Program lookups
// ---------------------------------------------------------------------------

const RecordDecl* Program::find_record(std::string_view name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

const FuncDecl* Program::find_func(std::string_view name) const {
  for (const auto& f : funcs)
    if (f.name == name) return &f;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

ExprPtr make_assign(TypeRef t, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(
      Expr{std::move(t), Expr::Assign{std::move(lhs), std::move(rhs)}});
}
ExprPtr make_var(TypeRef t, std::string name) {
  return std::make_shared<const Expr>(Expr{std::move(t), Expr::VarRef{std::move(name)}});
}
ExprPtr make_field(TypeRef t, ExprPtr object, std::string field) {
  return std::make_shared<const Expr>(
      Expr{std::move(t), Expr::FieldRef{std::move(object), std::move(field)}});
}
ExprPtr make_const(TypeRef t, ConstVal v) {
  return std::make_shared<const Expr>(Expr{std::move(t), Expr::Constant{std::move(v)}});
}
ExprPtr make_int(int64_t v) { return make_const(Type::int_type(), v); }
ExprPtr make_invoke(TypeRef t, std::string callee, std::vector<ExprPtr> args) {
  return std::make_shared<const Expr>(
      Expr{std::move(t), Expr::Invoke{std::move(callee), std::move(args)}});
}
ExprPtr make_ternary(TypeRef t, ExprPtr cond, ExprPtr if_true, ExprPtr if_false) {
  return std::make_shared<const Expr>(
      Expr{std::move(t), Expr::Ternary{std::move(cond), std::move(if_true), std::move(if_false)}});
}
ExprPtr make_cast(TypeRef t, ExprPtr operand) {
  return std::make_shared<const Expr>(Expr{std::move(t), Expr::Cast{std::move(operand)}});
}

StmtPtr make_expr_stmt(ExprPtr e) {
  TypeRef t = e->type;
  return std::make_shared<const Stmt>(Stmt{std::move(t), Stmt::ExprStmt{std::move(e)}});
}
StmtPtr make_if(ExprPtr cond, std::vector<StmtPtr> then_body, std::vector<StmtPtr> else_body,
                TypeRef tag) {
  if (!tag) tag = Type::bool_type();
  return std::make_shared<const Stmt>(
      Stmt{std::move(tag), Stmt::If{std::move(cond), std::move(then_body), std::move(else_body)}});
}
StmtPtr make_foreach(VarDecl var, ExprPtr iterable, std::vector<StmtPtr> body, TypeRef tag) {
  if (!tag) tag = var.type;
  return std::make_shared<const Stmt>(Stmt{
      std::move(tag), Stmt::Foreach{std::move(var), std::move(iterable), std::move(body)}});
}
StmtPtr make_while(ExprPtr cond, std::vector<StmtPtr> body, std::vector<StmtPtr> increment,
                   TypeRef tag) {
  if (!tag) tag = Type::bool_type();
  return std::make_shared<const Stmt>(
      Stmt{std::move(tag), Stmt::While{std::move(cond), std::move(body), std::move(increment)}});
}
StmtPtr make_break(TypeRef tag) {
  if (!tag) tag = Type::void_type();
  return std::make_shared<const Stmt>(Stmt{std::move(tag), Stmt::Break{}});
}
StmtPtr make_continue(TypeRef tag) {
  if (!tag) tag = Type::void_type();
  return std::make_shared<const Stmt>(Stmt{std::move(tag), Stmt::Continue{}});
}
StmtPtr make_return(ExprPtr e, TypeRef tag) {
  if (!tag) tag = e->type;
  return std::make_shared<const Stmt>(Stmt{std::move(tag), Stmt::Return{std::move(e)}});
}
StmtPtr make_noop() {
  return std::make_shared<const Stmt>(Stmt{Type::void_type(), Stmt::Noop{}});
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

namespace {

bool eq(const ExprPtr& a, const ExprPtr& b);
bool eq(const StmtPtr& a, const StmtPtr& b);

template <typename T>
bool eq_list(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!eq(a[i], b[i])) return false;
  return true;
}

bool eq_decl(const VarDecl& a, const VarDecl& b) {
  return a.name == b.name && same_type(a.type, b.type);
}

bool eq_decls(const std::vector<VarDecl>& a, const std::vector<VarDecl>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!eq_decl(a[i], b[i])) return false;
  return true;
}

bool eq(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (!same_type(a->type, b->type)) return false;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case ExprKind::Assign: {
      const auto& x = std::get<Expr::Assign>(a->node);
      const auto& y = std::get<Expr::Assign>(b->node);
      return eq(x.lhs, y.lhs) && eq(x.rhs, y.rhs);
    }
    case ExprKind::Var:
      return std::get<Expr::VarRef>(a->node).name == std::get<Expr::VarRef>(b->node).name;
    case ExprKind::Field: {
      const auto& x = std::get<Expr::FieldRef>(a->node);
      const auto& y = std::get<Expr::FieldRef>(b->node);
      return x.field == y.field && eq(x.object, y.object);
    }
    case ExprKind::Constant:
      return std::get<Expr::Constant>(a->node).value == std::get<Expr::Constant>(b->node).value;
    case ExprKind::Invoke: {
      const auto& x = std::get<Expr::Invoke>(a->node);
      const auto& y = std::get<Expr::Invoke>(b->node);
      return x.callee == y.callee && eq_list(x.args, y.args);
    }
    case ExprKind::Ternary: {
      const auto& x = std::get<Expr::Ternary>(a->node);
      const auto& y = std::get<Expr::Ternary>(b->node);
      return eq(x.cond, y.cond) && eq(x.if_true, y.if_true) && eq(x.if_false, y.if_false);
    }
    case ExprKind::Cast:
      return eq(std::get<Expr::Cast>(a->node).operand, std::get<Expr::Cast>(b->node).operand);
  }
  return false;
}

bool eq(const StmtPtr& a, const StmtPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (!same_type(a->type, b->type)) return false;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case StmtKind::Expr:
      return eq(std::get<Stmt::ExprStmt>(a->node).expr, std::get<Stmt::ExprStmt>(b->node).expr);
    case StmtKind::If: {
      const auto& x = std::get<Stmt::If>(a->node);
      const auto& y = std::get<Stmt::If>(b->node);
      return eq(x.cond, y.cond) && eq_list(x.then_body, y.then_body) &&
             eq_list(x.else_body, y.else_body);
    }
    case StmtKind::Foreach: {
      const auto& x = std::get<Stmt::Foreach>(a->node);
      const auto& y = std::get<Stmt::Foreach>(b->node);
      return eq_decl(x.var, y.var) && eq(x.iterable, y.iterable) && eq_list(x.body, y.body);
    }
    case StmtKind::While: {
      const auto& x = std::get<Stmt::While>(a->node);
      const auto& y = std::get<Stmt::While>(b->node);
      return eq(x.cond, y.cond) && eq_list(x.body, y.body) && eq_list(x.increment, y.increment);
    }
    case StmtKind::Break:
    case StmtKind::Continue:
    case StmtKind::Noop:
      return true;
    case StmtKind::Return:
      return eq(std::get<Stmt::Return>(a->node).expr, std::get<Stmt::Return>(b->node).expr);
  }
  return false;
}

}  // namespace

bool structural_eq(const Expr& a, const Expr& b) {
  return eq(std::make_shared<const Expr>(a), std::make_shared<const Expr>(b));
}

bool structural_eq(const Stmt& a, const Stmt& b) {
  return eq(std::make_shared<const Stmt>(a), std::make_shared<const Stmt>(b));
}

bool structural_eq(const Program& a, const Program& b) {
  if (a.records.size() != b.records.size() || a.funcs.size() != b.funcs.size()) return false;
  for (size_t i = 0; i < a.records.size(); ++i) {
    if (a.records[i].name != b.records[i].name) return false;
    if (!eq_decls(a.records[i].fields, b.records[i].fields)) return false;
  }
  for (size_t i = 0; i < a.funcs.size(); ++i) {
    const auto& x = a.funcs[i];
    const auto& y = b.funcs[i];
    if (x.kind != y.kind || x.name != y.name) return false;
    if (!same_type(x.return_type, y.return_type)) return false;
    if (!eq_decls(x.params, y.params) || !eq_decls(x.locals, y.locals)) return false;
    if (!eq_list(x.body, y.body)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Traversal
// ---------------------------------------------------------------------------

namespace {

void walk(const Expr& e, const Visitor& visit);

void walk(const Stmt& s, const Visitor& visit) {
  if (s.kind() == StmtKind::Expr) {
    // STMT ::= EXPR has no wrapper node of its own.
    walk(*std::get<Stmt::ExprStmt>(s.node).expr, visit);
    return;
  }
  visit(AstNode{&s});
  switch (s.kind()) {
    case StmtKind::If: {
      const auto& n = std::get<Stmt::If>(s.node);
      walk(*n.cond, visit);
      for (const auto& c : n.then_body) walk(*c, visit);
      for (const auto& c : n.else_body) walk(*c, visit);
      break;
    }
    case StmtKind::Foreach: {
      const auto& n = std::get<Stmt::Foreach>(s.node);
      visit(AstNode{&n.var});
      walk(*n.iterable, visit);
      for (const auto& c : n.body) walk(*c, visit);
      break;
    }
    case StmtKind::While: {
      const auto& n = std::get<Stmt::While>(s.node);
      walk(*n.cond, visit);
      for (const auto& c : n.body) walk(*c, visit);
      for (const auto& c : n.increment) walk(*c, visit);
      break;
    }
    case StmtKind::Return:
      walk(*std::get<Stmt::Return>(s.node).expr, visit);
      break;
    default:
      break;
  }
}

void walk(const Expr& e, const Visitor& visit) {
  visit(AstNode{&e});
  switch (e.kind()) {
    case ExprKind::Assign: {
      const auto& n = std::get<Expr::Assign>(e.node);
      walk(*n.lhs, visit);
      walk(*n.rhs, visit);
      break;
    }
    case ExprKind::Field:
      walk(*std::get<Expr::FieldRef>(e.node).object, visit);
      break;
    case ExprKind::Invoke:
      for (const auto& a : std::get<Expr::Invoke>(e.node).args) walk(*a, visit);
      break;
    case ExprKind::Ternary: {
      const auto& n = std::get<Expr::Ternary>(e.node);
      walk(*n.cond, visit);
      walk(*n.if_true, visit);
      walk(*n.if_false, visit);
      break;
    }
    case ExprKind::Cast:
      walk(*std::get<Expr::Cast>(e.node).operand, visit);
      break;
    default:
      break;
  }
}

}  // namespace

void traverse(const Program& p, const Visitor& visit) {
  for (const auto& r : p.records) {
    visit(AstNode{&r});
    for (const auto& f : r.fields) visit(AstNode{&f});
  }
  for (const auto& f : p.funcs) {
    visit(AstNode{&f});
    for (const auto& v : f.params) visit(AstNode{&v});
    for (const auto& v : f.locals) visit(AstNode{&v});
    for (const auto& s : f.body) walk(*s, visit);
  }
}

void traverse(const Stmt& s, const Visitor& visit) { walk(s, visit); }
void traverse(const Expr& e, const Visitor& visit) { walk(e, visit); }

size_t count_nodes(const Program& p) {
  size_t n = 0;
  traverse(p, [&](const AstNode&) { ++n; });
  return n;
}

}  // namespace uast
