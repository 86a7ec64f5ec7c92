#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace uast {

// ---------------------------------------------------------------------------
// Type tags
// ---------------------------------------------------------------------------

enum class TypeKind { Bool, Char, Int, Real, Array, Set, Map, Record, Void };

class Type;
using TypeRef = std::shared_ptr<const Type>;

// Immutable type tag. Composite types share their component tags, so building
// deeply nested types is cheap and comparing them is a structural walk.
class Type {
public:
  TypeKind kind() const { return kind_; }
  bool is(TypeKind k) const { return kind_ == k; }
  bool is_numeric() const { return kind_ == TypeKind::Int || kind_ == TypeKind::Real; }
  bool is_composite() const {
    return kind_ == TypeKind::Array || kind_ == TypeKind::Set || kind_ == TypeKind::Map ||
           kind_ == TypeKind::Record;
  }

  // Array/Set element, Map key/value. Null for other kinds.
  const TypeRef& elem() const { return a_; }
  const TypeRef& key() const { return a_; }
  const TypeRef& value() const { return b_; }
  const std::string& record_name() const { return name_; }

  static const TypeRef& bool_type();
  static const TypeRef& char_type();
  static const TypeRef& int_type();
  static const TypeRef& real_type();
  // Internal sentinel: Noop statements and valueless returns. Never appears
  // in Table-3 type text except as the explicit spelling "void".
  static const TypeRef& void_type();
  static TypeRef array(TypeRef elem);
  static TypeRef set(TypeRef elem);
  static TypeRef map(TypeRef key, TypeRef value);
  static TypeRef record(std::string name);
  // char* — the encoding used for string literals.
  static const TypeRef& string_type();

private:
  Type(TypeKind k, TypeRef a, TypeRef b, std::string name)
      : kind_(k), a_(std::move(a)), b_(std::move(b)), name_(std::move(name)) {}

  TypeKind kind_;
  TypeRef a_, b_;
  std::string name_;
};

bool operator==(const Type& a, const Type& b);
inline bool operator!=(const Type& a, const Type& b) { return !(a == b); }
// Null-safe deep comparison of two type refs.
bool same_type(const TypeRef& a, const TypeRef& b);

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

struct CharLit {
  uint32_t code = 0;  // Unicode code point
  bool operator==(const CharLit& o) const { return code == o.code; }
};

// bool | int | real | char | string payload of a CONSTANT node.
using ConstVal = std::variant<bool, int64_t, double, CharLit, std::string>;

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;

struct VarDecl {
  TypeRef type;
  std::string name;
};

enum class ExprKind { Assign, Var, Field, Constant, Invoke, Ternary, Cast };

// One node per Table-3 EXPR production. Every node carries its type tag.
struct Expr {
  struct Assign {
    ExprPtr lhs, rhs;
  };
  struct VarRef {
    std::string name;
  };
  struct FieldRef {
    ExprPtr object;
    std::string field;
  };
  struct Constant {
    ConstVal value;
  };
  struct Invoke {
    std::string callee;
    std::vector<ExprPtr> args;
  };
  struct Ternary {
    ExprPtr cond, if_true, if_false;
  };
  struct Cast {
    ExprPtr operand;
  };
  using Node = std::variant<Assign, VarRef, FieldRef, Constant, Invoke, Ternary, Cast>;

  TypeRef type;
  Node node;

  ExprKind kind() const { return static_cast<ExprKind>(node.index()); }
};

enum class StmtKind { Expr, If, Foreach, While, Break, Continue, Return, Noop };

// One node per Table-3 STMT production. The statement-level type tag is
// opaque: preserved through round trips, never interpreted.
struct Stmt {
  struct ExprStmt {
    ExprPtr expr;
  };
  struct If {
    ExprPtr cond;
    std::vector<StmtPtr> then_body, else_body;
  };
  struct Foreach {
    VarDecl var;
    ExprPtr iterable;
    std::vector<StmtPtr> body;
  };
  struct While {
    ExprPtr cond;
    std::vector<StmtPtr> body, increment;
  };
  struct Break {};
  struct Continue {};
  struct Return {
    ExprPtr expr;
  };
  struct Noop {};
  using Node = std::variant<ExprStmt, If, Foreach, While, Break, Continue, Return, Noop>;

  TypeRef type;
  Node node;

  StmtKind kind() const { return static_cast<StmtKind>(node.index()); }
};

struct RecordDecl {
  std::string name;
  std::vector<VarDecl> fields;  // declaration order preserved
};

enum class FuncKind { Func, Ctor };

struct FuncDecl {
  FuncKind kind = FuncKind::Func;
  TypeRef return_type;
  std::string name;
  std::vector<VarDecl> params;
  std::vector<VarDecl> locals;
  std::vector<StmtPtr> body;
};

struct Program {
  std::vector<RecordDecl> records;
  std::vector<FuncDecl> funcs;

  const RecordDecl* find_record(std::string_view name) const;
  const FuncDecl* find_func(std::string_view name) const;
};

inline constexpr const char* kMainName = "__main__";
inline constexpr const char* kGlobalsName = "__globals__";
inline constexpr const char* kGlobalsInitName = "__globals__.__init__";

// ---------------------------------------------------------------------------
// Node factories
// ---------------------------------------------------------------------------

ExprPtr make_assign(TypeRef t, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_var(TypeRef t, std::string name);
ExprPtr make_field(TypeRef t, ExprPtr object, std::string field);
ExprPtr make_const(TypeRef t, ConstVal v);
ExprPtr make_int(int64_t v);
ExprPtr make_invoke(TypeRef t, std::string callee, std::vector<ExprPtr> args);
ExprPtr make_ternary(TypeRef t, ExprPtr cond, ExprPtr if_true, ExprPtr if_false);
ExprPtr make_cast(TypeRef t, ExprPtr operand);

StmtPtr make_expr_stmt(ExprPtr e);
StmtPtr make_if(ExprPtr cond, std::vector<StmtPtr> then_body, std::vector<StmtPtr> else_body,
                TypeRef tag = nullptr);
StmtPtr make_foreach(VarDecl var, ExprPtr iterable, std::vector<StmtPtr> body,
                     TypeRef tag = nullptr);
StmtPtr make_while(ExprPtr cond, std::vector<StmtPtr> body, std::vector<StmtPtr> increment,
                   TypeRef tag = nullptr);
StmtPtr make_break(TypeRef tag = nullptr);
StmtPtr make_continue(TypeRef tag = nullptr);
StmtPtr make_return(ExprPtr e, TypeRef tag = nullptr);
StmtPtr make_noop();

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

bool structural_eq(const Expr& a, const Expr& b);
bool structural_eq(const Stmt& a, const Stmt& b);
bool structural_eq(const Program& a, const Program& b);

// ---------------------------------------------------------------------------
// Traversal
// ---------------------------------------------------------------------------

// A visited node. Statement-position expressions are visited as their Expr
// directly; the serialized grammar makes a bare expression a statement with
// no wrapper node.
using AstNode =
    std::variant<const RecordDecl*, const VarDecl*, const FuncDecl*, const Stmt*, const Expr*>;
using Visitor = std::function<void(const AstNode&)>;

// Pre-order walk of everything below the Program node, children in Table-3
// field order.
void traverse(const Program& p, const Visitor& visit);
void traverse(const Stmt& s, const Visitor& visit);
void traverse(const Expr& e, const Visitor& visit);

size_t count_nodes(const Program& p);

// Line count of the canonical pretty-printed form (see serde.hpp).
int count_lines(const Program& p);

}  // namespace uast
