#include "uast/serde.hpp"

#include <fstream>
#include <sstream>

#include "uast/unicode.hpp"

namespace uast {

// ---------------------------------------------------------------------------
// Type text
// ---------------------------------------------------------------------------

namespace {

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

struct TypeParser {
  std::string_view text;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, "type text offset " + std::to_string(pos));
  }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  TypeRef parse() {
    TypeRef t = primary();
    for (;;) {
      if (peek() == '*') {
        ++pos;
        t = Type::array(std::move(t));
      } else if (peek() == '%') {
        ++pos;
        t = Type::set(std::move(t));
      } else {
        return t;
      }
    }
  }

  TypeRef primary() {
    if (peek() == '<') {
      ++pos;
      TypeRef key = parse();
      if (peek() != '|') fail("expected '|' in map type");
      ++pos;
      TypeRef value = parse();
      if (peek() != '>') fail("expected '>' closing map type");
      ++pos;
      return Type::map(std::move(key), std::move(value));
    }
    if (!ident_start(peek())) fail("expected type name");
    size_t start = pos;
    while (ident_char(peek())) ++pos;
    std::string name(text.substr(start, pos - start));
    if (peek() == '#') {
      ++pos;
      return Type::record(std::move(name));
    }
    if (name == "bool") return Type::bool_type();
    if (name == "char") return Type::char_type();
    if (name == "int") return Type::int_type();
    if (name == "real") return Type::real_type();
    if (name == "void") return Type::void_type();
    pos = start;
    fail("unknown base type '" + name + "'");
  }
};

}  // namespace

TypeRef parse_type(std::string_view text) {
  if (text.empty()) throw ParseError("empty type text", "type text offset 0");
  TypeParser p{text};
  TypeRef t = p.parse();
  if (p.pos != text.size()) p.fail("trailing characters after type");
  return t;
}

std::string type_text(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Bool: return "bool";
    case TypeKind::Char: return "char";
    case TypeKind::Int: return "int";
    case TypeKind::Real: return "real";
    case TypeKind::Void: return "void";
    case TypeKind::Array: return type_text(*t.elem()) + "*";
    case TypeKind::Set: return type_text(*t.elem()) + "%";
    case TypeKind::Map: return "<" + type_text(*t.key()) + "|" + type_text(*t.value()) + ">";
    case TypeKind::Record: return t.record_name() + "#";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Parsing serialized documents
// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxNodeDepth = 2000;

struct DocParser {
  [[noreturn]] static void fail(const std::string& path, const std::string& message) {
    throw ParseError(message, path);
  }

  static void expect_array(const Json& j, const std::string& path, size_t arity) {
    if (!j.is_array()) fail(path, "expected a node list");
    if (j.size() != arity)
      fail(path, "arity mismatch: expected " + std::to_string(arity) + " entries, got " +
                     std::to_string(j.size()));
  }

  static std::string tag_of(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty() || !j[0].is_string()) fail(path, "expected a tagged node list");
    return j[0].get<std::string>();
  }

  static TypeRef type_at(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a TYPE string");
    try {
      return parse_type(j.get<std::string>());
    } catch (const ParseError& e) {
      fail(path, e.what());
    }
  }

  static std::string name_at(const Json& j, const std::string& path) {
    if (!j.is_string() || j.get<std::string>().empty()) fail(path, "expected a non-empty name");
    return j.get<std::string>();
  }

  static VarDecl parse_var(const Json& j, const std::string& path) {
    expect_array(j, path, 3);
    if (tag_of(j, path) != "var") fail(path, "expected a 'var' node");
    return {type_at(j[1], path + "[1]"), name_at(j[2], path + "[2]")};
  }

  static ConstVal parse_const(const Json& j, const TypeRef& type, const std::string& path) {
    switch (type->kind()) {
      case TypeKind::Bool:
        if (!j.is_boolean()) fail(path, "bool constant must be true or false");
        return j.get<bool>();
      case TypeKind::Char: {
        if (!j.is_string()) fail(path, "char constant must be a one-character string");
        try {
          return CharLit{utf8_decode_one(j.get<std::string>())};
        } catch (const std::invalid_argument& e) {
          fail(path, e.what());
        }
      }
      case TypeKind::Int:
        if (!j.is_number_integer() && !j.is_number_unsigned())
          fail(path, "int constant must be an integer");
        return j.get<int64_t>();
      case TypeKind::Real:
        if (!j.is_number()) fail(path, "real constant must be a number");
        return j.get<double>();
      case TypeKind::Array:
        if (type->elem()->kind() == TypeKind::Char) {
          if (!j.is_string()) fail(path, "string constant must be a string");
          return j.get<std::string>();
        }
        [[fallthrough]];
      default:
        fail(path, "unsupported constant type '" + type_text(*type) + "'");
    }
  }

  static ExprPtr parse_expr(const Json& j, const std::string& path, int depth) {
    if (depth > kMaxNodeDepth) fail(path, "nesting too deep");
    std::string tag = tag_of(j, path);
    if (tag == "assign") {
      expect_array(j, path, 4);
      TypeRef t = type_at(j[1], path + "[1]");
      ExprPtr lhs = parse_expr(j[2], path + "[2]", depth + 1);
      switch (lhs->kind()) {
        case ExprKind::Var:
        case ExprKind::Field:
        case ExprKind::Invoke:
          break;
        default:
          fail(path + "[2]", "assign lhs must be a var, field, or invoke node");
      }
      return make_assign(std::move(t), std::move(lhs), parse_expr(j[3], path + "[3]", depth + 1));
    }
    if (tag == "var") {
      expect_array(j, path, 3);
      return make_var(type_at(j[1], path + "[1]"), name_at(j[2], path + "[2]"));
    }
    if (tag == "field") {
      expect_array(j, path, 4);
      return make_field(type_at(j[1], path + "[1]"), parse_expr(j[2], path + "[2]", depth + 1),
                        name_at(j[3], path + "[3]"));
    }
    if (tag == "val") {
      expect_array(j, path, 3);
      TypeRef t = type_at(j[1], path + "[1]");
      ConstVal v = parse_const(j[2], t, path + "[2]");
      return make_const(std::move(t), std::move(v));
    }
    if (tag == "invoke") {
      expect_array(j, path, 4);
      TypeRef t = type_at(j[1], path + "[1]");
      std::string callee = name_at(j[2], path + "[2]");
      if (!j[3].is_array()) fail(path + "[3]", "expected argument list");
      std::vector<ExprPtr> args;
      args.reserve(j[3].size());
      for (size_t i = 0; i < j[3].size(); ++i)
        args.push_back(parse_expr(j[3][i], path + "[3][" + std::to_string(i) + "]", depth + 1));
      return make_invoke(std::move(t), std::move(callee), std::move(args));
    }
    if (tag == "?:") {
      expect_array(j, path, 5);
      return make_ternary(type_at(j[1], path + "[1]"), parse_expr(j[2], path + "[2]", depth + 1),
                          parse_expr(j[3], path + "[3]", depth + 1),
                          parse_expr(j[4], path + "[4]", depth + 1));
    }
    if (tag == "cast") {
      expect_array(j, path, 3);
      return make_cast(type_at(j[1], path + "[1]"), parse_expr(j[2], path + "[2]", depth + 1));
    }
    fail(path, "unknown node tag '" + tag + "'");
  }

  static std::vector<StmtPtr> parse_block(const Json& j, const std::string& path, int depth) {
    if (!j.is_array()) fail(path, "expected a statement list");
    std::vector<StmtPtr> out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i)
      out.push_back(parse_stmt(j[i], path + "[" + std::to_string(i) + "]", depth + 1));
    return out;
  }

  static StmtPtr parse_stmt(const Json& j, const std::string& path, int depth) {
    if (depth > kMaxNodeDepth) fail(path, "nesting too deep");
    std::string tag = tag_of(j, path);
    if (tag == "if") {
      expect_array(j, path, 5);
      return make_if(parse_expr(j[2], path + "[2]", depth + 1),
                     parse_block(j[3], path + "[3]", depth),
                     parse_block(j[4], path + "[4]", depth), type_at(j[1], path + "[1]"));
    }
    if (tag == "foreach") {
      expect_array(j, path, 5);
      return make_foreach(parse_var(j[2], path + "[2]"), parse_expr(j[3], path + "[3]", depth + 1),
                          parse_block(j[4], path + "[4]", depth), type_at(j[1], path + "[1]"));
    }
    if (tag == "while") {
      expect_array(j, path, 5);
      return make_while(parse_expr(j[2], path + "[2]", depth + 1),
                        parse_block(j[3], path + "[3]", depth),
                        parse_block(j[4], path + "[4]", depth), type_at(j[1], path + "[1]"));
    }
    if (tag == "break") {
      expect_array(j, path, 2);
      return make_break(type_at(j[1], path + "[1]"));
    }
    if (tag == "continue") {
      expect_array(j, path, 2);
      return make_continue(type_at(j[1], path + "[1]"));
    }
    if (tag == "return") {
      expect_array(j, path, 3);
      return make_return(parse_expr(j[2], path + "[2]", depth + 1), type_at(j[1], path + "[1]"));
    }
    if (tag == "noop") {
      expect_array(j, path, 1);
      return make_noop();
    }
    return make_expr_stmt(parse_expr(j, path, depth));
  }

  static FuncDecl parse_func(const Json& j, const std::string& path) {
    expect_array(j, path, 6);
    std::string tag = tag_of(j, path);
    if (tag != "func" && tag != "ctor") fail(path, "unknown node tag '" + tag + "'");
    FuncDecl f;
    f.kind = tag == "ctor" ? FuncKind::Ctor : FuncKind::Func;
    f.return_type = type_at(j[1], path + "[1]");
    f.name = name_at(j[2], path + "[2]");
    if (!j[3].is_array()) fail(path + "[3]", "expected parameter list");
    for (size_t i = 0; i < j[3].size(); ++i)
      f.params.push_back(parse_var(j[3][i], path + "[3][" + std::to_string(i) + "]"));
    if (!j[4].is_array()) fail(path + "[4]", "expected local variable list");
    for (size_t i = 0; i < j[4].size(); ++i)
      f.locals.push_back(parse_var(j[4][i], path + "[4][" + std::to_string(i) + "]"));
    f.body = parse_block(j[5], path + "[5]", 0);
    return f;
  }

  static RecordDecl parse_record(const Json& j, const std::string& path) {
    expect_array(j, path, 3);
    if (tag_of(j, path) != "record") fail(path, "expected a 'record' node");
    RecordDecl r;
    r.name = name_at(j[1], path + "[1]");
    if (!j[2].is_object()) fail(path + "[2]", "expected a field map");
    for (auto it = j[2].begin(); it != j[2].end(); ++it) {
      VarDecl v = parse_var(it.value(), path + "[2]." + it.key());
      if (v.name != it.key())
        fail(path + "[2]." + it.key(), "field name does not match its var node");
      r.fields.push_back(std::move(v));
    }
    return r;
  }
};

}  // namespace

Program parse_program(const Json& doc) {
  if (!doc.is_object()) DocParser::fail("$", "expected a program object");
  Program p;
  if (doc.contains("types")) {
    if (!doc["types"].is_array()) DocParser::fail("types", "expected a record list");
    for (size_t i = 0; i < doc["types"].size(); ++i)
      p.records.push_back(
          DocParser::parse_record(doc["types"][i], "types[" + std::to_string(i) + "]"));
  }
  if (!doc.contains("funcs") || !doc["funcs"].is_array())
    DocParser::fail("funcs", "expected a function list");
  for (size_t i = 0; i < doc["funcs"].size(); ++i)
    p.funcs.push_back(DocParser::parse_func(doc["funcs"][i], "funcs[" + std::to_string(i) + "]"));
  return p;
}

Program parse_program_text(std::string_view json_text) {
  Json doc = Json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ParseError("invalid JSON", "$");
  return parse_program(doc);
}

Program load_program_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file", path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_program_text(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.what(), path.string());
  }
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace {

Json emit_expr(const Expr& e);

Json emit_const(const ConstVal& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CharLit>) {
          std::string s;
          utf8_append(s, x.code);
          return Json(s);
        } else {
          return Json(x);
        }
      },
      v);
}

Json emit_block(const std::vector<StmtPtr>& body);

Json emit_stmt(const Stmt& s) {
  switch (s.kind()) {
    case StmtKind::Expr:
      return emit_expr(*std::get<Stmt::ExprStmt>(s.node).expr);
    case StmtKind::If: {
      const auto& n = std::get<Stmt::If>(s.node);
      return Json::array({"if", type_text(s.type), emit_expr(*n.cond), emit_block(n.then_body),
                          emit_block(n.else_body)});
    }
    case StmtKind::Foreach: {
      const auto& n = std::get<Stmt::Foreach>(s.node);
      return Json::array({"foreach", type_text(s.type),
                          Json::array({"var", type_text(n.var.type), n.var.name}),
                          emit_expr(*n.iterable), emit_block(n.body)});
    }
    case StmtKind::While: {
      const auto& n = std::get<Stmt::While>(s.node);
      return Json::array({"while", type_text(s.type), emit_expr(*n.cond), emit_block(n.body),
                          emit_block(n.increment)});
    }
    case StmtKind::Break:
      return Json::array({"break", type_text(s.type)});
    case StmtKind::Continue:
      return Json::array({"continue", type_text(s.type)});
    case StmtKind::Return:
      return Json::array(
          {"return", type_text(s.type), emit_expr(*std::get<Stmt::Return>(s.node).expr)});
    case StmtKind::Noop:
      return Json::array({"noop"});
  }
  return {};
}

Json emit_block(const std::vector<StmtPtr>& body) {
  Json out = Json::array();
  for (const auto& s : body) out.push_back(emit_stmt(*s));
  return out;
}

Json emit_expr(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Assign: {
      const auto& n = std::get<Expr::Assign>(e.node);
      return Json::array({"assign", type_text(e.type), emit_expr(*n.lhs), emit_expr(*n.rhs)});
    }
    case ExprKind::Var:
      return Json::array({"var", type_text(e.type), std::get<Expr::VarRef>(e.node).name});
    case ExprKind::Field: {
      const auto& n = std::get<Expr::FieldRef>(e.node);
      return Json::array({"field", type_text(e.type), emit_expr(*n.object), n.field});
    }
    case ExprKind::Constant:
      return Json::array(
          {"val", type_text(e.type), emit_const(std::get<Expr::Constant>(e.node).value)});
    case ExprKind::Invoke: {
      const auto& n = std::get<Expr::Invoke>(e.node);
      Json args = Json::array();
      for (const auto& a : n.args) args.push_back(emit_expr(*a));
      return Json::array({"invoke", type_text(e.type), n.callee, std::move(args)});
    }
    case ExprKind::Ternary: {
      const auto& n = std::get<Expr::Ternary>(e.node);
      return Json::array({"?:", type_text(e.type), emit_expr(*n.cond), emit_expr(*n.if_true),
                          emit_expr(*n.if_false)});
    }
    case ExprKind::Cast:
      return Json::array(
          {"cast", type_text(e.type), emit_expr(*std::get<Expr::Cast>(e.node).operand)});
  }
  return {};
}

}  // namespace

Json emit_program(const Program& p) {
  Json types = Json::array();
  for (const auto& r : p.records) {
    Json fields = Json::object();
    for (const auto& f : r.fields)
      fields[f.name] = Json::array({"var", type_text(f.type), f.name});
    types.push_back(Json::array({"record", r.name, std::move(fields)}));
  }
  Json funcs = Json::array();
  for (const auto& f : p.funcs) {
    Json params = Json::array();
    for (const auto& v : f.params) params.push_back(Json::array({"var", type_text(v.type), v.name}));
    Json locals = Json::array();
    for (const auto& v : f.locals) locals.push_back(Json::array({"var", type_text(v.type), v.name}));
    funcs.push_back(Json::array({f.kind == FuncKind::Ctor ? "ctor" : "func",
                                 type_text(f.return_type), f.name, std::move(params),
                                 std::move(locals), emit_block(f.body)}));
  }
  Json doc = Json::object();
  doc["types"] = std::move(types);
  doc["funcs"] = std::move(funcs);
  return doc;
}

void save_program_file(const Program& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing", path.string());
  out << emit_program(p).dump(1) << "\n";
}

// ---------------------------------------------------------------------------
// Pretty printer
// ---------------------------------------------------------------------------

namespace {

bool is_binary_op(const std::string& name, size_t arity) {
  static const char* ops[] = {"+",  "-",  "*", "/", "%",  "==", "!=", "<",
                              "<=", ">",  ">=", "&", "|",  "<<", ">>"};
  if (arity != 2) return false;
  for (const char* op : ops)
    if (name == op) return true;
  return false;
}

bool is_unary_op(const std::string& name, size_t arity) {
  return arity == 1 && (name == "!" || name == "-");
}

std::string escape_string(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_const(const ConstVal& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "True" : "False";
        } else if constexpr (std::is_same_v<T, int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return Json(x).dump();
        } else if constexpr (std::is_same_v<T, CharLit>) {
          std::string s;
          utf8_append(s, x.code);
          return "'" + s + "'";
        } else {
          return "\"" + escape_string(x) + "\"";
        }
      },
      v);
}

// as_stmt drops the parentheses around a statement-position assign.
std::string render_expr(const Expr& e, bool as_stmt = false) {
  switch (e.kind()) {
    case ExprKind::Assign: {
      const auto& n = std::get<Expr::Assign>(e.node);
      std::string body = render_expr(*n.lhs) + " = " + render_expr(*n.rhs);
      return as_stmt ? body : "(" + body + ")";
    }
    case ExprKind::Var:
      return std::get<Expr::VarRef>(e.node).name;
    case ExprKind::Field: {
      const auto& n = std::get<Expr::FieldRef>(e.node);
      return render_expr(*n.object) + "." + n.field;
    }
    case ExprKind::Constant:
      return render_const(std::get<Expr::Constant>(e.node).value);
    case ExprKind::Invoke: {
      const auto& n = std::get<Expr::Invoke>(e.node);
      if (is_binary_op(n.callee, n.args.size()))
        return "(" + render_expr(*n.args[0]) + " " + n.callee + " " + render_expr(*n.args[1]) + ")";
      if (is_unary_op(n.callee, n.args.size()))
        return "(" + n.callee + render_expr(*n.args[0]) + ")";
      if (n.callee == "array_index" && n.args.size() == 2)
        return render_expr(*n.args[0]) + "[" + render_expr(*n.args[1]) + "]";
      if (n.callee == "new" && n.args.empty()) return "new " + type_text(e.type) + "()";
      std::string out = n.callee + "(";
      for (size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        out += render_expr(*n.args[i]);
      }
      return out + ")";
    }
    case ExprKind::Ternary: {
      const auto& n = std::get<Expr::Ternary>(e.node);
      return render_expr(*n.cond) + "?" + render_expr(*n.if_true) + ":" + render_expr(*n.if_false);
    }
    case ExprKind::Cast:
      return "((" + type_text(e.type) + ")" + render_expr(*std::get<Expr::Cast>(e.node).operand) +
             ")";
  }
  return {};
}

// Single-line statement rendering used inside for-increment headers.
std::string render_inline(const Stmt& s) {
  switch (s.kind()) {
    case StmtKind::Expr: return render_expr(*std::get<Stmt::ExprStmt>(s.node).expr, true);
    case StmtKind::Break: return "break";
    case StmtKind::Continue: return "continue";
    case StmtKind::Noop: return "pass";
    case StmtKind::Return: return "return " + render_expr(*std::get<Stmt::Return>(s.node).expr);
    default: return "{...}";
  }
}

struct Printer {
  std::vector<std::string> lines;

  void emit(int depth, std::string text) {
    lines.push_back(std::string(static_cast<size_t>(depth) * 2, ' ') + std::move(text));
  }

  void block(const std::vector<StmtPtr>& body, int depth) {
    for (const auto& s : body) stmt(*s, depth);
  }

  void stmt(const Stmt& s, int depth) {
    switch (s.kind()) {
      case StmtKind::Expr:
        emit(depth, render_expr(*std::get<Stmt::ExprStmt>(s.node).expr, true));
        break;
      case StmtKind::If: {
        const auto& n = std::get<Stmt::If>(s.node);
        emit(depth, "if " + render_expr(*n.cond));
        block(n.then_body, depth + 1);
        if (!n.else_body.empty()) {
          emit(depth, "else");
          block(n.else_body, depth + 1);
        }
        break;
      }
      case StmtKind::Foreach: {
        const auto& n = std::get<Stmt::Foreach>(s.node);
        emit(depth, "foreach (" + type_text(n.var.type) + " " + n.var.name + " : " +
                        render_expr(*n.iterable) + ")");
        block(n.body, depth + 1);
        break;
      }
      case StmtKind::While: {
        const auto& n = std::get<Stmt::While>(s.node);
        std::string incr;
        for (size_t i = 0; i < n.increment.size(); ++i) {
          if (i) incr += ", ";
          incr += render_inline(*n.increment[i]);
        }
        emit(depth, "for(; " + render_expr(*n.cond) + "; " + incr + ")");
        block(n.body, depth + 1);
        break;
      }
      case StmtKind::Break: emit(depth, "break"); break;
      case StmtKind::Continue: emit(depth, "continue"); break;
      case StmtKind::Return:
        emit(depth, "return " + render_expr(*std::get<Stmt::Return>(s.node).expr));
        break;
      case StmtKind::Noop: emit(depth, "pass"); break;
    }
  }

  void func(const FuncDecl& f) {
    std::string sig = type_text(f.return_type) + " " + f.name + "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i) sig += ", ";
      sig += type_text(f.params[i].type) + " " + f.params[i].name;
    }
    sig += ")";
    emit(0, std::move(sig));
    std::string vars = "vars:";
    for (size_t i = 0; i < f.locals.size(); ++i) {
      vars += i ? ", " : " ";
      vars += type_text(f.locals[i].type) + " " + f.locals[i].name;
    }
    emit(1, std::move(vars));
    block(f.body, 1);
  }
};

}  // namespace

std::string pretty_print(const Program& p) {
  Printer pr;
  for (const auto& r : p.records) {
    std::string line = "record " + r.name + ":";
    for (size_t i = 0; i < r.fields.size(); ++i) {
      line += i ? ", " : " ";
      line += type_text(r.fields[i].type) + " " + r.fields[i].name;
    }
    pr.emit(0, std::move(line));
  }
  for (const auto& f : p.funcs) pr.func(f);
  std::string out;
  for (const auto& line : pr.lines) {
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace uast

// count_lines is declared in core.hpp but defined here because the canonical
// line count is whatever the pretty printer emits.
namespace uast {

int count_lines(const Program& p) {
  int n = 0;
  for (char c : pretty_print(p))
    if (c == '\n') ++n;
  return n;
}

}  // namespace uast
