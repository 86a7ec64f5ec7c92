#include "uast/stmtgen.hpp"

#include <random>
#include <sstream>

namespace uast {

std::string GenResult::text() const {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

namespace {

int count_stmt_positions(const std::vector<StmtPtr>& body);

int count_stmt_positions(const Stmt& s) {
  int n = 1;
  switch (s.kind()) {
    case StmtKind::If: {
      const auto& i = std::get<Stmt::If>(s.node);
      n += count_stmt_positions(i.then_body) + count_stmt_positions(i.else_body);
      break;
    }
    case StmtKind::Foreach:
      n += count_stmt_positions(std::get<Stmt::Foreach>(s.node).body);
      break;
    case StmtKind::While: {
      const auto& w = std::get<Stmt::While>(s.node);
      n += count_stmt_positions(w.body) + count_stmt_positions(w.increment);
      break;
    }
    default:
      break;
  }
  return n;
}

int count_stmt_positions(const std::vector<StmtPtr>& body) {
  int n = 0;
  for (const auto& s : body) n += count_stmt_positions(*s);
  return n;
}

const Expr* as_invoke(const Expr& e, const char* callee, size_t arity) {
  if (e.kind() != ExprKind::Invoke) return nullptr;
  const auto& n = std::get<Expr::Invoke>(e.node);
  if (n.callee != callee || n.args.size() != arity) return nullptr;
  return &e;
}

bool is_zero_const(const Expr& e) {
  if (e.kind() != ExprKind::Constant) return false;
  const auto& v = std::get<Expr::Constant>(e.node).value;
  return std::holds_alternative<int64_t>(v) && std::get<int64_t>(v) == 0;
}

struct Generator {
  std::mt19937_64 rng;
  Verbosity verbosity;
  GenResult out;

  explicit Generator(const GenOptions& options)
      : rng(options.seed), verbosity(options.verbosity) {}

  size_t pick(size_t n) { return static_cast<size_t>(rng() % n); }
  bool chance(int percent) { return static_cast<int>(rng() % 100) < percent; }

  void words(std::string_view phrase) {
    size_t start = 0;
    while (start < phrase.size()) {
      size_t sp = phrase.find(' ', start);
      if (sp == std::string_view::npos) sp = phrase.size();
      if (sp > start) out.tokens.emplace_back(phrase.substr(start, sp - start));
      start = sp + 1;
    }
  }
  void word(std::string token) { out.tokens.push_back(std::move(token)); }

  // Sometimes prefixes a clause with the imperative lead-in.
  void lead_in() {
    if (verbosity == Verbosity::Terse) return;
    if (verbosity == Verbosity::Verbose || chance(55)) words("you have to");
  }

  std::string type_phrase(const Type& t) {
    switch (t.kind()) {
      case TypeKind::Int:
      case TypeKind::Real:
        return pick(2) ? "an integer" : "a number";
      case TypeKind::Bool: return "a boolean";
      case TypeKind::Char: return "a character";
      case TypeKind::Array:
        if (t.elem()->kind() == TypeKind::Char) return "a string";
        if (t.elem()->is_numeric()) return "an array of numbers";
        return "an array";
      case TypeKind::Set: return "a set";
      case TypeKind::Map: return "a map";
      case TypeKind::Record: return "a " + t.record_name() + " record";
      case TypeKind::Void: return "nothing";
    }
    return "a value";
  }

  void constant(const ConstVal& v) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, bool>) {
            word(x ? "true" : "false");
          } else if constexpr (std::is_same_v<T, int64_t>) {
            if (x == 0 && chance(50)) word("zero");
            else if (x == 1 && chance(25)) word("one");
            else word(std::to_string(x));
          } else if constexpr (std::is_same_v<T, double>) {
            word(real_text(x));
          } else if constexpr (std::is_same_v<T, CharLit>) {
            std::string s = "'";
            if (x.code < 128) s += static_cast<char>(x.code);
            s += "'";
            word(std::move(s));
          } else {
            word("\"" + x + "\"");
          }
        },
        v);
  }

  static std::string real_text(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  }

  // Renders a single token when the expression is a bare variable or small
  // constant; empty otherwise.
  std::string atom(const Expr& e) {
    if (e.kind() == ExprKind::Var) return std::get<Expr::VarRef>(e.node).name;
    if (e.kind() == ExprKind::Constant) {
      const auto& v = std::get<Expr::Constant>(e.node).value;
      if (std::holds_alternative<int64_t>(v)) return std::to_string(std::get<int64_t>(v));
    }
    return {};
  }

  void flatten_bool_chain(const Expr& e, const char* op, std::vector<const Expr*>& parts) {
    if (const Expr* inv = as_invoke(e, op, 2)) {
      const auto& n = std::get<Expr::Invoke>(inv->node);
      if (same_type(e.type, Type::bool_type())) {
        flatten_bool_chain(*n.args[0], op, parts);
        flatten_bool_chain(*n.args[1], op, parts);
        return;
      }
    }
    parts.push_back(&e);
  }

  void comparison(const char* verb_a, const char* verb_b, const Expr& a, const Expr& b) {
    expr(a);
    words(pick(2) ? verb_a : verb_b);
    expr(b);
  }

  void expr(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Var:
        word(std::get<Expr::VarRef>(e.node).name);
        return;
      case ExprKind::Constant:
        constant(std::get<Expr::Constant>(e.node).value);
        return;
      case ExprKind::Field: {
        const auto& n = std::get<Expr::FieldRef>(e.node);
        words("the " + n.field + " of");
        expr(*n.object);
        return;
      }
      case ExprKind::Assign: {
        const auto& n = std::get<Expr::Assign>(e.node);
        expr(*n.lhs);
        words("set to");
        expr(*n.rhs);
        return;
      }
      case ExprKind::Ternary: {
        const auto& n = std::get<Expr::Ternary>(e.node);
        expr(*n.if_true);
        word("if");
        expr(*n.cond);
        words(", otherwise");
        expr(*n.if_false);
        return;
      }
      case ExprKind::Cast: {
        const auto& n = std::get<Expr::Cast>(e.node);
        expr(*n.operand);
        if (e.type->is(TypeKind::Int)) words("rounded down to an integer");
        else if (e.type->is(TypeKind::Real)) words("as a real number");
        else if (e.type->is(TypeKind::Char)) words("as a character");
        return;
      }
      case ExprKind::Invoke:
        break;
    }

    const auto& n = std::get<Expr::Invoke>(e.node);
    const auto& args = n.args;

    // (a % b) == 0 reads as divisibility.
    if (n.callee == "==" && args.size() == 2 && is_zero_const(*args[1])) {
      if (const Expr* inner = as_invoke(*args[0], "%", 2)) {
        const auto& m = std::get<Expr::Invoke>(inner->node);
        expr(*m.args[0]);
        words(pick(2) ? "is divisible by" : "is a multiple of");
        expr(*m.args[1]);
        return;
      }
    }
    if (n.callee == "min" && args.size() == 2) {
      words(pick(2) ? "the less of" : "the minimum of");
      expr(*args[0]);
      word("and");
      expr(*args[1]);
      return;
    }
    if (n.callee == "max" && args.size() == 2) {
      words(pick(2) ? "the greater of" : "the maximum of");
      expr(*args[0]);
      word("and");
      expr(*args[1]);
      return;
    }
    if (n.callee == "len" && args.size() == 1) {
      words(pick(2) ? "the length of" : "the number of elements in");
      expr(*args[0]);
      return;
    }
    if (n.callee == "pow" && args.size() == 2) {
      expr(*args[0]);
      words("to the power of");
      expr(*args[1]);
      return;
    }
    if (n.callee == "abs" && args.size() == 1) {
      words("the absolute value of");
      expr(*args[0]);
      return;
    }
    if (n.callee == "array_index" && args.size() == 2) {
      std::string base = atom(*args[0]);
      std::string idx = atom(*args[1]);
      if (!base.empty() && !idx.empty()) {
        word(base + "[" + idx + "]");
        return;
      }
      words("the element of");
      expr(*args[0]);
      words("at position");
      expr(*args[1]);
      return;
    }
    if (n.callee == "array_push" && args.size() == 2) {
      word("append");
      expr(*args[1]);
      word("to");
      expr(*args[0]);
      return;
    }
    if (n.callee == "array_pop" && args.size() == 1) {
      words("the last element removed from");
      expr(*args[0]);
      return;
    }
    if (n.callee == "sort" && args.size() == 1) {
      expr(*args[0]);
      words("sorted in ascending order");
      return;
    }
    if (n.callee == "string_find" && args.size() == 2) {
      words("the position of");
      expr(*args[1]);
      word("in");
      expr(*args[0]);
      return;
    }
    if (n.callee == "concat" && args.size() == 2) {
      expr(*args[0]);
      words("followed by");
      expr(*args[1]);
      return;
    }
    if (n.callee == "map_keys" && args.size() == 1) {
      words("the keys of");
      expr(*args[0]);
      return;
    }
    if (n.callee == "map_get" && args.size() == 2) {
      words("the value stored in");
      expr(*args[0]);
      words("under the key");
      expr(*args[1]);
      return;
    }
    if (n.callee == "map_put" && args.size() == 3) {
      word("store");
      expr(*args[2]);
      word("in");
      expr(*args[0]);
      words("under the key");
      expr(*args[1]);
      return;
    }
    if (n.callee == "set_add" && args.size() == 2) {
      word("add");
      expr(*args[1]);
      word("to");
      expr(*args[0]);
      return;
    }
    if (n.callee == "set_contains" && args.size() == 2) {
      expr(*args[0]);
      word("contains");
      expr(*args[1]);
      return;
    }
    if (n.callee == "new" && args.empty()) {
      switch (e.type->kind()) {
        case TypeKind::Array: words("an empty array"); return;
        case TypeKind::Set: words("an empty set"); return;
        case TypeKind::Map: words("an empty map"); return;
        default: words("a new " + e.type->record_name() + " record"); return;
      }
    }
    if (n.callee == ">=" && args.size() == 2) {
      comparison("is greater than or equal to", "is not less than", *args[0], *args[1]);
      return;
    }
    if (n.callee == "<=" && args.size() == 2) {
      comparison("is less than or equal to", "is not greater than", *args[0], *args[1]);
      return;
    }
    if (n.callee == "<" && args.size() == 2) {
      comparison("is less than", "is less than", *args[0], *args[1]);
      return;
    }
    if (n.callee == ">" && args.size() == 2) {
      comparison("is greater than", "is greater than", *args[0], *args[1]);
      return;
    }
    if (n.callee == "==" && args.size() == 2) {
      comparison("equals", "is equal to", *args[0], *args[1]);
      return;
    }
    if (n.callee == "!=" && args.size() == 2) {
      comparison("is not equal to", "differs from", *args[0], *args[1]);
      return;
    }
    if ((n.callee == "&" || n.callee == "|") && args.size() == 2 &&
        same_type(e.type, Type::bool_type())) {
      std::vector<const Expr*> parts;
      flatten_bool_chain(e, n.callee.c_str(), parts);
      for (size_t i = 0; i < parts.size(); ++i) {
        if (i + 1 == parts.size()) word(n.callee == "&" ? "and" : "or");
        else if (i) word(",");
        expr(*parts[i]);
      }
      return;
    }
    if (n.callee == "!" && args.size() == 1) {
      words("it is not true that");
      expr(*args[0]);
      return;
    }
    if ((n.callee == "<<" || n.callee == ">>") && args.size() == 2) {
      expr(*args[0]);
      words(n.callee == "<<" ? "shifted left by" : "shifted right by");
      expr(*args[1]);
      return;
    }
    if ((n.callee == "+" || n.callee == "-" || n.callee == "*" || n.callee == "/" ||
         n.callee == "%" || n.callee == "&" || n.callee == "|") &&
        args.size() == 2) {
      expr(*args[0]);
      word(n.callee);
      expr(*args[1]);
      return;
    }
    if (n.callee == "-" && args.size() == 1) {
      word("-");
      expr(*args[0]);
      return;
    }

    // Fallback: literal call rendering, flagged in the metadata.
    out.fallbacks.push_back(n.callee);
    word(n.callee);
    word("(");
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) word(",");
      expr(*args[i]);
    }
    word(")");
  }

  void assign_clause(const Expr::Assign& a) {
    // x = x + e / x = x - e read as add/subtract.
    for (const char* op : {"+", "-"}) {
      const Expr* inv = as_invoke(*a.rhs, op, 2);
      if (!inv) continue;
      const auto& m = std::get<Expr::Invoke>(inv->node);
      if (!structural_eq(*a.lhs, *m.args[0])) continue;
      bool plus = op[0] == '+';
      switch (pick(3)) {
        case 0:
          words(plus ? "add" : "subtract");
          expr(*m.args[1]);
          words(plus ? "to" : "from");
          expr(*a.lhs);
          return;
        case 1:
          words(plus ? "increase" : "decrease");
          expr(*a.lhs);
          word("by");
          expr(*m.args[1]);
          return;
        default:
          words(plus ? "increment" : "decrement");
          expr(*a.lhs);
          words("by the value");
          expr(*m.args[1]);
          return;
      }
    }
    switch (pick(4)) {
      case 0:
        lead_in();
        word("set");
        expr(*a.lhs);
        word("to");
        expr(*a.rhs);
        return;
      case 1:
        word("store");
        expr(*a.rhs);
        word("in");
        expr(*a.lhs);
        return;
      case 2:
        word("let");
        expr(*a.lhs);
        word("be");
        expr(*a.rhs);
        return;
      default:
        word("initialize");
        expr(*a.lhs);
        word("to");
        expr(*a.rhs);
        return;
    }
  }

  void stmt_clause(const Stmt& s) {
    ++out.statement_nodes_rendered;
    switch (s.kind()) {
      case StmtKind::Expr: {
        const Expr& e = *std::get<Stmt::ExprStmt>(s.node).expr;
        if (e.kind() == ExprKind::Assign) assign_clause(std::get<Expr::Assign>(e.node));
        else expr(e);
        return;
      }
      case StmtKind::If: {
        const auto& n = std::get<Stmt::If>(s.node);
        word("if");
        expr(*n.cond);
        if (chance(40)) word("then");
        else word(",");
        clauses(n.then_body, ",");
        if (!n.else_body.empty()) {
          words(pick(2) ? ". otherwise ," : ", otherwise");
          clauses(n.else_body, ",");
        }
        return;
      }
      case StmtKind::Foreach: {
        const auto& n = std::get<Stmt::Foreach>(s.node);
        words(pick(2) ? "for each" : "for every");
        word(n.var.name);
        word("in");
        expr(*n.iterable);
        word(",");
        clauses(n.body, ",");
        return;
      }
      case StmtKind::While: {
        const auto& n = std::get<Stmt::While>(s.node);
        word("while");
        expr(*n.cond);
        if (verbosity != Verbosity::Terse && chance(50)) {
          words(", perform the following operations .");
        } else {
          word(",");
        }
        clauses(n.body, ".");
        if (!n.increment.empty()) {
          word(".");
          clauses(n.increment, ".");
        }
        return;
      }
      case StmtKind::Break:
        lead_in();
        words("break from the enclosing loop");
        return;
      case StmtKind::Continue:
        words(pick(2) ? "skip to the next iteration of the loop"
                      : "continue with the next iteration");
        return;
      case StmtKind::Return: {
        lead_in();
        word("return");
        expr(*std::get<Stmt::Return>(s.node).expr);
        return;
      }
      case StmtKind::Noop:
        words(pick(2) ? "do nothing" : "nothing happens");
        return;
    }
  }

  void clauses(const std::vector<StmtPtr>& body, const char* sep) {
    for (size_t i = 0; i < body.size(); ++i) {
      if (i) word(sep);
      stmt_clause(*body[i]);
    }
  }

  void intro(const FuncDecl& main) {
    if (main.params.empty()) return;
    if (main.params.size() > 1 && chance(50)) {
      words("you are given");
      bool all_ints = true;
      for (const auto& p : main.params)
        if (!p.type->is_numeric()) all_ints = false;
      if (all_ints) word("integers");
      else word("values");
      for (size_t i = 0; i < main.params.size(); ++i) {
        if (i + 1 == main.params.size() && i) word("and");
        else if (i) word(",");
        word(main.params[i].name);
      }
      word(".");
      return;
    }
    for (const auto& p : main.params) {
      words(pick(2) ? "you are given" : "given");
      words(type_phrase(*p.type));
      word(p.name);
      if (p.type->is(TypeKind::Array) && chance(50)) words("( indexing is 0-based )");
      word(".");
    }
  }

  void run(const Program& p) {
    out.statement_nodes_total = 0;
    for (const auto& f : p.funcs) out.statement_nodes_total += count_stmt_positions(f.body);

    const FuncDecl* main = p.find_func(kMainName);
    if (main) intro(*main);
    for (const auto& f : p.funcs) {
      if (&f != main) {
        words("there is a helper function");
        word(f.name);
        word(".");
        words("in it ,");
      }
      clauses(f.body, ".");
      if (!f.body.empty()) word(".");
    }
  }
};

}  // namespace

GenResult generate_statement(const Program& p, const GenOptions& options) {
  Generator gen(options);
  gen.run(p);
  return std::move(gen.out);
}

std::vector<GenResult> generate_batch(const Program& p, int n, uint64_t base_seed,
                                      Verbosity verbosity) {
  std::vector<GenResult> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out.push_back(generate_statement(p, {base_seed + static_cast<uint64_t>(i), verbosity}));
  return out;
}

double mean_token_length(const std::vector<GenResult>& batch) {
  if (batch.empty()) return 0;
  double total = 0;
  for (const auto& r : batch) total += static_cast<double>(r.tokens.size());
  return total / static_cast<double>(batch.size());
}

}  // namespace uast
