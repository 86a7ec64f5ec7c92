#include "uast/exec.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "uast/unicode.hpp"

namespace uast {

std::string_view run_error_name(RunErrorKind k) {
  switch (k) {
    case RunErrorKind::DivByZero: return "div-by-zero";
    case RunErrorKind::IndexOutOfBounds: return "index-out-of-bounds";
    case RunErrorKind::MissingKey: return "missing-key";
    case RunErrorKind::StepLimit: return "step-limit";
    case RunErrorKind::HeapLimit: return "heap-limit";
    case RunErrorKind::TypeConfusion: return "type-confusion";
    case RunErrorKind::NoReturn: return "no-return";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Integer arithmetic
// ---------------------------------------------------------------------------

namespace {

int64_t wrap(uint64_t v) { return static_cast<int64_t>(v); }

}  // namespace

int64_t int_arith(std::string_view op, int64_t a, int64_t b) {
  uint64_t ua = static_cast<uint64_t>(a);
  uint64_t ub = static_cast<uint64_t>(b);
  if (op == "+") return wrap(ua + ub);
  if (op == "-") return wrap(ua - ub);
  if (op == "*") return wrap(ua * ub);
  if (op == "/") {
    if (b == 0) throw ExecError(RunErrorKind::DivByZero, "integer division by zero");
    if (a == INT64_MIN && b == -1) return INT64_MIN;  // wraps
    return a / b;
  }
  if (op == "%") {
    if (b == 0) throw ExecError(RunErrorKind::DivByZero, "integer remainder by zero");
    if (b == -1) return 0;
    return a % b;
  }
  if (op == "<<") return wrap(ua << (ub & 63));
  if (op == ">>") return a >> (b & 63);
  if (op == "&") return a & b;
  if (op == "|") return a | b;
  throw ExecError(RunErrorKind::TypeConfusion, "unknown integer operator '" + std::string(op) + "'");
}

// ---------------------------------------------------------------------------
// Execution context and value helpers
// ---------------------------------------------------------------------------

namespace {

struct ExecContext {
  ExecLimits limits;
  RecordTable records;
  int64_t steps = 0;
  int64_t cells = 0;

  void step() {
    if (++steps > limits.max_steps)
      throw ExecError(RunErrorKind::StepLimit,
                      "exceeded " + std::to_string(limits.max_steps) + " steps");
  }
  void add_cells(int64_t n) {
    cells += n;
    if (cells > limits.max_heap_cells)
      throw ExecError(RunErrorKind::HeapLimit,
                      "exceeded " + std::to_string(limits.max_heap_cells) + " heap cells");
  }
};

[[noreturn]] void confused(const std::string& detail) {
  throw ExecError(RunErrorKind::TypeConfusion, detail);
}

int64_t want_int(const Value& v, const char* what) {
  if (v.is_int()) return v.as_int();
  if (v.is_char()) return static_cast<int64_t>(v.as_char().code);
  confused(std::string(what) + " must be an int");
}

bool want_bool(const Value& v, const char* what) {
  if (!v.is_bool()) confused(std::string(what) + " must be a bool");
  return v.as_bool();
}

const ArrayRef& want_array(const Value& v, const char* what) {
  if (!v.is_array()) confused(std::string(what) + " must be an array");
  return v.as_array();
}

bool both_intlike(const Value& a, const Value& b) {
  return (a.is_int() || a.is_char()) && (b.is_int() || b.is_char());
}

double real_of(const Value& v, const char* what) {
  if (v.is_real()) return v.as_real();
  if (v.is_int()) return static_cast<double>(v.as_int());
  if (v.is_char()) return static_cast<double>(v.as_char().code);
  confused(std::string(what) + " must be numeric");
}

int64_t real_to_int(double x) {
  if (std::isnan(x)) return 0;
  if (x >= 9.2233720368547758e18) return INT64_MAX;
  if (x <= -9.2233720368547758e18) return INT64_MIN;
  return static_cast<int64_t>(x);  // truncates toward zero
}

// Widening conversions permitted when storing into a typed slot.
Value coerce_store(const Type& slot, Value v) {
  switch (slot.kind()) {
    case TypeKind::Real:
      if (v.is_int()) return Value(static_cast<double>(v.as_int()));
      if (v.is_char()) return Value(static_cast<double>(v.as_char().code));
      break;
    case TypeKind::Int:
      if (v.is_char()) return Value(static_cast<int64_t>(v.as_char().code));
      break;
    default:
      break;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

Value numeric_binop(std::string_view op, const Value& a, const Value& b) {
  if (both_intlike(a, b))
    return Value(int_arith(op, want_int(a, "operand"), want_int(b, "operand")));
  double x = real_of(a, "operand");
  double y = real_of(b, "operand");
  if (op == "+") return Value(x + y);
  if (op == "-") return Value(x - y);
  if (op == "*") return Value(x * y);
  if (op == "/") {
    return Value(x / y);  // IEEE semantics for reals
  }
  if (op == "%") return Value(std::fmod(x, y));
  confused("operator '" + std::string(op) + "' does not apply to reals");
}

int compare_numeric(const Value& a, const Value& b) {
  if (both_intlike(a, b)) {
    int64_t x = want_int(a, "operand");
    int64_t y = want_int(b, "operand");
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  double x = real_of(a, "operand");
  double y = real_of(b, "operand");
  return x < y ? -1 : (x > y ? 1 : 0);
}

Value builtin_call(ExecContext& ctx, std::string_view name, std::vector<Value>& args,
                   const TypeRef& result_hint) {
  auto arity = [&](size_t n, const char* what) {
    if (args.size() != n)
      throw ExecError(RunErrorKind::TypeConfusion,
                      std::string(what) + " expects " + std::to_string(n) + " arguments, got " +
                          std::to_string(args.size()));
  };

  if (name == "+" || name == "-" || name == "*" || name == "/" || name == "%") {
    if (name == "-" && args.size() == 1) {
      if (args[0].is_real()) return Value(-args[0].as_real());
      return Value(int_arith("-", 0, want_int(args[0], "operand")));
    }
    arity(2, "binary operator");
    return numeric_binop(name, args[0], args[1]);
  }
  if (name == "<" || name == "<=" || name == ">" || name == ">=") {
    arity(2, "comparison");
    int c = compare_numeric(args[0], args[1]);
    if (name == "<") return Value(c < 0);
    if (name == "<=") return Value(c <= 0);
    if (name == ">") return Value(c > 0);
    return Value(c >= 0);
  }
  if (name == "==" || name == "!=") {
    arity(2, "equality");
    bool eq;
    if (args[0].is_numeric() && args[1].is_numeric() && args[0].kind() != args[1].kind())
      eq = args[0].numeric() == args[1].numeric();
    else
      eq = deep_equal(args[0], args[1]);
    return Value(name == "==" ? eq : !eq);
  }
  if (name == "&" || name == "|") {
    arity(2, "binary operator");
    if (args[0].is_bool() && args[1].is_bool()) {
      bool x = args[0].as_bool(), y = args[1].as_bool();
      return Value(name == "&" ? (x && y) : (x || y));
    }
    return Value(int_arith(name, want_int(args[0], "operand"), want_int(args[1], "operand")));
  }
  if (name == "!") {
    arity(1, "'!'");
    return Value(!want_bool(args[0], "operand"));
  }
  if (name == "<<" || name == ">>") {
    arity(2, "shift");
    return Value(int_arith(name, want_int(args[0], "operand"), want_int(args[1], "operand")));
  }
  if (name == "len") {
    arity(1, "len");
    switch (args[0].kind()) {
      case Value::Kind::Array: return Value(static_cast<int64_t>(args[0].as_array()->size()));
      case Value::Kind::Set: return Value(static_cast<int64_t>(args[0].as_set()->size()));
      case Value::Kind::Map: return Value(static_cast<int64_t>(args[0].as_map()->size()));
      default: confused("len needs a container");
    }
  }
  if (name == "min" || name == "max") {
    arity(2, name == "min" ? "min" : "max");
    if (!args[0].is_numeric() && !args[0].is_char()) confused("min/max needs numeric arguments");
    if (!args[1].is_numeric() && !args[1].is_char()) confused("min/max needs numeric arguments");
    int c = compare_numeric(args[0], args[1]);
    const Value& picked = (name == "min") ? (c <= 0 ? args[0] : args[1])
                                          : (c >= 0 ? args[0] : args[1]);
    if (both_intlike(args[0], args[1])) return Value(want_int(picked, "operand"));
    return Value(real_of(picked, "operand"));
  }
  if (name == "pow") {
    arity(2, "pow");
    if (args[0].is_real() || args[1].is_real())
      return Value(std::pow(real_of(args[0], "base"), real_of(args[1], "exponent")));
    int64_t base = want_int(args[0], "base");
    int64_t exp = want_int(args[1], "exponent");
    if (exp < 0) confused("pow with negative exponent");
    uint64_t acc = 1, b = static_cast<uint64_t>(base);
    while (exp > 0) {
      if (exp & 1) acc *= b;
      b *= b;
      exp >>= 1;
    }
    return Value(wrap(acc));
  }
  if (name == "abs") {
    arity(1, "abs");
    if (args[0].is_real()) return Value(std::abs(args[0].as_real()));
    int64_t v = want_int(args[0], "operand");
    return Value(v < 0 ? wrap(-static_cast<uint64_t>(v)) : v);
  }
  if (name == "array_push") {
    arity(2, "array_push");
    const auto& arr = want_array(args[0], "array_push target");
    arr->push_back(args[1]);
    ctx.add_cells(1);
    return args[0];
  }
  if (name == "array_index") {
    arity(2, "array_index");
    const auto& arr = want_array(args[0], "array_index target");
    int64_t i = want_int(args[1], "index");
    if (i < 0 || static_cast<size_t>(i) >= arr->size())
      throw ExecError(RunErrorKind::IndexOutOfBounds,
                      "index " + std::to_string(i) + " of array with " +
                          std::to_string(arr->size()) + " elements");
    return (*arr)[static_cast<size_t>(i)];
  }
  if (name == "array_pop") {
    arity(1, "array_pop");
    const auto& arr = want_array(args[0], "array_pop target");
    if (arr->empty())
      throw ExecError(RunErrorKind::IndexOutOfBounds, "array_pop of an empty array");
    Value out = arr->back();
    arr->pop_back();
    ctx.add_cells(-1);
    return out;
  }
  if (name == "sort") {
    arity(1, "sort");
    const auto& arr = want_array(args[0], "sort target");
    std::stable_sort(arr->begin(), arr->end(), ValueLess{});
    return args[0];
  }
  if (name == "map_keys") {
    arity(1, "map_keys");
    if (args[0].kind() != Value::Kind::Map) confused("map_keys needs a map");
    auto out = std::make_shared<ArrayData>();
    for (const auto& [k, v] : *args[0].as_map()) out->push_back(k);
    ctx.add_cells(static_cast<int64_t>(out->size()));
    return Value(std::move(out));
  }
  if (name == "map_get") {
    arity(2, "map_get");
    if (args[0].kind() != Value::Kind::Map) confused("map_get needs a map");
    auto it = args[0].as_map()->find(args[1]);
    if (it == args[0].as_map()->end())
      throw ExecError(RunErrorKind::MissingKey, "map_get of a missing key " + value_text(args[1]));
    return it->second;
  }
  if (name == "map_put") {
    arity(3, "map_put");
    if (args[0].kind() != Value::Kind::Map) confused("map_put needs a map");
    if (args[0].as_map()->insert_or_assign(args[1], args[2]).second) ctx.add_cells(1);
    return args[0];
  }
  if (name == "set_add") {
    arity(2, "set_add");
    if (args[0].kind() != Value::Kind::Set) confused("set_add needs a set");
    if (args[0].as_set()->insert(args[1]).second) ctx.add_cells(1);
    return args[0];
  }
  if (name == "set_contains") {
    arity(2, "set_contains");
    if (args[0].kind() != Value::Kind::Set) confused("set_contains needs a set");
    return Value(args[0].as_set()->count(args[1]) > 0);
  }
  if (name == "string_find") {
    arity(2, "string_find");
    const auto& hay = *want_array(args[0], "string_find haystack");
    const auto& needle = *want_array(args[1], "string_find needle");
    if (needle.empty()) return Value(int64_t{0});
    if (needle.size() <= hay.size()) {
      for (size_t i = 0; i + needle.size() <= hay.size(); ++i) {
        bool hit = true;
        for (size_t k = 0; k < needle.size() && hit; ++k)
          if (!deep_equal(hay[i + k], needle[k])) hit = false;
        if (hit) return Value(static_cast<int64_t>(i));
      }
    }
    return Value(int64_t{-1});
  }
  if (name == "concat") {
    arity(2, "concat");
    const auto& a = *want_array(args[0], "concat operand");
    const auto& b = *want_array(args[1], "concat operand");
    auto out = std::make_shared<ArrayData>();
    out->reserve(a.size() + b.size());
    out->insert(out->end(), a.begin(), a.end());
    out->insert(out->end(), b.begin(), b.end());
    ctx.add_cells(static_cast<int64_t>(out->size()));
    return Value(std::move(out));
  }
  if (name == "new") {
    arity(0, "new");
    if (!result_hint || !result_hint->is_composite())
      confused("new needs a composite result type annotation");
    Value v = default_value(*result_hint, ctx.records);
    if (result_hint->kind() == TypeKind::Record)
      ctx.add_cells(static_cast<int64_t>(v.as_record()->fields.size()));
    return v;
  }
  confused("unknown builtin '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Interpreter
// ---------------------------------------------------------------------------

constexpr int kMaxCallDepth = 1500;

enum class Flow { Normal, Break, Continue, Return };

struct Interp {
  Interp(const Program& p, ExecContext c) : prog(p), ctx(std::move(c)) {}

  const Program& prog;
  ExecContext ctx;
  RecordRef globals;  // null when the program declares no __globals__
  int call_depth = 0;

  struct Frame {
    std::map<std::string, Value> slots;                    // params + locals
    std::vector<std::pair<std::string, Value>> scopes;     // foreach bindings
  };

  Value* resolve(Frame& frame, const std::string& name) {
    for (auto it = frame.scopes.rbegin(); it != frame.scopes.rend(); ++it)
      if (it->first == name) return &it->second;
    if (auto it = frame.slots.find(name); it != frame.slots.end()) return &it->second;
    if (globals)
      if (Value* v = globals->find(name)) return v;
    return nullptr;
  }

  Value call_function(const FuncDecl& fn, std::vector<Value> args) {
    if (++call_depth > kMaxCallDepth) {
      // The closed outcome-kind set has no dedicated stack kind; deep
      // recursion is reported as the resource limit it effectively is.
      throw ExecError(RunErrorKind::StepLimit,
                      "call depth exceeded " + std::to_string(kMaxCallDepth));
    }
    if (args.size() != fn.params.size())
      confused("'" + fn.name + "' takes " + std::to_string(fn.params.size()) + " arguments");
    Frame frame;
    for (size_t i = 0; i < fn.params.size(); ++i) {
      Value v = coerce_store(*fn.params[i].type, std::move(args[i]));
      if (!value_conforms(v, *fn.params[i].type))
        confused("argument '" + fn.params[i].name + "' of '" + fn.name +
                 "' does not conform to " + type_text_of(fn.params[i].type));
      frame.slots.emplace(fn.params[i].name, std::move(v));
    }
    for (const auto& local : fn.locals)
      frame.slots.emplace(local.name, default_value(*local.type, ctx.records));

    Value result;
    Flow flow = exec_block(frame, fn.body, &result);
    --call_depth;
    if (flow == Flow::Return) return coerce_store(*fn.return_type, std::move(result));
    if (flow == Flow::Normal) {
      if (fn.return_type->is(TypeKind::Void)) return Value(int64_t{0});
      throw ExecError(RunErrorKind::NoReturn,
                      "'" + fn.name + "' finished without returning a value");
    }
    confused("break or continue escaped the body of '" + fn.name + "'");
  }

  static std::string type_text_of(const TypeRef& t);

  Flow exec_block(Frame& frame, const std::vector<StmtPtr>& body, Value* result) {
    for (const auto& s : body) {
      Flow f = exec_stmt(frame, *s, result);
      if (f != Flow::Normal) return f;
    }
    return Flow::Normal;
  }

  Flow exec_stmt(Frame& frame, const Stmt& s, Value* result) {
    ctx.step();
    switch (s.kind()) {
      case StmtKind::Expr:
        eval(frame, *std::get<Stmt::ExprStmt>(s.node).expr);
        return Flow::Normal;
      case StmtKind::If: {
        const auto& n = std::get<Stmt::If>(s.node);
        bool c = want_bool(eval(frame, *n.cond), "if condition");
        return exec_block(frame, c ? n.then_body : n.else_body, result);
      }
      case StmtKind::Foreach: {
        const auto& n = std::get<Stmt::Foreach>(s.node);
        Value iterable = eval(frame, *n.iterable);
        std::vector<Value> elems;
        switch (iterable.kind()) {
          case Value::Kind::Array:
            elems = *iterable.as_array();
            break;
          case Value::Kind::Set:
            elems.assign(iterable.as_set()->begin(), iterable.as_set()->end());
            break;
          case Value::Kind::Map:
            for (const auto& [k, v] : *iterable.as_map()) elems.push_back(k);
            break;
          default:
            confused("foreach needs an array, set, or map");
        }
        frame.scopes.emplace_back(n.var.name, Value());
        Flow out = Flow::Normal;
        for (auto& e : elems) {
          frame.scopes.back().second = coerce_store(*n.var.type, std::move(e));
          Flow f = exec_block(frame, n.body, result);
          if (f == Flow::Break) break;
          if (f == Flow::Return) {
            out = f;
            break;
          }
        }
        frame.scopes.pop_back();
        return out;
      }
      case StmtKind::While: {
        const auto& n = std::get<Stmt::While>(s.node);
        for (;;) {
          ctx.step();
          if (!want_bool(eval(frame, *n.cond), "loop condition")) return Flow::Normal;
          Flow f = exec_block(frame, n.body, result);
          if (f == Flow::Break) return Flow::Normal;
          if (f == Flow::Return) return f;
          // Continue falls through to the increment list.
          f = exec_block(frame, n.increment, result);
          if (f == Flow::Break) return Flow::Normal;
          if (f == Flow::Return) return f;
        }
      }
      case StmtKind::Break:
        return Flow::Break;
      case StmtKind::Continue:
        return Flow::Continue;
      case StmtKind::Return:
        *result = eval(frame, *std::get<Stmt::Return>(s.node).expr);
        return Flow::Return;
      case StmtKind::Noop:
        return Flow::Normal;
    }
    return Flow::Normal;
  }

  Value eval(Frame& frame, const Expr& e) {
    ctx.step();
    switch (e.kind()) {
      case ExprKind::Var: {
        const auto& n = std::get<Expr::VarRef>(e.node);
        Value* slot = resolve(frame, n.name);
        if (!slot) confused("variable '" + n.name + "' is not bound");
        return *slot;
      }
      case ExprKind::Constant: {
        const auto& v = std::get<Expr::Constant>(e.node).value;
        return std::visit(
            [&](const auto& x) -> Value {
              using T = std::decay_t<decltype(x)>;
              if constexpr (std::is_same_v<T, bool>) return Value(x);
              else if constexpr (std::is_same_v<T, int64_t>) return Value(x);
              else if constexpr (std::is_same_v<T, double>) return Value(x);
              else if constexpr (std::is_same_v<T, CharLit>) return Value(x);
              else {
                Value s = Value::string(x);
                ctx.add_cells(static_cast<int64_t>(s.as_array()->size()));
                return s;
              }
            },
            v);
      }
      case ExprKind::Assign: {
        const auto& n = std::get<Expr::Assign>(e.node);
        // rhs first, then the target place.
        Value rhs = eval(frame, *n.rhs);
        return store(frame, *n.lhs, std::move(rhs));
      }
      case ExprKind::Field: {
        const auto& n = std::get<Expr::FieldRef>(e.node);
        Value obj = eval(frame, *n.object);
        if (obj.kind() != Value::Kind::Record) confused("field access on a non-record value");
        if (Value* v = obj.as_record()->find(n.field)) return *v;
        confused("record has no field '" + n.field + "'");
      }
      case ExprKind::Invoke: {
        const auto& n = std::get<Expr::Invoke>(e.node);
        std::vector<Value> args;
        args.reserve(n.args.size());
        for (const auto& a : n.args) args.push_back(eval(frame, *a));
        if (const FuncDecl* fn = prog.find_func(n.callee))
          return call_function(*fn, std::move(args));
        return builtin_call(ctx, n.callee, args, e.type);
      }
      case ExprKind::Ternary: {
        const auto& n = std::get<Expr::Ternary>(e.node);
        bool c = want_bool(eval(frame, *n.cond), "ternary condition");
        return eval(frame, c ? *n.if_true : *n.if_false);
      }
      case ExprKind::Cast: {
        Value v = eval(frame, *std::get<Expr::Cast>(e.node).operand);
        return cast_value(std::move(v), *e.type);
      }
    }
    confused("unreachable expression kind");
  }

  static Value cast_value(Value v, const Type& target) {
    switch (target.kind()) {
      case TypeKind::Int:
        if (v.is_int()) return v;
        if (v.is_real()) return Value(real_to_int(v.as_real()));
        if (v.is_char()) return Value(static_cast<int64_t>(v.as_char().code));
        break;
      case TypeKind::Real:
        if (v.is_real()) return v;
        if (v.is_int()) return Value(static_cast<double>(v.as_int()));
        if (v.is_char()) return Value(static_cast<double>(v.as_char().code));
        break;
      case TypeKind::Char:
        if (v.is_char()) return v;
        // Java char semantics: keep the low 16 bits.
        if (v.is_int()) return Value(CharLit{static_cast<uint32_t>(v.as_int() & 0xFFFF)});
        if (v.is_real()) return Value(CharLit{static_cast<uint32_t>(real_to_int(v.as_real()) & 0xFFFF)});
        break;
      default:
        if (value_conforms(v, target)) return v;  // identity casts
        break;
    }
    confused("cast between incompatible runtime types");
  }

  Value store(Frame& frame, const Expr& lhs, Value rhs) {
    switch (lhs.kind()) {
      case ExprKind::Var: {
        const auto& n = std::get<Expr::VarRef>(lhs.node);
        Value* slot = resolve(frame, n.name);
        if (!slot) confused("variable '" + n.name + "' is not bound");
        *slot = coerce_store(*lhs.type, std::move(rhs));
        return *slot;
      }
      case ExprKind::Field: {
        const auto& n = std::get<Expr::FieldRef>(lhs.node);
        Value obj = eval(frame, *n.object);
        if (obj.kind() != Value::Kind::Record) confused("field store on a non-record value");
        Value* slot = obj.as_record()->find(n.field);
        if (!slot) confused("record has no field '" + n.field + "'");
        *slot = coerce_store(*lhs.type, std::move(rhs));
        return *slot;
      }
      case ExprKind::Invoke: {
        const auto& n = std::get<Expr::Invoke>(lhs.node);
        if (n.callee != "array_index" || n.args.size() != 2)
          confused("only array cells can be assigned through an invoke");
        Value arr = eval(frame, *n.args[0]);
        int64_t i = want_int(eval(frame, *n.args[1]), "index");
        const auto& data = want_array(arr, "assignment target");
        if (i < 0 || static_cast<size_t>(i) >= data->size())
          throw ExecError(RunErrorKind::IndexOutOfBounds,
                          "index " + std::to_string(i) + " of array with " +
                              std::to_string(data->size()) + " elements");
        (*data)[static_cast<size_t>(i)] = coerce_store(*lhs.type, std::move(rhs));
        return (*data)[static_cast<size_t>(i)];
      }
      default:
        confused("assign target must be a variable, field, or array cell");
    }
  }
};

std::string Interp::type_text_of(const TypeRef& t) {
  // Avoid a serde dependency for one error message.
  switch (t->kind()) {
    case TypeKind::Bool: return "bool";
    case TypeKind::Char: return "char";
    case TypeKind::Int: return "int";
    case TypeKind::Real: return "real";
    case TypeKind::Void: return "void";
    case TypeKind::Array: return type_text_of(t->elem()) + "*";
    case TypeKind::Set: return type_text_of(t->elem()) + "%";
    case TypeKind::Map: return "<" + type_text_of(t->key()) + "|" + type_text_of(t->value()) + ">";
    case TypeKind::Record: return t->record_name() + "#";
  }
  return {};
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

ExecOutcome execute(const Program& p, const std::vector<Value>& args, const ExecLimits& limits) {
  Interp interp{p, ExecContext{limits, RecordTable(p)}};
  try {
    const FuncDecl* main = p.find_func(kMainName);
    if (!main) return ExecOutcome::failure(RunErrorKind::TypeConfusion, "no '__main__' function");
    if (args.size() != main->params.size())
      return ExecOutcome::failure(RunErrorKind::TypeConfusion,
                                  "__main__ takes " + std::to_string(main->params.size()) +
                                      " arguments, got " + std::to_string(args.size()));
    if (const RecordDecl* g = p.find_record(kGlobalsName)) {
      Value gv = default_value(*Type::record(g->name), interp.ctx.records);
      interp.globals = gv.as_record();
      if (const FuncDecl* init = p.find_func(kGlobalsInitName)) interp.call_function(*init, {});
    }
    std::vector<Value> coerced;
    coerced.reserve(args.size());
    for (size_t i = 0; i < args.size(); ++i) {
      Value v = coerce_store(*main->params[i].type, args[i]);
      if (!value_conforms(v, *main->params[i].type))
        return ExecOutcome::failure(RunErrorKind::TypeConfusion,
                                    "argument " + std::to_string(i) +
                                        " does not conform to the entry schema");
      coerced.push_back(std::move(v));
    }
    Value result = interp.call_function(*main, std::move(coerced));
    if (!main->return_type->is(TypeKind::Void) && !value_conforms(result, *main->return_type))
      return ExecOutcome::failure(RunErrorKind::TypeConfusion,
                                  "result does not conform to the entry schema");
    return ExecOutcome::success(std::move(result));
  } catch (const ExecError& e) {
    return ExecOutcome::failure(e.kind, e.detail);
  } catch (const std::exception& e) {
    return ExecOutcome::failure(RunErrorKind::TypeConfusion, e.what());
  }
}

Value call_builtin(std::string_view name, std::vector<Value> args, const TypeRef& result_hint) {
  ExecContext ctx{ExecLimits{}, RecordTable{}};
  return builtin_call(ctx, name, args, result_hint);
}

}  // namespace uast
