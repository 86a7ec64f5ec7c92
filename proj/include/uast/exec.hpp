#pragma once

#include <string>
#include <vector>

#include "uast/core.hpp"
#include "uast/value.hpp"

namespace uast {

// Dataset programs can loop unboundedly on wrong inputs; both limits are
// always enforced.
struct ExecLimits {
  int64_t max_steps = 10'000'000;      // statement/expression evaluations
  int64_t max_heap_cells = 1'000'000;  // live container slots
};

enum class RunErrorKind {
  DivByZero,
  IndexOutOfBounds,
  MissingKey,
  StepLimit,
  HeapLimit,
  TypeConfusion,
  NoReturn,
};

std::string_view run_error_name(RunErrorKind k);

struct ExecOutcome {
  bool ok = false;
  Value value;  // meaningful when ok
  RunErrorKind error = RunErrorKind::TypeConfusion;
  std::string detail;

  static ExecOutcome success(Value v) { return {true, std::move(v), {}, {}}; }
  static ExecOutcome failure(RunErrorKind k, std::string detail) {
    return {false, {}, k, std::move(detail)};
  }
};

// Thrown by call_builtin and int_arith; execute() converts it into an
// ExecOutcome instead of throwing.
struct ExecError : std::runtime_error {
  ExecError(RunErrorKind kind_, const std::string& detail_)
      : std::runtime_error(std::string(run_error_name(kind_)) + ": " + detail_),
        kind(kind_),
        detail(detail_) {}
  RunErrorKind kind;
  std::string detail;
};

// Runs __globals__.__init__ when present, then __main__(args). Deterministic:
// the outcome is a pure function of (program, args, limits).
ExecOutcome execute(const Program& p, const std::vector<Value>& args,
                    const ExecLimits& limits = {});

// 64-bit two's-complement wrapping + - *; / truncates toward zero; % takes
// the dividend's sign; << >> are arithmetic with the shift count masked to
// 0-63. Throws ExecError(DivByZero) for /, % with b == 0.
int64_t int_arith(std::string_view op, int64_t a, int64_t b);

// Applies one registry builtin outside any program context. `result_hint`
// supplies the node type annotation that `new` needs. Throws ExecError on
// unknown names, arity/type mismatches, and domain errors.
Value call_builtin(std::string_view name, std::vector<Value> args,
                   const TypeRef& result_hint = nullptr);

}  // namespace uast
