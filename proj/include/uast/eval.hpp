#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "uast/check.hpp"
#include "uast/exec.hpp"

namespace uast {

struct IoExample {
  std::vector<Value> input;  // one entry per __main__ parameter
  Value output;
};

struct TestBundle {
  std::vector<IoExample> search;  // may guide candidate selection
  std::vector<IoExample> eval;    // held out for scoring
};

// Reals in outputs match within max(rel_tol * |expected|, rel_tol).
inline constexpr double kDefaultRealTol = 1e-6;

// Runs the program on every example; a pass is an Ok outcome whose value
// matches the expected output. Runtime errors count as failures and never
// abort the suite.
int run_tests(const Program& p, const std::vector<IoExample>& examples,
              const ExecLimits& limits = {}, double real_tol = kDefaultRealTol);

// First candidate (in the given order) passing all search examples.
// Candidates with grammar-shape validation errors never qualify.
std::optional<size_t> select_candidate(std::span<const Program> candidates,
                                       const std::vector<IoExample>& search,
                                       const ExecLimits& limits = {},
                                       double real_tol = kDefaultRealTol);

// One judged task: did its selected program pass the eval split?
struct TaskOutcome {
  bool has_selection = false;
  int eval_passed = 0;
  int eval_total = 0;
};

struct Metrics {
  double accuracy = 0;    // tasks whose selected program passed every eval example
  double accuracy50 = 0;  // tasks passing at least half of the eval examples
};

// Throws std::invalid_argument on an empty task set.
Metrics compute_metrics(std::span<const TaskOutcome> tasks);

struct ProgramReport {
  std::string id;
  int eval_passed = 0;
  int eval_total = 0;
  bool selected = false;
};

struct EvalReport {
  std::vector<ProgramReport> per_program;
  Metrics metrics;
};

struct Task {
  std::vector<Program> candidates;  // ordered by descending search score
  TestBundle tests;
  std::string id;
};

// Full pipeline over a task set: select per task, score the selection on the
// eval split, aggregate the two metrics.
EvalReport judge_tasks(std::span<const Task> tasks, const ExecLimits& limits = {},
                       double real_tol = kDefaultRealTol);

// ---------------------------------------------------------------------------
// Test-file format: {"search_tests": [{"input": [...], "output": ...}, ...],
//                    "eval_tests": [...]} with the uast-exec value encoding.
// ---------------------------------------------------------------------------

TestBundle tests_from_json(const nlohmann::ordered_json& j, const EntrySchema& schema,
                           const RecordTable& records);
nlohmann::ordered_json tests_to_json(const TestBundle& bundle);
TestBundle load_tests_file(const std::filesystem::path& path, const EntrySchema& schema,
                           const RecordTable& records);

nlohmann::ordered_json report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

}  // namespace uast
