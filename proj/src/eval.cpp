#include "uast/eval.hpp"

#include <fstream>
#include <sstream>

#include "uast/serde.hpp"

namespace uast {

int run_tests(const Program& p, const std::vector<IoExample>& examples, const ExecLimits& limits,
              double real_tol) {
  int passed = 0;
  for (const auto& ex : examples) {
    ExecOutcome outcome = execute(p, ex.input, limits);
    if (outcome.ok && match_with_tolerance(ex.output, outcome.value, real_tol)) ++passed;
  }
  return passed;
}

std::optional<size_t> select_candidate(std::span<const Program> candidates,
                                       const std::vector<IoExample>& search,
                                       const ExecLimits& limits, double real_tol) {
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (has_shape_errors(validate(candidates[i]))) continue;
    if (run_tests(candidates[i], search, limits, real_tol) ==
        static_cast<int>(search.size()))
      return i;
  }
  return std::nullopt;
}

Metrics compute_metrics(std::span<const TaskOutcome> tasks) {
  if (tasks.empty()) throw std::invalid_argument("cannot compute metrics over zero tasks");
  int full = 0, half = 0;
  for (const auto& t : tasks) {
    if (!t.has_selection) continue;
    if (t.eval_passed == t.eval_total) ++full;
    // "at least 50%" is inclusive.
    if (2 * t.eval_passed >= t.eval_total) ++half;
  }
  double n = static_cast<double>(tasks.size());
  return {full / n, half / n};
}

EvalReport judge_tasks(std::span<const Task> tasks, const ExecLimits& limits, double real_tol) {
  EvalReport report;
  std::vector<TaskOutcome> outcomes;
  for (const auto& task : tasks) {
    auto pick = select_candidate(task.candidates, task.tests.search, limits, real_tol);
    TaskOutcome outcome;
    outcome.eval_total = static_cast<int>(task.tests.eval.size());
    for (size_t i = 0; i < task.candidates.size(); ++i) {
      ProgramReport pr;
      pr.id = task.id + "#" + std::to_string(i);
      pr.selected = pick && *pick == i;
      pr.eval_total = outcome.eval_total;
      if (pr.selected) {
        pr.eval_passed = run_tests(task.candidates[i], task.tests.eval, limits, real_tol);
        outcome.has_selection = true;
        outcome.eval_passed = pr.eval_passed;
      }
      report.per_program.push_back(std::move(pr));
    }
    outcomes.push_back(outcome);
  }
  report.metrics = compute_metrics(outcomes);
  return report;
}

// ---------------------------------------------------------------------------
// JSON surfaces
// ---------------------------------------------------------------------------

namespace {

IoExample example_from_json(const nlohmann::ordered_json& j, const EntrySchema& schema,
                            const RecordTable& records) {
  if (!j.is_object() || !j.contains("input") || !j.contains("output"))
    throw std::invalid_argument("test example needs 'input' and 'output'");
  const auto& input = j["input"];
  if (!input.is_array() || input.size() != schema.params.size())
    throw std::invalid_argument("test input arity does not match the entry schema");
  IoExample ex;
  for (size_t i = 0; i < schema.params.size(); ++i)
    ex.input.push_back(value_from_json(input[i], *schema.params[i].type, records));
  ex.output = value_from_json(j["output"], *schema.return_type, records);
  return ex;
}

nlohmann::ordered_json example_to_json(const IoExample& ex) {
  nlohmann::ordered_json j;
  auto input = nlohmann::ordered_json::array();
  for (const auto& v : ex.input) input.push_back(value_to_json(v));
  j["input"] = std::move(input);
  j["output"] = value_to_json(ex.output);
  return j;
}

}  // namespace

TestBundle tests_from_json(const nlohmann::ordered_json& j, const EntrySchema& schema,
                           const RecordTable& records) {
  if (!j.is_object()) throw std::invalid_argument("tests file must be a JSON object");
  TestBundle bundle;
  if (j.contains("search_tests"))
    for (const auto& e : j["search_tests"])
      bundle.search.push_back(example_from_json(e, schema, records));
  if (j.contains("eval_tests"))
    for (const auto& e : j["eval_tests"])
      bundle.eval.push_back(example_from_json(e, schema, records));
  return bundle;
}

nlohmann::ordered_json tests_to_json(const TestBundle& bundle) {
  nlohmann::ordered_json j;
  auto search = nlohmann::ordered_json::array();
  for (const auto& e : bundle.search) search.push_back(example_to_json(e));
  auto eval = nlohmann::ordered_json::array();
  for (const auto& e : bundle.eval) eval.push_back(example_to_json(e));
  j["search_tests"] = std::move(search);
  j["eval_tests"] = std::move(eval);
  return j;
}

TestBundle load_tests_file(const std::filesystem::path& path, const EntrySchema& schema,
                           const RecordTable& records) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open tests file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto j = nlohmann::ordered_json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument("invalid JSON in " + path.string());
  return tests_from_json(j, schema, records);
}

nlohmann::ordered_json report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  auto programs = nlohmann::ordered_json::array();
  for (const auto& p : report.per_program) {
    nlohmann::ordered_json row;
    row["id"] = p.id;
    row["eval_passed"] = p.eval_passed;
    row["eval_total"] = p.eval_total;
    row["selected"] = p.selected;
    programs.push_back(std::move(row));
  }
  j["per_program"] = std::move(programs);
  j["accuracy"] = report.metrics.accuracy;
  j["accuracy50"] = report.metrics.accuracy50;
  return j;
}

std::string report_to_text(const EvalReport& report) {
  std::string out;
  for (const auto& p : report.per_program) {
    out += p.id + ": " + std::to_string(p.eval_passed) + "/" + std::to_string(p.eval_total) +
           " eval passed" + (p.selected ? " [selected]" : "") + "\n";
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "accuracy: %.4f\n50%%accuracy: %.4f\n", report.metrics.accuracy,
                report.metrics.accuracy50);
  out += buf;
  return out;
}

}  // namespace uast
