#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"
#include "uast/corpus.hpp"
#include "uast/decode.hpp"
#include "uast/eval.hpp"
#include "uast/exec.hpp"
#include "uast/serde.hpp"
#include "uast/stmtgen.hpp"

namespace fs = std::filesystem;
using uast::Json;

namespace {

struct CommonOpts {
  int64_t limit_steps = uast::ExecLimits{}.max_steps;
  int64_t limit_heap = uast::ExecLimits{}.max_heap_cells;
  std::string format = "text";

  uast::ExecLimits limits() const { return {limit_steps, limit_heap}; }
  bool json() const { return format == "json"; }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--limits-steps", opts.limit_steps, "Max statement/expression evaluations");
  cmd->add_option("--limits-heap", opts.limit_heap, "Max live container slots");
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
}

Json parse_json_or_die(const std::string& text, const char* what) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw uast::ParseError("invalid JSON", what);
  return j;
}

int cmd_validate(const std::string& path, bool lint, const CommonOpts& opts) {
  uast::Program p = uast::load_program_file(path);
  auto diags = uast::validate(p, lint);
  if (opts.json()) {
    std::cout << uast::diagnostics_to_json(diags).dump(1) << "\n";
  } else {
    for (const auto& d : diags) std::cout << d.to_line() << "\n";
  }
  // lint warnings print but only errors make the program unclean
  for (const auto& d : diags)
    if (d.severity == uast::Diagnostic::Severity::Error) return 1;
  return 0;
}

int cmd_fmt(const std::string& path) {
  std::cout << uast::pretty_print(uast::load_program_file(path));
  return 0;
}

int cmd_run(const std::string& path, const std::string& input, const CommonOpts& opts) {
  uast::Program p = uast::load_program_file(path);
  uast::EntrySchema schema = uast::entry_schema(p);
  uast::RecordTable records(p);
  Json in = parse_json_or_die(input, "--input");
  if (!in.is_array() || in.size() != schema.params.size())
    throw std::invalid_argument("--input must be a JSON array with one value per parameter");
  std::vector<uast::Value> args;
  for (size_t i = 0; i < schema.params.size(); ++i)
    args.push_back(uast::value_from_json(in[i], *schema.params[i].type, records));
  uast::ExecOutcome outcome = uast::execute(p, args, opts.limits());
  if (!outcome.ok) {
    std::cerr << uast::run_error_name(outcome.error) << ": " << outcome.detail << "\n";
    return 1;
  }
  std::cout << uast::value_text(outcome.value) << "\n";
  return 0;
}

int cmd_eval(const std::string& path, const std::string& tests_path, const CommonOpts& opts) {
  uast::Program p = uast::load_program_file(path);
  uast::EntrySchema schema = uast::entry_schema(p);
  uast::RecordTable records(p);
  uast::TestBundle tests = uast::load_tests_file(tests_path, schema, records);
  int search_passed = uast::run_tests(p, tests.search, opts.limits());
  int eval_passed = uast::run_tests(p, tests.eval, opts.limits());
  if (opts.json()) {
    Json j;
    j["search_passed"] = search_passed;
    j["search_total"] = tests.search.size();
    j["eval_passed"] = eval_passed;
    j["eval_total"] = tests.eval.size();
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << search_passed << "/" << tests.search.size() << " search passed\n";
    std::cout << eval_passed << "/" << tests.eval.size() << " eval passed\n";
  }
  return 0;
}

int cmd_stats(const std::string& path, const CommonOpts& opts) {
  uast::Corpus corpus = uast::load_corpus(path);
  for (const auto& issue : corpus.issues)
    std::cerr << path << ":" << issue.line << ": " << issue.message << "\n";
  if (corpus.records.empty()) {
    std::cerr << "no records loaded\n";
    return 1;
  }
  uast::CorpusStats stats = uast::compute_stats(corpus.records);
  if (opts.json()) std::cout << uast::stats_to_json(stats).dump(1) << "\n";
  else std::cout << uast::stats_table(stats);
  if (!corpus.issues.empty()) {
    std::cerr << corpus.issues.size() << " record(s) failed to load\n";
    return 1;
  }
  return 0;
}

int cmd_gen_stmt(const std::string& path, uint64_t seed, int n, const std::string& verbosity,
                 const CommonOpts& opts) {
  uast::Program p = uast::load_program_file(path);
  uast::Verbosity v = uast::Verbosity::Normal;
  if (verbosity == "terse") v = uast::Verbosity::Terse;
  if (verbosity == "verbose") v = uast::Verbosity::Verbose;
  auto batch = uast::generate_batch(p, n, seed, v);
  if (opts.json()) {
    Json lines = Json::array();
    for (const auto& r : batch) {
      Json row;
      row["tokens"] = r.tokens;
      row["fallbacks"] = r.fallbacks;
      lines.push_back(std::move(row));
    }
    Json j;
    j["statements"] = std::move(lines);
    j["mean_tokens"] = uast::mean_token_length(batch);
    std::cout << j.dump(1) << "\n";
  } else {
    for (const auto& r : batch) std::cout << r.text() << "\n";
    std::cerr << "mean tokens: " << uast::mean_token_length(batch) << "\n";
  }
  return 0;
}

int cmd_decode_demo(const std::string& corpus_dir, const std::string& schema_text,
                    size_t capacity, size_t expansions, size_t max_nodes, size_t top,
                    const std::string& out_dir) {
  std::vector<uast::Program> corpus;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus_dir))
    if (entry.path().string().ends_with(".uast.json")) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) corpus.push_back(uast::load_program_file(f));
  if (corpus.empty()) throw std::invalid_argument("no .uast.json programs in " + corpus_dir);

  uast::EntrySchema schema = uast::parse_schema(schema_text);
  uast::DecodeVocab vocab = uast::DecodeVocab::from_corpus(corpus);
  uast::FrequencyScorer scorer(corpus);
  uast::SearchConfig cfg{capacity, expansions, max_nodes};
  auto results = uast::decode(scorer, cfg, schema, vocab);

  Json scores = Json::array();
  size_t shown = std::min(top, results.size());
  for (size_t i = 0; i < shown; ++i) {
    Json row;
    row["rank"] = i;
    row["score"] = results[i].score;
    scores.push_back(row);
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      char name[64];
      std::snprintf(name, sizeof name, "decoded_%03zu.uast.json", i);
      uast::save_program_file(results[i].program, fs::path(out_dir) / name);
    }
  }
  if (!out_dir.empty()) {
    std::ofstream sidecar(fs::path(out_dir) / "scores.json");
    sidecar << scores.dump(1) << "\n";
  }
  std::cout << results.size() << " programs decoded\n";
  if (!results.empty()) {
    std::cout << "best (score " << results[0].score << "):\n"
              << uast::pretty_print(results[0].program);
  }
  return 0;
}

int cmd_serve(int port, const CommonOpts& opts) {
  httplib::Server server;

  auto run_handler = [&opts](const httplib::Request& req, httplib::Response& res) {
    Json reply;
    try {
      Json body = parse_json_or_die(req.body, "request body");
      uast::Program p = uast::parse_program(body.at("program"));
      uast::EntrySchema schema = uast::entry_schema(p);
      uast::RecordTable records(p);
      std::vector<uast::Value> args;
      const Json& input = body.at("input");
      if (!input.is_array() || input.size() != schema.params.size())
        throw std::invalid_argument("input arity does not match the entry schema");
      for (size_t i = 0; i < schema.params.size(); ++i)
        args.push_back(uast::value_from_json(input[i], *schema.params[i].type, records));
      uast::ExecLimits limits = opts.limits();
      if (body.contains("limits")) {
        limits.max_steps = body["limits"].value("steps", limits.max_steps);
        limits.max_heap_cells = body["limits"].value("heap", limits.max_heap_cells);
      }
      uast::ExecOutcome outcome = uast::execute(p, args, limits);
      if (outcome.ok) {
        reply["outcome"] = "ok";
        reply["value"] = uast::value_to_json(outcome.value);
      } else {
        reply["outcome"] = std::string(uast::run_error_name(outcome.error));
        reply["detail"] = outcome.detail;
      }
      res.status = 200;
    } catch (const std::exception& e) {
      reply = Json{{"error", e.what()}};
      res.status = 400;
    }
    res.set_content(reply.dump(), "application/json");
  };

  auto eval_handler = [&opts](const httplib::Request& req, httplib::Response& res) {
    Json reply;
    try {
      Json body = parse_json_or_die(req.body, "request body");
      uast::Program p = uast::parse_program(body.at("program"));
      uast::EntrySchema schema = uast::entry_schema(p);
      uast::RecordTable records(p);
      uast::TestBundle tests = uast::tests_from_json(body.at("tests"), schema, records);
      uast::ExecLimits limits = opts.limits();
      reply["search_passed"] = uast::run_tests(p, tests.search, limits);
      reply["search_total"] = tests.search.size();
      reply["eval_passed"] = uast::run_tests(p, tests.eval, limits);
      reply["eval_total"] = tests.eval.size();
      res.status = 200;
    } catch (const std::exception& e) {
      reply = Json{{"error", e.what()}};
      res.status = 400;
    }
    res.set_content(reply.dump(), "application/json");
  };

  server.Post("/run", run_handler);
  server.Post("/eval", eval_handler);
  std::cout << "listening on port " << port << "\n";
  if (!server.listen("0.0.0.0", port)) {
    std::cerr << "cannot bind port " << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAST toolchain: parse, validate, execute, judge, decode, and describe programs"};
  app.require_subcommand(1);

  CommonOpts opts;

  std::string prog_path, input_json = "[]", tests_path, corpus_path;
  bool lint = false;
  auto* validate_cmd = app.add_subcommand("validate", "Static checks; exit 0 iff clean");
  validate_cmd->add_option("program", prog_path)->required();
  validate_cmd->add_flag("--lint", lint, "Add the unused-variable warning pass");
  add_common(validate_cmd, opts);

  auto* fmt_cmd = app.add_subcommand("fmt", "Pretty-print a program");
  fmt_cmd->add_option("program", prog_path)->required();

  auto* run_cmd = app.add_subcommand("run", "Execute __main__ on the given arguments");
  run_cmd->add_option("program", prog_path)->required();
  run_cmd->add_option("--input", input_json, "JSON array of argument values")->required();
  add_common(run_cmd, opts);

  auto* eval_cmd = app.add_subcommand("eval", "Judge a program against a tests file");
  eval_cmd->add_option("program", prog_path)->required();
  eval_cmd->add_option("--tests", tests_path)->required();
  add_common(eval_cmd, opts);

  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics over a .jsonl dataset");
  stats_cmd->add_option("corpus", corpus_path)->required();
  add_common(stats_cmd, opts);

  uint64_t seed = 0;
  int n_statements = 1;
  std::string verbosity = "normal";
  auto* gen_cmd = app.add_subcommand("gen-stmt", "Generate synthetic problem statements");
  gen_cmd->add_option("program", prog_path)->required();
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("--n", n_statements)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--verbosity", verbosity)
      ->check(CLI::IsMember({"terse", "normal", "verbose"}));
  add_common(gen_cmd, opts);

  std::string corpus_dir, schema_text, out_dir;
  size_t capacity = 64, expansions = 64, max_nodes = 256, top = 64;
  auto* decode_cmd = app.add_subcommand("decode-demo", "Grammar-constrained search demo");
  decode_cmd->add_option("--corpus", corpus_dir, "Directory of .uast.json programs")->required();
  decode_cmd->add_option("--schema", schema_text, "Entry signature, e.g. 'int(int var0)'")
      ->required();
  decode_cmd->add_option("--capacity", capacity);
  decode_cmd->add_option("--expansions", expansions);
  decode_cmd->add_option("--max-nodes", max_nodes);
  decode_cmd->add_option("--top", top);
  decode_cmd->add_option("--out", out_dir, "Directory for ranked .uast.json output");

  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "JSON-over-HTTP judge (POST /run, POST /eval)");
  serve_cmd->add_option("--port", port)->required();
  add_common(serve_cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(validate_cmd)) return cmd_validate(prog_path, lint, opts);
    if (app.got_subcommand(fmt_cmd)) return cmd_fmt(prog_path);
    if (app.got_subcommand(run_cmd)) return cmd_run(prog_path, input_json, opts);
    if (app.got_subcommand(eval_cmd)) return cmd_eval(prog_path, tests_path, opts);
    if (app.got_subcommand(stats_cmd)) return cmd_stats(corpus_path, opts);
    if (app.got_subcommand(gen_cmd))
      return cmd_gen_stmt(prog_path, seed, n_statements, verbosity, opts);
    if (app.got_subcommand(decode_cmd))
      return cmd_decode_demo(corpus_dir, schema_text, capacity, expansions, max_nodes, top,
                             out_dir);
    if (app.got_subcommand(serve_cmd)) return cmd_serve(port, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
