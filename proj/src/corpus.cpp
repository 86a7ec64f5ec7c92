#include "uast/corpus.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "uast/serde.hpp"

namespace uast {

namespace {

DatasetRecord record_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw std::invalid_argument("record must be a JSON object");
  if (!j.contains("solution")) throw std::invalid_argument("record has no 'solution'");
  DatasetRecord r;
  r.solution = parse_program(j["solution"]);
  r.is_partial = j.value("is_partial", false);
  if (j.contains("url")) r.url = j["url"].get<std::string>();

  bool has_tests = j.contains("search_tests") || j.contains("eval_tests");
  if (r.is_partial && has_tests)
    throw std::invalid_argument("partial solutions cannot carry tests");
  if (r.is_partial && j.contains("schema"))
    throw std::invalid_argument("partial solutions cannot carry a schema");

  if (j.contains("schema")) {
    r.schema = schema_from_json(j["schema"]);
    EntrySchema actual = entry_schema(r.solution);  // throws if __main__ is missing
    if (!schema_eq(*r.schema, actual))
      throw std::invalid_argument("schema does not match the solution's __main__ signature");
  }
  if (has_tests) {
    if (!r.schema) throw std::invalid_argument("records with tests need a schema");
    RecordTable records(r.solution);
    r.tests = tests_from_json(j, *r.schema, records);
    size_t total = r.tests->search.size() + r.tests->eval.size();
    if (total < 2 || total > 10)
      throw std::invalid_argument("full records carry 2-10 input/output examples, got " +
                                  std::to_string(total));
    for (const auto& s : r.tests->search)
      for (const auto& e : r.tests->eval) {
        bool same = s.input.size() == e.input.size();
        for (size_t i = 0; same && i < s.input.size(); ++i)
          if (!deep_equal(s.input[i], e.input[i])) same = false;
        if (same) throw std::invalid_argument("search and eval inputs must be disjoint");
      }
  }
  if (j.contains("statement")) {
    std::vector<std::string> tokens;
    for (const auto& t : j["statement"]) tokens.push_back(t.get<std::string>());
    r.statement = std::move(tokens);
  }
  return r;
}

}  // namespace

Corpus load_corpus_text(const std::string& text) {
  Corpus corpus;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto j = nlohmann::ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      corpus.issues.push_back({line_no, "invalid JSON"});
      continue;
    }
    try {
      corpus.records.push_back(record_from_json(j));
    } catch (const std::exception& e) {
      corpus.issues.push_back({line_no, e.what()});
    }
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    Corpus corpus;
    corpus.issues.push_back({0, "cannot open " + path.string()});
    return corpus;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return load_corpus_text(buf.str());
}

nlohmann::ordered_json record_to_json(const DatasetRecord& r) {
  nlohmann::ordered_json j;
  j["solution"] = emit_program(r.solution);
  j["is_partial"] = r.is_partial;
  if (r.schema) j["schema"] = schema_to_json(*r.schema);
  if (r.tests) {
    auto tests = tests_to_json(*r.tests);
    j["search_tests"] = tests["search_tests"];
    j["eval_tests"] = tests["eval_tests"];
  }
  if (r.statement) {
    auto tokens = nlohmann::ordered_json::array();
    for (const auto& t : *r.statement) tokens.push_back(t);
    j["statement"] = std::move(tokens);
  }
  j["url"] = r.url;
  return j;
}

std::string save_corpus_text(const std::vector<DatasetRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

void save_corpus(const std::vector<DatasetRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path.string() + " for writing");
  out << save_corpus_text(records);
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

namespace {

struct MeanStd {
  double mean = 0, std_dev = 0;
};

// Population standard deviation, matching a bare "mean +/- std" presentation.
MeanStd mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  double sum = 0;
  for (double x : xs) sum += x;
  double mean = sum / static_cast<double>(xs.size());
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return {mean, std::sqrt(var)};
}

}  // namespace

CorpusStats compute_stats(const std::vector<DatasetRecord>& records) {
  if (records.empty()) throw std::invalid_argument("cannot compute stats over an empty corpus");
  CorpusStats s;
  s.n_records = static_cast<int>(records.size());
  std::vector<double> stmt_lens, locs, tests;
  for (const auto& r : records) {
    if (r.is_partial) ++s.n_partial;
    locs.push_back(static_cast<double>(count_lines(r.solution)));
    if (r.statement) stmt_lens.push_back(static_cast<double>(r.statement->size()));
    if (r.tests)
      tests.push_back(static_cast<double>(r.tests->search.size() + r.tests->eval.size()));
  }
  MeanStd m;
  m = mean_std(stmt_lens);
  s.stmt_len_mean = m.mean;
  s.stmt_len_std = m.std_dev;
  m = mean_std(locs);
  s.loc_mean = m.mean;
  s.loc_std = m.std_dev;
  m = mean_std(tests);
  s.tests_mean = m.mean;
  s.tests_std = m.std_dev;
  return s;
}

nlohmann::ordered_json stats_to_json(const CorpusStats& s) {
  nlohmann::ordered_json j;
  j["n_records"] = s.n_records;
  j["n_partial"] = s.n_partial;
  j["stmt_len_mean"] = s.stmt_len_mean;
  j["stmt_len_std"] = s.stmt_len_std;
  j["loc_mean"] = s.loc_mean;
  j["loc_std"] = s.loc_std;
  j["tests_mean"] = s.tests_mean;
  j["tests_std"] = s.tests_std;
  return j;
}

std::string stats_table(const CorpusStats& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%-45s %d\n"
                "%-45s %d\n"
                "%-45s %.1f +/- %.1f\n"
                "%-45s %.1f +/- %.1f\n"
                "%-45s %.1f +/- %.1f\n",
                "Number of examples", s.n_records,
                "Number of examples that are partial solutions", s.n_partial,
                "Statements length, i.e. number of tokens", s.stmt_len_mean, s.stmt_len_std,
                "Number of lines of code per solution", s.loc_mean, s.loc_std,
                "Number of inputs/outputs per solution", s.tests_mean, s.tests_std);
  return buf;
}

}  // namespace uast
