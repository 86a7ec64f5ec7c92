#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uast/eval.hpp"

namespace uast {

// One dataset record. Partial solutions are smaller pieces of full programs
// and never carry tests or a schema.
struct DatasetRecord {
  Program solution;
  bool is_partial = false;
  std::optional<EntrySchema> schema;
  std::optional<TestBundle> tests;
  std::optional<std::vector<std::string>> statement;
  std::string url;
};

struct LoadIssue {
  int line = 0;  // 1-based line in the .jsonl file
  std::string message;
};

struct Corpus {
  std::vector<DatasetRecord> records;
  std::vector<LoadIssue> issues;
};

// JSON Lines, one record per line. Malformed lines are reported with their
// line number and skipped; parsing continues.
Corpus load_corpus(const std::filesystem::path& path);
Corpus load_corpus_text(const std::string& text);

nlohmann::ordered_json record_to_json(const DatasetRecord& r);
std::string save_corpus_text(const std::vector<DatasetRecord>& records);
void save_corpus(const std::vector<DatasetRecord>& records, const std::filesystem::path& path);

struct CorpusStats {
  int n_records = 0;
  int n_partial = 0;
  double stmt_len_mean = 0, stmt_len_std = 0;  // over records with a statement
  double loc_mean = 0, loc_std = 0;            // pretty-printed lines, all records
  double tests_mean = 0, tests_std = 0;        // |search| + |eval|, full records
};

// Means and population standard deviations. Throws std::invalid_argument on
// an empty corpus.
CorpusStats compute_stats(const std::vector<DatasetRecord>& records);

nlohmann::ordered_json stats_to_json(const CorpusStats& s);
std::string stats_table(const CorpusStats& s);

}  // namespace uast
