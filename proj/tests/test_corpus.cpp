#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "testutil.hpp"
#include "uast/corpus.hpp"
#include "uast/serde.hpp"

using namespace uast;
namespace tu = uast::testutil;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Corpus load_fixture_corpus() { return load_corpus(tu::fixture_path("corpus.jsonl")); }

}  // namespace

TEST_CASE("the bundled corpus loads with seven records, two of them partial") {
  Corpus corpus = load_fixture_corpus();
  CHECK(corpus.issues.empty());
  REQUIRE(corpus.records.size() == 7);
  int partial = 0;
  for (const auto& r : corpus.records) partial += r.is_partial ? 1 : 0;
  CHECK(partial == 2);
  for (const auto& r : corpus.records) {
    if (r.is_partial) {
      CHECK_FALSE(r.tests.has_value());
      CHECK_FALSE(r.schema.has_value());
    } else {
      REQUIRE(r.schema.has_value());
      REQUIRE(r.tests.has_value());
      size_t total = r.tests->search.size() + r.tests->eval.size();
      CHECK(total >= 2);
      CHECK(total <= 10);
    }
  }
}

TEST_CASE("an empty file yields an empty corpus") {
  Corpus corpus = load_corpus_text("");
  CHECK(corpus.records.empty());
  CHECK(corpus.issues.empty());
}

TEST_CASE("malformed lines are reported with their line number and skipped") {
  std::string good = read_file(tu::fixture_path("corpus.jsonl"));
  auto first_line_end = good.find('\n');
  std::string text = good.substr(0, first_line_end + 1) + "{ not json }\n" +
                     good.substr(first_line_end + 1);
  Corpus corpus = load_corpus_text(text);
  CHECK(corpus.records.size() == 7);
  REQUIRE(corpus.issues.size() == 1);
  CHECK(corpus.issues[0].line == 2);
}

TEST_CASE("partial records with tests violate the schema") {
  Corpus corpus = load_corpus_text(
      R"({"solution":{"types":[],"funcs":[["func","int","__main__",[["var","int","var0"]],[],)"
      R"([["return","int",["var","int","var0"]]]]]},"is_partial":true,)"
      R"("search_tests":[{"input":[1],"output":1}],"eval_tests":[{"input":[2],"output":2}],"url":""})"
      "\n");
  CHECK(corpus.records.empty());
  REQUIRE(corpus.issues.size() == 1);
  CHECK(corpus.issues[0].message.find("partial") != std::string::npos);
}

TEST_CASE("records whose schema contradicts the solution are rejected") {
  Corpus corpus = load_corpus_text(
      R"({"solution":{"types":[],"funcs":[["func","int","__main__",[["var","int","var0"]],[],)"
      R"([["return","int",["var","int","var0"]]]]]},"is_partial":false,)"
      R"("schema":{"args":[["var0","int*"]],"return_type":"int"},)"
      R"("search_tests":[{"input":[[1]],"output":1}],"eval_tests":[{"input":[[2]],"output":2}],"url":""})"
      "\n");
  CHECK(corpus.records.empty());
  REQUIRE(corpus.issues.size() == 1);
  CHECK(corpus.issues[0].message.find("schema") != std::string::npos);
}

TEST_CASE("search and eval inputs must be disjoint") {
  Corpus corpus = load_corpus_text(
      R"({"solution":{"types":[],"funcs":[["func","int","__main__",[["var","int","var0"]],[],)"
      R"([["return","int",["var","int","var0"]]]]]},"is_partial":false,)"
      R"("schema":{"args":[["var0","int"]],"return_type":"int"},)"
      R"("search_tests":[{"input":[1],"output":1}],"eval_tests":[{"input":[1],"output":1}],"url":""})"
      "\n");
  CHECK(corpus.records.empty());
  REQUIRE(corpus.issues.size() == 1);
  CHECK(corpus.issues[0].message.find("disjoint") != std::string::npos);
}

TEST_CASE("save then load is the identity on the bundled corpus") {
  Corpus corpus = load_fixture_corpus();
  std::string bytes = save_corpus_text(corpus.records);
  CHECK(bytes == read_file(tu::fixture_path("corpus.jsonl")));  // byte-stable

  Corpus again = load_corpus_text(bytes);
  REQUIRE(again.records.size() == corpus.records.size());
  for (size_t i = 0; i < again.records.size(); ++i) {
    CHECK(structural_eq(again.records[i].solution, corpus.records[i].solution));
    CHECK(again.records[i].is_partial == corpus.records[i].is_partial);
    CHECK(again.records[i].url == corpus.records[i].url);
    CHECK(again.records[i].statement == corpus.records[i].statement);
  }
}

TEST_CASE("stats match an independent re-aggregation") {
  Corpus corpus = load_fixture_corpus();
  CorpusStats stats = compute_stats(corpus.records);

  // brute-force oracle: recompute every aggregate directly
  auto agg = [](const std::vector<double>& xs) {
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= xs.empty() ? 1 : static_cast<double>(xs.size());
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= xs.empty() ? 1 : static_cast<double>(xs.size());
    return std::pair<double, double>{mean, std::sqrt(var)};
  };
  std::vector<double> locs, lens, tests;
  int partial = 0;
  for (const auto& r : corpus.records) {
    if (r.is_partial) ++partial;
    int lines = 0;
    std::string pretty = pretty_print(r.solution);
    for (char c : pretty)
      if (c == '\n') ++lines;
    locs.push_back(lines);
    if (r.statement) lens.push_back(static_cast<double>(r.statement->size()));
    if (r.tests)
      tests.push_back(static_cast<double>(r.tests->search.size() + r.tests->eval.size()));
  }
  auto [locM, locS] = agg(locs);
  auto [lenM, lenS] = agg(lens);
  auto [tM, tS] = agg(tests);

  CHECK(stats.n_records == 7);
  CHECK(stats.n_partial == partial);
  CHECK(stats.loc_mean == doctest::Approx(locM).epsilon(1e-12));
  CHECK(stats.loc_std == doctest::Approx(locS).epsilon(1e-12));
  CHECK(stats.stmt_len_mean == doctest::Approx(lenM).epsilon(1e-12));
  CHECK(stats.stmt_len_std == doctest::Approx(lenS).epsilon(1e-12));
  CHECK(stats.tests_mean == doctest::Approx(tM).epsilon(1e-12));
  CHECK(stats.tests_std == doctest::Approx(tS).epsilon(1e-12));
}

TEST_CASE("a single record has zero deviation everywhere") {
  Corpus corpus = load_fixture_corpus();
  std::vector<DatasetRecord> one{corpus.records[0]};
  CorpusStats stats = compute_stats(one);
  CHECK(stats.loc_std == doctest::Approx(0.0));
  CHECK(stats.stmt_len_std == doctest::Approx(0.0));
  CHECK(stats.tests_std == doctest::Approx(0.0));
}

TEST_CASE("stats are permutation-invariant") {
  Corpus corpus = load_fixture_corpus();
  CorpusStats a = compute_stats(corpus.records);
  std::vector<DatasetRecord> reversed(corpus.records.rbegin(), corpus.records.rend());
  CorpusStats b = compute_stats(reversed);
  CHECK(a.loc_mean == doctest::Approx(b.loc_mean));
  CHECK(a.loc_std == doctest::Approx(b.loc_std));
  CHECK(a.tests_mean == doctest::Approx(b.tests_mean));
  CHECK(a.stmt_len_mean == doctest::Approx(b.stmt_len_mean));
}

TEST_CASE("empty corpora cannot be aggregated") {
  CHECK_THROWS_AS(compute_stats({}), std::invalid_argument);
}

TEST_CASE("stats render as a table and as JSON") {
  Corpus corpus = load_fixture_corpus();
  CorpusStats stats = compute_stats(corpus.records);
  std::string table = stats_table(stats);
  CHECK(table.find("Number of examples") != std::string::npos);
  CHECK(table.find("7") != std::string::npos);
  auto j = stats_to_json(stats);
  CHECK(j["n_records"].get<int>() == 7);
  CHECK(j["n_partial"].get<int>() == 2);
}
