#include "doctest.h"
#include "testutil.hpp"
#include "uast/eval.hpp"
#include "uast/serde.hpp"

using namespace uast;
namespace tu = uast::testutil;

namespace {

TestBundle count_steps_tests(const Program& p) {
  return load_tests_file(tu::fixture_path("count_steps.tests.json"), entry_schema(p), RecordTable(p));
}

Program constant_zero_int_main() {
  return parse_program_text(R"({"funcs": [["func", "int", "__main__",
    [["var", "int", "var0"]], [], [["return", "int", ["val", "int", 0]]]]]})");
}

}  // namespace

TEST_CASE("run_tests counts passes over both splits") {
  Program p = tu::load_fixture("count_steps_inferred.uast.json");
  TestBundle tests = count_steps_tests(p);
  REQUIRE(tests.search.size() == 3);
  REQUIRE(tests.eval.size() == 7);
  CHECK(run_tests(p, tests.search) == 3);
  CHECK(run_tests(p, tests.eval) == 7);

  // a constant-zero program matches exactly the two zero-output examples
  CHECK(run_tests(constant_zero_int_main(), tests.eval) == 2);
}

TEST_CASE("runtime errors count as failures without aborting the suite") {
  Program spin = parse_program_text(R"({"funcs": [["func", "int", "__main__",
    [["var", "int", "var0"]], [],
    [["while", "bool", ["val", "bool", true], [["noop"]], []],
     ["return", "int", ["val", "int", 0]]]]]})");
  TestBundle tests = count_steps_tests(spin);
  CHECK(run_tests(spin, tests.eval, {5000, 100}) == 0);
}

TEST_CASE("select_candidate returns the first full pass on the search split") {
  Program count_steps = tu::load_fixture("count_steps_inferred.uast.json");
  TestBundle tests = count_steps_tests(count_steps);

  std::vector<Program> candidates;
  candidates.push_back(constant_zero_int_main());  // fails input 157
  candidates.push_back(count_steps);
  auto pick = select_candidate(candidates, tests.search);
  REQUIRE(pick.has_value());
  CHECK(*pick == 1);

  CHECK_FALSE(select_candidate({}, tests.search).has_value());

  // order-stable among multiple passers
  std::vector<Program> two{count_steps, count_steps};
  pick = select_candidate(two, tests.search);
  REQUIRE(pick.has_value());
  CHECK(*pick == 0);
}

TEST_CASE("candidates with grammar-shape errors never qualify") {
  Program no_main = parse_program_text(R"({"funcs": [["func", "int", "f",
    [["var", "int", "var0"]], [], [["return", "int", ["val", "int", 0]]]]]})");
  Program count_steps = tu::load_fixture("count_steps_inferred.uast.json");
  TestBundle tests = count_steps_tests(count_steps);
  std::vector<Program> candidates{no_main, count_steps};
  auto pick = select_candidate(candidates, tests.search);
  REQUIRE(pick.has_value());
  CHECK(*pick == 1);
}

TEST_CASE("metric arithmetic matches the definitions") {
  {
    std::vector<TaskOutcome> tasks{{true, 7, 7}};
    Metrics m = compute_metrics(tasks);
    CHECK(m.accuracy == doctest::Approx(1.0));
    CHECK(m.accuracy50 == doctest::Approx(1.0));
  }
  {
    // 4/7 >= 50% but not a full pass
    std::vector<TaskOutcome> tasks{{true, 4, 7}};
    Metrics m = compute_metrics(tasks);
    CHECK(m.accuracy == doctest::Approx(0.0));
    CHECK(m.accuracy50 == doctest::Approx(1.0));
  }
  {
    std::vector<TaskOutcome> tasks{{true, 7, 7}, {true, 3, 7}};
    Metrics m = compute_metrics(tasks);
    CHECK(m.accuracy == doctest::Approx(0.5));
    CHECK(m.accuracy50 == doctest::Approx(0.5));
  }
  {
    // exactly one half passes: the threshold is inclusive
    std::vector<TaskOutcome> tasks{{true, 2, 4}};
    CHECK(compute_metrics(tasks).accuracy50 == doctest::Approx(1.0));
  }
  {
    // a task with no selection fails both metrics
    std::vector<TaskOutcome> tasks{{false, 0, 7}, {true, 7, 7}};
    Metrics m = compute_metrics(tasks);
    CHECK(m.accuracy == doctest::Approx(0.5));
    CHECK(m.accuracy50 == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(compute_metrics(std::vector<TaskOutcome>{}), std::invalid_argument);
}

TEST_CASE("accuracy never exceeds 50% accuracy and permutation does not matter") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<TaskOutcome> tasks;
    size_t n = 1 + rng() % 12;
    for (size_t i = 0; i < n; ++i) {
      TaskOutcome t;
      t.has_selection = rng() % 4 != 0;
      t.eval_total = 1 + static_cast<int>(rng() % 10);
      t.eval_passed = static_cast<int>(rng() % (t.eval_total + 1));
      tasks.push_back(t);
    }
    Metrics m = compute_metrics(tasks);
    CHECK(m.accuracy <= m.accuracy50 + 1e-12);
    CHECK(m.accuracy >= 0.0);
    CHECK(m.accuracy50 <= 1.0);

    std::shuffle(tasks.begin(), tasks.end(), rng);
    Metrics shuffled = compute_metrics(tasks);
    CHECK(shuffled.accuracy == doctest::Approx(m.accuracy));
    CHECK(shuffled.accuracy50 == doctest::Approx(m.accuracy50));
  }
}

TEST_CASE("run_tests is monotone in limits") {
  Program p = tu::load_fixture("count_steps_inferred.uast.json");
  TestBundle tests = count_steps_tests(p);
  int tight = run_tests(p, tests.eval, {3000, 1000});
  int loose = run_tests(p, tests.eval, {1000000, 100000});
  CHECK(tight <= loose);
  CHECK(loose == 7);
}

TEST_CASE("real outputs compare with relative tolerance") {
  Program p = parse_program_text(R"({"funcs": [["func", "real", "__main__",
    [["var", "real", "var0"]], [], [["return", "real", ["var", "real", "var0"]]]]]})");
  std::vector<IoExample> close{{{Value(1.0000005)}, Value(1.0)}};
  CHECK(run_tests(p, close) == 1);
  std::vector<IoExample> far{{{Value(1.1)}, Value(1.0)}};
  CHECK(run_tests(p, far) == 0);
  // ...and the tolerance knob is adjustable
  CHECK(run_tests(p, far, {}, 0.2) == 1);
}

TEST_CASE("tests files round trip through JSON") {
  Program p = tu::load_fixture("count_steps_inferred.uast.json");
  TestBundle tests = count_steps_tests(p);
  auto j = tests_to_json(tests);
  TestBundle back = tests_from_json(j, entry_schema(p), RecordTable(p));
  REQUIRE(back.search.size() == tests.search.size());
  REQUIRE(back.eval.size() == tests.eval.size());
  for (size_t i = 0; i < tests.eval.size(); ++i) {
    CHECK(deep_equal(back.eval[i].output, tests.eval[i].output));
    CHECK(deep_equal(back.eval[i].input[0], tests.eval[i].input[0]));
  }
  CHECK_THROWS_AS(
      tests_from_json(nlohmann::ordered_json::array(), entry_schema(p), RecordTable(p)),
      std::invalid_argument);
}

TEST_CASE("judge_tasks produces per-program rows and aggregate metrics") {
  Program count_steps = tu::load_fixture("count_steps_inferred.uast.json");
  TestBundle tests = count_steps_tests(count_steps);

  Task good;
  good.id = "t0";
  good.candidates = {constant_zero_int_main(), count_steps};
  good.tests = tests;

  Task hopeless;
  hopeless.id = "t1";
  hopeless.candidates = {constant_zero_int_main()};
  hopeless.tests = tests;

  std::vector<Task> tasks{good, hopeless};
  EvalReport report = judge_tasks(tasks);
  REQUIRE(report.per_program.size() == 3);
  CHECK(report.per_program[0].selected == false);
  CHECK(report.per_program[1].selected == true);
  CHECK(report.per_program[1].eval_passed == 7);
  CHECK(report.per_program[2].selected == false);
  CHECK(report.metrics.accuracy == doctest::Approx(0.5));
  CHECK(report.metrics.accuracy50 == doctest::Approx(0.5));

  auto j = report_to_json(report);
  CHECK(j["accuracy"].get<double>() == doctest::Approx(0.5));
  CHECK(j["per_program"].size() == 3);
  std::string text = report_to_text(report);
  CHECK(text.find("7/7 eval passed") != std::string::npos);
  CHECK(text.find("[selected]") != std::string::npos);
}

TEST_CASE("type warnings do not disqualify a candidate that passes the tests") {
  // the assign is annotated int while the target is declared real: a typing
  // diagnostic, but the program still runs (stores widen) and returns 3
  Program sloppy = parse_program_text(R"({"funcs": [["func", "int", "__main__",
    [["var", "int", "var0"]], [["var", "real", "var1"]],
    [["assign", "int", ["var", "real", "var1"], ["val", "int", 3]],
     ["return", "int", ["var", "int", "var0"]]]]]})");
  auto diags = validate(sloppy);
  REQUIRE_FALSE(diags.empty());
  CHECK_FALSE(has_shape_errors(diags));

  std::vector<IoExample> examples{{{Value(int64_t{5})}, Value(int64_t{5})}};
  auto pick = select_candidate(std::vector<Program>{sloppy}, examples);
  REQUIRE(pick.has_value());
  CHECK(*pick == 0);
}
