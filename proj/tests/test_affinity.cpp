#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>

#include "pocketeval/affinity.hpp"
#include "pocketeval/common.hpp"
#include "pocketeval/runproc.hpp"

using namespace pocketeval;

TEST_CASE("scores csv: parse, lookup, round trip") {
  const std::string text =
      "pocket_id,ordinal,mode,energy\n"
      "p1,1,score,-6.5\n"
      "p1,1,dock,-7.25\n"
      "p2,3,min,-5\n";
  auto table = parse_scores_csv(text);
  CHECK(table.issues.empty());
  REQUIRE(table.records.size() == 3);
  CHECK(table.find("p1", 1, "dock") == doctest::Approx(-7.25));
  CHECK(table.find("p2", 3, "min") == doctest::Approx(-5.0));
  CHECK(!table.find("p1", 2, "score").has_value());
  CHECK(!table.find("p1", 1, "min").has_value());

  auto again = parse_scores_csv(write_scores_csv(table));
  REQUIRE(again.records.size() == 3);
  CHECK(again.records[1].energy == doctest::Approx(-7.25));
  CHECK(again.records[1].mode == "dock");

  CHECK_THROWS_AS(parse_scores_csv(""), Error);
  CHECK_THROWS_AS(parse_scores_csv("pocket,ordinal,mode,energy\n"), Error);
}

TEST_CASE("scores csv: malformed rows are collected, not fatal") {
  auto table = parse_scores_csv(
      "pocket_id,ordinal,mode,energy\n"
      "p1,1,dock,-6.5\n"
      "p1,0,dock,-6.5\n"
      "p1,x,dock,-6.5\n"
      "p1,2,wiggle,-6.5\n"
      "p1,3,dock,abc\n"
      "p1,4,dock\n");
  CHECK(table.records.size() == 1);
  CHECK(table.issues.size() == 5);
}

TEST_CASE("summarize_mode: validity, mean, strict improvement") {
  std::vector<AffinityRecord> recs = {
      {"p", 1, "dock", -6.0},
      {"p", 2, "dock", -4.0},
      {"p", 3, "dock", 2.0},
      {"p", 4, "dock", -5.0},  // exactly the reference: not an improvement
  };
  std::map<std::string, double> ref{{"p", -5.0}};
  std::vector<std::string> warnings;
  auto s = summarize_mode(recs, ref, &warnings);
  CHECK(warnings.empty());
  CHECK(s.present == 4);
  CHECK(s.valid == 3);
  REQUIRE(s.mean_energy.has_value());
  CHECK(*s.mean_energy == doctest::Approx(-5.0));
  CHECK(s.improvement_pct == doctest::Approx(25.0));
}

TEST_CASE("summarize_mode: records without a reference leave the rate") {
  std::vector<AffinityRecord> recs = {
      {"p", 1, "dock", -6.0},
      {"q", 1, "dock", -7.0},
  };
  std::map<std::string, double> ref{{"p", -5.0}};
  std::vector<std::string> warnings;
  auto s = summarize_mode(recs, ref, &warnings);
  CHECK(s.present == 2);
  CHECK(s.valid == 2);
  CHECK(*s.mean_energy == doctest::Approx(-6.5));
  CHECK(s.improvement_pct == doctest::Approx(100.0));
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("q") != std::string::npos);

  auto none = summarize_mode({}, ref, nullptr);
  CHECK(none.present == 0);
  CHECK(!none.mean_energy.has_value());
  CHECK(none.improvement_pct == 0.0);
}

TEST_CASE("binding gap: symmetric example cancels to zero") {
  std::vector<AffinityRecord> recs = {
      {"p", 1, "dock", -6.0},
      {"p", 2, "dock", -4.0},
  };
  std::map<std::string, double> ref{{"p", -5.0}};
  std::vector<std::string> warnings;
  auto g = mean_percent_binding_gap(recs, ref, &warnings);
  REQUIRE(g.has_value());
  CHECK(*g == doctest::Approx(0.0));
  CHECK(warnings.empty());
}

TEST_CASE("binding gap: pocket means average, invalid energies stay out") {
  std::vector<AffinityRecord> recs = {
      {"p1", 1, "dock", -6.0},
      {"p1", 2, "dock", -4.0},
      {"p1", 3, "dock", 3.0},   // positive: excluded
      {"p2", 1, "dock", -5.0},
  };
  std::map<std::string, double> ref{{"p1", -5.0}, {"p2", -4.0}};
  auto g = mean_percent_binding_gap(recs, ref, nullptr);
  REQUIRE(g.has_value());
  CHECK(*g == doctest::Approx(12.5));  // (0 + 25) / 2
}

TEST_CASE("binding gap: bad references are skipped with warnings") {
  std::vector<AffinityRecord> recs = {
      {"p1", 1, "dock", -6.0},
      {"p2", 1, "dock", -6.0},
      {"p3", 1, "dock", -6.0},
  };
  std::map<std::string, double> ref{{"p1", 1.5}, {"p3", -6.0}};
  std::vector<std::string> warnings;
  auto g = mean_percent_binding_gap(recs, ref, &warnings);
  REQUIRE(g.has_value());
  CHECK(*g == doctest::Approx(0.0));  // only p3 survives, gap 0
  CHECK(warnings.size() == 2);

  std::map<std::string, double> empty_ref;
  auto none = mean_percent_binding_gap(recs, empty_ref, nullptr);
  CHECK(!none.has_value());
}

TEST_CASE("ligand efficiency: -E over heavy atoms, pooled") {
  std::vector<AffinityRecord> recs = {
      {"p", 1, "dock", -8.0},
      {"p", 2, "dock", -6.0},
      {"p", 3, "dock", 5.0},   // invalid energy: skipped
      {"p", 4, "dock", -4.0},  // no heavy-atom count: skipped with warning
  };
  std::map<std::pair<std::string, int>, int> heavy{
      {{"p", 1}, 20},
      {{"p", 2}, 30},
      {{"p", 3}, 10},
  };
  std::vector<std::string> warnings;
  auto lbe = mean_ligand_efficiency(recs, heavy, &warnings);
  REQUIRE(lbe.has_value());
  CHECK(*lbe == doctest::Approx(0.3));  // (0.40 + 0.20) / 2
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("#4") != std::string::npos);

  auto none = mean_ligand_efficiency({}, heavy, nullptr);
  CHECK(!none.has_value());
}

TEST_CASE("run_process captures merged output and exit codes") {
  auto echo = run_process({"/bin/echo", "hello"});
  CHECK(echo.exit_code == 0);
  CHECK(!echo.timed_out);
  CHECK(echo.output == "hello\n");

  auto via_path = run_process({"echo", "hi"});
  CHECK(via_path.exit_code == 0);
  CHECK(via_path.output == "hi\n");

  auto fail = run_process({"false"});
  CHECK(fail.exit_code == 1);

  auto err = run_process({"sh", "-c", "echo oops 1>&2; exit 3"});
  CHECK(err.exit_code == 3);
  CHECK(err.output == "oops\n");

  auto missing = run_process({"definitely-not-a-real-binary-name"});
  CHECK(missing.exit_code == 127);
}

TEST_CASE("run_process kills a command that overruns its timeout") {
  auto start = std::chrono::steady_clock::now();
  auto slow = run_process({"sleep", "10"}, 0.3);
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(slow.timed_out);
  CHECK(slow.exit_code == -1);
  CHECK(elapsed < 5.0);
}

TEST_CASE("expand_command substitutes every placeholder") {
  auto argv = expand_command(
      "vina --receptor {receptor} --ligand {ligand} --out {out} "
      "--center_x {cx} --center_y {cy} --center_z {cz}",
      "rec.pdb", "lig.sdf", "out.sdf", 1.5, -2.0, 12.25);
  REQUIRE(argv.size() == 13);
  CHECK(argv[0] == "vina");
  CHECK(argv[2] == "rec.pdb");
  CHECK(argv[4] == "lig.sdf");
  CHECK(argv[6] == "out.sdf");
  CHECK(argv[8] == "1.5");
  CHECK(argv[10] == "-2");
  CHECK(argv[12] == "12.25");

  CHECK_THROWS_AS(expand_command("tool {nope}", "r", "l", "o", 0, 0, 0), Error);
  CHECK_THROWS_AS(expand_command("   ", "r", "l", "o", 0, 0, 0), Error);
  auto plain = expand_command("tool -x", "r", "l", "o", 0, 0, 0);
  REQUIRE(plain.size() == 2);
  CHECK(plain[1] == "-x");
}
