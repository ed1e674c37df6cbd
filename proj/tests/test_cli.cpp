#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "plans/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "plans_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string p(const std::string& name) { return (workdir() / name).string(); }

int run(const std::string& args) {
  const std::string cmd = std::string(PLANS_CLI) + " " + args + " >" + p("stdout.txt") + " 2>" + p("stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) { return plans::io::read_file(path); }

}  // namespace

TEST_CASE("cli: every command reruns byte for byte") {
  REQUIRE(run("gen --k 15 --r 2 --seed 4 --out " + p("l.csv")) == 0);
  REQUIRE(run("gen --k 15 --r 2 --seed 4 --out " + p("l2.csv")) == 0);
  CHECK(slurp(p("l.csv")) == slurp(p("l2.csv")));
  REQUIRE(run("gen --k 6 --r 2 --seed 4 --format model --out " + p("m.json")) == 0);
  REQUIRE(run("gen --k 6 --r 2 --seed 4 --format model --out " + p("m2.json")) == 0);
  CHECK(slurp(p("m.json")) == slurp(p("m2.json")));

  const std::pair<std::string, std::string> commands[] = {
      {"plans --matrix " + p("l.csv") + " --r 2 --out {o} --stats {o}.stats", "plans"},
      {"plans --matrix " + p("m.json") + " --out {o} --stats {o}.stats", "plans_model"},
      {"rplans --matrix " + p("l.csv") + " --r 2 --eps 0.5 --delta 0.1 --per-entry-cap 2000 --seed 3 --out {o}",
       "rplans_eps"},
      {"rplans --matrix " + p("l.csv") + " --r 2 --budget 20000 --split 0.4 --seed 3 --out {o}", "rplans_budget"},
      {"baseline --algo naive --matrix " + p("l.csv") + " --budget 5000 --seed 1 --out {o}", "naive"},
      {"baseline --algo lilucb --matrix " + p("l.csv") + " --budget 5000 --seed 1 --out {o}", "lilucb"},
      {"baseline --algo se --matrix " + p("l.csv") + " --budget 5000 --seed 1 --out {o}", "se"},
      {"sweep --matrix " + p("l.csv") + " --r 2 --algos rplans,naive --budgets 1000,4000 --reps 2 --seed 9 --out {o}",
       "sweep"},
      {"validate-bernstein --p 3 --n 50 --delta 0.1 --trials 20 --seed 1 --out {o}", "bern"},
      {"validate-se --delta 0.1 --trials 3 --seed 1 --out {o}", "se_val"},
      {"validate-nystrom --k 10 --r 2 --m 100,1000 --trials 5 --seed 1 --out {o}", "nys"},
  };
  for (const auto& [tmpl, name] : commands) {
    std::string outputs[2];
    for (int pass = 0; pass < 2; ++pass) {
      std::string cmd = tmpl;
      const std::string out = p(name + "_" + std::to_string(pass));
      for (std::size_t pos; (pos = cmd.find("{o}")) != std::string::npos;) cmd.replace(pos, 3, out);
      const int code = run(cmd);
      CAPTURE(cmd);
      CHECK(code <= 1);
      outputs[pass] = slurp(out) + slurp(p("stdout.txt"));
      if (fs::exists(out + ".stats")) outputs[pass] += slurp(out + ".stats");
    }
    CAPTURE(name);
    CHECK(outputs[0] == outputs[1]);
  }
  CHECK(slurp(p("sweep_0")).rfind("algorithm,K,r,budget,rep,seed,error,queries,wall_ms\n", 0) == 0);
  CHECK(slurp(p("rplans_eps_0")).find("\"value_hat\"") != std::string::npos);
  CHECK(slurp(p("plans_0.stats")).find("\"total_calls\"") != std::string::npos);
}

TEST_CASE("cli: ingest") {
  std::ofstream(p("ratings.csv")) << "1,0,1\n1,1,1\n0,0,1\n0,1,0\n";
  std::ofstream(p("groups.txt")) << "a\nb\na\nb\n";
  REQUIRE(run("ingest --ratings " + p("ratings.csv") + " --groups " + p("groups.txt") + " --out " + p("ing.json")) ==
          0);
  const std::string text = slurp(p("ing.json"));
  CHECK(text.find("0.5") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
  CHECK(run("") == 2);
  CHECK(run("bogus") == 2);
  CHECK(run("gen --k 5 --r 2 --out x") == 2);                                  // missing --seed
  CHECK(run("gen --k 5 --r 9 --seed 1 --out " + p("bad.csv")) == 2);           // r > K
  CHECK(run("rplans --matrix " + p("l.csv") + " --r 2 --seed 1 --out x") == 2);  // no mode
  CHECK(run("rplans --matrix " + p("l.csv") + " --r 2 --eps 0.1 --delta 0.1 --budget 100 --seed 1 --out x") == 2);
  CHECK(run("sweep --matrix " + p("l.csv") + " --r 2 --algos nope --budgets 100 --reps 1 --seed 1 --out x") == 2);
  CHECK(run("sweep --matrix " + p("l.csv") + " --r 2 --algos naive --budgets 200,100 --reps 1 --seed 1 --out x") ==
        2);
  CHECK(run("plans --matrix " + p("missing.csv") + " --out x --stats y") == 3);
  std::ofstream(p("asym.csv")) << "0.5,0.1\n0.2,0.5\n";
  CHECK(run("plans --matrix " + p("asym.csv") + " --out x --stats y") == 3);
  std::ofstream(p("junk.csv")) << "0.5,abc\n";
  CHECK(run("baseline --algo naive --matrix " + p("junk.csv") + " --budget 10 --seed 1 --out x") == 3);
  std::ofstream(p("bad_ratings.csv")) << "1,2\n";
  std::ofstream(p("one_group.txt")) << "a\n";
  CHECK(run("ingest --ratings " + p("bad_ratings.csv") + " --groups " + p("one_group.txt") + " --out x") == 3);
}
