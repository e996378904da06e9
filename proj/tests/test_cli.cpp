#include "doctest.h"
#include "json.hpp"

#include "cli_helpers.hpp"
#include "fixtures.hpp"

using namespace fanet::test;
using json = nlohmann::json;

namespace {

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("stats subcommand") {
  ScratchDir dir;
  write_file(dir / "t1.tsv", t1_tsv);
  REQUIRE(run_cli("stats --graph " + quoted(dir / "t1.tsv") + " --out " + quoted(dir / "out")) == 0);
  const auto stats = json::parse(read_file(dir / "out/stats.json"));
  CHECK(stats["stats"]["node_count"] == 4);
  CHECK(stats["stats"]["edge_count"] == 4);
  CHECK(stats["manifest"]["subcommand"] == "stats");
  CHECK(stats["manifest"]["inputs"][0]["sha256"].get<std::string>().size() == 64);
  CHECK(read_file(dir / "out/degree_out.csv") == "degree,count\n0,1\n1,2\n2,1\n");
  CHECK(read_file(dir / "out/degree_in.csv") == "degree,count\n0,1\n1,2\n2,1\n");
  CHECK(read_file(dir / "out/weight_cdf.csv") == "weight,fraction\n0.5,0.5\n1,1\n");
  CHECK(fs::exists(dir / "out/manifest.json"));
}

TEST_CASE("exit codes") {
  ScratchDir dir;
  CHECK(run_cli("stats --graph " + quoted(dir / "missing.tsv") + " --out " + quoted(dir.path())) == 2);
  write_file(dir / "bad.tsv", "a\tb\n");
  CHECK(run_cli("stats --graph " + quoted(dir / "bad.tsv") + " --out " + quoted(dir.path())) == 2);
  write_file(dir / "t1.tsv", t1_tsv);
  write_file(dir / "rats.csv", "s1,s2,s3,response,hardness\na,b,c,r,0.5\n");
  const std::string io = " --graph " + quoted(dir / "t1.tsv") + " --rats " + quoted(dir / "rats.csv") + " --out " + quoted(dir.path());
  CHECK(run_cli("percolation --graph " + quoted(dir / "t1.tsv") + " --cutoffs 0.5:0.4:0.1 --out " + quoted(dir.path())) == 3);
  CHECK(run_cli("simulate" + io + " --sweep sideways") == 3);
  CHECK(run_cli("simulate" + io + " --tau 0:0.1:0.05") == 3);
  CHECK(run_cli("simulate" + io + " --runs 0") == 3);
  CHECK(run_cli("predict" + io + " --lambda 2") == 3);
  CHECK(run_cli("bogus") == 3);
  write_file(dir / "range.csv", "s1,s2,s3,response,hardness\na,b,c,r,1.5\n");
  CHECK(run_cli("predict --graph " + quoted(dir / "t1.tsv") + " --rats " + quoted(dir / "range.csv") + " --out " + quoted(dir.path())) == 3);
}

TEST_CASE("percolation subcommand") {
  ScratchDir dir;
  write_file(dir / "c3.tsv", "a\tb\t0.5\nb\tc\t0.5\nc\ta\t0.5\n");
  REQUIRE(run_cli("percolation --graph " + quoted(dir / "c3.tsv") + " --cutoffs 0.4:0.6:0.2 --out " + quoted(dir.path())) == 0);
  const auto rows = lines(read_file(dir / "percolation.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "w_cut,largest_scc_fraction");
  CHECK(rows[1] == "0.4,1");
  CHECK(rows[2].rfind("0.6,0.333333", 0) == 0);

  REQUIRE(run_cli("percolation --graph " + quoted(dir / "c3.tsv") + " --out " + quoted(dir.path())) == 0);
  CHECK(lines(read_file(dir / "percolation.csv")).size() == 42);  // header + 0:0.2:0.005
}

TEST_CASE("predict subcommand") {
  ScratchDir dir;
  write_file(dir / "t1.tsv", t1_tsv);
  write_file(dir / "rats.csv", "s1,s2,s3,response,hardness\na,b,c,r,0.7\n");
  const std::string io = " --graph " + quoted(dir / "t1.tsv") + " --rats " + quoted(dir / "rats.csv") + " --out " + quoted(dir.path());
  REQUIRE(run_cli("predict" + io) == 0);
  auto rows = lines(read_file(dir / "predictors.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "alpha,s1,s2,s3,response,category,p0,p_0,p_05,p_1,inverse_weight,hardness,nonconverged");
  CHECK(rows[1].rfind("1,a,b,c,r,easy,0.5,0.5,0.708333", 0) == 0);
  CHECK(rows[1].find(",1,0,0.7,") != std::string::npos);

  REQUIRE(run_cli("predict" + io + " --lambda 0") == 0);
  rows = lines(read_file(dir / "predictors.csv"));
  CHECK(rows[0] == "alpha,s1,s2,s3,response,category,p0,p_0,inverse_weight,hardness,nonconverged");
  CHECK(rows[1] == "1,a,b,c,r,easy,0.5,0.5,0,0.7,");
  const auto corr = json::parse(read_file(dir / "correlations.json"));
  CHECK(corr["manifest"]["subcommand"] == "predict");
  CHECK(corr["problems"] == 1);
}

TEST_CASE("simulate subcommand is deterministic") {
  ScratchDir dir;
  // two problems with non-trivial accuracy
  write_file(dir / "g.tsv",
             "a\tx\t0.3\na\ty\t0.2\nb\tx\t0.1\nb\tz\t0.4\nc\ty\t0.3\nc\tr\t0.05\nx\tr\t0.2\ny\tq\t0.5\nz\tr\t0.1\n"
             "q\tr\t0.3\nx\tq\t0.1\n");
  write_file(dir / "rats.csv", "s1,s2,s3,response,hardness\na,b,c,r,0.3\na,b,x,q,0.8\nb,c,x,r,0.5\n");
  const std::string io = " --graph " + quoted(dir / "g.tsv") + " --rats " + quoted(dir / "rats.csv");
  auto outputs = [&](const std::string& flags, const std::string& name) {
    REQUIRE(run_cli("simulate" + io + " --out " + quoted(dir / name) + " " + flags) == 0);
    return read_file(dir / name / "accuracy.csv") + read_file(dir / name / "lengths.csv") +
           read_file(dir / name / "scatter.csv");
  };
  CHECK(outputs("--runs 1 --seed 7", "a") == outputs("--runs 1 --seed 7", "b"));
  const auto one = outputs("--runs 3000 --seed 7 --threads 1", "c");
  CHECK(one == outputs("--runs 3000 --seed 7 --threads 4", "d"));
  CHECK(one != outputs("--runs 3000 --seed 8 --threads 1", "e"));

  const auto acc = lines(read_file(dir / "c/accuracy.csv"));
  REQUIRE(acc.size() == 4);
  CHECK(acc[0] == "series,param,value,alpha,category,hardness,accuracy,solved,dead_ends,exhausted,mean_length");
  const auto corr = json::parse(read_file(dir / "c/correlations.json"));
  CHECK(corr["reports"].size() == 1);
  CHECK(corr["manifest"]["seed"] == 7);

  outputs("--runs 200 --sweep tau --tau 0:0.1:0.05 --wmax 0.3", "f");
  CHECK(lines(read_file(dir / "f/lengths.csv")).size() == 1 + 3 * 3);
  CHECK(json::parse(read_file(dir / "f/correlations.json"))["maxima"].size() == 3);
  outputs("--runs 200 --sweep wmax --tau 0:0.1:0.05", "g");
  CHECK(lines(read_file(dir / "g/lengths.csv")).size() == 1 + 2 * 3 * 3);
  CHECK(json::parse(read_file(dir / "g/correlations.json"))["manifest"]["parameters"]["wmax"] == 0.05);
  outputs("--runs 200 --sweep tmax --tmax 5", "h");
  CHECK(lines(read_file(dir / "h/lengths.csv")).size() == 1 + 6 * 3);
}
