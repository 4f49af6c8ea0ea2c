#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fiqa/errors.hpp"
#include "fiqa/io.hpp"
#include "fiqa/rng.hpp"
#include "support/oracles.hpp"

using namespace fiqa;

namespace {

// Self-deleting scratch file under the system temp dir.
struct TempFile {
  std::filesystem::path path;

  explicit TempFile(const std::string& name)
      : path(std::filesystem::temp_directory_path() /
             ("fiqa_io_test_" + name)) {}
  ~TempFile() { std::filesystem::remove(path); }

  void write(const std::string& content) const {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("score csv: header, records, and parse errors") {
  TempFile f("scores.csv");
  f.write("item_id,score\nimg_001,0.42\nimg_002,0.9\n\n");
  const auto items = io::read_score_csv(f.str());
  REQUIRE(items.size() == 2);
  CHECK(items[0].id == "img_001");
  CHECK(items[0].score == 0.42);
  CHECK(items[1].id == "img_002");

  TempFile crlf("crlf.csv");
  crlf.write("item_id,score\r\na,0.5\r\n");
  CHECK(io::read_score_csv(crlf.str()).size() == 1);

  TempFile bad_header("bad_header.csv");
  bad_header.write("id,score\na,0.5\n");
  CHECK_THROWS_AS(io::read_score_csv(bad_header.str()), ParseError);

  TempFile bad_value("bad_value.csv");
  bad_value.write("item_id,score\na,not_a_number\n");
  CHECK_THROWS_WITH_AS(io::read_score_csv(bad_value.str()),
                       doctest::Contains(":2"), ParseError);

  CHECK_THROWS_AS(io::read_score_csv("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("join_scores pairs by id and names unmatched ids") {
  const std::vector<sampling::ScoredItem> preds = {{"a", 0.1}, {"b", 0.2}};
  const std::vector<sampling::ScoredItem> gts = {{"b", 0.9}, {"a", 0.8}};
  const ScoreSeries s = io::join_scores(preds, gts);
  REQUIRE(s.size() == 2);
  CHECK(s.ids[0] == "a");
  CHECK(s.pred[0] == 0.1);
  CHECK(s.gt[0] == 0.8);
  CHECK(s.gt[1] == 0.9);

  const std::vector<sampling::ScoredItem> missing = {{"a", 0.8}};
  CHECK_THROWS_WITH_AS(io::join_scores(preds, missing),
                       doctest::Contains("\"b\""), LengthMismatch);
  CHECK_THROWS_WITH_AS(io::join_scores(missing, preds),
                       doctest::Contains("\"b\""), LengthMismatch);

  const std::vector<sampling::ScoredItem> dup = {{"a", 0.8}, {"a", 0.9}};
  CHECK_THROWS_AS(io::join_scores(dup, dup), InputError);
}

TEST_CASE("results csv round-trips through the leaderboard writer") {
  TempFile f("results.csv");
  f.write(
      "team,srocc,plcc,gflops,params_m\n"
      "alpha,0.9692,0.9637,0.3313,1.1796\n"
      "beta,0.7098,0.6900,0.8980,6.0523\n");
  const auto rows = io::read_results_csv(f.str());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].team == "alpha");
  CHECK(rows[1].gflops == 0.8980);

  const auto entries = metrics::build_leaderboard(rows);
  std::ostringstream out;
  io::write_leaderboard_csv(out, entries, /*with_budget_flags=*/true);
  const std::string text = out.str();
  CHECK(text ==
        "rank,team,score,srocc,plcc,gflops,params_m,flops_ok,params_ok\n"
        "1,alpha,0.9665,0.9692,0.9637,0.3313,1.1796,yes,yes\n"
        "2,beta,0.6999,0.7098,0.6900,0.8980,6.0523,no,no\n");

  std::ostringstream plain;
  io::write_leaderboard_csv(plain, entries);
  CHECK(plain.str().substr(0, 38) ==
        "rank,team,score,srocc,plcc,gflops,para");
}

TEST_CASE("pgm round-trip is bit-exact for 8-bit data") {
  TempFile f("plane.pgm");
  SplitMix64 rng(55);
  img::ImagePlane p(13, 9);
  for (double& v : p.data) {
    v = static_cast<double>(rng.next_below(256)) / 255.0;
  }
  io::write_pgm(f.str(), p);
  const img::ImagePlane back = io::read_pgm(f.str());
  REQUIRE(back.height == 13);
  REQUIRE(back.width == 9);
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    CHECK(back.data[i] == doctest::Approx(p.data[i]).epsilon(1e-12));
  }

  // Second write of the read-back plane must produce identical bytes.
  TempFile g("plane2.pgm");
  io::write_pgm(g.str(), back);
  std::ifstream fa(f.str(), std::ios::binary), fb(g.str(), std::ios::binary);
  std::stringstream ba, bb;
  ba << fa.rdbuf();
  bb << fb.rdbuf();
  CHECK(ba.str() == bb.str());
}

TEST_CASE("pgm parser handles comments and rejects junk") {
  TempFile f("comment.pgm");
  f.write("P5\n# a comment\n2 3\n255\nABCDEF");
  const img::ImagePlane p = io::read_pgm(f.str());
  CHECK(p.width == 2);
  CHECK(p.height == 3);
  CHECK(p.at(0, 0) == doctest::Approx(65.0 / 255.0));  // 'A'

  TempFile not_pgm("not.pgm");
  not_pgm.write("P6\n2 2\n255\n0000");
  CHECK_THROWS_AS(io::read_pgm(not_pgm.str()), ParseError);

  TempFile short_pgm("short.pgm");
  short_pgm.write("P5\n4 4\n255\nfew");
  CHECK_THROWS_AS(io::read_pgm(short_pgm.str()), ParseError);

  TempFile maxval("maxval.pgm");
  maxval.write("P5\n1 1\n65535\n\0\0");
  CHECK_THROWS_AS(io::read_pgm(maxval.str()), ParseError);
}

TEST_CASE("snapshot files round-trip and validate length") {
  TempFile f("weights.bin");
  const std::vector<double> weights = {0.5, -1.25, 3.75, 0.0};
  io::write_snapshot(f.str(), weights);
  CHECK(io::read_snapshot(f.str()) == weights);

  TempFile truncated("weights_cut.bin");
  truncated.write("\x08");
  CHECK_THROWS_AS(io::read_snapshot(truncated.str()), ParseError);
}

}  // TEST_SUITE
