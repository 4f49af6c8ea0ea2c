#include <doctest.h>

#include <cmath>
#include <vector>

#include "fiqa/errors.hpp"
#include "fiqa/rng.hpp"
#include "fiqa/sampling.hpp"
#include "support/oracles.hpp"

using namespace fiqa;
using namespace fiqa::sampling;

namespace {

std::vector<ScoredItem> items_of(std::vector<double> scores) {
  std::vector<ScoredItem> items;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    items.push_back({"s" + std::to_string(i), scores[i]});
  }
  return items;
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("build_strata places scores in equal-width bins") {
  const auto plan = build_strata(items_of({0.05, 0.55, 0.95}), 10);
  REQUIRE(plan.bins.size() == 10);
  REQUIRE(plan.bin_edges.size() == 11);
  CHECK(plan.bin_edges.front() == 0.0);
  CHECK(plan.bin_edges.back() == 1.0);
  CHECK(plan.bins[0] == std::vector<std::string>{"s0"});
  CHECK(plan.bins[5] == std::vector<std::string>{"s1"});
  CHECK(plan.bins[9] == std::vector<std::string>{"s2"});
  for (std::size_t b : {1u, 2u, 3u, 4u, 6u, 7u, 8u}) {
    CHECK(plan.bins[b].empty());
  }
  CHECK(plan.draws.empty());
}

TEST_CASE("build_strata boundary rules") {
  // Interior edges are right-open: 0.1 goes up; 1.0 stays in the last bin.
  const auto plan = build_strata(items_of({0.1, 1.0, 0.0}), 10);
  CHECK(plan.bins[1] == std::vector<std::string>{"s0"});
  CHECK(plan.bins[9] == std::vector<std::string>{"s1"});
  CHECK(plan.bins[0] == std::vector<std::string>{"s2"});
}

TEST_CASE("build_strata accepts empty input and rejects bad scores") {
  const auto plan = build_strata({}, 4);
  for (const auto& bin : plan.bins) CHECK(bin.empty());

  CHECK_THROWS_WITH_AS(build_strata(items_of({1.2})),
                       doctest::Contains("outside [0, 1]"), ScoreOutOfRange);
  CHECK_THROWS_AS(build_strata(items_of({-0.1})), ScoreOutOfRange);
  CHECK_THROWS_AS(build_strata(items_of({0.5}), 0), InputError);
}

TEST_CASE("every item lands in exactly one bin") {
  SplitMix64 rng(3);
  std::vector<ScoredItem> items;
  for (int i = 0; i < 200; ++i) {
    items.push_back({"x" + std::to_string(i), rng.next_unit()});
  }
  const auto plan = build_strata(items, 7);
  std::size_t total = 0;
  for (const auto& bin : plan.bins) total += bin.size();
  CHECK(total == items.size());
}

TEST_CASE("draw is seeded, with replacement, and skips empty bins") {
  const auto plan = build_strata(items_of({0.05, 0.06, 0.95}), 10);

  const auto a = draw(plan, 50, 99);
  const auto b = draw(plan, 50, 99);
  REQUIRE(a.draws.size() == 50);
  CHECK(a.draws == b.draws);  // determinism

  for (const Draw& d : a.draws) {
    CHECK((d.bin == 0 || d.bin == 9));  // only non-empty bins
    if (d.bin == 9) CHECK(d.item_id == "s2");
  }

  const auto single = draw(build_strata(items_of({0.42}), 10), 25, 1);
  for (const Draw& d : single.draws) {
    CHECK(d.bin == 4);
    CHECK(d.item_id == "s0");
  }

  CHECK_THROWS_AS(draw(build_strata({}, 10), 5, 0), AllBinsEmpty);
}

TEST_CASE("two-bin draws split evenly within 4 sigma") {
  const auto plan = build_strata(items_of({0.2, 0.8}), 10);
  const std::size_t n = 100000;
  const auto drawn = draw(plan, n, 2024);
  std::size_t low = 0;
  for (const Draw& d : drawn.draws) {
    if (d.bin == 2) ++low;
  }
  const double sigma = std::sqrt(n * 0.25);
  CHECK(std::abs(static_cast<double>(low) - n / 2.0) <= 4.0 * sigma);
}

TEST_CASE("tail_oversample duplicates strictly-outside scores only") {
  const auto out = tail_oversample(items_of({0.05, 0.5, 0.95}));
  REQUIRE(out.size() == 5);
  CHECK(out[0].id == "s0");
  CHECK(out[1].id == "s0#1");
  CHECK(out[1].score == 0.05);
  CHECK(out[2].id == "s1");
  CHECK(out[3].id == "s2");
  CHECK(out[4].id == "s2#1");

  // Exactly on the thresholds: untouched.
  CHECK(tail_oversample(items_of({0.1, 0.9})).size() == 2);

  // factor 1 is the identity.
  const auto same = tail_oversample(items_of({0.01, 0.99}), 0.1, 0.9, 1);
  CHECK(same.size() == 2);

  // Length formula: N + (factor-1) * |tail|.
  const auto tripled = tail_oversample(items_of({0.01, 0.5, 0.99}), 0.1, 0.9, 3);
  CHECK(tripled.size() == 3 + 2 * 2);

  CHECK_THROWS_AS(tail_oversample(items_of({0.5}), 0.1, 0.9, 0), InputError);
}

TEST_CASE("degradation kinds round-trip their names") {
  for (const char* name : {"gaussian_blur", "gaussian_noise", "resample"}) {
    CHECK(degradation_kind_name(degradation_kind_from_name(name)) == name);
  }
  CHECK(degradation_kind_from_name("blur") == DegradationKind::gaussian_blur);
  CHECK(degradation_kind_from_name("noise") ==
        DegradationKind::gaussian_noise);
  CHECK_THROWS_AS(degradation_kind_from_name("jpeg"), UnknownKind);
}

TEST_CASE("apply_degradation validates severity") {
  const img::ImagePlane p(4, 4, 0.5);
  CHECK_THROWS_AS(
      apply_degradation(p, {DegradationKind::gaussian_blur, 1.5, 0}),
      ScoreOutOfRange);
}

TEST_CASE("make_ssar_pairs is the cartesian product") {
  SplitMix64 rng(8);
  std::vector<NamedPlane> images;
  for (int i = 0; i < 3; ++i) {
    images.push_back({"img" + std::to_string(i),
                      testsupport::random_plane(rng, 16, 16)});
  }
  std::vector<DegradationSpec> specs = {
      {DegradationKind::gaussian_blur, 0.0, 0},
      {DegradationKind::gaussian_noise, 0.0, 1},
      {DegradationKind::resample, 0.0, 2},
      {DegradationKind::gaussian_blur, 0.5, 3},
  };
  const auto pairs = make_ssar_pairs(images, specs);
  REQUIRE(pairs.size() == 12);
  CHECK(pairs[0].item_id == "img0");
  CHECK(pairs[4].item_id == "img1");

  // Severity 0 for any kind: degraded == clean within 1e-9.
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < pairs[k].clean.data.size(); ++i) {
      CHECK(std::abs(pairs[k].degraded.data[i] - pairs[k].clean.data[i]) <
            1e-9);
    }
  }
}

TEST_CASE("blur severity is PSNR-monotone on textured planes") {
  SplitMix64 rng(99);
  int monotone = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const img::ImagePlane clean = testsupport::random_plane(rng, 64, 64);
    double prev = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (double s : {0.2, 0.5, 0.8}) {
      const auto deg =
          apply_degradation(clean, {DegradationKind::gaussian_blur, s, 0});
      const double quality = testsupport::psnr(clean, deg);
      ok = ok && quality < prev;
      prev = quality;
    }
    monotone += ok ? 1 : 0;
  }
  CHECK(monotone >= trials * 95 / 100);
}

}  // TEST_SUITE
