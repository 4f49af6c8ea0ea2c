#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "fiqa/errors.hpp"
#include "fiqa/image_ops.hpp"
#include "fiqa/rng.hpp"
#include "support/oracles.hpp"

using namespace fiqa;
using namespace fiqa::img;

TEST_SUITE("imageops") {

TEST_CASE("resize_short_side pins the short side and rounds half-up") {
  CHECK(resize_short_side(480, 640, 288) == std::pair<std::size_t,
                                                      std::size_t>{288, 384});
  CHECK(resize_short_side(640, 480, 288) == std::pair<std::size_t,
                                                      std::size_t>{384, 288});
  CHECK(resize_short_side(300, 300, 300) == std::pair<std::size_t,
                                                      std::size_t>{300, 300});
  CHECK_THROWS_AS(resize_short_side(0, 10, 5), NonPositiveDim);
}

TEST_CASE("resize_short_side keeps aspect ratio within half a pixel") {
  SplitMix64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const std::size_t h = 16 + rng.next_below(1000);
    const std::size_t w = 16 + rng.next_below(1000);
    const std::size_t target = 16 + rng.next_below(500);
    const auto [h2, w2] = resize_short_side(h, w, target);
    CHECK(std::min(h2, w2) == target);
    // Only one side is rounded, by at most 1/2, scaled by the short side.
    const double cross = std::abs(static_cast<double>(w2) * h -
                                  static_cast<double>(h2) * w);
    CHECK(cross <= static_cast<double>(std::max(h, w)) / 2.0);
  }
}

TEST_CASE("bilinear_resize: constants, identity, pinned half-pixel values") {
  const ImagePlane flat(5, 7, 0.42);
  const ImagePlane up = bilinear_resize(flat, 11, 3);
  for (double v : up.data) CHECK(v == doctest::Approx(0.42).epsilon(1e-15));

  SplitMix64 rng(6);
  const ImagePlane noise = testsupport::random_plane(rng, 8, 9);
  const ImagePlane same = bilinear_resize(noise, 8, 9);
  CHECK(same.data == noise.data);  // bit-identical

  ImagePlane two(2, 2);
  two.at(0, 0) = 0.0;
  two.at(0, 1) = 1.0;
  two.at(1, 0) = 0.0;
  two.at(1, 1) = 1.0;
  const ImagePlane wide = bilinear_resize(two, 2, 4);
  const std::vector<double> expected = {0.0, 0.25, 0.75, 1.0};
  for (std::size_t c = 0; c < 4; ++c) {
    CHECK(wide.at(0, c) == doctest::Approx(expected[c]).epsilon(1e-15));
    CHECK(wide.at(1, c) == doctest::Approx(expected[c]).epsilon(1e-15));
  }

  CHECK_THROWS_AS(bilinear_resize(flat, 0, 3), NonPositiveDim);
}

TEST_CASE("center_crop arithmetic and fit checks") {
  CHECK(center_crop(288, 384, 288, 288) == CropRect{0, 48, 288, 288});
  CHECK(center_crop(10, 10, 10, 10) == CropRect{0, 0, 10, 10});
  CHECK(center_crop(289, 289, 288, 288) == CropRect{0, 0, 288, 288});
  CHECK_THROWS_AS(center_crop(100, 100, 128, 100), CropTooLarge);
}

TEST_CASE("crop extracts the rect and validates bounds") {
  SplitMix64 rng(12);
  const ImagePlane p = testsupport::random_plane(rng, 10, 12);
  const ImagePlane c = crop(p, CropRect{2, 3, 4, 5});
  CHECK(c.height == 4);
  CHECK(c.width == 5);
  CHECK(c.at(0, 0) == p.at(2, 3));
  CHECK(c.at(3, 4) == p.at(5, 7));
  CHECK_THROWS_AS(crop(p, CropRect{8, 0, 4, 4}), CropTooLarge);
}

TEST_CASE("random_crops are in-bounds, seeded, and degenerate correctly") {
  const auto rects = random_crops(288, 384, 224, 224, 20, 7);
  REQUIRE(rects.size() == 20);
  for (const CropRect& r : rects) {
    CHECK(r.top + r.height <= 288);
    CHECK(r.left + r.width <= 384);
  }
  CHECK(rects == random_crops(288, 384, 224, 224, 20, 7));
  CHECK(rects != random_crops(288, 384, 224, 224, 20, 8));

  for (const CropRect& r : random_crops(64, 64, 64, 64, 5, 3)) {
    CHECK(r == CropRect{0, 0, 64, 64});
  }
  CHECK_THROWS_AS(random_crops(64, 64, 65, 64, 5, 3), CropTooLarge);
}

TEST_CASE("aggregate_patch_scores is the mean, permutation-invariant") {
  const std::vector<double> twenty(20, 0.5);
  CHECK(aggregate_patch_scores(twenty) == doctest::Approx(0.5).epsilon(1e-15));
  const std::vector<double> two = {0.2, 0.4};
  CHECK(aggregate_patch_scores(two) ==
        doctest::Approx(0.3).epsilon(1e-15));
  const std::vector<double> swapped = {0.4, 0.2};
  CHECK(aggregate_patch_scores(two) == aggregate_patch_scores(swapped));
  CHECK_THROWS_AS(aggregate_patch_scores(std::vector<double>{}), EmptyList);
}

TEST_CASE("gaussian_blur: identity, constants, impulse, range") {
  SplitMix64 rng(20);
  const ImagePlane p = testsupport::random_plane(rng, 16, 16);
  const ImagePlane same = gaussian_blur(p, 0.0);
  CHECK(same.data == p.data);

  const ImagePlane flat(9, 9, 0.7);
  const ImagePlane blurred_flat = gaussian_blur(flat, 0.6);
  for (double v : blurred_flat.data) CHECK(std::abs(v - 0.7) < 1e-9);

  // Unit impulse: the center of the response is the 2D kernel center
  // weight k0^2, with k the normalized 1D kernel. 0.5 * 2.0 gives an
  // exact sigma of 1, so the radius is exactly ceil(3) = 3.
  DegradeConfig cfg;
  cfg.blur_sigma_max = 2.0;
  const double severity = 0.5;
  ImagePlane impulse(17, 17, 0.0);
  impulse.at(8, 8) = 1.0;
  const ImagePlane response = gaussian_blur(impulse, severity, cfg);
  double norm = 0.0;
  for (int i = -3; i <= 3; ++i) norm += std::exp(-i * i / 2.0);
  const double k0 = 1.0 / norm;
  CHECK(response.at(8, 8) == doctest::Approx(k0 * k0).epsilon(1e-12));

  // Convex combination: output range within input range.
  const ImagePlane heavy = gaussian_blur(p, 1.0);
  const auto [lo, hi] = std::minmax_element(p.data.begin(), p.data.end());
  for (double v : heavy.data) {
    CHECK(v >= *lo - 1e-12);
    CHECK(v <= *hi + 1e-12);
  }
}

TEST_CASE("gaussian_noise: identity, determinism, sample statistics") {
  SplitMix64 rng(21);
  const ImagePlane p = testsupport::random_plane(rng, 8, 8);
  CHECK(gaussian_noise(p, 0.0, 5).data == p.data);

  const ImagePlane a = gaussian_noise(p, 0.7, 33);
  const ImagePlane b = gaussian_noise(p, 0.7, 33);
  CHECK(a.data == b.data);

  const ImagePlane gray(256, 256, 0.5);
  const ImagePlane noisy = gaussian_noise(gray, 1.0, 2718);
  double var = 0.0;
  for (std::size_t i = 0; i < noisy.data.size(); ++i) {
    const double d = noisy.data[i] - gray.data[i];
    var += d * d;
  }
  const double sample_std = std::sqrt(var / noisy.data.size());
  CHECK(sample_std == doctest::Approx(0.2).epsilon(0.05));

  for (double v : noisy.data) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("resample_degrade: identity, constants, monotone PSNR") {
  SplitMix64 rng(22);
  const ImagePlane p = testsupport::random_plane(rng, 64, 64);
  const ImagePlane same = resample_degrade(p, 0.0);
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    CHECK(std::abs(same.data[i] - p.data[i]) < 1e-9);
  }

  const ImagePlane flat(32, 32, 0.25);
  const ImagePlane worked = resample_degrade(flat, 0.8);
  for (double v : worked.data) CHECK(std::abs(v - 0.25) < 1e-12);

  double prev = std::numeric_limits<double>::infinity();
  for (double s : {0.25, 0.5, 0.75}) {
    const double quality = testsupport::psnr(p, resample_degrade(p, s));
    CHECK(quality < prev);
    prev = quality;
  }
}

TEST_CASE("haar_dwt2 closed forms") {
  const ImagePlane flat(6, 4, 0.3);
  const WaveletQuad q = haar_dwt2(flat);
  CHECK(q.ll.height == 3);
  CHECK(q.ll.width == 2);
  for (double v : q.ll.data) CHECK(v == doctest::Approx(0.6).epsilon(1e-15));
  for (const ImagePlane* band : {&q.lh, &q.hl, &q.hh}) {
    for (double v : band->data) CHECK(v == 0.0);
  }

  ImagePlane corner(2, 2, 0.0);
  corner.at(0, 0) = 1.0;
  const WaveletQuad qc = haar_dwt2(corner);
  CHECK(qc.ll.at(0, 0) == 0.5);
  CHECK(qc.lh.at(0, 0) == 0.5);
  CHECK(qc.hl.at(0, 0) == 0.5);
  CHECK(qc.hh.at(0, 0) == 0.5);

  CHECK_THROWS_AS(haar_dwt2(ImagePlane(3, 4, 0.0)), OddDimensions);
  CHECK_THROWS_AS(haar_dwt2(ImagePlane(4, 5, 0.0)), OddDimensions);
}

TEST_CASE("haar transform preserves energy and round-trips both ways") {
  SplitMix64 rng(30);
  for (int t = 0; t < 20; ++t) {
    const std::size_t h = 2 * (1 + rng.next_below(32));
    const std::size_t w = 2 * (1 + rng.next_below(32));
    const ImagePlane p = testsupport::random_plane(rng, h, w);

    const WaveletQuad q = haar_dwt2(p);
    double in_energy = 0.0, out_energy = 0.0;
    for (double v : p.data) in_energy += v * v;
    for (const ImagePlane* band : {&q.ll, &q.lh, &q.hl, &q.hh}) {
      for (double v : band->data) out_energy += v * v;
    }
    CHECK(std::abs(in_energy - out_energy) < 1e-10);

    const ImagePlane back = haar_idwt2(q);
    REQUIRE(back.data.size() == p.data.size());
    for (std::size_t i = 0; i < p.data.size(); ++i) {
      CHECK(std::abs(back.data[i] - p.data[i]) < 1e-10);
    }

    // dwt(idwt(q)) == q as well.
    const WaveletQuad q2 = haar_dwt2(back);
    for (std::size_t i = 0; i < q.ll.data.size(); ++i) {
      CHECK(std::abs(q2.ll.data[i] - q.ll.data[i]) < 1e-10);
      CHECK(std::abs(q2.hh.data[i] - q.hh.data[i]) < 1e-10);
    }
  }

  const WaveletQuad zeros{ImagePlane(2, 2, 0.0), ImagePlane(2, 2, 0.0),
                          ImagePlane(2, 2, 0.0), ImagePlane(2, 2, 0.0)};
  for (double v : haar_idwt2(zeros).data) CHECK(v == 0.0);

  const WaveletQuad bad{ImagePlane(2, 2, 0.0), ImagePlane(2, 3, 0.0),
                        ImagePlane(2, 2, 0.0), ImagePlane(2, 2, 0.0)};
  CHECK_THROWS_AS(haar_idwt2(bad), ShapeMismatch);
}

TEST_CASE("swa_average: means, steps, validation") {
  const std::vector<WeightSnapshot> pair = {{10, {0.0, 2.0}}, {20, {2.0, 0.0}}};
  const WeightSnapshot avg = swa_average(pair);
  CHECK(avg.weights == std::vector<double>{1.0, 1.0});
  CHECK(avg.step == 20);

  const std::vector<WeightSnapshot> same = {{1, {0.5, 0.25}},
                                            {2, {0.5, 0.25}}};
  CHECK(swa_average(same).weights == std::vector<double>{0.5, 0.25});

  const std::vector<WeightSnapshot> swapped = {pair[1], pair[0]};
  CHECK(swa_average(swapped).weights == avg.weights);

  CHECK_THROWS_AS(swa_average({}), EmptyList);
  const std::vector<WeightSnapshot> ragged = {{1, {1.0}}, {2, {1.0, 2.0}}};
  CHECK_THROWS_AS(swa_average(ragged), LengthMismatch);
}

TEST_CASE("swa_average commutes with affine maps") {
  SplitMix64 rng(41);
  std::vector<WeightSnapshot> snaps;
  for (int i = 0; i < 4; ++i) {
    WeightSnapshot s{i, {}};
    for (int j = 0; j < 6; ++j) s.weights.push_back(rng.next_gaussian());
    snaps.push_back(std::move(s));
  }
  const WeightSnapshot base = swa_average(snaps);

  std::vector<WeightSnapshot> mapped = snaps;
  for (WeightSnapshot& s : mapped) {
    for (double& w : s.weights) w = 3.0 * w - 1.5;
  }
  const WeightSnapshot mapped_avg = swa_average(mapped);
  for (std::size_t i = 0; i < base.weights.size(); ++i) {
    CHECK(mapped_avg.weights[i] ==
          doctest::Approx(3.0 * base.weights[i] - 1.5).epsilon(1e-12));
  }
}

}  // TEST_SUITE
