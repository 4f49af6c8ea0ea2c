#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fiqa::img {

// Single-channel 2D plane of luminance values, nominal range [0, 1],
// row-major. Multi-channel images are handled per-plane by callers.
struct ImagePlane {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;

  ImagePlane() = default;
  ImagePlane(std::size_t h, std::size_t w, double fill = 0.0)
      : height(h), width(w), data(h * w, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * width + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * width + c]; }
  std::size_t size() const { return data.size(); }
};

struct CropRect {
  std::size_t top = 0;
  std::size_t left = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  friend bool operator==(const CropRect&, const CropRect&) = default;
};

// The four Haar sub-bands, each half the source size.
struct WaveletQuad {
  ImagePlane ll, lh, hl, hh;
};

struct WeightSnapshot {
  std::int64_t step = 0;
  std::vector<double> weights;
};

// Severity -> physical strength maps for the degradations. The defaults
// make the PSNR-monotonicity properties robustly testable; override to
// taste.
struct DegradeConfig {
  double blur_sigma_max = 5.0;    // sigma = severity * blur_sigma_max
  double noise_std_max = 0.2;     // std   = severity * noise_std_max
  double resample_max_down = 0.75;  // scale = 1 - severity * resample_max_down
};

// Short side becomes `target`; the other side scales to keep the aspect
// ratio, rounded half-up. Returns (h', w').
std::pair<std::size_t, std::size_t> resize_short_side(std::size_t h,
                                                      std::size_t w,
                                                      std::size_t target);

// Bilinear interpolation with half-pixel-centered sampling (the
// align-corners=false convention): source x = (dst_x + 0.5) * sw/dw - 0.5,
// clamped to the source extent. Exact identity when dims are unchanged.
ImagePlane bilinear_resize(const ImagePlane& p, std::size_t out_h,
                           std::size_t out_w);

ImagePlane crop(const ImagePlane& p, const CropRect& r);

// top = floor((h - crop_h)/2), left = floor((w - crop_w)/2).
CropRect center_crop(std::size_t h, std::size_t w, std::size_t crop_h,
                     std::size_t crop_w);

// n seeded rects with top/left uniform over the valid placements.
std::vector<CropRect> random_crops(std::size_t h, std::size_t w,
                                   std::size_t crop_h, std::size_t crop_w,
                                   std::size_t n, std::uint64_t seed);

// Arithmetic mean of per-patch scores.
double aggregate_patch_scores(std::span<const double> scores);

// Separable Gaussian blur, sigma = severity * blur_sigma_max, kernel radius
// ceil(3*sigma), kernel normalized to sum 1, reflect padding. Severity 0 is
// the identity.
ImagePlane gaussian_blur(const ImagePlane& p, double severity,
                         const DegradeConfig& cfg = {});

// Adds i.i.d. seeded Gaussian noise, std = severity * noise_std_max, then
// clips to [0, 1]. Severity 0 is the identity.
ImagePlane gaussian_noise(const ImagePlane& p, double severity,
                          std::uint64_t seed, const DegradeConfig& cfg = {});

// Bilinear downscale by 1 - severity * resample_max_down (dims floored at
// 1 pixel), then bilinear upscale back to the original size.
ImagePlane resample_degrade(const ImagePlane& p, double severity,
                            const DegradeConfig& cfg = {});

// Orthonormal single-level 2D Haar transform. For each 2x2 block
// [a b; c d]: LL=(a+b+c+d)/2, LH=(a-b+c-d)/2, HL=(a+b-c-d)/2,
// HH=(a-b-c+d)/2. Energy-preserving; requires even dims.
WaveletQuad haar_dwt2(const ImagePlane& p);

// Exact inverse of haar_dwt2.
ImagePlane haar_idwt2(const WaveletQuad& q);

// Element-wise mean of the snapshots; step of the result is the max input
// step. Throws EmptyList / LengthMismatch.
WeightSnapshot swa_average(std::span<const WeightSnapshot> snaps);

}  // namespace fiqa::img
