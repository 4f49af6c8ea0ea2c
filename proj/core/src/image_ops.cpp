#include "fiqa/image_ops.hpp"

#include <algorithm>
#include <cmath>

#include "fiqa/errors.hpp"
#include "fiqa/rng.hpp"

namespace fiqa::img {

namespace {

// Whole-sample symmetric reflection: -1 -> 1, n -> n-2. Folds any index
// into [0, n), so kernels wider than the plane still behave.
std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const std::ptrdiff_t period = 2 * static_cast<std::ptrdiff_t>(n) - 2;
  i = ((i % period) + period) % period;
  return static_cast<std::size_t>(i < static_cast<std::ptrdiff_t>(n)
                                      ? i
                                      : period - i);
}

std::vector<double> gaussian_kernel(double sigma) {
  const std::ptrdiff_t radius =
      static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(static_cast<double>(i * i)) /
                              (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

double round_half_up(double x) { return std::floor(x + 0.5); }

}  // namespace

std::pair<std::size_t, std::size_t> resize_short_side(std::size_t h,
                                                      std::size_t w,
                                                      std::size_t target) {
  if (h < 1 || w < 1 || target < 1) {
    throw NonPositiveDim("resize_short_side: dims and target must be >= 1");
  }
  const double scale =
      static_cast<double>(target) / static_cast<double>(std::min(h, w));
  if (h <= w) {
    return {target, static_cast<std::size_t>(
                        round_half_up(static_cast<double>(w) * scale))};
  }
  return {static_cast<std::size_t>(
              round_half_up(static_cast<double>(h) * scale)),
          target};
}

ImagePlane bilinear_resize(const ImagePlane& p, std::size_t out_h,
                           std::size_t out_w) {
  if (out_h < 1 || out_w < 1) {
    throw NonPositiveDim("bilinear_resize: target dims must be >= 1");
  }
  if (out_h == p.height && out_w == p.width) return p;

  ImagePlane out(out_h, out_w);
  const double sy =
      static_cast<double>(p.height) / static_cast<double>(out_h);
  const double sx = static_cast<double>(p.width) / static_cast<double>(out_w);
  const double max_r = static_cast<double>(p.height - 1);
  const double max_c = static_cast<double>(p.width - 1);
  for (std::size_t r = 0; r < out_h; ++r) {
    const double fr = std::clamp(
        (static_cast<double>(r) + 0.5) * sy - 0.5, 0.0, max_r);
    const auto r0 = static_cast<std::size_t>(fr);
    const std::size_t r1 = std::min(r0 + 1, p.height - 1);
    const double tr = fr - static_cast<double>(r0);
    for (std::size_t c = 0; c < out_w; ++c) {
      const double fc = std::clamp(
          (static_cast<double>(c) + 0.5) * sx - 0.5, 0.0, max_c);
      const auto c0 = static_cast<std::size_t>(fc);
      const std::size_t c1 = std::min(c0 + 1, p.width - 1);
      const double tc = fc - static_cast<double>(c0);
      const double top =
          p.at(r0, c0) * (1.0 - tc) + p.at(r0, c1) * tc;
      const double bot =
          p.at(r1, c0) * (1.0 - tc) + p.at(r1, c1) * tc;
      out.at(r, c) = top * (1.0 - tr) + bot * tr;
    }
  }
  return out;
}

ImagePlane crop(const ImagePlane& p, const CropRect& r) {
  if (r.height < 1 || r.width < 1 || r.top + r.height > p.height ||
      r.left + r.width > p.width) {
    throw CropTooLarge("crop: rect does not fit inside the plane");
  }
  ImagePlane out(r.height, r.width);
  for (std::size_t rr = 0; rr < r.height; ++rr) {
    for (std::size_t cc = 0; cc < r.width; ++cc) {
      out.at(rr, cc) = p.at(r.top + rr, r.left + cc);
    }
  }
  return out;
}

CropRect center_crop(std::size_t h, std::size_t w, std::size_t crop_h,
                     std::size_t crop_w) {
  if (crop_h > h || crop_w > w || crop_h < 1 || crop_w < 1) {
    throw CropTooLarge("center_crop: crop dims must be in [1, source dims]");
  }
  return CropRect{(h - crop_h) / 2, (w - crop_w) / 2, crop_h, crop_w};
}

std::vector<CropRect> random_crops(std::size_t h, std::size_t w,
                                   std::size_t crop_h, std::size_t crop_w,
                                   std::size_t n, std::uint64_t seed) {
  if (crop_h > h || crop_w > w || crop_h < 1 || crop_w < 1) {
    throw CropTooLarge("random_crops: crop dims must be in [1, source dims]");
  }
  SplitMix64 rng(seed);
  std::vector<CropRect> rects;
  rects.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t top = rng.next_below(h - crop_h + 1);
    const std::size_t left = rng.next_below(w - crop_w + 1);
    rects.push_back(CropRect{top, left, crop_h, crop_w});
  }
  return rects;
}

double aggregate_patch_scores(std::span<const double> scores) {
  if (scores.empty()) throw EmptyList("aggregate_patch_scores: no scores");
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

ImagePlane gaussian_blur(const ImagePlane& p, double severity,
                         const DegradeConfig& cfg) {
  const double sigma = severity * cfg.blur_sigma_max;
  if (sigma <= 0.0) return p;

  const std::vector<double> k = gaussian_kernel(sigma);
  const auto radius = static_cast<std::ptrdiff_t>(k.size() / 2);

  // Horizontal pass, then vertical.
  ImagePlane mid(p.height, p.width);
  for (std::size_t r = 0; r < p.height; ++r) {
    for (std::size_t c = 0; c < p.width; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
        const std::size_t cc =
            reflect(static_cast<std::ptrdiff_t>(c) + i, p.width);
        acc += k[static_cast<std::size_t>(i + radius)] * p.at(r, cc);
      }
      mid.at(r, c) = acc;
    }
  }
  ImagePlane out(p.height, p.width);
  for (std::size_t r = 0; r < p.height; ++r) {
    for (std::size_t c = 0; c < p.width; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
        const std::size_t rr =
            reflect(static_cast<std::ptrdiff_t>(r) + i, p.height);
        acc += k[static_cast<std::size_t>(i + radius)] * mid.at(rr, c);
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

ImagePlane gaussian_noise(const ImagePlane& p, double severity,
                          std::uint64_t seed, const DegradeConfig& cfg) {
  const double std_dev = severity * cfg.noise_std_max;
  if (std_dev <= 0.0) return p;

  SplitMix64 rng(seed);
  ImagePlane out = p;
  for (double& v : out.data) {
    v = std::clamp(v + std_dev * rng.next_gaussian(), 0.0, 1.0);
  }
  return out;
}

ImagePlane resample_degrade(const ImagePlane& p, double severity,
                            const DegradeConfig& cfg) {
  const double factor = 1.0 - severity * cfg.resample_max_down;
  if (factor >= 1.0) return p;

  const auto down_h = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             round_half_up(static_cast<double>(p.height) * factor)));
  const auto down_w = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             round_half_up(static_cast<double>(p.width) * factor)));
  return bilinear_resize(bilinear_resize(p, down_h, down_w), p.height,
                         p.width);
}

WaveletQuad haar_dwt2(const ImagePlane& p) {
  if (p.height % 2 != 0 || p.width % 2 != 0) {
    throw OddDimensions("haar_dwt2: plane dims must be even, got " +
                        std::to_string(p.height) + "x" +
                        std::to_string(p.width));
  }
  const std::size_t hh = p.height / 2;
  const std::size_t hw = p.width / 2;
  WaveletQuad q{ImagePlane(hh, hw), ImagePlane(hh, hw), ImagePlane(hh, hw),
                ImagePlane(hh, hw)};
  for (std::size_t r = 0; r < hh; ++r) {
    for (std::size_t c = 0; c < hw; ++c) {
      const double a = p.at(2 * r, 2 * c);
      const double b = p.at(2 * r, 2 * c + 1);
      const double cc = p.at(2 * r + 1, 2 * c);
      const double d = p.at(2 * r + 1, 2 * c + 1);
      q.ll.at(r, c) = (a + b + cc + d) / 2.0;
      q.lh.at(r, c) = (a - b + cc - d) / 2.0;
      q.hl.at(r, c) = (a + b - cc - d) / 2.0;
      q.hh.at(r, c) = (a - b - cc + d) / 2.0;
    }
  }
  return q;
}

ImagePlane haar_idwt2(const WaveletQuad& q) {
  const std::size_t hh = q.ll.height;
  const std::size_t hw = q.ll.width;
  const auto same = [&](const ImagePlane& band) {
    return band.height == hh && band.width == hw;
  };
  if (!same(q.lh) || !same(q.hl) || !same(q.hh)) {
    throw ShapeMismatch("haar_idwt2: sub-band dims differ");
  }
  ImagePlane out(2 * hh, 2 * hw);
  for (std::size_t r = 0; r < hh; ++r) {
    for (std::size_t c = 0; c < hw; ++c) {
      const double ll = q.ll.at(r, c);
      const double lh = q.lh.at(r, c);
      const double hl = q.hl.at(r, c);
      const double hhv = q.hh.at(r, c);
      out.at(2 * r, 2 * c) = (ll + lh + hl + hhv) / 2.0;
      out.at(2 * r, 2 * c + 1) = (ll - lh + hl - hhv) / 2.0;
      out.at(2 * r + 1, 2 * c) = (ll + lh - hl - hhv) / 2.0;
      out.at(2 * r + 1, 2 * c + 1) = (ll - lh - hl + hhv) / 2.0;
    }
  }
  return out;
}

WeightSnapshot swa_average(std::span<const WeightSnapshot> snaps) {
  if (snaps.empty()) throw EmptyList("swa_average: no snapshots");
  const std::size_t n = snaps.front().weights.size();
  WeightSnapshot out;
  out.step = snaps.front().step;
  out.weights.assign(n, 0.0);
  for (const WeightSnapshot& s : snaps) {
    if (s.weights.size() != n) {
      throw LengthMismatch("swa_average: snapshot lengths differ (" +
                           std::to_string(s.weights.size()) + " vs " +
                           std::to_string(n) + ")");
    }
    out.step = std::max(out.step, s.step);
    for (std::size_t i = 0; i < n; ++i) out.weights[i] += s.weights[i];
  }
  for (double& w : out.weights) w /= static_cast<double>(snaps.size());
  return out;
}

}  // namespace fiqa::img
