#include "fiqa/sampling.hpp"

#include <cmath>

#include "fiqa/errors.hpp"
#include "fiqa/rng.hpp"

namespace fiqa::sampling {

namespace {

// bin = min(floor(score * B), B - 1): right-open bins, last right-closed.
std::size_t bin_of(double score, std::size_t num_bins) {
  const auto b = static_cast<std::size_t>(
      std::floor(score * static_cast<double>(num_bins)));
  return std::min(b, num_bins - 1);
}

}  // namespace

StratifiedPlan build_strata(std::span<const ScoredItem> items,
                            std::size_t num_bins) {
  if (num_bins < 1) {
    throw InputError("build_strata: num_bins must be >= 1");
  }
  StratifiedPlan plan;
  plan.bin_edges.resize(num_bins + 1);
  for (std::size_t i = 0; i <= num_bins; ++i) {
    plan.bin_edges[i] =
        static_cast<double>(i) / static_cast<double>(num_bins);
  }
  plan.bins.resize(num_bins);
  for (const ScoredItem& item : items) {
    if (!(item.score >= 0.0 && item.score <= 1.0)) {
      throw ScoreOutOfRange("build_strata: score " +
                            std::to_string(item.score) + " for item \"" +
                            item.id + "\" is outside [0, 1]");
    }
    plan.bins[bin_of(item.score, num_bins)].push_back(item.id);
  }
  return plan;
}

StratifiedPlan draw(const StratifiedPlan& plan, std::size_t n,
                    std::uint64_t seed) {
  std::vector<std::size_t> nonempty;
  for (std::size_t b = 0; b < plan.bins.size(); ++b) {
    if (!plan.bins[b].empty()) nonempty.push_back(b);
  }
  if (nonempty.empty()) {
    throw AllBinsEmpty("draw: plan has no items to draw from");
  }

  StratifiedPlan out = plan;
  out.draws.clear();
  out.draws.reserve(n);
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = nonempty[rng.next_below(nonempty.size())];
    const std::vector<std::string>& bin = plan.bins[b];
    out.draws.push_back(Draw{b, bin[rng.next_below(bin.size())]});
  }
  return out;
}

std::vector<ScoredItem> tail_oversample(std::span<const ScoredItem> items,
                                        double low, double high, int factor) {
  if (factor < 1) {
    throw InputError("tail_oversample: factor must be >= 1");
  }
  std::vector<ScoredItem> out;
  out.reserve(items.size());
  for (const ScoredItem& item : items) {
    out.push_back(item);
    if (item.score < low || item.score > high) {
      for (int k = 1; k < factor; ++k) {
        out.push_back(
            ScoredItem{item.id + "#" + std::to_string(k), item.score});
      }
    }
  }
  return out;
}

DegradationKind degradation_kind_from_name(const std::string& name) {
  if (name == "gaussian_blur" || name == "blur") {
    return DegradationKind::gaussian_blur;
  }
  if (name == "gaussian_noise" || name == "noise") {
    return DegradationKind::gaussian_noise;
  }
  if (name == "resample") return DegradationKind::resample;
  throw UnknownKind("unknown degradation \"" + name +
                    "\"; supported: gaussian_blur, gaussian_noise, resample");
}

std::string degradation_kind_name(DegradationKind kind) {
  switch (kind) {
    case DegradationKind::gaussian_blur:
      return "gaussian_blur";
    case DegradationKind::gaussian_noise:
      return "gaussian_noise";
    case DegradationKind::resample:
      return "resample";
  }
  throw UnknownKind("unnamed degradation kind");
}

img::ImagePlane apply_degradation(const img::ImagePlane& p,
                                  const DegradationSpec& spec,
                                  const img::DegradeConfig& cfg) {
  if (!(spec.severity >= 0.0 && spec.severity <= 1.0)) {
    throw ScoreOutOfRange("apply_degradation: severity " +
                          std::to_string(spec.severity) +
                          " is outside [0, 1]");
  }
  switch (spec.kind) {
    case DegradationKind::gaussian_blur:
      return img::gaussian_blur(p, spec.severity, cfg);
    case DegradationKind::gaussian_noise:
      return img::gaussian_noise(p, spec.severity, spec.seed, cfg);
    case DegradationKind::resample:
      return img::resample_degrade(p, spec.severity, cfg);
  }
  throw UnknownKind("apply_degradation: unhandled kind");
}

std::vector<SsarPair> make_ssar_pairs(std::span<const NamedPlane> images,
                                      std::span<const DegradationSpec> specs,
                                      const img::DegradeConfig& cfg) {
  std::vector<SsarPair> pairs;
  pairs.reserve(images.size() * specs.size());
  for (const NamedPlane& image : images) {
    for (const DegradationSpec& spec : specs) {
      pairs.push_back(SsarPair{image.id, image.plane,
                               apply_degradation(image.plane, spec, cfg),
                               spec.severity});
    }
  }
  return pairs;
}

}  // namespace fiqa::sampling
