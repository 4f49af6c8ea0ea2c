#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fiqa/image_ops.hpp"

namespace fiqa::sampling {

struct ScoredItem {
  std::string id;
  double score = 0.0;  // in [0, 1]
};

struct Draw {
  std::size_t bin = 0;
  std::string item_id;

  friend bool operator==(const Draw&, const Draw&) = default;
};

// Equal-width score strata over [0, 1] plus an optional seeded draw
// sequence. Bins are right-open except the last, which is right-closed,
// so a score exactly on an interior edge lands in the higher bin.
struct StratifiedPlan {
  std::vector<double> bin_edges;                // num_bins + 1 edges, 0..1
  std::vector<std::vector<std::string>> bins;   // item ids per bin
  std::vector<Draw> draws;
};

// Partitions items into num_bins equal-width bins. Draws are left empty.
// Scores outside [0, 1] raise ScoreOutOfRange.
StratifiedPlan build_strata(std::span<const ScoredItem> items,
                            std::size_t num_bins = 10);

// n draws with replacement: pick a bin uniformly among the non-empty ones,
// then an item uniformly within it. Fully determined by the seed. The input
// plan is not modified; the returned copy carries the draw sequence.
StratifiedPlan draw(const StratifiedPlan& plan, std::size_t n,
                    std::uint64_t seed);

// Items with score < low or score > high (strict) are replicated `factor`
// times; replicas get a "#k" suffix so prediction files still join on id.
// Relative order is preserved, replicas follow their original.
std::vector<ScoredItem> tail_oversample(std::span<const ScoredItem> items,
                                        double low = 0.1, double high = 0.9,
                                        int factor = 2);

enum class DegradationKind { gaussian_blur, gaussian_noise, resample };

DegradationKind degradation_kind_from_name(const std::string& name);
std::string degradation_kind_name(DegradationKind kind);

struct DegradationSpec {
  DegradationKind kind = DegradationKind::gaussian_blur;
  double severity = 0.0;  // in [0, 1]
  std::uint64_t seed = 0;
};

// Applies one degradation spec to one plane.
img::ImagePlane apply_degradation(const img::ImagePlane& p,
                                  const DegradationSpec& spec,
                                  const img::DegradeConfig& cfg = {});

struct SsarPair {
  std::string item_id;
  img::ImagePlane clean;
  img::ImagePlane degraded;
  double severity = 0.0;
};

struct NamedPlane {
  std::string id;
  img::ImagePlane plane;
};

// Cartesian product of images x specs, image-major. Each degraded plane is
// produced by apply_degradation for that spec.
std::vector<SsarPair> make_ssar_pairs(std::span<const NamedPlane> images,
                                      std::span<const DegradationSpec> specs,
                                      const img::DegradeConfig& cfg = {});

}  // namespace fiqa::sampling
