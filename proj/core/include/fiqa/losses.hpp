#pragma once

#include <cstdint>
#include <vector>

#include "fiqa/score_series.hpp"

namespace fiqa::losses {

// Scalar loss value plus its analytic gradient. Every gradient in this
// module is d(loss)/d(prediction); ground truth is never differentiated.
struct LossResult {
  double value = 0.0;
  std::vector<double> grad;
};

// Mean squared error: (1/N) sum (gt_i - pred_i)^2.
LossResult mse_loss(const ScoreSeries& s);

// 1 - Pearson(gt, pred). Value in [0, 2]. Throws DegenerateVariance when
// either vector is constant; callers wanting a fallback must handle it.
LossResult pearson_corr_loss(const ScoreSeries& s);

// mse + alpha * pearson_corr.
LossResult mse_corr_loss(const ScoreSeries& s, double alpha);

// Mean over all N(N-1) ordered pairs of log(1 + exp(-(p_i - p_j) *
// sign(g_i - g_j))). Tied ground truths give sign 0: a constant log 2
// contribution with zero gradient. Uses a log1p-exp form that is stable
// for large prediction gaps.
LossResult pairwise_rank_loss(const ScoreSeries& s);

// alpha * pearson_corr + (1 - alpha) * pairwise_rank.
LossResult corr_composite_loss(const ScoreSeries& s, double alpha);

// Label smoothing plus focal weighting:
//   target_i = gt_i + epsilon * N(0,1)   (one seeded draw per item)
//   d_i      = pred_i - target_i
//   loss_i   = scale * (1 - exp(-d_i^2))^gamma * d_i^2
// averaged over items. The smoothed target is treated as a constant in the
// gradient. epsilon = 0 makes the call fully deterministic.
LossResult focal_label_smoothing_loss(const ScoreSeries& s, double epsilon,
                                      double gamma, double scale,
                                      std::uint64_t seed);

// lambda * corr_composite(alpha) + (1 - lambda) * focal_label_smoothing.
LossResult conquerit_total_loss(const ScoreSeries& s, double alpha,
                                double lambda, double epsilon, double gamma,
                                double scale, std::uint64_t seed);

// The two wing branches meet at |x| = w when C = w - w*ln(1 + w/epsilon).
double wing_continuity_constant(double w, double epsilon);

// Per-item wing loss on x_i = pred_i - gt_i, averaged:
//   w * ln(1 + |x|/epsilon)  if |x| < w,  else |x| - C.
LossResult wing_loss(const ScoreSeries& s, double w = 0.03,
                     double epsilon = 2.0);

// alpha * wing + beta * pearson_corr.
LossResult coreface_loss(const ScoreSeries& s, double alpha, double beta,
                         double w = 0.03, double epsilon = 2.0);

// One (clean, degraded) prediction pair with the degradation severity that
// produced it.
struct RankedPair {
  double pred_clean = 0.0;
  double pred_degraded = 0.0;
  double severity = 0.0;  // in [0, 1]
};

struct RankedPairBatch {
  std::vector<RankedPair> pairs;
};

// Severity-adaptive ranking hinge, mean over pairs:
//   max(0, -(pred_clean - pred_degraded) + lambda * severity)
// Gradient layout: grad[2i] is d/d(pred_clean_i), grad[2i+1] is
// d/d(pred_degraded_i). Subgradient 0 exactly at the hinge point.
LossResult ssar_loss(const RankedPairBatch& batch, double lambda);

}  // namespace fiqa::losses
