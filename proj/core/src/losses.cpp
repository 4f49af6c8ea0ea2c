#include "fiqa/losses.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "fiqa/errors.hpp"
#include "fiqa/rng.hpp"

namespace fiqa::losses {

namespace {

void require_series(const ScoreSeries& s, std::size_t min_len,
                    const char* loss) {
  if (s.pred.size() != s.gt.size()) {
    throw LengthMismatch(std::string(loss) + ": pred and gt lengths differ");
  }
  if (s.size() < min_len) {
    throw EmptySeries(std::string(loss) + ": needs at least " +
                      std::to_string(min_len) + " items, got " +
                      std::to_string(s.size()));
  }
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// log(1 + exp(z)) without overflow for large z.
double log1p_exp(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

LossResult weighted_sum(const LossResult& a, double wa, const LossResult& b,
                        double wb) {
  LossResult out;
  out.value = wa * a.value + wb * b.value;
  out.grad.resize(a.grad.size());
  for (std::size_t i = 0; i < out.grad.size(); ++i) {
    out.grad[i] = wa * a.grad[i] + wb * b.grad[i];
  }
  return out;
}

// Core of the focal loss with the smoothed targets already fixed.
LossResult focal_core(std::span<const double> pred,
                      std::span<const double> target, double gamma,
                      double scale) {
  const std::size_t n = pred.size();
  LossResult out;
  out.grad.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pred[i] - target[i];
    const double d2 = d * d;
    const double e = std::exp(-d2);
    const double base = 1.0 - e;  // in [0,1)
    const double w = gamma == 0.0 ? 1.0 : std::pow(base, gamma);
    out.value += scale * w * d2;
    // dL/dd = scale * 2d * (w + gamma * d^2 * e * base^(gamma-1));
    // the second term vanishes as d -> 0 for gamma > 0, so guard base = 0
    // rather than evaluate 0^(gamma-1).
    double dw_term = 0.0;
    if (gamma != 0.0 && base > 0.0) {
      dw_term = gamma * d2 * e * std::pow(base, gamma - 1.0);
    }
    out.grad[i] = scale * 2.0 * d * (w + dw_term) / static_cast<double>(n);
  }
  out.value /= static_cast<double>(n);
  return out;
}

}  // namespace

LossResult mse_loss(const ScoreSeries& s) {
  require_series(s, 1, "mse_loss");
  const std::size_t n = s.size();
  LossResult out;
  out.grad.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = s.gt[i] - s.pred[i];
    out.value += r * r;
    out.grad[i] = -2.0 * r / static_cast<double>(n);
  }
  out.value /= static_cast<double>(n);
  return out;
}

LossResult pearson_corr_loss(const ScoreSeries& s) {
  require_series(s, 2, "pearson_corr_loss");
  const std::size_t n = s.size();
  double gm = 0.0, pm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    gm += s.gt[i];
    pm += s.pred[i];
  }
  gm /= static_cast<double>(n);
  pm /= static_cast<double>(n);

  double sgg = 0.0, spp = 0.0, sgp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dg = s.gt[i] - gm;
    const double dp = s.pred[i] - pm;
    sgg += dg * dg;
    spp += dp * dp;
    sgp += dg * dp;
  }
  if (spp == 0.0) {
    throw DegenerateVariance("pearson_corr_loss: predictions are constant");
  }
  if (sgg == 0.0) {
    throw DegenerateVariance("pearson_corr_loss: ground truth is constant");
  }

  const double denom = std::sqrt(sgg * spp);
  LossResult out;
  out.value = 1.0 - sgp / denom;
  out.grad.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dg = s.gt[i] - gm;
    const double dp = s.pred[i] - pm;
    // d(pearson)/d(pred_i), negated for the loss.
    out.grad[i] = -(dg - (sgp / spp) * dp) / denom;
  }
  return out;
}

LossResult mse_corr_loss(const ScoreSeries& s, double alpha) {
  return weighted_sum(mse_loss(s), 1.0, pearson_corr_loss(s), alpha);
}

LossResult pairwise_rank_loss(const ScoreSeries& s) {
  require_series(s, 2, "pairwise_rank_loss");
  const std::size_t n = s.size();
  const double m = static_cast<double>(n) * static_cast<double>(n - 1);
  LossResult out;
  out.grad.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double sg = sign(s.gt[i] - s.gt[j]);
      const double z = -(s.pred[i] - s.pred[j]) * sg;
      out.value += log1p_exp(z);
      if (sg != 0.0) {
        const double sig = 1.0 / (1.0 + std::exp(-z));  // d log1p_exp / dz
        out.grad[i] += -sg * sig / m;
        out.grad[j] += sg * sig / m;
      }
    }
  }
  out.value /= m;
  return out;
}

LossResult corr_composite_loss(const ScoreSeries& s, double alpha) {
  return weighted_sum(pearson_corr_loss(s), alpha, pairwise_rank_loss(s),
                      1.0 - alpha);
}

LossResult focal_label_smoothing_loss(const ScoreSeries& s, double epsilon,
                                      double gamma, double scale,
                                      std::uint64_t seed) {
  require_series(s, 1, "focal_label_smoothing_loss");
  std::vector<double> target(s.gt.begin(), s.gt.end());
  if (epsilon != 0.0) {
    SplitMix64 rng(seed);
    for (double& t : target) t += epsilon * rng.next_gaussian();
  }
  return focal_core(s.preds(), target, gamma, scale);
}

LossResult conquerit_total_loss(const ScoreSeries& s, double alpha,
                                double lambda, double epsilon, double gamma,
                                double scale, std::uint64_t seed) {
  return weighted_sum(
      corr_composite_loss(s, alpha), lambda,
      focal_label_smoothing_loss(s, epsilon, gamma, scale, seed), 1.0 - lambda);
}

double wing_continuity_constant(double w, double epsilon) {
  return w - w * std::log1p(w / epsilon);
}

LossResult wing_loss(const ScoreSeries& s, double w, double epsilon) {
  require_series(s, 1, "wing_loss");
  if (w <= 0.0 || epsilon <= 0.0) {
    throw InputError("wing_loss: w and epsilon must be positive");
  }
  const double c = wing_continuity_constant(w, epsilon);
  const std::size_t n = s.size();
  LossResult out;
  out.grad.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.pred[i] - s.gt[i];
    const double ax = std::abs(x);
    if (ax < w) {
      out.value += w * std::log1p(ax / epsilon);
      out.grad[i] = (w / (epsilon + ax)) * sign(x) / static_cast<double>(n);
    } else {
      out.value += ax - c;
      out.grad[i] = sign(x) / static_cast<double>(n);
    }
  }
  out.value /= static_cast<double>(n);
  return out;
}

LossResult coreface_loss(const ScoreSeries& s, double alpha, double beta,
                         double w, double epsilon) {
  return weighted_sum(wing_loss(s, w, epsilon), alpha, pearson_corr_loss(s),
                      beta);
}

LossResult ssar_loss(const RankedPairBatch& batch, double lambda) {
  if (batch.pairs.empty()) throw EmptyBatch("ssar_loss: batch is empty");
  const std::size_t n = batch.pairs.size();
  LossResult out;
  out.grad.assign(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const RankedPair& p = batch.pairs[i];
    const double h =
        -(p.pred_clean - p.pred_degraded) + lambda * p.severity;
    if (h > 0.0) {
      out.value += h;
      out.grad[2 * i] = -1.0 / static_cast<double>(n);
      out.grad[2 * i + 1] = 1.0 / static_cast<double>(n);
    }
  }
  out.value /= static_cast<double>(n);
  return out;
}

}  // namespace fiqa::losses
