#include "fiqa/gradcheck.hpp"

#include <cmath>
#include <cstddef>

#include "fiqa/errors.hpp"
#include "fiqa/losses.hpp"
#include "fiqa/rng.hpp"

namespace fiqa::gradcheck {

std::vector<double> central_difference(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double h) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> fd(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = probe[i];
    probe[i] = xi + h;
    const double fp = f(probe);
    probe[i] = xi - h;
    const double fm = f(probe);
    probe[i] = xi;
    fd[i] = (fp - fm) / (2.0 * h);
  }
  return fd;
}

double max_relative_error(std::span<const double> fd,
                          std::span<const double> analytic) {
  if (fd.size() != analytic.size()) {
    throw LengthMismatch("max_relative_error: vector lengths differ");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    const double denom = std::max(1.0, std::abs(analytic[i]));
    worst = std::max(worst, std::abs(fd[i] - analytic[i]) / denom);
  }
  return worst;
}

namespace {

using losses::LossResult;
using losses::RankedPair;
using losses::RankedPairBatch;

// A random series whose ground truths are well separated (no sign ties for
// the rank loss) and whose prediction errors stay clear of the wing branch
// boundary |x| = w = 0.03.
ScoreSeries random_series(SplitMix64& rng, std::size_t n) {
  ScoreSeries s;
  for (std::size_t i = 0; i < n; ++i) {
    // Distinct gts: jittered lattice with gaps >= 0.02.
    const double gt =
        0.1 * static_cast<double>(i) + 0.04 * rng.next_unit() + 0.01;
    // Error magnitude in [0.05, 0.45]: outside the wing log region by a
    // comfortable margin relative to h = 1e-6.
    const double mag = 0.05 + 0.4 * rng.next_unit();
    const double dir = rng.next() & 1 ? 1.0 : -1.0;
    s.add("p" + std::to_string(i), gt + dir * mag, gt);
  }
  return s;
}

// Pairs kept away from the hinge boundary: the slack |gap - margin| is at
// least 0.05 in either direction.
RankedPairBatch random_batch(SplitMix64& rng, std::size_t n, double lambda) {
  RankedPairBatch b;
  for (std::size_t i = 0; i < n; ++i) {
    RankedPair p;
    p.severity = rng.next_unit();
    const double margin = lambda * p.severity;
    const double slack = 0.05 + 0.3 * rng.next_unit();
    const double gap = rng.next() & 1 ? margin + slack : margin - slack;
    p.pred_degraded = rng.next_unit();
    p.pred_clean = p.pred_degraded + gap;
    b.pairs.push_back(p);
  }
  return b;
}

struct SeriesLoss {
  std::function<LossResult(const ScoreSeries&)> eval;
};

SeriesLoss make_series_loss(const std::string& name, std::uint64_t seed) {
  if (name == "mse") {
    return {[](const ScoreSeries& s) { return losses::mse_loss(s); }};
  }
  if (name == "pearson_corr") {
    return {[](const ScoreSeries& s) { return losses::pearson_corr_loss(s); }};
  }
  if (name == "mse_corr") {
    return {[](const ScoreSeries& s) { return losses::mse_corr_loss(s, 0.7); }};
  }
  if (name == "pairwise_rank") {
    return {[](const ScoreSeries& s) { return losses::pairwise_rank_loss(s); }};
  }
  if (name == "focal") {
    // epsilon = 0: smoothing off, so the finite-difference probes see the
    // same targets as the analytic call.
    return {[seed](const ScoreSeries& s) {
      return losses::focal_label_smoothing_loss(s, 0.0, 2.0, 1.0, seed);
    }};
  }
  if (name == "conquerit") {
    return {[seed](const ScoreSeries& s) {
      return losses::conquerit_total_loss(s, 0.5, 0.5, 0.0, 2.0, 1.0, seed);
    }};
  }
  if (name == "wing") {
    return {[](const ScoreSeries& s) { return losses::wing_loss(s); }};
  }
  if (name == "coreface") {
    return {[](const ScoreSeries& s) {
      return losses::coreface_loss(s, 0.5, 0.5);
    }};
  }
  throw UnknownKind("gradcheck: unknown loss \"" + name + "\"");
}

CheckReport check_series_loss(const std::string& name, std::uint64_t seed,
                              int points) {
  const SeriesLoss loss = make_series_loss(name, seed);
  SplitMix64 rng(seed);
  CheckReport report;
  report.loss = name;
  report.points = points;
  for (int p = 0; p < points; ++p) {
    ScoreSeries s = random_series(rng, 8);
    const LossResult res = loss.eval(s);
    const auto f = [&](std::span<const double> pred) {
      ScoreSeries probe = s;
      probe.pred.assign(pred.begin(), pred.end());
      return loss.eval(probe).value;
    };
    const std::vector<double> fd = central_difference(f, s.preds());
    report.max_rel_err =
        std::max(report.max_rel_err, max_relative_error(fd, res.grad));
  }
  return report;
}

CheckReport check_ssar(std::uint64_t seed, int points) {
  constexpr double kLambda = 0.5;
  SplitMix64 rng(seed);
  CheckReport report;
  report.loss = "ssar";
  report.points = points;
  for (int p = 0; p < points; ++p) {
    RankedPairBatch b = random_batch(rng, 6, kLambda);
    const LossResult res = losses::ssar_loss(b, kLambda);
    // Flatten to (clean_0, degraded_0, clean_1, ...) to match grad layout.
    std::vector<double> x;
    for (const RankedPair& pair : b.pairs) {
      x.push_back(pair.pred_clean);
      x.push_back(pair.pred_degraded);
    }
    const auto f = [&](std::span<const double> flat) {
      RankedPairBatch probe = b;
      for (std::size_t i = 0; i < probe.pairs.size(); ++i) {
        probe.pairs[i].pred_clean = flat[2 * i];
        probe.pairs[i].pred_degraded = flat[2 * i + 1];
      }
      return losses::ssar_loss(probe, kLambda).value;
    };
    const std::vector<double> fd = central_difference(f, x);
    report.max_rel_err =
        std::max(report.max_rel_err, max_relative_error(fd, res.grad));
  }
  return report;
}

}  // namespace

const std::vector<std::string>& known_losses() {
  static const std::vector<std::string> names = {
      "mse",   "pearson_corr", "mse_corr", "pairwise_rank", "focal",
      "conquerit", "wing",     "coreface", "ssar"};
  return names;
}

CheckReport run_loss_check(const std::string& name, std::uint64_t seed,
                           int points) {
  if (name == "ssar") return check_ssar(seed, points);
  return check_series_loss(name, seed, points);
}

std::vector<CheckReport> run_all_loss_checks(std::uint64_t seed, int points) {
  std::vector<CheckReport> reports;
  for (const std::string& name : known_losses()) {
    reports.push_back(run_loss_check(name, seed, points));
  }
  return reports;
}

}  // namespace fiqa::gradcheck
