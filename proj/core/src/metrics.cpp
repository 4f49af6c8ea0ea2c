#include "fiqa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "fiqa/errors.hpp"

namespace fiqa {

void validate(const ScoreSeries& s) {
  if (s.pred.size() != s.ids.size() || s.gt.size() != s.ids.size()) {
    throw LengthMismatch("score series columns have unequal lengths");
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : s.ids) {
    if (!seen.insert(id).second) {
      throw InputError("duplicate item_id \"" + id + "\"");
    }
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.pred[i]) || !std::isfinite(s.gt[i])) {
      throw InputError("non-finite score for item \"" + s.ids[i] + "\"");
    }
  }
}

}  // namespace fiqa

namespace fiqa::metrics {

namespace {

void require_paired(std::span<const double> pred, std::span<const double> gt) {
  if (pred.size() != gt.size()) {
    throw LengthMismatch("pred and gt lengths differ (" +
                         std::to_string(pred.size()) + " vs " +
                         std::to_string(gt.size()) + ")");
  }
  if (pred.size() < 2) {
    throw LengthMismatch("correlation needs at least 2 items, got " +
                         std::to_string(pred.size()));
  }
}

}  // namespace

double plcc(std::span<const double> pred, std::span<const double> gt) {
  require_paired(pred, gt);
  const std::size_t n = pred.size();

  double mp = 0.0, mg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mp += pred[i];
    mg += gt[i];
  }
  mp /= static_cast<double>(n);
  mg /= static_cast<double>(n);

  double spg = 0.0, spp = 0.0, sgg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = pred[i] - mp;
    const double dg = gt[i] - mg;
    spg += dp * dg;
    spp += dp * dp;
    sgg += dg * dg;
  }
  if (spp == 0.0 || sgg == 0.0) {
    throw DegenerateVariance("correlation undefined: constant vector");
  }
  return spg / std::sqrt(spp * sgg);
}

double plcc(const ScoreSeries& s) { return plcc(s.preds(), s.gts()); }

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the mean 1-based rank
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double srocc(std::span<const double> pred, std::span<const double> gt) {
  require_paired(pred, gt);
  const std::vector<double> rp = average_ranks(pred);
  const std::vector<double> rg = average_ranks(gt);
  return plcc(rp, rg);
}

double srocc(const ScoreSeries& s) { return srocc(s.preds(), s.gts()); }

double challenge_score(double srocc_value, double plcc_value) {
  if (!std::isfinite(srocc_value) || !std::isfinite(plcc_value)) {
    throw InputError("challenge_score requires finite inputs");
  }
  return (srocc_value + plcc_value) / 2.0;
}

std::vector<LeaderboardEntry> build_leaderboard(
    std::vector<LeaderboardRow> rows) {
  std::unordered_set<std::string> seen;
  for (const auto& row : rows) {
    if (!seen.insert(row.team).second) {
      throw DuplicateTeam("duplicate team \"" + row.team + "\"");
    }
  }

  std::vector<LeaderboardEntry> entries;
  entries.reserve(rows.size());
  for (auto& row : rows) {
    LeaderboardEntry e;
    e.team = std::move(row.team);
    e.srocc = row.srocc;
    e.plcc = row.plcc;
    e.score = challenge_score(row.srocc, row.plcc);
    e.gflops = row.gflops;
    e.params_millions = row.params_millions;
    entries.push_back(std::move(e));
  }

  std::sort(entries.begin(), entries.end(),
            [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.team < b.team;
            });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].rank = static_cast<int>(i + 1);
  }
  return entries;
}

}  // namespace fiqa::metrics
