#pragma once

#include <span>
#include <string>
#include <vector>

#include "fiqa/score_series.hpp"

namespace fiqa::metrics {

// Pearson linear correlation coefficient of pred against gt.
// Requires length >= 2 and nonzero variance in both vectors; throws
// LengthMismatch / DegenerateVariance otherwise.
double plcc(std::span<const double> pred, std::span<const double> gt);
double plcc(const ScoreSeries& s);

// Average (fractional) ranks, 1-based; ties share the mean of the
// positions they occupy.
std::vector<double> average_ranks(std::span<const double> values);

// Spearman rank-order correlation: plcc applied to the average-rank
// transform of both vectors. Same preconditions as plcc, evaluated on
// the rank vectors.
double srocc(std::span<const double> pred, std::span<const double> gt);
double srocc(const ScoreSeries& s);

// Overall challenge score: the arithmetic mean of the two metrics.
double challenge_score(double srocc_value, double plcc_value);

// One row of a results file: measured correlations plus compute cost.
struct LeaderboardRow {
  std::string team;
  double srocc = 0.0;
  double plcc = 0.0;
  double gflops = 0.0;
  double params_millions = 0.0;
};

struct LeaderboardEntry {
  std::string team;
  double srocc = 0.0;
  double plcc = 0.0;
  double score = 0.0;
  double gflops = 0.0;
  double params_millions = 0.0;
  int rank = 0;
};

// Scores every row, sorts by score descending (ties broken by team name
// ascending) and assigns ranks 1..N. Throws DuplicateTeam if two rows
// share a team name.
std::vector<LeaderboardEntry> build_leaderboard(
    std::vector<LeaderboardRow> rows);

}  // namespace fiqa::metrics
