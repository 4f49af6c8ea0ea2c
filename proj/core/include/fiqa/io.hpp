#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fiqa/budget.hpp"
#include "fiqa/image_ops.hpp"
#include "fiqa/metrics.hpp"
#include "fiqa/sampling.hpp"
#include "fiqa/score_series.hpp"

namespace fiqa::io {

// ---- score CSVs -----------------------------------------------------------
// Format: UTF-8 CSV with header `item_id,score`, one record per line.

std::vector<sampling::ScoredItem> read_score_csv(const std::string& path);

// Joins prediction and ground-truth records on item_id. Any id present in
// one file but not the other raises LengthMismatch naming the id.
ScoreSeries join_scores(const std::vector<sampling::ScoredItem>& preds,
                        const std::vector<sampling::ScoredItem>& gts);

// ---- leaderboard CSVs -------------------------------------------------------
// Input header:  team,srocc,plcc,gflops,params_m
// Output header: rank,team,score,srocc,plcc,gflops,params_m
//                (+ flops_ok,params_ok when budget flags are requested);
// score is printed at 4 decimals.

std::vector<metrics::LeaderboardRow> read_results_csv(const std::string& path);

void write_leaderboard_csv(std::ostream& out,
                           const std::vector<metrics::LeaderboardEntry>& entries,
                           bool with_budget_flags = false,
                           budget::BudgetLimits limits = {});

// ---- PGM planes -------------------------------------------------------------
// Binary 8-bit PGM (P5, maxval 255); byte values map linearly to [0, 1].

img::ImagePlane read_pgm(const std::string& path);
void write_pgm(const std::string& path, const img::ImagePlane& plane);

// ---- weight snapshots -------------------------------------------------------
// Flat little-endian binary: u64 element count, then that many f64 values.

std::vector<double> read_snapshot(const std::string& path);
void write_snapshot(const std::string& path,
                    const std::vector<double>& weights);

}  // namespace fiqa::io
