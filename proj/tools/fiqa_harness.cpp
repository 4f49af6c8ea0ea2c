// fiqa-harness: scoring, leaderboards, budget checks, loss evaluation,
// gradient checks, sampling plans, and image degradations from one binary.
//
// Exit codes: 0 success / within budget, 1 over budget, 2 input error,
// 3 degenerate computation.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fiqa/budget.hpp"
#include "fiqa/errors.hpp"
#include "fiqa/gradcheck.hpp"
#include "fiqa/image_ops.hpp"
#include "fiqa/io.hpp"
#include "fiqa/losses.hpp"
#include "fiqa/metrics.hpp"
#include "fiqa/sampling.hpp"

namespace {

bool use_color() {
  static const bool enabled = [] {
    if (std::getenv("FIQA_HARNESS_NO_COLOR") != nullptr) return false;
    return isatty(fileno(stdout)) == 1;
  }();
  return enabled;
}

std::string green(const std::string& s) {
  return use_color() ? "\033[32m" + s + "\033[0m" : s;
}
std::string red(const std::string& s) {
  return use_color() ? "\033[31m" + s + "\033[0m" : s;
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw fiqa::InputError("cannot write \"" + out_path + "\"");
  out << text;
}

std::pair<std::size_t, std::size_t> parse_resolution(const std::string& text) {
  const std::size_t x = text.find('x');
  if (x == std::string::npos || x == 0 || x + 1 >= text.size()) {
    throw fiqa::InputError("--resolution expects HxW, e.g. 224x224");
  }
  try {
    const unsigned long h = std::stoul(text.substr(0, x));
    const unsigned long w = std::stoul(text.substr(x + 1));
    if (h < 1 || w < 1) throw fiqa::InputError("--resolution dims must be >= 1");
    return {h, w};
  } catch (const std::logic_error&) {
    throw fiqa::InputError("--resolution expects HxW, e.g. 224x224");
  }
}

struct LossOptions {
  std::string name;
  double alpha = 0.5;
  double lambda = 0.5;
  double gamma = 1.0;
  double epsilon = 0.0;  // label-smoothing default; wing uses 2.0 unless set
  bool epsilon_set = false;
  double wing_w = 0.03;
  std::uint64_t seed = 0;
};

fiqa::losses::LossResult eval_loss(const fiqa::ScoreSeries& s,
                                   const LossOptions& o) {
  using namespace fiqa::losses;
  const double wing_eps = o.epsilon_set ? o.epsilon : 2.0;
  if (o.name == "mse") return mse_loss(s);
  if (o.name == "pearson_corr") return pearson_corr_loss(s);
  if (o.name == "mse_corr") return mse_corr_loss(s, o.alpha);
  if (o.name == "pairwise_rank") return pairwise_rank_loss(s);
  if (o.name == "focal") {
    return focal_label_smoothing_loss(s, o.epsilon, o.gamma, 1.0, o.seed);
  }
  if (o.name == "conquerit") {
    return conquerit_total_loss(s, o.alpha, o.lambda, o.epsilon, o.gamma, 1.0,
                                o.seed);
  }
  if (o.name == "wing") return wing_loss(s, o.wing_w, wing_eps);
  if (o.name == "coreface") {
    return coreface_loss(s, o.alpha, 1.0, o.wing_w, wing_eps);
  }
  throw fiqa::UnknownKind(
      "unknown loss \"" + o.name +
      "\"; supported: mse, pearson_corr, mse_corr, pairwise_rank, focal, "
      "conquerit, wing, coreface");
}

int cmd_score(const std::string& pred_path, const std::string& gt_path) {
  const fiqa::ScoreSeries series = fiqa::io::join_scores(
      fiqa::io::read_score_csv(pred_path), fiqa::io::read_score_csv(gt_path));
  const double srocc = fiqa::metrics::srocc(series);
  const double plcc = fiqa::metrics::plcc(series);
  const double score = fiqa::metrics::challenge_score(srocc, plcc);
  std::printf("SROCC %.4f\n", srocc);
  std::printf("PLCC  %.4f\n", plcc);
  std::printf("Score %.4f\n", score);
  return 0;
}

int cmd_leaderboard(const std::string& results_path,
                    const std::string& out_path) {
  const auto entries =
      fiqa::metrics::build_leaderboard(fiqa::io::read_results_csv(results_path));
  std::ostringstream csv;
  fiqa::io::write_leaderboard_csv(csv, entries, /*with_budget_flags=*/true);
  emit(out_path, csv.str());
  return 0;
}

int cmd_budget(const std::string& model_path, const std::string& resolution,
               const std::string& out_path) {
  fiqa::budget::ModelSpec spec = fiqa::budget::load_model_file(model_path);
  if (!resolution.empty()) {
    const auto [h, w] = parse_resolution(resolution);
    spec.input.height = static_cast<std::int64_t>(h);
    spec.input.width = static_cast<std::int64_t>(w);
  }
  const fiqa::budget::BudgetReport report = fiqa::budget::check_budget(spec);

  std::printf("model: %s\n", spec.name.c_str());
  std::printf("input: %lldx%lldx%lld\n\n",
              static_cast<long long>(spec.input.channels),
              static_cast<long long>(spec.input.height),
              static_cast<long long>(spec.input.width));
  std::printf("%-6s %-16s %-12s %12s %14s\n", "layer", "kind", "out_shape",
              "params", "macs");
  for (const fiqa::budget::LayerReport& row : report.per_layer) {
    std::printf("%-6zu %-16s %-12s %12lld %14lld\n", row.index,
                row.kind.c_str(), row.out_shape.to_string().c_str(),
                static_cast<long long>(row.params),
                static_cast<long long>(row.macs));
  }
  std::printf("\ntotal: %.4f GFLOPs (limit %.1f), %.4f M params (limit %.1f)\n",
              report.gflops, report.flops_limit, report.params_millions,
              report.params_limit);
  std::printf("flops:  %s\n",
              (report.flops_ok ? green("PASS") : red("FAIL")).c_str());
  std::printf("params: %s\n",
              (report.params_ok ? green("PASS") : red("FAIL")).c_str());

  if (!out_path.empty()) {
    std::ostringstream csv;
    csv << "layer_index,kind,out_shape,params,macs\n";
    for (const fiqa::budget::LayerReport& row : report.per_layer) {
      csv << row.index << ',' << row.kind << ',' << row.out_shape.to_string()
          << ',' << row.params << ',' << row.macs << "\n";
    }
    emit(out_path, csv.str());
  }
  return report.within_budget() ? 0 : 1;
}

int cmd_loss_eval(const std::string& pred_path, const std::string& gt_path,
                  const LossOptions& opts) {
  const fiqa::ScoreSeries series = fiqa::io::join_scores(
      fiqa::io::read_score_csv(pred_path), fiqa::io::read_score_csv(gt_path));
  const fiqa::losses::LossResult result = eval_loss(series, opts);
  double grad_l2 = 0.0;
  for (double g : result.grad) grad_l2 += g * g;
  std::printf("loss: %s\n", opts.name.c_str());
  std::printf("n: %zu\n", series.size());
  std::printf("value: %.10g\n", result.value);
  std::printf("grad_l2: %.10g\n", std::sqrt(grad_l2));
  return 0;
}

int cmd_gradcheck(const std::string& name, std::uint64_t seed, int points) {
  using fiqa::gradcheck::CheckReport;
  std::vector<CheckReport> reports;
  if (name == "all") {
    reports = fiqa::gradcheck::run_all_loss_checks(seed, points);
  } else {
    const auto& known = fiqa::gradcheck::known_losses();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      std::string names;
      for (const std::string& k : known) {
        names += names.empty() ? k : ", " + k;
      }
      throw fiqa::UnknownKind("unknown loss \"" + name + "\"; valid: " + names +
                              ", all");
    }
    reports.push_back(fiqa::gradcheck::run_loss_check(name, seed, points));
  }
  bool all_ok = true;
  for (const CheckReport& r : reports) {
    std::printf("%-14s points %-4d max_rel_err %.3e  %s\n", r.loss.c_str(),
                r.points, r.max_rel_err,
                (r.ok() ? green("ok") : red("FAIL")).c_str());
    all_ok = all_ok && r.ok();
  }
  return all_ok ? 0 : 1;
}

int cmd_sample_plan(const std::string& input_path, std::size_t bins,
                    std::size_t n, std::uint64_t seed,
                    const std::string& out_path) {
  const auto items = fiqa::io::read_score_csv(input_path);
  const fiqa::sampling::StratifiedPlan plan =
      fiqa::sampling::draw(fiqa::sampling::build_strata(items, bins), n, seed);
  std::ostringstream csv;
  csv << "draw_index,bin,item_id\n";
  for (std::size_t i = 0; i < plan.draws.size(); ++i) {
    csv << i << ',' << plan.draws[i].bin << ',' << plan.draws[i].item_id
        << "\n";
  }
  emit(out_path, csv.str());
  return 0;
}

int cmd_degrade(const std::string& input_path, const std::string& kind,
                double severity, std::uint64_t seed,
                const std::string& out_path) {
  const fiqa::img::ImagePlane plane = fiqa::io::read_pgm(input_path);
  fiqa::sampling::DegradationSpec spec;
  spec.kind = fiqa::sampling::degradation_kind_from_name(kind);
  spec.severity = severity;
  spec.seed = seed;
  fiqa::io::write_pgm(out_path, fiqa::sampling::apply_degradation(plane, spec));
  return 0;
}

int cmd_dwt(const std::string& input_path, const std::string& out_prefix) {
  const fiqa::img::ImagePlane plane = fiqa::io::read_pgm(input_path);
  const fiqa::img::WaveletQuad quad = fiqa::img::haar_dwt2(plane);

  // Sub-band ranges exceed [0,1]; map them into the displayable range
  // (LL in [0,2] -> /2, detail bands in [-1,1] -> (v+1)/2).
  const auto scaled = [](const fiqa::img::ImagePlane& band, double mul,
                         double add) {
    fiqa::img::ImagePlane out = band;
    for (double& v : out.data) v = v * mul + add;
    return out;
  };
  fiqa::io::write_pgm(out_prefix + "_ll.pgm", scaled(quad.ll, 0.5, 0.0));
  fiqa::io::write_pgm(out_prefix + "_lh.pgm", scaled(quad.lh, 0.5, 0.5));
  fiqa::io::write_pgm(out_prefix + "_hl.pgm", scaled(quad.hl, 0.5, 0.5));
  fiqa::io::write_pgm(out_prefix + "_hh.pgm", scaled(quad.hh, 0.5, 0.5));
  return 0;
}

int cmd_swa(const std::vector<std::string>& inputs,
            const std::string& out_path) {
  std::vector<fiqa::img::WeightSnapshot> snaps;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    snaps.push_back(fiqa::img::WeightSnapshot{
        static_cast<std::int64_t>(i), fiqa::io::read_snapshot(inputs[i])});
  }
  const fiqa::img::WeightSnapshot avg = fiqa::img::swa_average(snaps);
  fiqa::io::write_snapshot(out_path, avg.weights);
  std::printf("averaged %zu snapshots of %zu weights\n", snaps.size(),
              avg.weights.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FIQA challenge harness: metrics, budgets, losses, sampling"};
  app.require_subcommand(1);

  // score
  std::string pred_path, gt_path;
  CLI::App* score = app.add_subcommand(
      "score", "Score a prediction file against ground truth (SROCC/PLCC)");
  score->add_option("--pred", pred_path, "Predictions CSV (item_id,score)")
      ->required();
  score->add_option("--gt", gt_path, "Ground-truth CSV (item_id,score)")
      ->required();

  // leaderboard
  std::string results_path, lb_out;
  CLI::App* leaderboard = app.add_subcommand(
      "leaderboard", "Rank a results CSV by (SROCC+PLCC)/2 with budget flags");
  leaderboard
      ->add_option("--input", results_path,
                   "Results CSV (team,srocc,plcc,gflops,params_m)")
      ->required();
  leaderboard->add_option("--out", lb_out, "Write CSV here instead of stdout");

  // budget
  std::string model_path, resolution, budget_out;
  CLI::App* budget = app.add_subcommand(
      "budget", "Check a model spec against the 0.5 GFLOPs / 5M params budget");
  budget->add_option("--model", model_path, "Model spec JSON")->required();
  budget->add_option("--resolution", resolution,
                     "Override input resolution, HxW (e.g. 224x224)");
  budget->add_option("--out", budget_out,
                     "Write per-layer machine CSV to this path");

  // loss-eval
  LossOptions loss_opts;
  std::string loss_pred, loss_gt;
  CLI::App* loss_eval =
      app.add_subcommand("loss-eval", "Evaluate a loss on a scored series");
  loss_eval->add_option("--loss", loss_opts.name, "Loss name")->required();
  loss_eval->add_option("--pred", loss_pred, "Predictions CSV")->required();
  loss_eval->add_option("--gt", loss_gt, "Ground-truth CSV")->required();
  loss_eval->add_option("--alpha", loss_opts.alpha, "Composite weight alpha");
  loss_eval->add_option("--lambda", loss_opts.lambda, "Composite weight lambda");
  loss_eval->add_option("--gamma", loss_opts.gamma, "Focal exponent");
  CLI::Option* eps_opt = loss_eval->add_option(
      "--epsilon", loss_opts.epsilon,
      "Label-smoothing std (focal/conquerit) or wing epsilon (wing/coreface)");
  loss_eval->add_option("--wing-w", loss_opts.wing_w, "Wing threshold w");
  loss_eval->add_option("--seed", loss_opts.seed, "Smoothing RNG seed");

  // gradcheck
  std::string check_name = "all";
  std::uint64_t check_seed = 0;
  int check_points = 100;
  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "Compare analytic loss gradients to finite differences");
  gradcheck->add_option("loss", check_name, "Loss name or \"all\"");
  gradcheck->add_option("--seed", check_seed, "Point-sampling seed");
  gradcheck->add_option("--n", check_points, "Points per loss")
      ->check(CLI::PositiveNumber);

  // sample-plan
  std::string plan_input, plan_out;
  std::size_t plan_bins = 10, plan_n = 0;
  std::uint64_t plan_seed = 0;
  CLI::App* sample_plan = app.add_subcommand(
      "sample-plan", "Emit a score-stratified uniform sampling plan");
  sample_plan->add_option("--input", plan_input, "Scores CSV (item_id,score)")
      ->required();
  sample_plan->add_option("--bins", plan_bins, "Number of equal-width strata");
  sample_plan->add_option("--n", plan_n, "Number of draws")->required();
  sample_plan->add_option("--seed", plan_seed, "Draw seed")->required();
  sample_plan->add_option("--out", plan_out, "Write CSV here instead of stdout");

  // degrade
  std::string deg_input, deg_kind, deg_out;
  double deg_severity = 0.0;
  std::uint64_t deg_seed = 0;
  CLI::App* degrade =
      app.add_subcommand("degrade", "Apply a severity-controlled degradation");
  degrade->add_option("--input", deg_input, "Input PGM (P5)")->required();
  degrade
      ->add_option("--kind", deg_kind,
                   "gaussian_blur | gaussian_noise | resample")
      ->required();
  degrade->add_option("--severity", deg_severity, "Severity in [0,1]")
      ->required();
  degrade->add_option("--seed", deg_seed, "Noise seed");
  degrade->add_option("--out", deg_out, "Output PGM path")->required();

  // dwt
  std::string dwt_input, dwt_out;
  CLI::App* dwt = app.add_subcommand(
      "dwt", "Single-level Haar decomposition into LL/LH/HL/HH PGMs");
  dwt->add_option("--input", dwt_input, "Input PGM (even dims)")->required();
  dwt->add_option("--out", dwt_out, "Output path prefix")->required();

  // swa
  std::vector<std::string> swa_inputs;
  std::string swa_out;
  CLI::App* swa =
      app.add_subcommand("swa", "Average weight snapshots element-wise");
  swa->add_option("--input", swa_inputs, "Snapshot files (repeatable)")
      ->required()
      ->expected(-1);
  swa->add_option("--out", swa_out, "Averaged snapshot path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  loss_opts.epsilon_set = eps_opt->count() > 0;

  try {
    if (*score) return cmd_score(pred_path, gt_path);
    if (*leaderboard) return cmd_leaderboard(results_path, lb_out);
    if (*budget) return cmd_budget(model_path, resolution, budget_out);
    if (*loss_eval) {
      return cmd_loss_eval(loss_pred, loss_gt, loss_opts);
    }
    if (*gradcheck) return cmd_gradcheck(check_name, check_seed, check_points);
    if (*sample_plan) {
      return cmd_sample_plan(plan_input, plan_bins, plan_n, plan_seed,
                             plan_out);
    }
    if (*degrade) {
      return cmd_degrade(deg_input, deg_kind, deg_severity, deg_seed, deg_out);
    }
    if (*dwt) return cmd_dwt(dwt_input, dwt_out);
    if (*swa) return cmd_swa(swa_inputs, swa_out);
  } catch (const fiqa::DegenerateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fiqa::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
