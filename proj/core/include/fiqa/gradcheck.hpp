#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fiqa::gradcheck {

// Central finite differences of a scalar function, step h per coordinate.
std::vector<double> central_difference(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double h = 1e-6);

// max_i |fd_i - analytic_i| / max(1, |analytic_i|)
double max_relative_error(std::span<const double> fd,
                          std::span<const double> analytic);

struct CheckReport {
  std::string loss;
  double max_rel_err = 0.0;
  int points = 0;
  bool ok() const { return max_rel_err < 1e-5; }
};

// Loss names accepted by run_loss_check (and the CLI): mse, pearson_corr,
// mse_corr, pairwise_rank, focal, conquerit, wing, coreface, ssar.
const std::vector<std::string>& known_losses();

// Compares the analytic gradient of the named loss against central finite
// differences at `points` random inputs, sampled away from the loss's
// non-smooth loci (wing branch boundary, hinge edge, rank-loss sign ties).
// Throws UnknownKind for unrecognized names.
CheckReport run_loss_check(const std::string& name, std::uint64_t seed,
                           int points = 100);

std::vector<CheckReport> run_all_loss_checks(std::uint64_t seed,
                                             int points = 100);

}  // namespace fiqa::gradcheck
