#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fiqa {

// Paired predicted / ground-truth MOS vectors keyed by item id.
// Stored column-wise; entry i of each column belongs to item ids[i].
struct ScoreSeries {
  std::vector<std::string> ids;
  std::vector<double> pred;
  std::vector<double> gt;

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }

  void add(std::string id, double p, double g) {
    ids.push_back(std::move(id));
    pred.push_back(p);
    gt.push_back(g);
  }

  std::span<const double> preds() const { return pred; }
  std::span<const double> gts() const { return gt; }
};

// Checks the series invariants: columns of equal length, unique ids,
// all values finite. Throws InputError subtypes on violation.
void validate(const ScoreSeries& s);

}  // namespace fiqa
