#include "souq/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "souq/error.hpp"

namespace souq {

EvalCurve accuracy_rejection_curve(const std::vector<ScoredInstance>& items,
                                   const std::vector<double>& grid, std::string score_name) {
  if (items.empty()) fail(Errc::EmptyInput, "no instances to evaluate");
  for (const auto& item : items)
    if (!item.truth) fail(Errc::MissingTruth, "instance '" + item.instance_id + "' has no label");
  double prev = -1.0;
  for (double f : grid) {
    if (!(f >= 0.0 && f < 1.0))
      fail(Errc::BadGrid, "rejection fraction " + std::to_string(f) + " outside [0,1)");
    if (f <= prev) fail(Errc::BadGrid, "rejection fractions must be strictly ascending");
    prev = f;
  }

  const std::size_t n = items.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (items[a].score != items[b].score) return items[a].score > items[b].score;
    if (items[a].instance_id != items[b].instance_id)
      return items[a].instance_id < items[b].instance_id;
    return a < b;
  });

  // suffix_correct[j] = correct predictions among order[j..n-1]
  std::vector<std::size_t> suffix_correct(n + 1, 0);
  for (std::size_t j = n; j-- > 0;) {
    const auto& item = items[order[j]];
    suffix_correct[j] = suffix_correct[j + 1] + (item.predicted == *item.truth ? 1 : 0);
  }

  EvalCurve curve;
  curve.score_name = std::move(score_name);
  curve.points.reserve(grid.size());
  for (double f : grid) {
    // the epsilon recovers the intended count for decimal fractions such as
    // 0.95 * 100, whose product rounds just below the integer
    auto rejected = static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9));
    rejected = std::min(rejected, n - 1);
    const double accuracy = static_cast<double>(suffix_correct[rejected]) /
                            static_cast<double>(n - rejected);
    curve.points.emplace_back(f, accuracy);
  }
  return curve;
}

double auroc(const std::vector<ScoredInstance>& items) {
  if (items.empty()) fail(Errc::EmptyInput, "no instances to evaluate");
  std::size_t n_pos = 0, n_neg = 0;
  for (const auto& item : items) {
    if (!item.cohort) fail(Errc::MissingCohort, "instance '" + item.instance_id + "' has no cohort");
    (*item.cohort == Cohort::OutOfDistribution ? n_pos : n_neg)++;
  }
  if (n_pos == 0 || n_neg == 0)
    fail(Errc::OneCohortOnly, "need at least one instance in each cohort");

  const std::size_t n = items.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return items[a].score < items[b].score; });

  // average ranks over tie groups, 1-based
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && items[order[j]].score == items[order[i]].score) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1 .. j
    for (std::size_t t = i; t < j; ++t)
      if (*items[order[t]].cohort == Cohort::OutOfDistribution) rank_sum_pos += avg_rank;
    i = j;
  }
  const double u = rank_sum_pos -
                   0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

AbstentionResult abstention_accuracy(const std::vector<ScoredInstance>& items, double threshold) {
  if (items.empty()) fail(Errc::EmptyInput, "no instances to evaluate");
  for (const auto& item : items)
    if (!item.truth) fail(Errc::MissingTruth, "instance '" + item.instance_id + "' has no label");
  std::size_t retained = 0, correct = 0;
  for (const auto& item : items) {
    if (item.score <= threshold) {
      ++retained;
      if (item.predicted == *item.truth) ++correct;
    }
  }
  AbstentionResult result;
  result.coverage = static_cast<double>(retained) / static_cast<double>(items.size());
  if (retained == 0) {
    result.accuracy = 1.0;
    result.empty = true;
  } else {
    result.accuracy = static_cast<double>(correct) / static_cast<double>(retained);
  }
  return result;
}

std::vector<double> default_rejection_grid() {
  std::vector<double> grid;
  grid.reserve(20);
  for (int i = 0; i < 20; ++i) grid.push_back(static_cast<double>(i) * 0.05);
  return grid;
}

}  // namespace souq
