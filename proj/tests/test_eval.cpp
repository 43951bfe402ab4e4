#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "souq/eval.hpp"
#include "souq/rng.hpp"

using namespace souq;

namespace {

ScoredInstance labeled(std::string id, double score, std::size_t predicted, std::size_t truth) {
  ScoredInstance item;
  item.instance_id = std::move(id);
  item.score = score;
  item.predicted = predicted;
  item.truth = truth;
  return item;
}

ScoredInstance cohorted(std::string id, double score, Cohort cohort) {
  ScoredInstance item;
  item.instance_id = std::move(id);
  item.score = score;
  item.cohort = cohort;
  return item;
}

// the hand-enumerated four-instance case: scores 3,2,1,0 with correctness
// wrong, wrong, right, right
std::vector<ScoredInstance> golden_four() {
  return {labeled("a", 3.0, 0, 1), labeled("b", 2.0, 0, 1), labeled("c", 1.0, 1, 1),
          labeled("d", 0.0, 1, 1)};
}

}  // namespace

TEST_CASE("ARC on all-correct predictions is flat at one") {
  std::vector<ScoredInstance> items;
  for (int i = 0; i < 10; ++i) items.push_back(labeled("i" + std::to_string(i), i, 0, 0));
  const auto curve = accuracy_rejection_curve(items, default_rejection_grid());
  for (const auto& [f, acc] : curve.points) CHECK(acc == 1.0);
}

TEST_CASE("ARC matches the hand-enumerated golden case") {
  const auto curve = accuracy_rejection_curve(golden_four(), {0.0, 0.25, 0.5});
  REQUIRE(curve.points.size() == 3);
  CHECK(curve.points[0].second == 0.5);
  CHECK(curve.points[1].second == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(curve.points[2].second == 1.0);
}

TEST_CASE("ARC tie handling is deterministic") {
  std::vector<ScoredInstance> items = {labeled("b", 1.0, 0, 0), labeled("a", 1.0, 0, 1),
                                       labeled("c", 1.0, 0, 0), labeled("d", 1.0, 0, 1)};
  const auto curve = accuracy_rejection_curve(items, {0.0, 0.5});
  CHECK(curve.points[0].second == 0.5);  // overall accuracy
  // ties rejected by instance_id ascending: a then b; retained c (right), d (wrong)
  CHECK(curve.points[1].second == 0.5);
}

TEST_CASE("ARC endpoint equals plain accuracy and rank-only dependence holds") {
  Rng rng(3);
  std::vector<ScoredInstance> items;
  std::size_t correct = 0;
  for (int i = 0; i < 57; ++i) {
    const bool right = rng.uniform01() < 0.7;
    correct += right ? 1 : 0;
    items.push_back(labeled("i" + std::to_string(i), rng.uniform01() * 4.0 - 2.0, 0, right ? 0 : 1));
  }
  const auto grid = default_rejection_grid();
  const auto curve = accuracy_rejection_curve(items, grid);
  CHECK(curve.points[0].second == static_cast<double>(correct) / 57.0);

  // strictly monotone transform of the scores leaves the curve unchanged
  auto transformed = items;
  for (auto& item : transformed) item.score = std::exp(item.score) + 5.0;
  const auto curve2 = accuracy_rejection_curve(transformed, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(curve.points[i].second == curve2.points[i].second);
}

TEST_CASE("ARC validates input") {
  CHECK_FAILS_WITH(EmptyInput, accuracy_rejection_curve({}, {0.0}));
  std::vector<ScoredInstance> no_truth(1);
  no_truth[0].instance_id = "x";
  CHECK_FAILS_WITH(MissingTruth, accuracy_rejection_curve(no_truth, {0.0}));
  CHECK_FAILS_WITH(BadGrid, accuracy_rejection_curve(golden_four(), {0.5, 0.25}));
  CHECK_FAILS_WITH(BadGrid, accuracy_rejection_curve(golden_four(), {0.0, 1.0}));
  CHECK_FAILS_WITH(BadGrid, accuracy_rejection_curve(golden_four(), {-0.1}));
}

TEST_CASE("AUROC golden cases") {
  std::vector<ScoredInstance> separated;
  for (int i = 0; i < 5; ++i) separated.push_back(cohorted("id" + std::to_string(i), i, Cohort::InDistribution));
  for (int i = 0; i < 4; ++i) separated.push_back(cohorted("ood" + std::to_string(i), 10 + i, Cohort::OutOfDistribution));
  CHECK(auroc(separated) == 1.0);

  std::vector<ScoredInstance> tied;
  for (int i = 0; i < 6; ++i)
    tied.push_back(cohorted("t" + std::to_string(i), 1.0,
                            i % 2 ? Cohort::InDistribution : Cohort::OutOfDistribution));
  CHECK(auroc(tied) == 0.5);

  std::vector<ScoredInstance> example = {
      cohorted("a", 0.1, Cohort::InDistribution), cohorted("b", 0.4, Cohort::InDistribution),
      cohorted("c", 0.3, Cohort::OutOfDistribution), cohorted("d", 0.9, Cohort::OutOfDistribution)};
  CHECK(auroc(example) == 0.75);
}

TEST_CASE("AUROC agrees with the brute-force pair count") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ScoredInstance> items;
    const std::size_t n = rng.uniform_int(2, 40);
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool positive = rng.uniform01() < 0.5;
      n_pos += positive ? 1 : 0;
      // coarse scores force plenty of ties
      const double score = std::floor(rng.uniform01() * 5.0);
      items.push_back(cohorted("i" + std::to_string(i), score,
                               positive ? Cohort::OutOfDistribution : Cohort::InDistribution));
    }
    if (n_pos == 0 || n_pos == n) continue;
    double wins = 0.0;
    std::size_t pairs = 0;
    for (const auto& pos : items) {
      if (*pos.cohort != Cohort::OutOfDistribution) continue;
      for (const auto& neg : items) {
        if (*neg.cohort != Cohort::InDistribution) continue;
        ++pairs;
        if (pos.score > neg.score) wins += 1.0;
        else if (pos.score == neg.score) wins += 0.5;
      }
    }
    CHECK(auroc(items) == doctest::Approx(wins / static_cast<double>(pairs)).epsilon(1e-12));
  }
}

TEST_CASE("AUROC invariances") {
  Rng rng(9);
  std::vector<ScoredInstance> items;
  for (int i = 0; i < 30; ++i)
    items.push_back(cohorted("i" + std::to_string(i), rng.normal(),
                             rng.uniform01() < 0.4 ? Cohort::OutOfDistribution
                                                   : Cohort::InDistribution));
  const double base = auroc(items);

  auto transformed = items;
  for (auto& item : transformed) item.score = std::exp(0.5 * item.score);
  CHECK(auroc(transformed) == doctest::Approx(base).epsilon(1e-12));

  auto swapped = items;
  for (auto& item : swapped)
    item.cohort = *item.cohort == Cohort::InDistribution ? Cohort::OutOfDistribution
                                                         : Cohort::InDistribution;
  CHECK(auroc(swapped) == doctest::Approx(1.0 - base).epsilon(1e-12));
}

TEST_CASE("AUROC validates cohorts") {
  std::vector<ScoredInstance> one_side;
  for (int i = 0; i < 3; ++i)
    one_side.push_back(cohorted("i" + std::to_string(i), i, Cohort::InDistribution));
  CHECK_FAILS_WITH(OneCohortOnly, auroc(one_side));
  std::vector<ScoredInstance> missing(1);
  missing[0].instance_id = "x";
  CHECK_FAILS_WITH(MissingCohort, auroc(missing));
  CHECK_FAILS_WITH(EmptyInput, auroc({}));
}

TEST_CASE("abstention accuracy thresholds") {
  const auto items = golden_four();
  const auto all = abstention_accuracy(items, 10.0);
  CHECK(all.coverage == 1.0);
  CHECK(all.accuracy == 0.5);
  CHECK_FALSE(all.empty);

  const auto none = abstention_accuracy(items, -1.0);
  CHECK(none.coverage == 0.0);
  CHECK(none.accuracy == 1.0);
  CHECK(none.empty);

  const auto median = abstention_accuracy(items, 1.5);
  CHECK(median.coverage == 0.5);
  CHECK(median.accuracy == 1.0);
  CHECK_FALSE(median.empty);
}

TEST_CASE("mean ARC is monotone when wrong predictions score higher") {
  // misclassified instances get a dominating score with probability 0.9
  const auto grid = default_rejection_grid();
  const int draws = 100;
  const int n = 200;
  std::vector<std::vector<double>> curves;
  for (int d = 0; d < draws; ++d) {
    Rng rng(5000 + d);
    std::vector<ScoredInstance> items;
    for (int i = 0; i < n; ++i) {
      const bool right = rng.uniform01() < 0.7;
      double score = rng.uniform01();
      if (!right && rng.uniform01() < 0.9) score = 1.0 + rng.uniform01();
      items.push_back(labeled("i" + std::to_string(i), score, 0, right ? 0 : 1));
    }
    const auto curve = accuracy_rejection_curve(items, grid);
    std::vector<double> acc;
    for (const auto& p : curve.points) acc.push_back(p.second);
    curves.push_back(std::move(acc));
  }
  for (std::size_t j = 1; j < grid.size(); ++j) {
    double mean_prev = 0.0, mean_cur = 0.0;
    for (const auto& c : curves) {
      mean_prev += c[j - 1];
      mean_cur += c[j];
    }
    mean_prev /= draws;
    mean_cur /= draws;
    double var_diff = 0.0;
    for (const auto& c : curves) {
      const double diff = c[j] - c[j - 1];
      var_diff += (diff - (mean_cur - mean_prev)) * (diff - (mean_cur - mean_prev));
    }
    var_diff /= draws;
    const double se = std::sqrt(var_diff / draws);
    CHECK(mean_cur >= mean_prev - 3.0 * se);
  }
}
