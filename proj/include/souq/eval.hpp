#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace souq {

enum class Cohort { InDistribution, OutOfDistribution };

/// One scored prediction. `score` is an uncertainty value; higher means more
/// uncertain. `truth` is needed for accuracy tasks, `cohort` for OoD tasks.
struct ScoredInstance {
  std::string instance_id;
  double score = 0.0;
  std::size_t predicted = 0;
  std::optional<std::size_t> truth;
  std::optional<Cohort> cohort;
};

/// Accuracy on retained instances as a function of the rejected fraction.
struct EvalCurve {
  std::string score_name;
  std::vector<std::pair<double, double>> points;  // (rejection fraction, accuracy)
};

/// Rejects the floor(f*N) most uncertain instances for every fraction f in
/// the grid and computes accuracy on the rest. Ordering is deterministic:
/// score descending, then instance_id ascending, then input order.
/// Grid values must lie in [0,1) and be strictly ascending.
EvalCurve accuracy_rejection_curve(const std::vector<ScoredInstance>& items,
                                   const std::vector<double>& grid,
                                   std::string score_name = {});

/// Rank-based (Mann-Whitney) AUROC with average ranks for ties; the
/// out-of-distribution cohort is the positive class. Equals the probability
/// that a random OoD score exceeds a random iD score, counting ties half.
double auroc(const std::vector<ScoredInstance>& items);

struct AbstentionResult {
  double coverage = 0.0;
  double accuracy = 1.0;
  bool empty = false;  // nothing retained; accuracy reported as 1.0 by convention
};

/// Retains instances with score <= threshold.
AbstentionResult abstention_accuracy(const std::vector<ScoredInstance>& items, double threshold);

/// 0.00, 0.05, ..., 0.95.
std::vector<double> default_rejection_grid();

}  // namespace souq
