#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "souq/error.hpp"

namespace souq {

/// Ingestion tolerances: entries may undershoot zero by kEntryTolerance and
/// row sums may deviate from one by kSumTolerance before rejection.
inline constexpr double kEntryTolerance = 1e-9;
inline constexpr double kSumTolerance = 1e-6;

/// A first-order class distribution: K probabilities on the (K-1)-simplex.
/// Immutable after construction.
class ProbVector {
 public:
  /// Validates, clamps entries into [0,1], and renormalizes to unit sum.
  /// Throws NegativeEntry / BadSum / TooFewClasses.
  static ProbVector from_raw(const std::vector<double>& raw);

  /// For values already on the simplex up to round-off (|sum - 1| <= 1e-9,
  /// entries within [-1e-9, 1+1e-9]); clamps entries, does not renormalize.
  static ProbVector trusted(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_[k]; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const ProbVector& other) const { return probs_ == other.probs_; }

 private:
  explicit ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

ProbVector make_prob_vector(const std::vector<double>& raw);

/// Marginal of one class under a second-order distribution: the class-k atom
/// coordinates with their weights.
struct BinaryMarginal {
  std::vector<double> values;
  std::vector<double> weights;

  /// Weighted mean, clamped into [0,1]. Uses the same summation order as
  /// second_order_mean so the two agree bitwise.
  double mean() const;
};

/// A finite second-order distribution: M weighted atoms on the simplex.
/// Weights are probabilities (they sum to one); all moments downstream use
/// population semantics, never an M-1 correction.
class EmpiricalSecondOrder {
 public:
  explicit EmpiricalSecondOrder(std::vector<ProbVector> atoms);  // uniform weights
  EmpiricalSecondOrder(std::vector<ProbVector> atoms, std::vector<double> weights);

  std::size_t num_classes() const { return atoms_.front().size(); }
  std::size_t num_atoms() const { return atoms_.size(); }
  const std::vector<ProbVector>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<ProbVector> atoms_;
  std::vector<double> weights_;
};

/// Expectation of the second-order distribution, one coordinate per class.
ProbVector second_order_mean(const EmpiricalSecondOrder& q);

/// Marginal distribution of class k.
BinaryMarginal marginal(const EmpiricalSecondOrder& q, std::size_t k);

/// Marginals for a non-empty subset of classes, in the requested order.
std::vector<BinaryMarginal> restrict_labels(const EmpiricalSecondOrder& q,
                                            const std::vector<std::size_t>& labels);

/// Parametric second-order distribution with Dirichlet(alpha) law. Serves as
/// the closed-form oracle in tests and as the synthetic-data generator.
struct DirichletSecondOrder {
  std::vector<double> alpha;

  explicit DirichletSecondOrder(std::vector<double> a);
  double alpha0() const;
  std::vector<double> mean() const;  // alpha_k / alpha0
};

/// n atoms with uniform weights; reproducible given the seed.
EmpiricalSecondOrder sample_dirichlet(const DirichletSecondOrder& d, std::size_t n,
                                      std::uint64_t seed);

}  // namespace souq
