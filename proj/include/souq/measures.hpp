#pragma once

#include <string_view>
#include <vector>

#include "souq/simplex.hpp"

namespace souq {

/// The three measure families. CLI codes: ent / lent / var.
enum class MeasureFamily { GlobalEntropy, LabelEntropy, Variance };

const char* family_code(MeasureFamily family);
MeasureFamily family_from_code(std::string_view code);

/// Total, aleatoric, and epistemic uncertainty. Additivity
/// total = aleatoric + epistemic holds by construction in every family.
struct UncertaintyTriple {
  double total = 0.0;
  double aleatoric = 0.0;
  double epistemic = 0.0;
};

/// Per-label decomposition plus the global triple. per_label is empty for
/// GlobalEntropy, which has no label-wise form.
struct LabelWiseReport {
  MeasureFamily family = MeasureFamily::Variance;
  std::vector<UncertaintyTriple> per_label;
  UncertaintyTriple global;
};

/// Entropy of a Bernoulli(theta) outcome in bits, 0 log 0 = 0. Result in [0,1].
double binary_entropy(double theta);

/// Shannon entropy in bits, 0 log 0 = 0. Result in [0, log2 K].
double shannon_entropy(const ProbVector& theta);

/// Global entropy family: total = H(E[Theta]), aleatoric = E[H(Theta)],
/// epistemic = total - aleatoric (mutual information).
UncertaintyTriple global_entropy_measures(const EmpiricalSecondOrder& q);

/// Label-wise entropy family, per label k: total = H(E[Theta_k]),
/// aleatoric = E[H(Theta_k)], epistemic = total - aleatoric (expected binary
/// KL divergence). Global triple sums over labels.
LabelWiseReport label_entropy_measures(const EmpiricalSecondOrder& q);

/// Variance family, per label k: aleatoric = E[Theta_k (1 - Theta_k)],
/// epistemic = Var(Theta_k), total = their sum (law of total variance,
/// equal to mean_k (1 - mean_k)).
LabelWiseReport variance_measures(const EmpiricalSecondOrder& q);

/// Dispatch by family.
LabelWiseReport measure_report(MeasureFamily family, const EmpiricalSecondOrder& q);

/// Per-label triple of a label-wise family for one marginal.
UncertaintyTriple per_label_triple(MeasureFamily family, const BinaryMarginal& qk);

/// Strictly proper scoring rules for binary outcomes. LogLoss uses base-2
/// logarithms so its uncertainties are in bits, matching the entropy family.
enum class ScoringRule { LogLoss, SquaredError };

/// phi(pred, y) for y in {0,1}.
double pointwise_loss(ScoringRule rule, double pred, int outcome);

/// Expected loss of predicting pred when the outcome is Bernoulli(theta).
double expected_loss(ScoringRule rule, double pred, double theta);

/// Numerical propriety check: on a theta grid, the expected loss is minimized
/// at pred = theta within 1e-6. Cached per rule.
bool is_strictly_proper(ScoringRule rule);

/// Loss-based template for one marginal: total = phi(mean, mean),
/// aleatoric = E[phi(theta, theta)], epistemic = total - aleatoric.
/// LogLoss reproduces the label-entropy triple, SquaredError the variance
/// triple.
UncertaintyTriple loss_based_measures(const BinaryMarginal& qk, ScoringRule rule);

/// Closed-form variance-family report of a Dirichlet distribution; exact test
/// oracle for variance_measures on sampled atoms.
LabelWiseReport dirichlet_variance_oracle(const DirichletSecondOrder& d);

/// Upper bound of the global total uncertainty over all Q for K classes:
/// log2 K (global entropy), log2 K + (K-1) log2(K/(K-1)) (label entropy),
/// (K-1)/K (variance). Attained when E[Theta] is the barycenter.
double max_total_uncertainty(MeasureFamily family, std::size_t num_classes);

}  // namespace souq
