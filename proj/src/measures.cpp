#include "souq/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace souq {

namespace {

// Negative epistemic values beyond this are a bug, not float noise.
constexpr double kEpistemicBugThreshold = 1e-6;

double clamp_epistemic(double eu) {
  if (eu < -kEpistemicBugThreshold)
    throw std::logic_error("epistemic uncertainty " + std::to_string(eu) +
                           " below -1e-6; measure invariant broken");
  return eu < 0.0 ? 0.0 : eu;
}

// Order-insensitive reduction: summing in ascending value order keeps global
// triples bitwise identical under label permutations.
double sum_sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

UncertaintyTriple sum_triples(const std::vector<UncertaintyTriple>& per_label) {
  std::vector<double> tu(per_label.size()), au(per_label.size()), eu(per_label.size());
  for (std::size_t k = 0; k < per_label.size(); ++k) {
    tu[k] = per_label[k].total;
    au[k] = per_label[k].aleatoric;
    eu[k] = per_label[k].epistemic;
  }
  return {sum_sorted(std::move(tu)), sum_sorted(std::move(au)), sum_sorted(std::move(eu))};
}

UncertaintyTriple label_entropy_triple(const BinaryMarginal& qk) {
  const double mean = qk.mean();
  const double total = binary_entropy(mean);
  double aleatoric = 0.0;
  for (std::size_t m = 0; m < qk.values.size(); ++m)
    aleatoric += qk.weights[m] * binary_entropy(qk.values[m]);
  if ((mean == 0.0 || mean == 1.0) && aleatoric > 1e-12)
    throw std::logic_error("marginal mean at a boundary but atoms are interior");
  return {total, aleatoric, clamp_epistemic(total - aleatoric)};
}

UncertaintyTriple variance_triple(const BinaryMarginal& qk) {
  const double mean = qk.mean();
  double aleatoric = 0.0;
  double epistemic = 0.0;
  for (std::size_t m = 0; m < qk.values.size(); ++m) {
    const double v = qk.values[m];
    aleatoric += qk.weights[m] * (v * (1.0 - v));
    const double dev = v - mean;
    epistemic += qk.weights[m] * dev * dev;
  }
  const double total = aleatoric + epistemic;
  // law of total variance: Var(Y_k) = E[Theta_k(1-Theta_k)] + Var(Theta_k)
  if (std::abs(total - mean * (1.0 - mean)) > 1e-9)
    throw std::logic_error("total variance identity violated by " +
                           std::to_string(total - mean * (1.0 - mean)));
  return {total, aleatoric, epistemic};
}

LabelWiseReport label_wise_report(MeasureFamily family, const EmpiricalSecondOrder& q) {
  LabelWiseReport report;
  report.family = family;
  report.per_label.reserve(q.num_classes());
  for (std::size_t k = 0; k < q.num_classes(); ++k)
    report.per_label.push_back(per_label_triple(family, marginal(q, k)));
  report.global = sum_triples(report.per_label);
  return report;
}

}  // namespace

const char* family_code(MeasureFamily family) {
  switch (family) {
    case MeasureFamily::GlobalEntropy: return "ent";
    case MeasureFamily::LabelEntropy: return "lent";
    case MeasureFamily::Variance: return "var";
  }
  return "?";
}

MeasureFamily family_from_code(std::string_view code) {
  if (code == "ent") return MeasureFamily::GlobalEntropy;
  if (code == "lent") return MeasureFamily::LabelEntropy;
  if (code == "var") return MeasureFamily::Variance;
  fail(Errc::UnknownFamily, "unknown measure family '" + std::string(code) + "'");
}

double binary_entropy(double theta) {
  if (theta < -kEntryTolerance || theta > 1.0 + kEntryTolerance)
    fail(Errc::OutOfRange, "theta = " + std::to_string(theta) + " outside [0,1]");
  theta = std::min(1.0, std::max(0.0, theta));
  double h = 0.0;
  if (theta > 0.0) h -= theta * std::log2(theta);
  if (theta < 1.0) h -= (1.0 - theta) * std::log2(1.0 - theta);
  return std::min(1.0, std::max(0.0, h));
}

double shannon_entropy(const ProbVector& theta) {
  double h = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k)
    if (theta[k] > 0.0) h -= theta[k] * std::log2(theta[k]);
  const double bound = std::log2(static_cast<double>(theta.size()));
  return std::min(bound, std::max(0.0, h));
}

UncertaintyTriple global_entropy_measures(const EmpiricalSecondOrder& q) {
  const double total = shannon_entropy(second_order_mean(q));
  double aleatoric = 0.0;
  for (std::size_t m = 0; m < q.num_atoms(); ++m)
    aleatoric += q.weights()[m] * shannon_entropy(q.atoms()[m]);
  return {total, aleatoric, clamp_epistemic(total - aleatoric)};
}

LabelWiseReport label_entropy_measures(const EmpiricalSecondOrder& q) {
  return label_wise_report(MeasureFamily::LabelEntropy, q);
}

LabelWiseReport variance_measures(const EmpiricalSecondOrder& q) {
  return label_wise_report(MeasureFamily::Variance, q);
}

LabelWiseReport measure_report(MeasureFamily family, const EmpiricalSecondOrder& q) {
  if (family == MeasureFamily::GlobalEntropy) {
    LabelWiseReport report;
    report.family = family;
    report.global = global_entropy_measures(q);
    return report;
  }
  return label_wise_report(family, q);
}

UncertaintyTriple per_label_triple(MeasureFamily family, const BinaryMarginal& qk) {
  switch (family) {
    case MeasureFamily::LabelEntropy: return label_entropy_triple(qk);
    case MeasureFamily::Variance: return variance_triple(qk);
    case MeasureFamily::GlobalEntropy: break;
  }
  fail(Errc::UnknownFamily, "global entropy has no per-label decomposition");
}

double pointwise_loss(ScoringRule rule, double pred, int outcome) {
  switch (rule) {
    case ScoringRule::LogLoss:
      return outcome ? -std::log2(pred) : -std::log2(1.0 - pred);
    case ScoringRule::SquaredError: {
      const double d = pred - static_cast<double>(outcome);
      return d * d;
    }
  }
  fail(Errc::NotProper, "unknown scoring rule");
}

double expected_loss(ScoringRule rule, double pred, double theta) {
  // 0 * inf from a boundary prediction with matching boundary theta is the
  // 0 log 0 = 0 convention
  double loss = 0.0;
  if (theta > 0.0) loss += theta * pointwise_loss(rule, pred, 1);
  if (theta < 1.0) loss += (1.0 - theta) * pointwise_loss(rule, pred, 0);
  return loss;
}

namespace {

// golden-section search; the expected loss is convex in the prediction
double risk_minimizer(ScoringRule rule, double theta) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1e-9, hi = 1.0 - 1e-9;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = expected_loss(rule, x1, theta);
  double f2 = expected_loss(rule, x2, theta);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = expected_loss(rule, x1, theta);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = expected_loss(rule, x2, theta);
    }
  }
  return 0.5 * (lo + hi);
}

bool propriety_grid_check(ScoringRule rule) {
  for (double theta = 0.05; theta < 0.951; theta += 0.05)
    if (std::abs(risk_minimizer(rule, theta) - theta) > 1e-6) return false;
  return true;
}

}  // namespace

bool is_strictly_proper(ScoringRule rule) {
  static const bool log_loss_proper = propriety_grid_check(ScoringRule::LogLoss);
  static const bool squared_error_proper = propriety_grid_check(ScoringRule::SquaredError);
  return rule == ScoringRule::LogLoss ? log_loss_proper : squared_error_proper;
}

UncertaintyTriple loss_based_measures(const BinaryMarginal& qk, ScoringRule rule) {
  if (!is_strictly_proper(rule)) fail(Errc::NotProper, "scoring rule failed the propriety check");
  const double mean = qk.mean();
  const double total = expected_loss(rule, mean, mean);
  double aleatoric = 0.0;
  for (std::size_t m = 0; m < qk.values.size(); ++m)
    aleatoric += qk.weights[m] * expected_loss(rule, qk.values[m], qk.values[m]);
  return {total, aleatoric, clamp_epistemic(total - aleatoric)};
}

LabelWiseReport dirichlet_variance_oracle(const DirichletSecondOrder& d) {
  const double a0 = d.alpha0();
  LabelWiseReport report;
  report.family = MeasureFamily::Variance;
  report.per_label.reserve(d.alpha.size());
  for (double a : d.alpha) {
    UncertaintyTriple t;
    t.epistemic = a * (a0 - a) / (a0 * a0 * (a0 + 1.0));
    t.aleatoric = a / a0 - a * (a + 1.0) / (a0 * (a0 + 1.0));
    t.total = t.aleatoric + t.epistemic;
    report.per_label.push_back(t);
  }
  report.global = sum_triples(report.per_label);
  return report;
}

double max_total_uncertainty(MeasureFamily family, std::size_t num_classes) {
  const double k = static_cast<double>(num_classes);
  switch (family) {
    case MeasureFamily::GlobalEntropy: return std::log2(k);
    case MeasureFamily::LabelEntropy: return std::log2(k) + (k - 1.0) * std::log2(k / (k - 1.0));
    case MeasureFamily::Variance: return (k - 1.0) / k;
  }
  fail(Errc::UnknownFamily, "unknown measure family");
}

}  // namespace souq
