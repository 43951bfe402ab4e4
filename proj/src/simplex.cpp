#include "souq/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "souq/rng.hpp"

namespace souq {

namespace {

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

double weighted_mean(const std::vector<double>& values, const std::vector<double>& weights) {
  double s = 0.0;
  for (std::size_t m = 0; m < values.size(); ++m) s += weights[m] * values[m];
  return clamp01(s);
}

}  // namespace

ProbVector ProbVector::from_raw(const std::vector<double>& raw) {
  if (raw.size() < 2) fail(Errc::TooFewClasses, "need at least 2 classes, got " + std::to_string(raw.size()));
  double sum = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw[k] < -kEntryTolerance)
      fail(Errc::NegativeEntry,
           "entry " + std::to_string(k) + " = " + std::to_string(raw[k]) + " is negative");
    sum += raw[k];
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    fail(Errc::BadSum, "entries sum to " + std::to_string(sum) + ", expected 1");
  std::vector<double> probs(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) probs[k] = clamp01(raw[k]);
  double clamped_sum = 0.0;
  for (double p : probs) clamped_sum += p;
  for (auto& p : probs) p /= clamped_sum;
  return ProbVector(std::move(probs));
}

ProbVector ProbVector::trusted(std::vector<double> probs) {
  if (probs.size() < 2) fail(Errc::TooFewClasses, "need at least 2 classes");
  double sum = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] < -kEntryTolerance || probs[k] > 1.0 + kEntryTolerance)
      fail(Errc::OutOfRange, "entry " + std::to_string(k) + " = " + std::to_string(probs[k]) +
                                 " outside [0,1]");
    probs[k] = clamp01(probs[k]);
    sum += probs[k];
  }
  if (std::abs(sum - 1.0) > kEntryTolerance)
    fail(Errc::BadSum, "entries sum to " + std::to_string(sum) + ", expected 1 within 1e-9");
  return ProbVector(std::move(probs));
}

ProbVector make_prob_vector(const std::vector<double>& raw) { return ProbVector::from_raw(raw); }

double BinaryMarginal::mean() const { return weighted_mean(values, weights); }

EmpiricalSecondOrder::EmpiricalSecondOrder(std::vector<ProbVector> atoms)
    : EmpiricalSecondOrder(std::move(atoms), {}) {}

EmpiricalSecondOrder::EmpiricalSecondOrder(std::vector<ProbVector> atoms,
                                           std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) fail(Errc::EmptyInput, "second-order distribution needs at least one atom");
  const std::size_t k = atoms_.front().size();
  for (const auto& a : atoms_)
    if (a.size() != k) fail(Errc::BadSum, "atoms disagree on the number of classes");
  if (weights_.empty()) {
    weights_.assign(atoms_.size(), 1.0 / static_cast<double>(atoms_.size()));
  } else {
    if (weights_.size() != atoms_.size())
      fail(Errc::BadWeights, "weight count does not match atom count");
    double sum = 0.0;
    for (double w : weights_) {
      if (w < 0.0) fail(Errc::BadWeights, "negative atom weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > kEntryTolerance)
      fail(Errc::BadWeights, "weights sum to " + std::to_string(sum) + ", expected 1");
  }
}

ProbVector second_order_mean(const EmpiricalSecondOrder& q) {
  const std::size_t num_classes = q.num_classes();
  std::vector<double> mean(num_classes);
  std::vector<double> column(q.num_atoms());
  for (std::size_t k = 0; k < num_classes; ++k) {
    for (std::size_t m = 0; m < q.num_atoms(); ++m) column[m] = q.atoms()[m][k];
    mean[k] = weighted_mean(column, q.weights());
  }
  return ProbVector::trusted(std::move(mean));
}

BinaryMarginal marginal(const EmpiricalSecondOrder& q, std::size_t k) {
  if (k >= q.num_classes())
    fail(Errc::IndexOutOfRange,
         "class " + std::to_string(k) + " out of range for K=" + std::to_string(q.num_classes()));
  BinaryMarginal out;
  out.values.resize(q.num_atoms());
  for (std::size_t m = 0; m < q.num_atoms(); ++m) out.values[m] = q.atoms()[m][k];
  out.weights = q.weights();
  return out;
}

std::vector<BinaryMarginal> restrict_labels(const EmpiricalSecondOrder& q,
                                            const std::vector<std::size_t>& labels) {
  if (labels.empty()) fail(Errc::EmptySubset, "label subset must be non-empty");
  std::vector<BinaryMarginal> out;
  out.reserve(labels.size());
  for (std::size_t k : labels) out.push_back(marginal(q, k));
  return out;
}

DirichletSecondOrder::DirichletSecondOrder(std::vector<double> a) : alpha(std::move(a)) {
  if (alpha.size() < 2) fail(Errc::BadAlpha, "need at least 2 concentration parameters");
  for (std::size_t k = 0; k < alpha.size(); ++k)
    if (!(alpha[k] > 0.0))
      fail(Errc::BadAlpha, "alpha[" + std::to_string(k) + "] must be strictly positive");
}

double DirichletSecondOrder::alpha0() const {
  double s = 0.0;
  for (double a : alpha) s += a;
  return s;
}

std::vector<double> DirichletSecondOrder::mean() const {
  const double a0 = alpha0();
  std::vector<double> m(alpha.size());
  for (std::size_t k = 0; k < alpha.size(); ++k) m[k] = alpha[k] / a0;
  return m;
}

EmpiricalSecondOrder sample_dirichlet(const DirichletSecondOrder& d, std::size_t n,
                                      std::uint64_t seed) {
  if (n < 1) fail(Errc::EmptyInput, "need at least one sample");
  Rng rng(seed);
  std::vector<ProbVector> atoms;
  atoms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(ProbVector::trusted(rng.dirichlet(d.alpha)));
  return EmpiricalSecondOrder(std::move(atoms));
}

}  // namespace souq
