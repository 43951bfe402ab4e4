#pragma once

#include <cmath>
#include <vector>

#include "souq/measures.hpp"
#include "souq/rng.hpp"
#include "souq/simplex.hpp"

#define CHECK_FAILS_WITH(code_, ...)                          \
  do {                                                        \
    bool souq_test_threw_ = false;                            \
    try {                                                     \
      (void)(__VA_ARGS__);                                    \
    } catch (const souq::SouqError& souq_test_err_) {         \
      souq_test_threw_ = true;                                \
      CHECK(souq_test_err_.code() == souq::Errc::code_);      \
    }                                                         \
    CHECK_MESSAGE(souq_test_threw_, "expected " #code_);      \
  } while (0)

namespace souq::testing {

/// Random atoms from a randomized Dirichlet; independent of the axiom
/// suite's case generator.
inline EmpiricalSecondOrder random_q(Rng& rng, std::size_t num_classes, std::size_t num_atoms,
                                     bool random_weights = true) {
  std::vector<double> alpha(num_classes);
  for (auto& a : alpha) a = 0.4 + 5.0 * rng.uniform01();
  std::vector<ProbVector> atoms;
  atoms.reserve(num_atoms);
  for (std::size_t m = 0; m < num_atoms; ++m)
    atoms.push_back(ProbVector::trusted(rng.dirichlet(alpha)));
  if (random_weights && num_atoms > 1 && rng.uniform01() < 0.5)
    return EmpiricalSecondOrder(std::move(atoms),
                                rng.dirichlet(std::vector<double>(num_atoms, 1.0)));
  return EmpiricalSecondOrder(std::move(atoms));
}

/// Mutual information between the outcome and the first-order distribution,
/// as the direct double sum over atoms and classes. Independent route for the
/// global-entropy epistemic measure.
inline double mutual_information_oracle(const EmpiricalSecondOrder& q) {
  const ProbVector mean = second_order_mean(q);
  double mi = 0.0;
  for (std::size_t m = 0; m < q.num_atoms(); ++m) {
    const double w = q.weights()[m];
    if (w == 0.0) continue;
    for (std::size_t k = 0; k < q.num_classes(); ++k) {
      const double p = q.atoms()[m][k];
      if (p == 0.0) continue;
      mi += w * p * std::log2(p / mean[k]);
    }
  }
  return mi;
}

/// Expected binary KL divergence of a marginal from its mean; independent
/// route for the label-entropy epistemic measure.
inline double binary_kl_oracle(const BinaryMarginal& qk) {
  const double mean = qk.mean();
  double kl = 0.0;
  for (std::size_t m = 0; m < qk.values.size(); ++m) {
    const double w = qk.weights[m];
    if (w == 0.0) continue;
    const double v = qk.values[m];
    double term = 0.0;
    if (v > 0.0) term += v * std::log2(v / mean);
    if (v < 1.0) term += (1.0 - v) * std::log2((1.0 - v) / (1.0 - mean));
    kl += w * term;
  }
  return kl;
}

/// Standard error of the sample mean of values.
inline double mean_standard_error(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= n;
  return std::sqrt(var / n);
}

/// Standard error of the population variance of values,
/// sqrt((m4 - s^4) / n) with sample central moments.
inline double variance_standard_error(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m4 /= n;
  return std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
}

}  // namespace souq::testing
