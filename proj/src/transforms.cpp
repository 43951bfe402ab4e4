#include "souq/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "souq/rng.hpp"

namespace souq {

namespace {

constexpr double kShiftBoundaryTolerance = 1e-12;

// Coordinates strictly inside (0,1); only these can move under a symmetric
// spread. A valid simplex point has either none (vertex) or at least two.
std::vector<std::size_t> free_coordinates(const ProbVector& theta) {
  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < theta.size(); ++k)
    if (theta[k] > 0.0 && theta[k] < 1.0) free.push_back(k);
  return free;
}

// Random direction in the zero-sum hyperplane supported on `free`, normalized
// to unit max-abs so `magnitude` bounds the largest coordinate move.
std::vector<double> spread_direction(Rng& rng, std::size_t num_classes,
                                     const std::vector<std::size_t>& free) {
  std::vector<double> dir(num_classes, 0.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    double mean = 0.0;
    for (std::size_t k : free) {
      dir[k] = rng.normal();
      mean += dir[k];
    }
    mean /= static_cast<double>(free.size());
    double max_abs = 0.0;
    for (std::size_t k : free) {
      dir[k] -= mean;
      max_abs = std::max(max_abs, std::abs(dir[k]));
    }
    if (max_abs > 1e-9) {
      for (std::size_t k : free) dir[k] /= max_abs;
      return dir;
    }
  }
  // degenerate draws; fall back to a two-coordinate swap direction
  std::fill(dir.begin(), dir.end(), 0.0);
  dir[free[0]] = 1.0;
  dir[free[1]] = -1.0;
  return dir;
}

}  // namespace

SpreadResult mean_preserving_spread_detail(const EmpiricalSecondOrder& q, double magnitude,
                                           std::uint64_t seed) {
  if (!(magnitude > 0.0)) fail(Errc::OutOfRange, "spread magnitude must be positive");
  const std::size_t num_classes = q.num_classes();
  Rng rng(seed);

  std::vector<ProbVector> atoms;
  std::vector<double> weights;
  std::vector<std::vector<double>> offsets(q.num_atoms(), std::vector<double>(num_classes, 0.0));
  std::vector<double> var_z(num_classes, 0.0);

  for (std::size_t m = 0; m < q.num_atoms(); ++m) {
    const ProbVector& theta = q.atoms()[m];
    const double w = q.weights()[m];
    const auto free = free_coordinates(theta);
    if (free.size() < 2) {
      // vertex atom: no zero-sum move keeps both offspring valid
      atoms.push_back(theta);
      weights.push_back(w);
      continue;
    }
    const auto dir = spread_direction(rng, num_classes, free);
    double step = magnitude;
    for (std::size_t k : free) {
      if (dir[k] == 0.0) continue;
      const double room = std::min(theta[k], 1.0 - theta[k]) / std::abs(dir[k]);
      step = std::min(step, room);
    }
    if (!(step > 0.0)) {
      atoms.push_back(theta);
      weights.push_back(w);
      continue;
    }
    std::vector<double> plus(num_classes), minus(num_classes);
    for (std::size_t k = 0; k < num_classes; ++k) {
      const double z = step * dir[k];
      offsets[m][k] = z;
      plus[k] = theta[k] + z;
      minus[k] = theta[k] - z;
      var_z[k] += w * z * z;
    }
    atoms.push_back(ProbVector::trusted(std::move(plus)));
    atoms.push_back(ProbVector::trusted(std::move(minus)));
    weights.push_back(w / 2.0);
    weights.push_back(w / 2.0);
  }

  // the definition requires max_k Var(Z_k) > 0; splitting only zero-weight
  // atoms does not count
  double max_var = 0.0;
  for (double v : var_z) max_var = std::max(max_var, v);
  if (max_var <= 0.0) fail(Errc::NoRoom, "no positive-weight atom has room to spread");
  return {EmpiricalSecondOrder(std::move(atoms), std::move(weights)), std::move(offsets),
          std::move(var_z)};
}

EmpiricalSecondOrder mean_preserving_spread(const EmpiricalSecondOrder& q, double magnitude,
                                            std::uint64_t seed) {
  return mean_preserving_spread_detail(q, magnitude, seed).q;
}

EmpiricalSecondOrder location_shift(const EmpiricalSecondOrder& q, const std::vector<double>& z) {
  const std::size_t num_classes = q.num_classes();
  if (z.size() != num_classes) fail(Errc::OutOfRange, "shift dimension does not match K");
  double sum = 0.0;
  double max_abs = 0.0;
  for (double v : z) {
    sum += v;
    max_abs = std::max(max_abs, std::abs(v));
  }
  if (max_abs == 0.0) fail(Errc::ZeroShift, "shift vector is zero");
  if (std::abs(sum) > 1e-12)
    fail(Errc::NotZeroSum, "shift coordinates sum to " + std::to_string(sum));

  std::vector<ProbVector> atoms;
  atoms.reserve(q.num_atoms());
  for (std::size_t m = 0; m < q.num_atoms(); ++m) {
    std::vector<double> shifted(num_classes);
    for (std::size_t k = 0; k < num_classes; ++k) {
      const double v = q.atoms()[m][k] + z[k];
      if (v < -kShiftBoundaryTolerance || v > 1.0 + kShiftBoundaryTolerance)
        fail(Errc::LeavesSimplex, "atom " + std::to_string(m) + " coordinate " +
                                      std::to_string(k) + " shifts to " + std::to_string(v));
      shifted[k] = std::min(1.0, std::max(0.0, v));
    }
    atoms.push_back(ProbVector::trusted(std::move(shifted)));
  }
  return EmpiricalSecondOrder(std::move(atoms), q.weights());
}

std::vector<double> center_shift_vector(const EmpiricalSecondOrder& q, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) fail(Errc::OutOfRange, "lambda must lie in (0,1)");
  const ProbVector mean = second_order_mean(q);
  const double barycenter = 1.0 / static_cast<double>(q.num_classes());
  std::vector<double> z(q.num_classes());
  double max_abs = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    z[k] = (1.0 - lambda) * (barycenter - mean[k]);
    max_abs = std::max(max_abs, std::abs(mean[k] - barycenter));
  }
  if (max_abs <= 1e-12) fail(Errc::AlreadyCentered, "mean already at the barycenter");
  return z;
}

EmpiricalSecondOrder center_shift(const EmpiricalSecondOrder& q, double lambda) {
  return location_shift(q, center_shift_vector(q, lambda));
}

EmpiricalSecondOrder dirac_mixture(const std::vector<double>& weights) {
  const std::size_t num_classes = weights.size();
  if (num_classes < 2) fail(Errc::BadWeights, "need at least 2 mixture weights");
  double sum = 0.0;
  for (double w : weights) {
    if (w < -kEntryTolerance) fail(Errc::BadWeights, "negative mixture weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    fail(Errc::BadWeights, "mixture weights sum to " + std::to_string(sum));

  std::vector<ProbVector> atoms;
  std::vector<double> w(num_classes);
  for (std::size_t k = 0; k < num_classes; ++k) {
    std::vector<double> vertex(num_classes, 0.0);
    vertex[k] = 1.0;
    atoms.push_back(ProbVector::trusted(std::move(vertex)));
    w[k] = std::max(0.0, weights[k]) / sum;
  }
  return EmpiricalSecondOrder(std::move(atoms), std::move(w));
}

EmpiricalSecondOrder apply_transform(const EmpiricalSecondOrder& q, const TransformSpec& spec) {
  switch (spec.kind) {
    case TransformKind::MeanPreservingSpread:
      return mean_preserving_spread(q, spec.magnitude, spec.seed);
    case TransformKind::LocationShift:
      return location_shift(q, spec.shift);
    case TransformKind::CenterShift:
      return center_shift(q, spec.lambda);
  }
  fail(Errc::OutOfRange, "unknown transform kind");
}

}  // namespace souq
