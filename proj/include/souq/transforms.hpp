#pragma once

#include <cstdint>
#include <vector>

#include "souq/simplex.hpp"

namespace souq {

enum class TransformKind { MeanPreservingSpread, LocationShift, CenterShift };

/// Serializable description of a distribution transform.
///   MeanPreservingSpread: magnitude = spread scale, seed = direction seed
///   LocationShift:        shift = constant zero-sum vector
///   CenterShift:          lambda in (0,1)
struct TransformSpec {
  TransformKind kind = TransformKind::MeanPreservingSpread;
  double magnitude = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> shift;
};

/// Spread output together with the applied per-atom offsets, so callers can
/// verify the variance increment identity sum_k Var(Z_k).
struct SpreadResult {
  EmpiricalSecondOrder q;
  /// One zero-sum offset per input atom (all-zero for atoms with no room).
  std::vector<std::vector<double>> offsets;
  /// Var(Z_k) per class under the input atom weights.
  std::vector<double> var_z;
};

/// Replaces each atom theta of weight w by theta +/- z at weight w/2 each,
/// with z a zero-sum vector scaled per atom so both offspring stay on the
/// simplex. Atoms at vertices are kept unchanged; NoRoom if every atom is a
/// vertex. The mean is preserved and max_k Var(Z_k) > 0.
SpreadResult mean_preserving_spread_detail(const EmpiricalSecondOrder& q, double magnitude,
                                           std::uint64_t seed);
EmpiricalSecondOrder mean_preserving_spread(const EmpiricalSecondOrder& q, double magnitude,
                                            std::uint64_t seed);

/// Translates every atom by the constant zero-sum vector z. Per-label
/// variances are unchanged. Throws ZeroShift / NotZeroSum / LeavesSimplex.
EmpiricalSecondOrder location_shift(const EmpiricalSecondOrder& q, const std::vector<double>& z);

/// The shift implied by a center shift with the given lambda:
/// z = (1 - lambda) (barycenter - E[Theta]).
std::vector<double> center_shift_vector(const EmpiricalSecondOrder& q, double lambda);

/// Location shift moving the mean toward the barycenter:
/// E[Theta'] = lambda E[Theta] + (1 - lambda) (1/K, ..., 1/K).
/// Throws AlreadyCentered / LeavesSimplex.
EmpiricalSecondOrder center_shift(const EmpiricalSecondOrder& q, double lambda);

/// Mixture of second-order Diracs on the K simplex vertices with the given
/// weights; its aleatoric uncertainty vanishes in every label-wise family.
EmpiricalSecondOrder dirac_mixture(const std::vector<double>& weights);

EmpiricalSecondOrder apply_transform(const EmpiricalSecondOrder& q, const TransformSpec& spec);

}  // namespace souq
