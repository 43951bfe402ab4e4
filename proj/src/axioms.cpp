#include "souq/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "souq/rng.hpp"

namespace souq {

namespace {

constexpr double kStrictMargin = 1e-12;
constexpr double kEqualityTolerance = 1e-9;
constexpr double kPartitionTolerance = 1e-12;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

UncertaintyTriple family_triple(MeasureFamily f, const EmpiricalSecondOrder& q) {
  return measure_report(f, q).global;
}

struct CaseGen {
  Rng rng;

  explicit CaseGen(std::uint64_t seed) : rng(seed) {}

  std::size_t rand_classes() { return rng.uniform_int(2, 10); }
  std::size_t rand_atoms() { return rng.uniform_int(1, 64); }

  std::vector<double> rand_alpha(std::size_t num_classes) {
    std::vector<double> alpha(num_classes);
    const double lo = std::log(0.3), hi = std::log(10.0);
    for (auto& a : alpha) a = std::exp(lo + rng.uniform01() * (hi - lo));
    return alpha;
  }

  std::vector<double> rand_weights(std::size_t m) {
    if (m == 1) return {1.0};
    if (rng.uniform01() < 0.5) return std::vector<double>(m, 1.0 / static_cast<double>(m));
    return rng.dirichlet(std::vector<double>(m, 1.0));
  }

  /// Random empirical Q with the exact atom count requested.
  EmpiricalSecondOrder random_q(std::size_t num_classes, std::size_t num_atoms) {
    const auto alpha = rand_alpha(num_classes);
    std::vector<ProbVector> atoms;
    atoms.reserve(num_atoms);
    for (std::size_t m = 0; m < num_atoms; ++m)
      atoms.push_back(ProbVector::trusted(rng.dirichlet(alpha)));
    return EmpiricalSecondOrder(std::move(atoms), rand_weights(num_atoms));
  }

  /// Random empirical Q of random shape; unless interior_only, occasionally a
  /// mixture of vertex Diracs.
  EmpiricalSecondOrder random_q(bool interior_only = false) {
    if (!interior_only && rng.uniform01() < 0.1)
      return dirac_mixture(rng.dirichlet(std::vector<double>(rand_classes(), 1.0)));
    return random_q(rand_classes(), rand_atoms());
  }

  /// A distribution whose support is a single point: either a one-atom Q or a
  /// vertex mixture with all weight on one vertex.
  EmpiricalSecondOrder random_dirac() {
    const std::size_t num_classes = rand_classes();
    if (rng.uniform01() < 0.15) {
      std::vector<double> weights(num_classes, 0.0);
      weights[rng.uniform_int(0, num_classes - 1)] = 1.0;
      return dirac_mixture(weights);
    }
    return random_q(num_classes, 1);
  }

  /// Non-degenerate Q: some atom of weight >= 1e-3 deviates from the mean by
  /// >= 1e-3 in some coordinate, which forces EU > 1e-12 in every family.
  EmpiricalSecondOrder random_non_dirac_q() {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const std::size_t num_classes = rand_classes();
      const std::size_t num_atoms = rng.uniform_int(2, 64);
      auto q = random_q(num_classes, num_atoms);
      const auto mean = second_order_mean(q);
      double best = 0.0;
      for (std::size_t m = 0; m < q.num_atoms(); ++m) {
        if (q.weights()[m] < 1e-3) continue;
        for (std::size_t k = 0; k < num_classes; ++k)
          best = std::max(best, std::abs(q.atoms()[m][k] - mean[k]));
      }
      if (best >= 1e-3) return q;
    }
    throw std::logic_error("case generator failed to produce a non-degenerate Q");
  }

  /// Zero-sum direction over all coordinates, unit max-abs norm.
  std::vector<double> random_direction(std::size_t num_classes) {
    std::vector<double> dir(num_classes);
    for (;;) {
      double mean = 0.0;
      for (auto& d : dir) {
        d = rng.normal();
        mean += d;
      }
      mean /= static_cast<double>(num_classes);
      double max_abs = 0.0;
      for (auto& d : dir) {
        d -= mean;
        max_abs = std::max(max_abs, std::abs(d));
      }
      if (max_abs > 1e-9) {
        for (auto& d : dir) d /= max_abs;
        return dir;
      }
    }
  }

  /// A feasible location shift for q: all atoms stay on the simplex and the
  /// shift length is bounded away from zero.
  std::optional<std::vector<double>> feasible_shift(const EmpiricalSecondOrder& q) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      const auto dir = random_direction(q.num_classes());
      double room = 1.0;
      for (const auto& atom : q.atoms())
        for (std::size_t k = 0; k < q.num_classes(); ++k) {
          if (dir[k] > 0.0) room = std::min(room, (1.0 - atom[k]) / dir[k]);
          if (dir[k] < 0.0) room = std::min(room, atom[k] / -dir[k]);
        }
      if (room < 1e-4) continue;
      const double step = std::min(0.1, 0.5 * room);
      std::vector<double> z(dir.size());
      for (std::size_t k = 0; k < z.size(); ++k) z[k] = step * dir[k];
      return z;
    }
    return std::nullopt;
  }
};

AxiomResult make_result(Axiom axiom, MeasureFamily family, Verdict verdict, std::string note) {
  AxiomResult r;
  r.axiom = axiom;
  r.family = family;
  r.verdict = verdict;
  r.note = std::move(note);
  return r;
}

AxiomResult violated(Axiom axiom, MeasureFamily family, AxiomWitness witness, std::string note) {
  AxiomResult r = make_result(axiom, family, Verdict::Violated, std::move(note));
  r.witness = std::move(witness);
  return r;
}

std::string empirical_note(MeasureFamily family, std::string text) {
  if (family == MeasureFamily::GlobalEntropy) return "empirical; outside the claimed set. " + text;
  return text;
}

AxiomResult check_a0(MeasureFamily family, std::size_t n_cases, CaseGen& gen) {
  for (std::size_t i = 0; i < n_cases; ++i) {
    const auto q = gen.random_q();
    const auto report = measure_report(family, q);
    auto nonneg = [](const UncertaintyTriple& t) {
      return t.total >= 0.0 && t.aleatoric >= 0.0 && t.epistemic >= 0.0;
    };
    bool ok = nonneg(report.global);
    for (const auto& t : report.per_label) ok = ok && nonneg(t);
    if (!ok) {
      AxiomWitness w{q, std::nullopt, {}, 0.0, 0.0, "negative uncertainty component"};
      return violated(Axiom::A0, family, std::move(w), "non-negativity failed");
    }
  }
  return make_result(Axiom::A0, family, Verdict::Holds,
                     empirical_note(family, "TU, AU, EU non-negative on " +
                                                std::to_string(n_cases) + " random Q"));
}

AxiomResult check_a1(MeasureFamily family, std::size_t n_cases, CaseGen& gen) {
  double max_dirac_eu = 0.0;
  double min_spread_eu = 1.0;
  for (std::size_t i = 0; i < n_cases; ++i) {
    if (i % 2 == 0) {
      // Dirac: EU must vanish
      const auto q = gen.random_dirac();
      const double eu = family_triple(family, q).epistemic;
      max_dirac_eu = std::max(max_dirac_eu, eu);
      if (eu > kStrictMargin) {
        AxiomWitness w{q, std::nullopt, {}, 0.0, eu, "Dirac with EU = " + fmt(eu)};
        return violated(Axiom::A1, family, std::move(w), "EU(dirac) > 0");
      }
    } else {
      // genuinely spread Q: EU must be positive
      const auto q = gen.random_non_dirac_q();
      const double eu = family_triple(family, q).epistemic;
      min_spread_eu = std::min(min_spread_eu, eu);
      if (eu <= kStrictMargin) {
        AxiomWitness w{q, std::nullopt, {}, 0.0, eu, "non-Dirac with EU = " + fmt(eu)};
        return violated(Axiom::A1, family, std::move(w), "EU(non-dirac) not positive");
      }
    }
  }
  return make_result(Axiom::A1, family, Verdict::Holds,
                     empirical_note(family, "max EU(dirac) = " + fmt(max_dirac_eu) +
                                                ", min EU(non-dirac) = " + fmt(min_spread_eu)));
}

AxiomResult check_a2(MeasureFamily family, std::size_t n_cases, CaseGen& gen) {
  const double attain_tol = family == MeasureFamily::Variance ? 1e-12 : 1e-9;
  double worst_excess = -1.0;
  double worst_attain = 0.0;
  for (std::size_t i = 0; i < n_cases; ++i) {
    if (i % 2 == 0) {
      const auto q = gen.random_q();
      const double bound = max_total_uncertainty(family, q.num_classes());
      const double tu = family_triple(family, q).total;
      worst_excess = std::max(worst_excess, tu - bound);
      if (tu > bound + kEqualityTolerance) {
        AxiomWitness w{q, std::nullopt, {}, bound, tu, "TU exceeds the barycenter maximum"};
        return violated(Axiom::A2, family, std::move(w), "TU above closed-form maximum");
      }
    } else {
      // barycenter-mean Q attains the closed-form maximum
      const std::size_t num_classes = gen.rand_classes();
      EmpiricalSecondOrder q = [&] {
        if (gen.rng.uniform01() < 0.5)
          return dirac_mixture(
              std::vector<double>(num_classes, 1.0 / static_cast<double>(num_classes)));
        // rotation-symmetrized interior atoms
        const std::size_t base = gen.rng.uniform_int(1, 6);
        const auto alpha = gen.rand_alpha(num_classes);
        std::vector<ProbVector> atoms;
        std::vector<double> weights;
        const auto base_w = gen.rand_weights(base);
        for (std::size_t b = 0; b < base; ++b) {
          const auto theta = gen.rng.dirichlet(alpha);
          for (std::size_t r = 0; r < num_classes; ++r) {
            std::vector<double> rotated(num_classes);
            for (std::size_t k = 0; k < num_classes; ++k)
              rotated[k] = theta[(k + r) % num_classes];
            atoms.push_back(ProbVector::trusted(std::move(rotated)));
            weights.push_back(base_w[b] / static_cast<double>(num_classes));
          }
        }
        return EmpiricalSecondOrder(std::move(atoms), std::move(weights));
      }();
      const double bound = max_total_uncertainty(family, num_classes);
      const double tu = family_triple(family, q).total;
      worst_attain = std::max(worst_attain, std::abs(tu - bound));
      if (std::abs(tu - bound) > attain_tol) {
        AxiomWitness w{q, std::nullopt, {}, bound, tu, "barycenter-mean Q misses the maximum"};
        return violated(Axiom::A2, family, std::move(w), "maximum not attained at barycenter");
      }
    }
  }
  return make_result(Axiom::A2, family, Verdict::Holds,
                     empirical_note(family, "TU only; max excess " + fmt(worst_excess) +
                                                ", worst attainment gap " + fmt(worst_attain)));
}

AxiomResult check_a3(MeasureFamily family, std::size_t n_cases, CaseGen& gen) {
  double min_eu_margin = 1.0;
  double max_tu_drift = 0.0;
  double max_increment_gap = 0.0;
  std::size_t attempts = 0;
  for (std::size_t i = 0; i < n_cases; ++i) {
    if (++attempts > n_cases * 100)
      throw std::logic_error("A3 case generator exhausted its retry budget");
    EmpiricalSecondOrder q = gen.random_q(true);
    std::optional<SpreadResult> spread;
    for (int attempt = 0; attempt < 4 && !spread; ++attempt) {
      const double magnitude = 0.05 + 0.25 * gen.rng.uniform01();
      auto candidate = mean_preserving_spread_detail(q, magnitude, gen.rng.next_u64());
      double total_var = 0.0;
      for (double v : candidate.var_z) total_var += v;
      if (total_var >= 1e-8) spread = std::move(candidate);
    }
    if (!spread) {
      --i;  // wraps at zero; the attempt budget above bounds the loop
      continue;
    }
    const auto before = family_triple(family, q);
    const auto after = family_triple(family, spread->q);
    const double eu_margin = after.epistemic - before.epistemic;
    min_eu_margin = std::min(min_eu_margin, eu_margin);
    max_tu_drift = std::max(max_tu_drift, std::abs(after.total - before.total));
    if (eu_margin <= kStrictMargin) {
      AxiomWitness w{q, spread->q, {}, before.epistemic, after.epistemic,
                     "spread did not raise EU"};
      return violated(Axiom::A3, family, std::move(w), "EU not strictly increased by spread");
    }
    if (std::abs(after.total - before.total) > kEqualityTolerance) {
      AxiomWitness w{q, spread->q, {}, before.total, after.total, "spread moved TU"};
      return violated(Axiom::A3, family, std::move(w), "TU not preserved by mean-preserving spread");
    }
    if (family == MeasureFamily::Variance) {
      double total_var = 0.0;
      for (double v : spread->var_z) total_var += v;
      const double gap = std::abs(eu_margin - total_var);
      max_increment_gap = std::max(max_increment_gap, gap);
      if (gap > kEqualityTolerance) {
        AxiomWitness w{q, spread->q, {}, total_var, eu_margin, "EU increment != sum Var(Z_k)"};
        return violated(Axiom::A3, family, std::move(w), "variance increment identity failed");
      }
    }
  }
  std::string note = "strict EU increase (min margin " + fmt(min_eu_margin) + "), TU drift <= " +
                     fmt(max_tu_drift);
  if (family == MeasureFamily::Variance)
    note += ", increment identity gap <= " + fmt(max_increment_gap);
  return make_result(Axiom::A3, family, Verdict::Holds, empirical_note(family, std::move(note)));
}

AxiomResult check_a4(MeasureFamily family, std::size_t n_cases, CaseGen& gen) {
  double min_tu_margin = 1.0;
  double min_au_margin = 1.0;
  std::size_t attempts = 0;
  for (std::size_t i = 0; i < n_cases; ++i) {
    if (++attempts > n_cases * 100)
      throw std::logic_error("A4 case generator exhausted its retry budget");
    EmpiricalSecondOrder q = gen.random_q(true);
    const double barycenter = 1.0 / static_cast<double>(q.num_classes());
    const auto mean = second_order_mean(q);
    double dist2 = 0.0;
    for (std::size_t k = 0; k < mean.size(); ++k) {
      const double d = mean[k] - barycenter;
      dist2 += d * d;
    }
    if (dist2 < 1e-6) {
      --i;
      continue;
    }
    double lambda = 0.3 + 0.6 * gen.rng.uniform01();
    std::optional<EmpiricalSecondOrder> shifted;
    for (int attempt = 0; attempt < 8 && !shifted; ++attempt) {
      try {
        shifted = center_shift(q, lambda);
      } catch (const SouqError& e) {
        if (e.code() != Errc::LeavesSimplex) throw;
        lambda = 0.5 * (1.0 + lambda);  // shorter shift
      }
    }
    if (!shifted) {
      --i;
      continue;
    }
    const auto before = family_triple(family, q);
    const auto after = family_triple(family, *shifted);
    const double tu_margin = after.total - before.total;
    min_tu_margin = std::min(min_tu_margin, tu_margin);
    if (tu_margin <= kStrictMargin) {
      AxiomWitness w{q, *shifted, {}, before.total, after.total, "center shift did not raise TU"};
      return violated(Axiom::A4, family, std::move(w), "TU not strictly increased");
    }
    if (family == MeasureFamily::Variance) {
      const double au_margin = after.aleatoric - before.aleatoric;
      min_au_margin = std::min(min_au_margin, au_margin);
      if (au_margin <= kStrictMargin) {
        AxiomWitness w{q, *shifted, {}, before.aleatoric, after.aleatoric,
                       "center shift did not raise AU"};
        return violated(Axiom::A4, family, std::move(w), "AU not strictly increased");
      }
      if (std::abs(after.epistemic - before.epistemic) > kEqualityTolerance) {
        AxiomWitness w{q, *shifted, {}, before.epistemic, after.epistemic,
                       "center shift moved EU"};
        return violated(Axiom::A4, family, std::move(w), "EU not preserved by center shift");
      }
    }
  }
  std::string note;
  if (family == MeasureFamily::Variance)
    note = "strict for AU and TU (min TU margin " + fmt(min_tu_margin) + ", min AU margin " +
           fmt(min_au_margin) + ")";
  else
    note = "TU only; strict (min margin " + fmt(min_tu_margin) + ")";
  return make_result(Axiom::A4, family, Verdict::Holds, empirical_note(family, std::move(note)));
}

AxiomResult check_a5(MeasureFamily family, std::size_t n_cases, CaseGen& gen) {
  double max_delta = 0.0;
  std::size_t shifts_tried = 0;
  std::size_t attempts = 0;
  for (std::size_t i = 0; i < n_cases; ++i) {
    if (++attempts > n_cases * 100)
      throw std::logic_error("A5 case generator exhausted its retry budget");
    const auto q = gen.random_q(true);
    const auto z = gen.feasible_shift(q);
    if (!z) {
      --i;
      continue;
    }
    ++shifts_tried;
    const auto shifted = location_shift(q, *z);
    const double before = family_triple(family, q).epistemic;
    const double after = family_triple(family, shifted).epistemic;
    const double delta = std::abs(after - before);
    max_delta = std::max(max_delta, delta);

    if (family == MeasureFamily::Variance && delta > kEqualityTolerance) {
      AxiomWitness w{q, shifted, *z, before, after, "location shift moved variance EU"};
      return violated(Axiom::A5, family, std::move(w), "EU not invariant under location shift");
    }
    if (family == MeasureFamily::GlobalEntropy && delta > 1e-6) {
      AxiomWitness w{q, shifted, *z, before, after,
                     "location shift moved entropy EU by " + fmt(after - before)};
      AxiomResult r = violated(Axiom::A5, family, std::move(w),
                               "documented failure: entropy-based EU is location sensitive");
      r.expected_violation = true;
      return r;
    }
  }
  switch (family) {
    case MeasureFamily::Variance:
      return make_result(Axiom::A5, family, Verdict::Holds,
                         "EU invariant under " + std::to_string(shifts_tried) +
                             " location shifts (max |dEU| = " + fmt(max_delta) + ")");
    case MeasureFamily::LabelEntropy:
      return make_result(Axiom::A5, family, Verdict::NotApplicable,
                         "outside the family's claimed set; observed max |dEU| = " +
                             fmt(max_delta) + " over " + std::to_string(shifts_tried) + " shifts");
    case MeasureFamily::GlobalEntropy:
      return make_result(Axiom::A5, family, Verdict::Holds,
                         "no witness found in " + std::to_string(shifts_tried) +
                             " shifts (max |dEU| = " + fmt(max_delta) + ")");
  }
  fail(Errc::UnknownFamily, "unknown measure family");
}

AxiomResult check_a6(MeasureFamily family, std::size_t n_cases, CaseGen& gen) {
  double max_au = 0.0;
  for (std::size_t i = 0; i < n_cases; ++i) {
    const std::size_t num_classes = gen.rand_classes();
    std::vector<double> weights = gen.rng.dirichlet(std::vector<double>(num_classes, 1.0));
    if (i % 3 == 0) {
      // sparse mixture: zero out a strict subset and renormalize
      const std::size_t keep = gen.rng.uniform_int(1, num_classes - 1);
      for (std::size_t k = keep; k < num_classes; ++k) weights[k] = 0.0;
      double sum = 0.0;
      for (double w : weights) sum += w;
      for (auto& w : weights) w /= sum;
    }
    const auto q = dirac_mixture(weights);
    const double au = family_triple(family, q).aleatoric;
    max_au = std::max(max_au, au);
    if (au > kStrictMargin) {
      AxiomWitness w{q, std::nullopt, {}, 0.0, au, "vertex mixture with AU = " + fmt(au)};
      return violated(Axiom::A6, family, std::move(w), "AU(dirac mixture) not zero");
    }
  }
  return make_result(Axiom::A6, family, Verdict::Holds,
                     empirical_note(family, "max AU over vertex mixtures = " + fmt(max_au)));
}

AxiomResult check_a7(MeasureFamily family, std::size_t n_cases, CaseGen& gen) {
  if (family == MeasureFamily::GlobalEntropy)
    return make_result(Axiom::A7, family, Verdict::NotApplicable,
                       "the global entropy measure has no marginalized form over label subsets");
  double max_gap = 0.0;
  std::size_t attempts = 0;
  for (std::size_t i = 0; i < n_cases; ++i) {
    if (++attempts > n_cases * 100)
      throw std::logic_error("A7 case generator exhausted its retry budget");
    const auto q = gen.random_q();
    const std::size_t num_classes = q.num_classes();
    std::vector<std::size_t> part1, part2;
    for (std::size_t k = 0; k < num_classes; ++k)
      (gen.rng.uniform01() < 0.5 ? part1 : part2).push_back(k);
    if (part1.empty() || part2.empty()) {
      --i;
      continue;
    }
    auto part_sum = [&](const std::vector<std::size_t>& labels) {
      UncertaintyTriple sum;
      for (const auto& m : restrict_labels(q, labels)) {
        const auto t = per_label_triple(family, m);
        sum.total += t.total;
        sum.aleatoric += t.aleatoric;
        sum.epistemic += t.epistemic;
      }
      return sum;
    };
    const auto lhs = family_triple(family, q);
    const auto s1 = part_sum(part1);
    const auto s2 = part_sum(part2);
    const double gap = std::max({std::abs(lhs.total - (s1.total + s2.total)),
                                 std::abs(lhs.aleatoric - (s1.aleatoric + s2.aleatoric)),
                                 std::abs(lhs.epistemic - (s1.epistemic + s2.epistemic))});
    max_gap = std::max(max_gap, gap);
    if (gap > kPartitionTolerance) {
      AxiomWitness w{q, std::nullopt, {}, lhs.total, s1.total + s2.total,
                     "partition sums disagree with the global measure"};
      return violated(Axiom::A7, family, std::move(w), "partition additivity failed");
    }
  }
  return make_result(Axiom::A7, family, Verdict::Holds,
                     "additive over partitions (max gap " + fmt(max_gap) + ")");
}

}  // namespace

const char* axiom_name(Axiom axiom) {
  switch (axiom) {
    case Axiom::A0: return "A0";
    case Axiom::A1: return "A1";
    case Axiom::A2: return "A2";
    case Axiom::A3: return "A3";
    case Axiom::A4: return "A4";
    case Axiom::A5: return "A5";
    case Axiom::A6: return "A6";
    case Axiom::A7: return "A7";
  }
  return "?";
}

const char* verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::NotApplicable: return "not_applicable";
  }
  return "?";
}

std::vector<Axiom> claimed_axioms(MeasureFamily family) {
  switch (family) {
    case MeasureFamily::Variance:
      return {Axiom::A0, Axiom::A1, Axiom::A2, Axiom::A3,
              Axiom::A4, Axiom::A5, Axiom::A6, Axiom::A7};
    case MeasureFamily::LabelEntropy:
      return {Axiom::A0, Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::A6, Axiom::A7};
    case MeasureFamily::GlobalEntropy:
      return {};
  }
  return {};
}

std::vector<AxiomResult> run_axiom_suite(MeasureFamily family, std::size_t n_cases,
                                         std::uint64_t seed) {
  if (n_cases < 1) fail(Errc::BadConfig, "n_cases must be at least 1");
  std::vector<AxiomResult> results;
  results.reserve(8);
  const Axiom axioms[] = {Axiom::A0, Axiom::A1, Axiom::A2, Axiom::A3,
                          Axiom::A4, Axiom::A5, Axiom::A6, Axiom::A7};
  for (std::size_t idx = 0; idx < 8; ++idx) {
    CaseGen gen(seed ^ (0x9e3779b97f4a7c15ull * (idx + 1)));
    switch (axioms[idx]) {
      case Axiom::A0: results.push_back(check_a0(family, n_cases, gen)); break;
      case Axiom::A1: results.push_back(check_a1(family, n_cases, gen)); break;
      case Axiom::A2: results.push_back(check_a2(family, n_cases, gen)); break;
      case Axiom::A3: results.push_back(check_a3(family, n_cases, gen)); break;
      case Axiom::A4: results.push_back(check_a4(family, n_cases, gen)); break;
      case Axiom::A5: results.push_back(check_a5(family, n_cases, gen)); break;
      case Axiom::A6: results.push_back(check_a6(family, n_cases, gen)); break;
      case Axiom::A7: results.push_back(check_a7(family, n_cases, gen)); break;
    }
  }
  return results;
}

}  // namespace souq
