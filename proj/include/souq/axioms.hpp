#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "souq/measures.hpp"
#include "souq/transforms.hpp"

namespace souq {

enum class Axiom { A0, A1, A2, A3, A4, A5, A6, A7 };
enum class Verdict { Holds, Violated, NotApplicable };

const char* axiom_name(Axiom axiom);
const char* verdict_name(Verdict verdict);

/// Concrete case backing a verdict: the base distribution, the transformed
/// one when a transform was involved, and the measure values in question.
struct AxiomWitness {
  EmpiricalSecondOrder q;
  std::optional<EmpiricalSecondOrder> q_prime;
  std::vector<double> shift;  // location-shift vector when relevant
  double before = 0.0;
  double after = 0.0;
  std::string detail;
};

struct AxiomResult {
  Axiom axiom = Axiom::A0;
  MeasureFamily family = MeasureFamily::Variance;
  Verdict verdict = Verdict::NotApplicable;
  std::optional<AxiomWitness> witness;  // always present when Violated
  std::string note;
  /// True only for the documented location-shift failure of global-entropy
  /// EU; an expected violation does not fail the suite.
  bool expected_violation = false;
};

/// Axioms the family is documented to satisfy; the suite must report Holds
/// for each of them. Empty for GlobalEntropy, whose only documented property
/// here is the A5 violation.
std::vector<Axiom> claimed_axioms(MeasureFamily family);

/// Randomized property suite over n_cases distributions per axiom
/// (K in [2,10], M in [1,64]). Strict inequalities must clear 1e-12,
/// A5 equality holds within 1e-9, A7 partition equality within 1e-12.
/// For GlobalEntropy the suite searches for (and returns) a concrete A5
/// counterexample.
std::vector<AxiomResult> run_axiom_suite(MeasureFamily family, std::size_t n_cases,
                                         std::uint64_t seed);

}  // namespace souq
