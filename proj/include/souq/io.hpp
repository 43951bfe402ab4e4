#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "souq/axioms.hpp"
#include "souq/eval.hpp"
#include "souq/measures.hpp"

namespace souq {

enum class Task { Measure, Arc, Ood, Axioms, Simulate };
enum class OutputFormat { Csv, Json };

/// Configuration for one CLI invocation. Field relevance depends on the task;
/// each cmd_* validates what it needs.
struct RunConfig {
  Task task = Task::Measure;
  MeasureFamily family = MeasureFamily::Variance;
  std::string input_path;
  std::string labels_path;
  std::string ood_path;
  std::string out_path;
  std::vector<double> grid;  // empty -> default 0.00..0.95 step 0.05
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::Csv;
  // axioms
  std::size_t n_cases = 500;
  // simulate: either a fixed alpha for every instance, or per-instance
  // alpha_i = alpha0 * mu_i with mu_i drawn uniformly from the simplex
  std::vector<double> alpha;
  double alpha0 = 0.0;
  std::size_t n_classes = 0;
  std::size_t n_instances = 0;
  std::size_t n_members = 5;
  std::string labels_out_path;
};

/// Parsed predictions file: per-instance ensembles with uniform member
/// weights, keyed (and iterated) by lexicographic instance id.
struct PredictionsData {
  std::vector<std::string> class_names;
  std::map<std::string, EmpiricalSecondOrder> by_instance;
};

/// CSV with header `instance_id,member_id,p_0,...,p_{K-1}`. Every instance
/// must carry the same member set; member rows are ordered by member id.
PredictionsData load_predictions(const std::string& path);

/// CSV with header `instance_id,label`; label is a 0-based class index.
std::map<std::string, std::size_t> load_labels(const std::string& path);

/// In-memory form of cmd_simulate's output, for round-trip tests.
struct SimulationResult {
  std::vector<std::string> class_names;
  std::map<std::string, EmpiricalSecondOrder> instances;
  std::map<std::string, std::size_t> labels;
};
SimulationResult simulate_ensembles(const RunConfig& config);

/// Per-instance uncertainty report (global triple; per-label columns for the
/// label-wise families).
void cmd_measure(const RunConfig& config);

/// Accuracy-rejection curves for the family's TU/AU/EU scores.
void cmd_arc(const RunConfig& config);

/// OoD-detection AUROC for the epistemic score of all three families.
void cmd_ood(const RunConfig& config);

/// Axiom suite report. Returns 0, or 2 if an axiom was violated unexpectedly.
int cmd_axioms(const RunConfig& config);

/// Synthetic predictions file from per-instance Dirichlet draws.
void cmd_simulate(const RunConfig& config);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Parses "f0:f1:step" into a rejection grid.
std::vector<double> parse_grid(const std::string& spec);

/// Writes content to a temporary file and renames it into place.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace souq
