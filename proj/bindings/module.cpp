#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "souq/axioms.hpp"
#include "souq/eval.hpp"
#include "souq/io.hpp"
#include "souq/measures.hpp"
#include "souq/simplex.hpp"
#include "souq/transforms.hpp"

namespace py = pybind11;
using namespace souq;

namespace {

EmpiricalSecondOrder make_ensemble(const std::vector<std::vector<double>>& rows,
                                   const std::vector<double>& weights) {
  std::vector<ProbVector> atoms;
  atoms.reserve(rows.size());
  for (const auto& row : rows) atoms.push_back(make_prob_vector(row));
  if (weights.empty()) return EmpiricalSecondOrder(std::move(atoms));
  return EmpiricalSecondOrder(std::move(atoms), weights);
}

}  // namespace

PYBIND11_MODULE(_souq, m) {
  m.doc() = "second-order uncertainty quantification core";

  py::register_exception<SouqError>(m, "SouqError");

  py::class_<ProbVector>(m, "ProbVector")
      .def_property_readonly("probs", &ProbVector::probs)
      .def("__len__", &ProbVector::size)
      .def("__getitem__",
           [](const ProbVector& v, std::size_t k) {
             if (k >= v.size()) throw py::index_error();
             return v[k];
           })
      .def("__repr__", [](const ProbVector& v) {
        std::string out = "ProbVector([";
        for (std::size_t k = 0; k < v.size(); ++k)
          out += (k ? ", " : "") + std::to_string(v[k]);
        return out + "])";
      });
  m.def("make_prob_vector", &make_prob_vector, py::arg("raw"));

  py::class_<BinaryMarginal>(m, "BinaryMarginal")
      .def(py::init([](std::vector<double> values, std::vector<double> weights) {
             BinaryMarginal out;
             out.values = std::move(values);
             if (weights.empty())
               weights.assign(out.values.size(), 1.0 / static_cast<double>(out.values.size()));
             out.weights = std::move(weights);
             return out;
           }),
           py::arg("values"), py::arg("weights") = std::vector<double>{})
      .def_readonly("values", &BinaryMarginal::values)
      .def_readonly("weights", &BinaryMarginal::weights)
      .def("mean", &BinaryMarginal::mean);

  py::class_<EmpiricalSecondOrder>(m, "EmpiricalSecondOrder")
      .def(py::init(&make_ensemble), py::arg("atoms"), py::arg("weights") = std::vector<double>{})
      .def_property_readonly("atoms", &EmpiricalSecondOrder::atoms)
      .def_property_readonly("weights", &EmpiricalSecondOrder::weights)
      .def_property_readonly("num_classes", &EmpiricalSecondOrder::num_classes)
      .def_property_readonly("num_atoms", &EmpiricalSecondOrder::num_atoms);

  py::class_<DirichletSecondOrder>(m, "DirichletSecondOrder")
      .def(py::init<std::vector<double>>(), py::arg("alpha"))
      .def_readonly("alpha", &DirichletSecondOrder::alpha)
      .def_property_readonly("alpha0", &DirichletSecondOrder::alpha0)
      .def("mean", &DirichletSecondOrder::mean);

  m.def("second_order_mean", &second_order_mean, py::arg("q"));
  m.def("marginal", &marginal, py::arg("q"), py::arg("k"));
  m.def("restrict_labels", &restrict_labels, py::arg("q"), py::arg("labels"));
  m.def("sample_dirichlet", &sample_dirichlet, py::arg("d"), py::arg("n"), py::arg("seed"));

  py::enum_<MeasureFamily>(m, "MeasureFamily")
      .value("GlobalEntropy", MeasureFamily::GlobalEntropy)
      .value("LabelEntropy", MeasureFamily::LabelEntropy)
      .value("Variance", MeasureFamily::Variance);
  m.def("family_from_code", &family_from_code, py::arg("code"));
  m.def("family_code", &family_code, py::arg("family"));

  py::class_<UncertaintyTriple>(m, "UncertaintyTriple")
      .def_readonly("total", &UncertaintyTriple::total)
      .def_readonly("aleatoric", &UncertaintyTriple::aleatoric)
      .def_readonly("epistemic", &UncertaintyTriple::epistemic)
      .def("__repr__", [](const UncertaintyTriple& t) {
        return "UncertaintyTriple(total=" + std::to_string(t.total) +
               ", aleatoric=" + std::to_string(t.aleatoric) +
               ", epistemic=" + std::to_string(t.epistemic) + ")";
      });

  py::class_<LabelWiseReport>(m, "LabelWiseReport")
      .def_readonly("family", &LabelWiseReport::family)
      .def_readonly("per_label", &LabelWiseReport::per_label)
      .def_readonly("global_", &LabelWiseReport::global);

  m.def("binary_entropy", &binary_entropy, py::arg("theta"));
  m.def("shannon_entropy", &shannon_entropy, py::arg("theta"));
  m.def("global_entropy_measures", &global_entropy_measures, py::arg("q"));
  m.def("label_entropy_measures", &label_entropy_measures, py::arg("q"));
  m.def("variance_measures", &variance_measures, py::arg("q"));
  m.def("measure_report", &measure_report, py::arg("family"), py::arg("q"));
  m.def("per_label_triple", &per_label_triple, py::arg("family"), py::arg("qk"));
  m.def("dirichlet_variance_oracle", &dirichlet_variance_oracle, py::arg("d"));
  m.def("max_total_uncertainty", &max_total_uncertainty, py::arg("family"),
        py::arg("num_classes"));

  py::enum_<ScoringRule>(m, "ScoringRule")
      .value("LogLoss", ScoringRule::LogLoss)
      .value("SquaredError", ScoringRule::SquaredError);
  m.def("pointwise_loss", &pointwise_loss, py::arg("rule"), py::arg("pred"), py::arg("outcome"));
  m.def("expected_loss", &expected_loss, py::arg("rule"), py::arg("pred"), py::arg("theta"));
  m.def("is_strictly_proper", &is_strictly_proper, py::arg("rule"));
  m.def("loss_based_measures", &loss_based_measures, py::arg("qk"), py::arg("rule"));

  py::class_<SpreadResult>(m, "SpreadResult")
      .def_readonly("q", &SpreadResult::q)
      .def_readonly("offsets", &SpreadResult::offsets)
      .def_readonly("var_z", &SpreadResult::var_z);
  m.def("mean_preserving_spread", &mean_preserving_spread, py::arg("q"), py::arg("magnitude"),
        py::arg("seed"));
  m.def("mean_preserving_spread_detail", &mean_preserving_spread_detail, py::arg("q"),
        py::arg("magnitude"), py::arg("seed"));
  m.def("location_shift", &location_shift, py::arg("q"), py::arg("z"));
  m.def("center_shift", &center_shift, py::arg("q"), py::arg("lambda_"));
  m.def("center_shift_vector", &center_shift_vector, py::arg("q"), py::arg("lambda_"));
  m.def("dirac_mixture", &dirac_mixture, py::arg("weights"));

  py::enum_<Axiom>(m, "Axiom")
      .value("A0", Axiom::A0)
      .value("A1", Axiom::A1)
      .value("A2", Axiom::A2)
      .value("A3", Axiom::A3)
      .value("A4", Axiom::A4)
      .value("A5", Axiom::A5)
      .value("A6", Axiom::A6)
      .value("A7", Axiom::A7);
  py::enum_<Verdict>(m, "Verdict")
      .value("Holds", Verdict::Holds)
      .value("Violated", Verdict::Violated)
      .value("NotApplicable", Verdict::NotApplicable);
  py::class_<AxiomWitness>(m, "AxiomWitness")
      .def_readonly("q", &AxiomWitness::q)
      .def_readonly("q_prime", &AxiomWitness::q_prime)
      .def_readonly("shift", &AxiomWitness::shift)
      .def_readonly("before", &AxiomWitness::before)
      .def_readonly("after", &AxiomWitness::after)
      .def_readonly("detail", &AxiomWitness::detail);
  py::class_<AxiomResult>(m, "AxiomResult")
      .def_readonly("axiom", &AxiomResult::axiom)
      .def_readonly("family", &AxiomResult::family)
      .def_readonly("verdict", &AxiomResult::verdict)
      .def_readonly("witness", &AxiomResult::witness)
      .def_readonly("note", &AxiomResult::note)
      .def_readonly("expected_violation", &AxiomResult::expected_violation);
  m.def("claimed_axioms", &claimed_axioms, py::arg("family"));
  m.def("run_axiom_suite", &run_axiom_suite, py::arg("family"), py::arg("n_cases"),
        py::arg("seed"));

  py::enum_<Cohort>(m, "Cohort")
      .value("InDistribution", Cohort::InDistribution)
      .value("OutOfDistribution", Cohort::OutOfDistribution);
  py::class_<ScoredInstance>(m, "ScoredInstance")
      .def(py::init([](std::string instance_id, double score, std::size_t predicted,
                       std::optional<std::size_t> truth, std::optional<Cohort> cohort) {
             ScoredInstance item;
             item.instance_id = std::move(instance_id);
             item.score = score;
             item.predicted = predicted;
             item.truth = truth;
             item.cohort = cohort;
             return item;
           }),
           py::arg("instance_id"), py::arg("score"), py::arg("predicted") = 0,
           py::arg("truth") = std::nullopt, py::arg("cohort") = std::nullopt)
      .def_readonly("instance_id", &ScoredInstance::instance_id)
      .def_readonly("score", &ScoredInstance::score)
      .def_readonly("predicted", &ScoredInstance::predicted)
      .def_readonly("truth", &ScoredInstance::truth)
      .def_readonly("cohort", &ScoredInstance::cohort);
  py::class_<EvalCurve>(m, "EvalCurve")
      .def_readonly("score_name", &EvalCurve::score_name)
      .def_readonly("points", &EvalCurve::points);
  py::class_<AbstentionResult>(m, "AbstentionResult")
      .def_readonly("coverage", &AbstentionResult::coverage)
      .def_readonly("accuracy", &AbstentionResult::accuracy)
      .def_readonly("empty", &AbstentionResult::empty);
  m.def("accuracy_rejection_curve", &accuracy_rejection_curve, py::arg("items"), py::arg("grid"),
        py::arg("score_name") = std::string{});
  m.def("auroc", &auroc, py::arg("items"));
  m.def("abstention_accuracy", &abstention_accuracy, py::arg("items"), py::arg("threshold"));
  m.def("default_rejection_grid", &default_rejection_grid);

  py::class_<PredictionsData>(m, "PredictionsData")
      .def_readonly("class_names", &PredictionsData::class_names)
      .def_readonly("by_instance", &PredictionsData::by_instance);
  m.def("load_predictions", &load_predictions, py::arg("path"));
  m.def("load_labels", &load_labels, py::arg("path"));
}
