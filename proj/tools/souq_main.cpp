#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "souq/io.hpp"

namespace {

using souq::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& config, std::string& family,
                        std::string& format) {
  cmd->add_option("--family", family, "measure family: ent, lent, or var");
  cmd->add_option("--seed", config.seed, "random seed");
  cmd->add_option("--out", config.out_path, "output file path")->required();
  cmd->add_option("--format", format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

souq::OutputFormat parse_format(const std::string& format) {
  return format == "json" ? souq::OutputFormat::Json : souq::OutputFormat::Csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"souq: total/aleatoric/epistemic uncertainty from second-order distributions"};
  app.require_subcommand(1);

  RunConfig config;
  std::string family = "var";
  std::string format = "csv";
  std::string grid_spec;

  auto* measure = app.add_subcommand("measure", "per-instance uncertainty report");
  measure->add_option("--input", config.input_path, "predictions CSV")->required();
  add_common_options(measure, config, family, format);

  auto* arc = app.add_subcommand("arc", "accuracy-rejection curves");
  arc->add_option("--input", config.input_path, "predictions CSV")->required();
  arc->add_option("--labels", config.labels_path, "labels CSV")->required();
  arc->add_option("--grid", grid_spec, "rejection grid f0:f1:step (default 0:0.95:0.05)");
  add_common_options(arc, config, family, format);

  auto* ood = app.add_subcommand("ood", "out-of-distribution AUROC per epistemic score");
  ood->add_option("--input", config.input_path, "in-distribution predictions CSV")->required();
  ood->add_option("--ood", config.ood_path, "out-of-distribution predictions CSV")->required();
  add_common_options(ood, config, family, format);

  auto* axioms = app.add_subcommand("axioms", "run the axiom suite");
  axioms->add_option("--cases", config.n_cases, "random cases per axiom (default 500)")
      ->check(CLI::PositiveNumber);
  add_common_options(axioms, config, family, format);

  auto* simulate = app.add_subcommand("simulate", "write a synthetic predictions file");
  simulate->add_option("--alpha", config.alpha,
                       "fixed Dirichlet concentration, comma separated")
      ->delimiter(',');
  simulate->add_option("--alpha0", config.alpha0,
                       "concentration scale for per-instance random means");
  simulate->add_option("--classes", config.n_classes, "number of classes (with --alpha0)");
  simulate->add_option("--instances", config.n_instances, "number of instances")->required();
  simulate->add_option("--members", config.n_members, "ensemble members per instance");
  simulate->add_option("--labels-out", config.labels_out_path,
                       "also write sampled instance labels to this CSV");
  add_common_options(simulate, config, family, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    config.family = souq::family_from_code(family);
    config.format = parse_format(format);
    if (!grid_spec.empty()) config.grid = souq::parse_grid(grid_spec);

    if (measure->parsed()) {
      config.task = souq::Task::Measure;
      souq::cmd_measure(config);
    } else if (arc->parsed()) {
      config.task = souq::Task::Arc;
      souq::cmd_arc(config);
    } else if (ood->parsed()) {
      config.task = souq::Task::Ood;
      souq::cmd_ood(config);
    } else if (axioms->parsed()) {
      config.task = souq::Task::Axioms;
      return souq::cmd_axioms(config);
    } else if (simulate->parsed()) {
      config.task = souq::Task::Simulate;
      souq::cmd_simulate(config);
    }
  } catch (const souq::SouqError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}
