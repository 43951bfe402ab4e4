#include "souq/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "souq/rng.hpp"

namespace souq {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& field, const std::string& where) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    fail(Errc::ParseError, where + ": '" + field + "' is not a number");
  return value;
}

std::size_t parse_index(const std::string& field, const std::string& where) {
  std::size_t value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    fail(Errc::ParseError, where + ": '" + field + "' is not a class index");
  return value;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoFailure, "cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::size_t argmax_class(const ProbVector& v) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] > v[best]) best = k;
  return best;
}

std::string sanitize_csv(std::string text) {
  for (auto& c : text)
    if (c == ',' || c == '\n') c = ';';
  return text;
}

ordered_json json_distribution(const EmpiricalSecondOrder& q) {
  ordered_json atoms = ordered_json::array();
  for (const auto& atom : q.atoms()) atoms.push_back(atom.probs());
  return ordered_json{{"atoms", atoms}, {"weights", q.weights()}};
}

ordered_json json_witness(const AxiomWitness& w) {
  ordered_json out;
  out["before"] = w.before;
  out["after"] = w.after;
  out["detail"] = w.detail;
  if (!w.shift.empty()) out["shift"] = w.shift;
  out["q"] = json_distribution(w.q);
  if (w.q_prime) out["q_prime"] = json_distribution(*w.q_prime);
  return out;
}

void write_output(const RunConfig& config, const ordered_json& meta,
                  const std::vector<std::string>& csv_header,
                  const std::vector<std::vector<std::string>>& csv_rows,
                  const ordered_json& json_rows) {
  if (config.out_path.empty()) fail(Errc::BadConfig, "output path required");
  if (config.format == OutputFormat::Json) {
    ordered_json doc;
    doc["meta"] = meta;
    doc["rows"] = json_rows;
    atomic_write(config.out_path, doc.dump(2) + "\n");
    return;
  }
  std::string out;
  for (const auto& [key, value] : meta.items()) {
    out += "# " + key + ": ";
    out += value.is_string() ? value.get<std::string>() : value.dump();
    out += '\n';
  }
  for (std::size_t i = 0; i < csv_header.size(); ++i) {
    if (i) out += ',';
    out += csv_header[i];
  }
  out += '\n';
  for (const auto& row : csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  atomic_write(config.out_path, out);
}

struct ScoreBundle {
  std::vector<ScoredInstance> tu, au, eu;
};

ScoreBundle scored_instances(const PredictionsData& data,
                             const std::map<std::string, std::size_t>& labels,
                             MeasureFamily family) {
  ScoreBundle bundle;
  for (const auto& [id, q] : data.by_instance) {
    const auto it = labels.find(id);
    if (it == labels.end()) fail(Errc::MissingLabel, "instance '" + id + "' missing from labels");
    if (it->second >= q.num_classes())
      fail(Errc::IndexOutOfRange, "label " + std::to_string(it->second) + " for instance '" + id +
                                      "' out of range for K=" + std::to_string(q.num_classes()));
    const auto report = measure_report(family, q);
    ScoredInstance item;
    item.instance_id = id;
    item.predicted = argmax_class(second_order_mean(q));
    item.truth = it->second;
    item.score = report.global.total;
    bundle.tu.push_back(item);
    item.score = report.global.aleatoric;
    bundle.au.push_back(item);
    item.score = report.global.epistemic;
    bundle.eu.push_back(item);
  }
  return bundle;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::vector<double> parse_grid(const std::string& spec) {
  const std::size_t c1 = spec.find(':');
  const std::size_t c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    fail(Errc::BadGrid, "grid spec must be f0:f1:step, got '" + spec + "'");
  const double f0 = parse_double(spec.substr(0, c1), "grid");
  const double f1 = parse_double(spec.substr(c1 + 1, c2 - c1 - 1), "grid");
  const double step = parse_double(spec.substr(c2 + 1), "grid");
  if (!(step > 0.0) || f0 < 0.0 || f1 >= 1.0 || f1 < f0)
    fail(Errc::BadGrid, "grid requires 0 <= f0 <= f1 < 1 and step > 0");
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double f = f0 + static_cast<double>(i) * step;
    if (f > f1 + 1e-12) break;
    grid.push_back(f);
  }
  return grid;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoFailure, "cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(Errc::IoFailure, "write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(Errc::IoFailure, "rename to '" + path + "' failed: " + ec.message());
}

PredictionsData load_predictions(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines[0].empty()) fail(Errc::ParseError, "'" + path + "': empty predictions file");
  const auto header = split_csv(lines[0]);
  if (header.size() < 4 || header[0] != "instance_id" || header[1] != "member_id")
    fail(Errc::ParseError,
         "'" + path + "' line 1: header must be instance_id,member_id,<class columns>");
  PredictionsData data;
  data.class_names.assign(header.begin() + 2, header.end());
  const std::size_t num_classes = data.class_names.size();

  struct Row {
    std::string member;
    std::vector<double> probs;
  };
  std::map<std::string, std::vector<Row>> rows;
  for (std::size_t lineno = 2; lineno <= lines.size(); ++lineno) {
    const std::string& line = lines[lineno - 1];
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    const std::string where = "'" + path + "' line " + std::to_string(lineno);
    if (fields.size() != 2 + num_classes)
      fail(Errc::ParseError, where + ": expected " + std::to_string(2 + num_classes) +
                                 " fields, got " + std::to_string(fields.size()));
    Row row;
    row.member = fields[1];
    row.probs.reserve(num_classes);
    for (std::size_t k = 0; k < num_classes; ++k)
      row.probs.push_back(parse_double(fields[2 + k], where + " column " + std::to_string(3 + k)));
    rows[fields[0]].push_back(std::move(row));
  }
  if (rows.empty()) fail(Errc::ParseError, "'" + path + "': no data rows");

  // all instances must carry the same member set
  std::vector<std::string> reference;
  for (auto& [id, instance_rows] : rows) {
    std::sort(instance_rows.begin(), instance_rows.end(),
              [](const Row& a, const Row& b) { return a.member < b.member; });
    std::vector<std::string> members;
    members.reserve(instance_rows.size());
    for (const auto& r : instance_rows) members.push_back(r.member);
    for (std::size_t i = 1; i < members.size(); ++i)
      if (members[i] == members[i - 1])
        fail(Errc::InconsistentMembers,
             "instance '" + id + "' repeats member '" + members[i] + "'");
    if (reference.empty()) {
      reference = members;
    } else if (members != reference) {
      fail(Errc::InconsistentMembers, "instance '" + id + "' has a different member set");
    }
  }

  for (const auto& [id, instance_rows] : rows) {
    std::vector<ProbVector> atoms;
    atoms.reserve(instance_rows.size());
    for (const auto& row : instance_rows) {
      try {
        atoms.push_back(make_prob_vector(row.probs));
      } catch (const SouqError& e) {
        fail(Errc::BadProbabilityRow,
             "instance '" + id + "' member '" + row.member + "': " + e.what());
      }
    }
    data.by_instance.emplace(id, EmpiricalSecondOrder(std::move(atoms)));
  }
  return data;
}

std::map<std::string, std::size_t> load_labels(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) fail(Errc::ParseError, "'" + path + "': empty labels file");
  const auto header = split_csv(lines[0]);
  if (header.size() != 2 || header[0] != "instance_id" || header[1] != "label")
    fail(Errc::ParseError, "'" + path + "' line 1: header must be instance_id,label");
  std::map<std::string, std::size_t> labels;
  for (std::size_t lineno = 2; lineno <= lines.size(); ++lineno) {
    const std::string& line = lines[lineno - 1];
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    const std::string where = "'" + path + "' line " + std::to_string(lineno);
    if (fields.size() != 2) fail(Errc::ParseError, where + ": expected 2 fields");
    const auto [it, inserted] =
        labels.emplace(fields[0], parse_index(fields[1], where));
    if (!inserted) fail(Errc::ParseError, where + ": duplicate instance '" + fields[0] + "'");
  }
  if (labels.empty()) fail(Errc::ParseError, "'" + path + "': no data rows");
  return labels;
}

SimulationResult simulate_ensembles(const RunConfig& config) {
  const bool fixed_alpha = !config.alpha.empty();
  const bool scaled_alpha = config.alpha0 > 0.0;
  if (fixed_alpha == scaled_alpha)
    fail(Errc::BadConfig, "simulate needs exactly one of a fixed alpha or alpha0 with classes");
  if (scaled_alpha && config.n_classes < 2)
    fail(Errc::BadConfig, "simulate with alpha0 needs at least 2 classes");
  if (config.n_instances < 1 || config.n_instances > 999999)
    fail(Errc::BadConfig, "instance count must be in [1, 999999]");
  if (config.n_members < 1 || config.n_members > 999)
    fail(Errc::BadConfig, "member count must be in [1, 999]");
  if (fixed_alpha) {
    for (double a : config.alpha)
      if (!(a > 0.0)) fail(Errc::BadAlpha, "alpha entries must be strictly positive");
    if (config.alpha.size() < 2) fail(Errc::BadAlpha, "alpha needs at least 2 entries");
  }

  const std::size_t num_classes = fixed_alpha ? config.alpha.size() : config.n_classes;
  Rng rng(config.seed);
  SimulationResult result;
  for (std::size_t k = 0; k < num_classes; ++k)
    result.class_names.push_back("p_" + std::to_string(k));

  std::vector<double> fixed_mean;
  if (fixed_alpha) fixed_mean = DirichletSecondOrder(config.alpha).mean();

  const std::vector<double> flat(num_classes, 1.0);
  char id_buf[16];
  for (std::size_t i = 0; i < config.n_instances; ++i) {
    std::snprintf(id_buf, sizeof id_buf, "i%06zu", i);
    const std::string id(id_buf);

    std::vector<double> mu;
    std::vector<double> alpha_i;
    if (fixed_alpha) {
      mu = fixed_mean;
      alpha_i = config.alpha;
    } else {
      mu = rng.dirichlet(flat);
      alpha_i.resize(num_classes);
      for (std::size_t k = 0; k < num_classes; ++k)
        alpha_i[k] = std::max(config.alpha0 * mu[k], 1e-2);
    }

    std::vector<ProbVector> atoms;
    atoms.reserve(config.n_members);
    for (std::size_t m = 0; m < config.n_members; ++m)
      atoms.push_back(ProbVector::trusted(rng.dirichlet(alpha_i)));

    // instance truth sampled from the instance mean
    const double u = rng.uniform01();
    double cumulative = 0.0;
    std::size_t truth = num_classes - 1;
    for (std::size_t k = 0; k < num_classes; ++k) {
      cumulative += mu[k];
      if (u < cumulative) {
        truth = k;
        break;
      }
    }

    result.instances.emplace(id, EmpiricalSecondOrder(std::move(atoms)));
    result.labels.emplace(id, truth);
  }
  return result;
}

void cmd_simulate(const RunConfig& config) {
  const auto sim = simulate_ensembles(config);
  std::string out = "instance_id,member_id";
  for (const auto& name : sim.class_names) out += "," + name;
  out += '\n';
  char member_buf[16];
  for (const auto& [id, q] : sim.instances) {
    for (std::size_t m = 0; m < q.num_atoms(); ++m) {
      std::snprintf(member_buf, sizeof member_buf, "m%03zu", m);
      out += id;
      out += ',';
      out += member_buf;
      for (std::size_t k = 0; k < q.num_classes(); ++k) out += "," + format_double(q.atoms()[m][k]);
      out += '\n';
    }
  }
  if (config.out_path.empty()) fail(Errc::BadConfig, "output path required");
  atomic_write(config.out_path, out);

  if (!config.labels_out_path.empty()) {
    std::string labels_out = "instance_id,label\n";
    for (const auto& [id, label] : sim.labels)
      labels_out += id + "," + std::to_string(label) + "\n";
    atomic_write(config.labels_out_path, labels_out);
  }
}

void cmd_measure(const RunConfig& config) {
  const auto data = load_predictions(config.input_path);
  const bool label_wise = config.family != MeasureFamily::GlobalEntropy;

  std::vector<std::string> header = {"instance_id", "predicted", "tu", "au", "eu"};
  if (label_wise) {
    for (const auto& name : data.class_names) {
      header.push_back("tu_" + name);
      header.push_back("au_" + name);
      header.push_back("eu_" + name);
    }
  }

  std::vector<std::vector<std::string>> csv_rows;
  ordered_json json_rows = ordered_json::array();
  for (const auto& [id, q] : data.by_instance) {
    const auto report = measure_report(config.family, q);
    const std::size_t predicted = argmax_class(second_order_mean(q));
    std::vector<std::string> row = {id, std::to_string(predicted),
                                    format_double(report.global.total),
                                    format_double(report.global.aleatoric),
                                    format_double(report.global.epistemic)};
    ordered_json json_row;
    json_row["instance_id"] = id;
    json_row["predicted"] = predicted;
    json_row["tu"] = report.global.total;
    json_row["au"] = report.global.aleatoric;
    json_row["eu"] = report.global.epistemic;
    if (label_wise) {
      for (std::size_t k = 0; k < report.per_label.size(); ++k) {
        const auto& t = report.per_label[k];
        row.push_back(format_double(t.total));
        row.push_back(format_double(t.aleatoric));
        row.push_back(format_double(t.epistemic));
        const auto& name = data.class_names[k];
        json_row["tu_" + name] = t.total;
        json_row["au_" + name] = t.aleatoric;
        json_row["eu_" + name] = t.epistemic;
      }
    }
    csv_rows.push_back(std::move(row));
    json_rows.push_back(std::move(json_row));
  }

  ordered_json meta;
  meta["task"] = "measure";
  meta["family"] = family_code(config.family);
  meta["n_instances"] = data.by_instance.size();
  meta["classes"] = data.class_names;
  write_output(config, meta, header, csv_rows, json_rows);
}

void cmd_arc(const RunConfig& config) {
  const auto data = load_predictions(config.input_path);
  const auto labels = load_labels(config.labels_path);
  const auto bundle = scored_instances(data, labels, config.family);
  const auto grid = config.grid.empty() ? default_rejection_grid() : config.grid;

  const auto tu_curve = accuracy_rejection_curve(bundle.tu, grid, "tu");
  const auto au_curve = accuracy_rejection_curve(bundle.au, grid, "au");
  const auto eu_curve = accuracy_rejection_curve(bundle.eu, grid, "eu");

  std::vector<std::vector<std::string>> csv_rows;
  ordered_json json_rows = ordered_json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv_rows.push_back({format_double(grid[i]), format_double(tu_curve.points[i].second),
                        format_double(au_curve.points[i].second),
                        format_double(eu_curve.points[i].second)});
    json_rows.push_back(ordered_json{{"fraction", grid[i]},
                                     {"acc_tu", tu_curve.points[i].second},
                                     {"acc_au", au_curve.points[i].second},
                                     {"acc_eu", eu_curve.points[i].second}});
  }

  ordered_json meta;
  meta["task"] = "arc";
  meta["family"] = family_code(config.family);
  meta["n_instances"] = data.by_instance.size();
  meta["seed"] = config.seed;
  write_output(config, meta, {"fraction", "acc_tu", "acc_au", "acc_eu"}, csv_rows, json_rows);
}

void cmd_ood(const RunConfig& config) {
  const auto id_data = load_predictions(config.input_path);
  const auto ood_data = load_predictions(config.ood_path);

  const MeasureFamily families[] = {MeasureFamily::Variance, MeasureFamily::LabelEntropy,
                                    MeasureFamily::GlobalEntropy};
  std::vector<std::vector<std::string>> csv_rows;
  ordered_json json_rows = ordered_json::array();
  for (const auto family : families) {
    std::vector<ScoredInstance> items;
    items.reserve(id_data.by_instance.size() + ood_data.by_instance.size());
    auto add = [&](const PredictionsData& data, Cohort cohort, const char* prefix) {
      for (const auto& [id, q] : data.by_instance) {
        ScoredInstance item;
        item.instance_id = std::string(prefix) + id;
        item.score = measure_report(family, q).global.epistemic;
        item.cohort = cohort;
        items.push_back(std::move(item));
      }
    };
    add(id_data, Cohort::InDistribution, "id/");
    add(ood_data, Cohort::OutOfDistribution, "ood/");
    const double value = auroc(items);
    const std::string score_name = std::string("eu_") + family_code(family);
    csv_rows.push_back({score_name, format_double(value),
                        std::to_string(id_data.by_instance.size()),
                        std::to_string(ood_data.by_instance.size())});
    json_rows.push_back(ordered_json{{"score", score_name},
                                     {"auroc", value},
                                     {"n_id", id_data.by_instance.size()},
                                     {"n_ood", ood_data.by_instance.size()}});
  }

  ordered_json meta;
  meta["task"] = "ood";
  meta["seed"] = config.seed;
  meta["n_id"] = id_data.by_instance.size();
  meta["n_ood"] = ood_data.by_instance.size();
  write_output(config, meta, {"score", "auroc", "n_id", "n_ood"}, csv_rows, json_rows);
}

int cmd_axioms(const RunConfig& config) {
  if (config.n_cases < 1) fail(Errc::BadConfig, "axioms needs at least one case");
  const auto results = run_axiom_suite(config.family, config.n_cases, config.seed);

  std::vector<std::vector<std::string>> csv_rows;
  ordered_json json_rows = ordered_json::array();
  bool unexpected_violation = false;
  for (const auto& r : results) {
    if (r.verdict == Verdict::Violated && !r.expected_violation) unexpected_violation = true;
    csv_rows.push_back({axiom_name(r.axiom), verdict_name(r.verdict),
                        r.expected_violation ? "true" : "false", sanitize_csv(r.note)});
    ordered_json row;
    row["axiom"] = axiom_name(r.axiom);
    row["verdict"] = verdict_name(r.verdict);
    row["expected_violation"] = r.expected_violation;
    row["note"] = r.note;
    row["witness"] = r.witness ? json_witness(*r.witness) : ordered_json(nullptr);
    json_rows.push_back(std::move(row));
  }

  ordered_json meta;
  meta["task"] = "axioms";
  meta["family"] = family_code(config.family);
  meta["cases"] = config.n_cases;
  meta["seed"] = config.seed;
  meta["rng"] = std::string(kRngName) + " v" + std::to_string(kRngVersion);
  write_output(config, meta, {"axiom", "verdict", "expected_violation", "note"}, csv_rows,
               json_rows);
  return unexpected_violation ? 2 : 0;
}

}  // namespace souq
