#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "souq/io.hpp"

using namespace souq;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir() {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("souq_io_test_" + std::to_string(++counter));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

constexpr const char* kSmallPredictions =
    "instance_id,member_id,p_0,p_1\n"
    "x1,m0,0.8,0.2\n"
    "x1,m1,0.4,0.6\n"
    "x1,m2,0.5,0.5\n"
    "x2,m0,1,0\n"
    "x2,m1,1,0\n"
    "x2,m2,1,0\n";

}  // namespace

TEST_CASE("load_predictions parses a well-formed file") {
  const auto dir = fresh_dir();
  write_file(dir / "preds.csv", kSmallPredictions);
  const auto data = load_predictions((dir / "preds.csv").string());
  CHECK(data.class_names == std::vector<std::string>{"p_0", "p_1"});
  REQUIRE(data.by_instance.size() == 2);
  CHECK(data.by_instance.at("x1").num_atoms() == 3);
  CHECK(data.by_instance.at("x2").num_atoms() == 3);
  CHECK(data.by_instance.at("x1").atoms()[0][0] == 0.8);
}

TEST_CASE("load_predictions reports structural problems") {
  const auto dir = fresh_dir();

  write_file(dir / "missing_member.csv",
             "instance_id,member_id,p_0,p_1\n"
             "x1,m0,0.5,0.5\n"
             "x1,m1,0.5,0.5\n"
             "x2,m0,0.5,0.5\n");
  CHECK_FAILS_WITH(InconsistentMembers, load_predictions((dir / "missing_member.csv").string()));

  write_file(dir / "dup_member.csv",
             "instance_id,member_id,p_0,p_1\n"
             "x1,m0,0.5,0.5\n"
             "x1,m0,0.5,0.5\n");
  CHECK_FAILS_WITH(InconsistentMembers, load_predictions((dir / "dup_member.csv").string()));

  write_file(dir / "bad_row.csv",
             "instance_id,member_id,p_0,p_1\n"
             "x1,m0,0.6,0.6\n");
  try {
    load_predictions((dir / "bad_row.csv").string());
    FAIL("expected BadProbabilityRow");
  } catch (const SouqError& e) {
    CHECK(e.code() == Errc::BadProbabilityRow);
    // the offending instance and member are named
    CHECK(std::string(e.what()).find("x1") != std::string::npos);
    CHECK(std::string(e.what()).find("m0") != std::string::npos);
  }

  write_file(dir / "empty.csv", "");
  CHECK_FAILS_WITH(ParseError, load_predictions((dir / "empty.csv").string()));

  write_file(dir / "header_only.csv", "instance_id,member_id,p_0,p_1\n");
  CHECK_FAILS_WITH(ParseError, load_predictions((dir / "header_only.csv").string()));

  write_file(dir / "garbage.csv",
             "instance_id,member_id,p_0,p_1\n"
             "x1,m0,zero,one\n");
  try {
    load_predictions((dir / "garbage.csv").string());
    FAIL("expected ParseError");
  } catch (const SouqError& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  CHECK_FAILS_WITH(IoFailure, load_predictions((dir / "does_not_exist.csv").string()));
}

TEST_CASE("load_labels parses and validates") {
  const auto dir = fresh_dir();
  write_file(dir / "labels.csv", "instance_id,label\nx1,0\nx2,1\n");
  const auto labels = load_labels((dir / "labels.csv").string());
  CHECK(labels.at("x1") == 0);
  CHECK(labels.at("x2") == 1);

  write_file(dir / "dup.csv", "instance_id,label\nx1,0\nx1,1\n");
  CHECK_FAILS_WITH(ParseError, load_labels((dir / "dup.csv").string()));
  write_file(dir / "bad_header.csv", "id,label\nx1,0\n");
  CHECK_FAILS_WITH(ParseError, load_labels((dir / "bad_header.csv").string()));
}

TEST_CASE("format_double round-trips exactly") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform01() * std::pow(10.0, static_cast<int>(rng.uniform_int(0, 6)) - 3);
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("parse_grid expands f0:f1:step") {
  const auto grid = parse_grid("0:0.95:0.05");
  REQUIRE(grid.size() == 20);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(0.95).epsilon(1e-12));
  CHECK_FAILS_WITH(BadGrid, parse_grid("0:0.95"));
  CHECK_FAILS_WITH(BadGrid, parse_grid("0:1.0:0.05"));
  CHECK_FAILS_WITH(BadGrid, parse_grid("0:0.9:0"));
}

TEST_CASE("atomic_write leaves no temporary behind") {
  const auto dir = fresh_dir();
  const auto path = dir / "out.txt";
  atomic_write(path.string(), "payload");
  CHECK(read_file(path) == "payload");
  CHECK_FALSE(fs::exists(path.string() + ".tmp"));
}

TEST_CASE("simulate round-trips through the predictions format within round-off") {
  const auto dir = fresh_dir();
  RunConfig config;
  config.task = Task::Simulate;
  config.alpha0 = 50.0;
  config.n_classes = 4;
  config.n_instances = 20;
  config.n_members = 5;
  config.seed = 90210;
  config.out_path = (dir / "sim.csv").string();
  config.labels_out_path = (dir / "labels.csv").string();

  const auto sim = simulate_ensembles(config);
  cmd_simulate(config);
  const auto loaded = load_predictions(config.out_path);
  REQUIRE(loaded.by_instance.size() == sim.instances.size());
  for (const auto& [id, q] : sim.instances) {
    const auto& loaded_q = loaded.by_instance.at(id);
    REQUIRE(loaded_q.num_atoms() == q.num_atoms());
    // serialization is exact; ingestion renormalization moves entries by at
    // most a few ulps
    for (std::size_t m = 0; m < q.num_atoms(); ++m)
      for (std::size_t k = 0; k < q.num_classes(); ++k)
        CHECK(loaded_q.atoms()[m][k] == doctest::Approx(q.atoms()[m][k]).epsilon(1e-14));
    const auto mean_a = second_order_mean(q);
    const auto mean_b = second_order_mean(loaded_q);
    for (std::size_t k = 0; k < q.num_classes(); ++k)
      CHECK(std::abs(mean_a[k] - mean_b[k]) <= 1e-12);
  }
  const auto labels = load_labels(config.labels_out_path);
  CHECK(labels.size() == 20);
}

TEST_CASE("simulate is byte-deterministic by seed") {
  const auto dir = fresh_dir();
  RunConfig config;
  config.task = Task::Simulate;
  config.alpha = {2.0, 3.0, 1.0};
  config.n_instances = 15;
  config.n_members = 4;
  config.seed = 777;
  config.out_path = (dir / "a.csv").string();
  cmd_simulate(config);
  config.out_path = (dir / "b.csv").string();
  cmd_simulate(config);
  CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));

  config.seed = 778;
  config.out_path = (dir / "c.csv").string();
  cmd_simulate(config);
  CHECK(read_file(dir / "a.csv") != read_file(dir / "c.csv"));
}

TEST_CASE("simulate validates its configuration") {
  RunConfig config;
  config.out_path = "unused.csv";
  config.n_instances = 1;
  CHECK_FAILS_WITH(BadConfig, simulate_ensembles(config));  // neither alpha nor alpha0
  config.alpha = {1.0, 1.0};
  config.alpha0 = 3.0;
  CHECK_FAILS_WITH(BadConfig, simulate_ensembles(config));  // both
  config.alpha0 = 0.0;
  config.alpha = {1.0, -1.0};
  CHECK_FAILS_WITH(BadAlpha, simulate_ensembles(config));
  config.alpha = {};
  config.alpha0 = 5.0;
  config.n_classes = 1;
  CHECK_FAILS_WITH(BadConfig, simulate_ensembles(config));
}

TEST_CASE("simulated concentration controls epistemic uncertainty") {
  RunConfig tight;
  tight.alpha0 = 1e4;
  tight.n_classes = 5;
  tight.n_instances = 50;
  tight.n_members = 5;
  tight.seed = 11;
  const auto tight_sim = simulate_ensembles(tight);
  double max_eu = 0.0;
  for (const auto& [id, q] : tight_sim.instances)
    max_eu = std::max(max_eu, variance_measures(q).global.epistemic);
  CHECK(max_eu < 1e-3);

  RunConfig wide = tight;
  wide.alpha0 = 3.0;
  wide.seed = 12;
  const auto wide_sim = simulate_ensembles(wide);
  double min_eu = 1.0;
  for (const auto& [id, q] : wide_sim.instances)
    min_eu = std::min(min_eu, variance_measures(q).global.epistemic);
  CHECK(min_eu > 1e-3);
}

TEST_CASE("cmd_measure emits per-instance and per-label columns") {
  const auto dir = fresh_dir();
  write_file(dir / "preds.csv", kSmallPredictions);
  RunConfig config;
  config.task = Task::Measure;
  config.family = MeasureFamily::Variance;
  config.input_path = (dir / "preds.csv").string();
  config.out_path = (dir / "report.json").string();
  config.format = OutputFormat::Json;
  cmd_measure(config);

  const auto doc = nlohmann::json::parse(read_file(dir / "report.json"));
  CHECK(doc["meta"]["family"] == "var");
  REQUIRE(doc["rows"].size() == 2);
  const auto& x1 = doc["rows"][0];
  CHECK(x1["instance_id"] == "x1");

  const auto data = load_predictions(config.input_path);
  const auto expected = variance_measures(data.by_instance.at("x1"));
  CHECK(x1["tu"].get<double>() == expected.global.total);
  CHECK(x1["au"].get<double>() == expected.global.aleatoric);
  CHECK(x1["eu"].get<double>() == expected.global.epistemic);
  CHECK(x1["tu_p_0"].get<double>() == expected.per_label[0].total);

  // Dirac ensemble: epistemic column is exactly zero
  const auto& x2 = doc["rows"][1];
  CHECK(x2["instance_id"] == "x2");
  CHECK(x2["eu"].get<double>() == 0.0);
  CHECK(x2["predicted"] == 0);
}

TEST_CASE("cmd_measure matches hand arithmetic on a two-member ensemble") {
  const auto dir = fresh_dir();
  write_file(dir / "two.csv",
             "instance_id,member_id,p_0,p_1\n"
             "x,m0,0.8,0.2\n"
             "x,m1,0.4,0.6\n");
  RunConfig config;
  config.task = Task::Measure;
  config.family = MeasureFamily::Variance;
  config.input_path = (dir / "two.csv").string();
  config.out_path = (dir / "two.json").string();
  config.format = OutputFormat::Json;
  cmd_measure(config);
  const auto doc = nlohmann::json::parse(read_file(dir / "two.json"));
  const auto& row = doc["rows"][0];
  // mean (0.6, 0.4); per label AU = 0.2, EU = Var{0.8,0.4} = 0.04, TU = 0.24
  CHECK(row["predicted"] == 0);
  CHECK(row["tu"].get<double>() == doctest::Approx(0.48).epsilon(1e-12));
  CHECK(row["au"].get<double>() == doctest::Approx(0.40).epsilon(1e-12));
  CHECK(row["eu"].get<double>() == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(row["tu_p_0"].get<double>() == doctest::Approx(0.24).epsilon(1e-12));
  CHECK(row["au_p_1"].get<double>() == doctest::Approx(0.20).epsilon(1e-12));
  CHECK(row["eu_p_1"].get<double>() == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("cmd_measure csv has stable header and no per-label block for ent") {
  const auto dir = fresh_dir();
  write_file(dir / "preds.csv", kSmallPredictions);
  RunConfig config;
  config.task = Task::Measure;
  config.family = MeasureFamily::GlobalEntropy;
  config.input_path = (dir / "preds.csv").string();
  config.out_path = (dir / "report.csv").string();
  cmd_measure(config);
  const auto text = read_file(dir / "report.csv");
  CHECK(text.find("instance_id,predicted,tu,au,eu\n") != std::string::npos);
  CHECK(text.find("tu_p_0") == std::string::npos);
}

TEST_CASE("cmd_arc produces curves with the plain accuracy at f=0") {
  const auto dir = fresh_dir();
  write_file(dir / "preds.csv", kSmallPredictions);
  write_file(dir / "labels.csv", "instance_id,label\nx1,0\nx2,0\n");
  RunConfig config;
  config.task = Task::Arc;
  config.family = MeasureFamily::Variance;
  config.input_path = (dir / "preds.csv").string();
  config.labels_path = (dir / "labels.csv").string();
  config.out_path = (dir / "arc.json").string();
  config.format = OutputFormat::Json;
  config.grid = {0.0, 0.5};
  cmd_arc(config);
  const auto doc = nlohmann::json::parse(read_file(dir / "arc.json"));
  REQUIRE(doc["rows"].size() == 2);
  // both predictions are argmax class 0 and both labels are 0
  CHECK(doc["rows"][0]["acc_tu"].get<double>() == 1.0);
  CHECK(doc["rows"][1]["acc_eu"].get<double>() == 1.0);

  write_file(dir / "short.csv", "instance_id,label\nx1,0\n");
  config.labels_path = (dir / "short.csv").string();
  CHECK_FAILS_WITH(MissingLabel, cmd_arc(config));

  write_file(dir / "out_of_range.csv", "instance_id,label\nx1,0\nx2,7\n");
  config.labels_path = (dir / "out_of_range.csv").string();
  CHECK_FAILS_WITH(IndexOutOfRange, cmd_arc(config));
}

TEST_CASE("cmd_ood separates tight from wide ensembles") {
  const auto dir = fresh_dir();
  RunConfig sim;
  sim.task = Task::Simulate;
  sim.n_classes = 4;
  sim.n_instances = 40;
  sim.n_members = 5;
  sim.alpha0 = 1e3;
  sim.seed = 21;
  sim.out_path = (dir / "id.csv").string();
  cmd_simulate(sim);
  sim.alpha0 = 3.0;
  sim.seed = 22;
  sim.out_path = (dir / "ood.csv").string();
  cmd_simulate(sim);

  RunConfig ood;
  ood.task = Task::Ood;
  ood.input_path = (dir / "id.csv").string();
  ood.ood_path = (dir / "ood.csv").string();
  ood.out_path = (dir / "ood.json").string();
  ood.format = OutputFormat::Json;
  cmd_ood(ood);
  const auto doc = nlohmann::json::parse(read_file(dir / "ood.json"));
  REQUIRE(doc["rows"].size() == 3);
  for (const auto& row : doc["rows"]) CHECK(row["auroc"].get<double>() >= 0.95);
  CHECK(doc["rows"][0]["score"] == "eu_var");
  CHECK(doc["rows"][1]["score"] == "eu_lent");
  CHECK(doc["rows"][2]["score"] == "eu_ent");

  // a file compared with itself scores exactly one half
  ood.ood_path = ood.input_path;
  ood.out_path = (dir / "self.json").string();
  cmd_ood(ood);
  const auto self_doc = nlohmann::json::parse(read_file(dir / "self.json"));
  for (const auto& row : self_doc["rows"]) CHECK(row["auroc"].get<double>() == 0.5);
}

TEST_CASE("cmd_axioms reports verdicts and exit status") {
  const auto dir = fresh_dir();
  RunConfig config;
  config.task = Task::Axioms;
  config.family = MeasureFamily::Variance;
  config.n_cases = 60;
  config.seed = 31;
  config.out_path = (dir / "var.json").string();
  config.format = OutputFormat::Json;
  CHECK(cmd_axioms(config) == 0);
  const auto doc = nlohmann::json::parse(read_file(dir / "var.json"));
  REQUIRE(doc["rows"].size() == 8);
  for (const auto& row : doc["rows"]) CHECK(row["verdict"] == "holds");

  config.family = MeasureFamily::GlobalEntropy;
  config.out_path = (dir / "ent.json").string();
  CHECK(cmd_axioms(config) == 0);  // the A5 violation is expected
  const auto ent_doc = nlohmann::json::parse(read_file(dir / "ent.json"));
  bool saw_a5 = false;
  for (const auto& row : ent_doc["rows"]) {
    if (row["axiom"] == "A5") {
      saw_a5 = true;
      CHECK(row["verdict"] == "violated");
      CHECK(row["expected_violation"] == true);
      CHECK_FALSE(row["witness"].is_null());
      CHECK(row["witness"]["shift"].size() >= 2);
    }
  }
  CHECK(saw_a5);

  config.n_cases = 0;
  CHECK_FAILS_WITH(BadConfig, cmd_axioms(config));
}

TEST_CASE("reports are byte-deterministic") {
  const auto dir = fresh_dir();
  write_file(dir / "preds.csv", kSmallPredictions);
  RunConfig config;
  config.task = Task::Measure;
  config.family = MeasureFamily::LabelEntropy;
  config.input_path = (dir / "preds.csv").string();
  config.out_path = (dir / "r1.csv").string();
  cmd_measure(config);
  config.out_path = (dir / "r2.csv").string();
  cmd_measure(config);
  CHECK(read_file(dir / "r1.csv") == read_file(dir / "r2.csv"));
}
