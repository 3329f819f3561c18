#include "cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string_view>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "seqpip/classifier.hpp"
#include "seqpip/error.hpp"
#include "seqpip/evaluation.hpp"
#include "seqpip/features.hpp"
#include "seqpip/numfmt.hpp"
#include "seqpip/report.hpp"
#include "seqpip/scales.hpp"
#include "seqpip/sequences.hpp"
#include "seqpip/splitgen.hpp"
#include "seqpip/version.hpp"

namespace seqpip::cli {
namespace {

// Bad flag combination detected after CLI11 parsing; exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string fasta;
  std::string pairs;
  std::string features;
  std::string model;
  std::string out;
  std::string out_dir;
  std::string identity;
  std::string c1;
  std::string c2;
  std::string c3;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string scales = "paper";
  bool scales_given = false;
  std::string unknown_residue = "error";
  bool no_standardize = false;
  double C = 1.0;
  std::size_t epochs = 200;
  double tol = 1e-6;
  std::size_t k = 10;
  std::size_t n = 0;
  std::size_t train_count = 4000;
  std::size_t c1_count = 2000;
  std::size_t c2_count = 1500;
  std::size_t c3_count = 1500;
  std::string ratio = "1:1";
  std::size_t attempts = 1;
  int threads = 0;
};

Json config_json(const RunConfig& c) {
  return Json{{"command", c.command},
              {"fasta", c.fasta},
              {"pairs", c.pairs},
              {"features", c.features},
              {"model", c.model},
              {"out", c.out},
              {"out_dir", c.out_dir},
              {"identity", c.identity},
              {"c1", c.c1},
              {"c2", c.c2},
              {"c3", c.c3},
              {"seed", c.has_seed ? Json(c.seed) : Json(nullptr)},
              {"scale_variant", c.scales},
              {"unknown_residue", c.unknown_residue},
              {"standardize", !c.no_standardize},
              {"C", c.C},
              {"epochs", c.epochs},
              {"tol", c.tol},
              {"k", c.k},
              {"n", c.n},
              {"targets", Json{{"train", c.train_count}, {"c1", c.c1_count}, {"c2", c.c2_count},
                               {"c3", c.c3_count}, {"ratio", c.ratio}}},
              {"attempts", c.attempts}};
}

std::string provenance(const RunConfig& c, std::string_view variant, std::string_view extra = {}) {
  std::string s = std::string(kToolName) + " " + kVersion + " command=" + c.command +
                  " scale_variant=" + std::string(variant) +
                  " seed=" + (c.has_seed ? std::to_string(c.seed) : std::string("none"));
  if (!extra.empty()) s += " " + std::string(extra);
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("failed writing '" + path + "'");
}

// Wraps Error messages from file parsers with the file name.
template <class F>
auto with_file(const std::string& path, F&& parse) {
  try {
    return parse(read_file(path));
  } catch (const Error& e) {
    const std::string what = e.what();
    if (what.rfind("cannot open", 0) == 0) throw;
    throw Error(path + ": " + what);
  }
}

ScaleVariant variant_of(const RunConfig& c) { return *parse_variant(c.scales); }

SvmParams svm_params(const RunConfig& c) {
  return SvmParams{c.C, c.epochs, c.tol, c.seed, !c.no_standardize};
}

SequenceCollection load_sequences(const RunConfig& c) {
  const auto policy = *parse_policy(c.unknown_residue);
  return with_file(c.fasta, [&](const std::string& text) {
    return SequenceCollection(parse_fasta(std::string_view(text), policy));
  });
}

std::vector<InteractionRecord> load_pairs(const std::string& path) {
  return with_file(path, [](const std::string& text) { return parse_pairs(std::string_view(text)); });
}

// scale_variant recorded in a "# ... scale_variant=X ..." comment, if any.
std::optional<ScaleVariant> recorded_variant(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() != '#') break;
    std::istringstream words(line);
    std::string w;
    while (words >> w) {
      constexpr std::string_view kKey = "scale_variant=";
      if (w.rfind(kKey, 0) == 0) return parse_variant(std::string_view(w).substr(kKey.size()));
    }
  }
  return std::nullopt;
}

struct LoadedMatrix {
  FeatureMatrix matrix;
  ScaleVariant variant;
};

// Rows from --features, or featurized from --fasta + --pairs. `expected`
// pins the scale variant (e.g. the model's) when set.
LoadedMatrix load_matrix(const RunConfig& c, std::optional<ScaleVariant> expected = std::nullopt) {
  const bool from_features = !c.features.empty();
  const bool from_sequences = !c.fasta.empty() || !c.pairs.empty();
  if (from_features == from_sequences) {
    throw UsageError("give either --features or both --fasta and --pairs");
  }
  if (from_sequences && (c.fasta.empty() || c.pairs.empty())) {
    throw UsageError("--fasta and --pairs must be given together");
  }

  if (from_features) {
    const auto text = read_file(c.features);
    const auto recorded = recorded_variant(text);
    auto variant = expected.value_or(recorded.value_or(variant_of(c)));
    if (recorded && *recorded != variant) {
      throw Error(c.features + ": features were built with scale variant '" +
                  std::string(variant_name(*recorded)) + "' but '" +
                  std::string(variant_name(variant)) + "' is required");
    }
    if (!expected && c.scales_given && recorded && *recorded != variant_of(c)) {
      throw Error(c.features + ": --scales does not match the recorded scale variant");
    }
    auto matrix = with_file(c.features, [&](const std::string&) {
      std::istringstream in(text);
      return read_feature_csv(in);
    });
    return {std::move(matrix), variant};
  }

  const auto variant = expected.value_or(variant_of(c));
  const auto seqs = load_sequences(c);
  const auto records = load_pairs(c.pairs);
  return {featurize_dataset(records, seqs, ScaleTable(variant)), variant};
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_export_scales(const RunConfig& c, std::ostream& out) {
  const ScaleTable table(variant_of(c));
  const std::string text = "# " + provenance(c, c.scales) + "\n" + table.to_csv();
  if (c.out.empty()) {
    out << text;
  } else {
    write_file(c.out, text);
  }
  return kExitOk;
}

int cmd_featurize(const RunConfig& c, std::ostream& out) {
  const auto variant = variant_of(c);
  const auto seqs = load_sequences(c);
  const auto records = load_pairs(c.pairs);
  const auto matrix = featurize_dataset(records, seqs, ScaleTable(variant));
  std::ostringstream os;
  write_feature_csv(os, matrix, {provenance(c, c.scales)});
  write_file(c.out, os.str());
  out << "featurized " << matrix.size() << " pairs (" << seqs.size() << " sequences) -> " << c.out
      << '\n';
  return kExitOk;
}

int cmd_negatives(const RunConfig& c, std::ostream& out) {
  std::vector<ProteinId> nodes;
  std::vector<InteractionRecord> known_records;
  if (!c.pairs.empty()) known_records = load_pairs(c.pairs);
  if (!c.fasta.empty()) {
    for (const auto& s : load_sequences(c)) nodes.push_back(s.id);
  } else {
    for (const auto& r : known_records) {
      nodes.push_back(r.a);
      nodes.push_back(r.b);
    }
  }
  if (nodes.empty()) throw UsageError("negatives needs --pairs and/or --fasta to define proteins");
  const auto known = make_pair_set(known_records);
  const auto negs = sample_negatives(nodes, known, c.n, c.seed);
  std::ostringstream os;
  write_pairs(os, negs, {provenance(c, c.scales, "n=" + std::to_string(c.n))});
  write_file(c.out, os.str());
  out << "sampled " << negs.size() << " negative pairs, seed " << c.seed << " -> " << c.out << '\n';
  return kExitOk;
}

LabelCounts split_count(std::size_t total, std::size_t pos_part, std::size_t neg_part,
                        const char* name) {
  const std::size_t parts = pos_part + neg_part;
  if (total * pos_part % parts != 0) {
    throw UsageError(std::string("--") + name + " " + std::to_string(total) +
                     " cannot be divided in ratio " + std::to_string(pos_part) + ":" +
                     std::to_string(neg_part));
  }
  const std::size_t pos = total * pos_part / parts;
  return LabelCounts{pos, total - pos};
}

SplitTargets parse_targets(const RunConfig& c) {
  const auto colon = c.ratio.find(':');
  std::size_t p = 0;
  std::size_t n = 0;
  bool ok = colon != std::string::npos;
  if (ok) {
    const std::string_view lhs(c.ratio.data(), colon);
    const std::string_view rhs(c.ratio.data() + colon + 1, c.ratio.size() - colon - 1);
    ok = std::from_chars(lhs.data(), lhs.data() + lhs.size(), p).ptr == lhs.data() + lhs.size() &&
         std::from_chars(rhs.data(), rhs.data() + rhs.size(), n).ptr == rhs.data() + rhs.size() &&
         !lhs.empty() && !rhs.empty() && p + n > 0;
  }
  if (!ok) throw UsageError("--ratio must look like P:N, got '" + c.ratio + "'");
  return SplitTargets{split_count(c.train_count, p, n, "train"), split_count(c.c1_count, p, n, "c1"),
                      split_count(c.c2_count, p, n, "c2"), split_count(c.c3_count, p, n, "c3")};
}

int cmd_split(const RunConfig& c, std::ostream& out) {
  const auto targets = parse_targets(c);
  const auto records = load_pairs(c.pairs);
  std::vector<SequenceIdentity> identities;
  if (!c.identity.empty()) {
    identities = with_file(c.identity, [](const std::string& text) {
      std::istringstream in(text);
      return parse_identities(in);
    });
  }
  if (c.attempts == 0) throw UsageError("--attempts must be at least 1");

  std::optional<SplitResult> split;
  std::string last_error;
  std::size_t used = 0;
  for (std::size_t a = 0; a < c.attempts && !split; ++a) {
    used = a + 1;
    try {
      split = generate_split(records, targets, c.seed + a);
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  if (!split) {
    throw Error(last_error + (c.attempts > 1 ? " (after " + std::to_string(c.attempts) + " seeds)" : ""));
  }
  const auto report = verify_split(*split, targets, identities);

  std::filesystem::create_directories(c.out_dir);
  const std::filesystem::path dir(c.out_dir);
  const std::pair<const char*, const std::vector<InteractionRecord>*> sets[] = {
      {"train", &split->train}, {"c1", &split->c1}, {"c2", &split->c2}, {"c3", &split->c3}};
  for (const auto& [name, rows] : sets) {
    std::ostringstream os;
    write_pairs(os, *rows,
                {provenance(c, c.scales,
                            "set=" + std::string(name) + " split_seed=" + std::to_string(split->seed))});
    write_file((dir / (std::string(name) + ".tsv")).string(), os.str());
  }

  Json j{{"tool", kToolName},
         {"version", kVersion},
         {"config", config_json(c)},
         {"seed", split->seed},
         {"requested_seed", c.seed},
         {"attempts_used", used},
         {"input_pairs", records.size()},
         {"duplicates_dropped", split->duplicates_dropped},
         {"targets", to_json(targets)},
         {"verification", to_json(report)}};
  write_file((dir / "report.json").string(), j.dump(2) + "\n");

  out << "split with seed " << split->seed << ": train " << split->train.size() << ", c1 "
      << split->c1.size() << ", c2 " << split->c2.size() << ", c3 " << split->c3.size()
      << (report.ok() ? " (verified)" : " (VERIFICATION FAILED)") << '\n';
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  return report.ok() ? kExitOk : kExitDomainError;
}

int cmd_train(const RunConfig& c, std::ostream& out) {
  const auto data = load_matrix(c);
  TrainTrace trace;
  const auto model = train_svm(data.matrix, svm_params(c), data.variant, &trace);
  save_model(model, c.model);
  out << "trained on " << data.matrix.size() << " rows, seed " << c.seed << ", "
      << trace.epoch_objective.size() << " epochs"
      << (trace.converged ? " (converged)" : "") << ", objective "
      << format_shortest(trace.epoch_objective.back()) << " -> " << c.model << '\n';
  return kExitOk;
}

int cmd_predict(const RunConfig& c, std::ostream& out) {
  const auto model = load_model(c.model);
  const auto data = load_matrix(c, model.scale_variant);
  std::vector<FeatureVector> xs;
  xs.reserve(data.matrix.size());
  for (const auto& r : data.matrix) xs.push_back(r.x);
  const auto scores = decision_batch(model, xs);

  RunConfig shown = c;
  shown.seed = model.params.seed;
  shown.has_seed = true;
  std::ostringstream os;
  os << "# " << provenance(shown, variant_name(model.scale_variant)) << '\n';
  os << "# columns: idA idB decision label\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    os << data.matrix[i].record.a << '\t' << data.matrix[i].record.b << '\t'
       << format_full(scores[i]) << '\t' << (scores[i] >= 0.0 ? 1 : 0) << '\n';
  }
  write_file(c.out, os.str());
  out << "predicted " << scores.size() << " pairs -> " << c.out << '\n';
  return kExitOk;
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
  const auto model = load_model(c.model);
  const auto variant = model.scale_variant;

  std::vector<std::pair<std::string, FeatureMatrix>> sets;
  const bool per_class = !c.c1.empty() || !c.c2.empty() || !c.c3.empty();
  if (per_class) {
    if (c.fasta.empty()) throw UsageError("--c1/--c2/--c3 need --fasta");
    if (!c.pairs.empty() || !c.features.empty()) {
      throw UsageError("use either --c1/--c2/--c3 or a single --pairs/--features set");
    }
    const auto seqs = load_sequences(c);
    const ScaleTable table(variant);
    for (const auto& [name, path] : {std::pair{"C1", c.c1}, {"C2", c.c2}, {"C3", c.c3}}) {
      if (path.empty()) continue;
      sets.emplace_back(name, featurize_dataset(load_pairs(path), seqs, table));
    }
  } else {
    sets.emplace_back("test", load_matrix(c, variant).matrix);
  }

  std::vector<std::pair<std::string, MetricsReport>> rows;
  Json classes = Json::object();
  for (const auto& [name, matrix] : sets) {
    if (matrix.empty()) throw Error("evaluation set " + name + " is empty");
    const auto cm = evaluate(model, matrix);
    const auto rep = metrics(cm);
    rows.emplace_back(name, rep);
    classes[name] = Json{{"confusion", to_json(cm)}, {"metrics", to_json(rep)}};
  }

  out << "mode: holdout (model trained once, scored on each set)\n" << metrics_table(rows);
  if (!c.out.empty()) {
    Json j{{"tool", kToolName},
           {"version", kVersion},
           {"mode", "holdout"},
           {"scale_variant", variant_name(variant)},
           {"model_seed", model.params.seed},
           {"config", config_json(c)},
           {"classes", std::move(classes)}};
    write_file(c.out, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_cv(const RunConfig& c, std::ostream& out) {
  const auto data = load_matrix(c);
  const auto cv = kfold_cv(data.matrix, c.k, c.seed, svm_params(c), data.variant);
  out << "mode: " << c.k << "-fold stratified cross-validation, seed " << c.seed << '\n'
      << cv_table(cv);
  if (!c.out.empty()) {
    Json j{{"tool", kToolName},
           {"version", kVersion},
           {"mode", "cv"},
           {"scale_variant", variant_name(data.variant)},
           {"seed", c.seed},
           {"config", config_json(c)},
           {"rows", data.matrix.size()},
           {"cv", to_json(cv)}};
    write_file(c.out, j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Option wiring

void add_scales(CLI::App* app, RunConfig& c) {
  app->add_option("--scales", c.scales, "Scale table variant")
      ->check(CLI::IsMember({"paper", "corrected"}))
      ->default_str("paper")
      ->each([&c](const std::string&) { c.scales_given = true; });
}

void add_residue_policy(CLI::App* app, RunConfig& c) {
  app->add_option("--unknown-residue", c.unknown_residue, "Non-canonical residues: error or skip")
      ->check(CLI::IsMember({"error", "skip"}))
      ->default_str("error");
}

void add_seed(CLI::App* app, RunConfig& c) {
  app->add_option("--seed", c.seed, "Random seed")
      ->required()
      ->each([&c](const std::string&) { c.has_seed = true; });
}

void add_svm(CLI::App* app, RunConfig& c) {
  app->add_option("--C", c.C, "Soft-margin regularisation C")->check(CLI::PositiveNumber);
  app->add_option("--epochs", c.epochs, "Maximum training epochs")->check(CLI::PositiveNumber);
  app->add_option("--tol", c.tol, "Stop when the epoch objective changes by < tol * C * n")
      ->check(CLI::NonNegativeNumber);
  app->add_flag("--no-standardize", c.no_standardize, "Train on raw scale values");
}

void add_matrix_inputs(CLI::App* app, RunConfig& c) {
  app->add_option("--features", c.features, "Feature CSV from `featurize`");
  app->add_option("--fasta", c.fasta, "FASTA file (with --pairs)");
  app->add_option("--pairs", c.pairs, "Pairs TSV (with --fasta)");
  add_residue_policy(app, c);
}

std::string one_line(std::string s) {
  for (auto& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Sequence-based protein-protein interaction prediction toolkit", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);
  app.add_option("--threads", c.threads, "OpenMP threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);

  auto* exp = app.add_subcommand("export-scales", "Write the scale table as CSV");
  add_scales(exp, c);
  exp->add_option("--out", c.out, "Output CSV (default: stdout)");

  auto* feat = app.add_subcommand("featurize", "Compute pair feature vectors");
  feat->add_option("--fasta", c.fasta, "FASTA file")->required();
  feat->add_option("--pairs", c.pairs, "Pairs TSV")->required();
  feat->add_option("--out", c.out, "Output feature CSV")->required();
  add_scales(feat, c);
  add_residue_policy(feat, c);

  auto* neg = app.add_subcommand("negatives", "Sample non-interacting pairs");
  neg->add_option("--pairs", c.pairs, "Known pairs TSV (excluded; endpoints define proteins)");
  neg->add_option("--fasta", c.fasta, "FASTA whose ids define the protein universe");
  neg->add_option("--n", c.n, "Number of negatives")->required();
  neg->add_option("--out", c.out, "Output pairs TSV")->required();
  add_seed(neg, c);
  add_residue_policy(neg, c);

  auto* split = app.add_subcommand("split", "Generate train/C1/C2/C3 partitions");
  split->add_option("--pairs", c.pairs, "Labeled pairs TSV")->required();
  split->add_option("--out-dir", c.out_dir, "Directory for train/c1/c2/c3.tsv and report.json")
      ->required();
  split->add_option("--train", c.train_count, "Train pairs");
  split->add_option("--c1", c.c1_count, "C1 pairs");
  split->add_option("--c2", c.c2_count, "C2 pairs");
  split->add_option("--c3", c.c3_count, "C3 pairs");
  split->add_option("--ratio", c.ratio, "Positive:negative ratio in every set");
  split->add_option("--attempts", c.attempts, "Seeds to try (seed, seed+1, ...)");
  split->add_option("--identity", c.identity, "idA<TAB>idB<TAB>identity file for homology warnings");
  add_seed(split, c);

  auto* train = app.add_subcommand("train", "Train a linear SVM");
  add_matrix_inputs(train, c);
  train->add_option("--model", c.model, "Output model file")->required();
  add_scales(train, c);
  add_seed(train, c);
  add_svm(train, c);

  auto* pred = app.add_subcommand("predict", "Score pairs with a trained model");
  pred->add_option("--model", c.model, "Model file")->required();
  add_matrix_inputs(pred, c);
  pred->add_option("--out", c.out, "Output TSV: idA idB decision label")->required();

  auto* eval = app.add_subcommand("eval", "Precision/recall/accuracy/F1 on held-out sets");
  eval->add_option("--model", c.model, "Model file")->required();
  add_matrix_inputs(eval, c);
  eval->add_option("--c1", c.c1, "C1 pairs TSV");
  eval->add_option("--c2", c.c2, "C2 pairs TSV");
  eval->add_option("--c3", c.c3, "C3 pairs TSV");
  eval->add_option("--out", c.out, "JSON report");

  auto* cv = app.add_subcommand("cv", "Stratified k-fold cross-validation");
  add_matrix_inputs(cv, c);
  cv->add_option("--k", c.k, "Number of folds")->check(CLI::PositiveNumber);
  cv->add_option("--out", c.out, "JSON report");
  add_scales(cv, c);
  add_seed(cv, c);
  add_svm(cv, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

#ifdef _OPENMP
  if (c.threads > 0) omp_set_num_threads(c.threads);
#endif

  try {
    for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
    if (c.command == "export-scales") return cmd_export_scales(c, out);
    if (c.command == "featurize") return cmd_featurize(c, out);
    if (c.command == "negatives") return cmd_negatives(c, out);
    if (c.command == "split") return cmd_split(c, out);
    if (c.command == "train") return cmd_train(c, out);
    if (c.command == "predict") return cmd_predict(c, out);
    if (c.command == "eval") return cmd_eval(c, out);
    if (c.command == "cv") return cmd_cv(c, out);
    throw UsageError("unknown subcommand");
  } catch (const UsageError& e) {
    err << kToolName << ": usage: " << one_line(e.what()) << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << kToolName << ": error: " << one_line(e.what()) << '\n';
    return kExitDomainError;
  }
}

}  // namespace seqpip::cli
