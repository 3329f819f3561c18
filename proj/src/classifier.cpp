#include "seqpip/classifier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "seqpip/error.hpp"
#include "seqpip/numfmt.hpp"
#include "seqpip/svm.hpp"
#include "seqpip/version.hpp"

namespace seqpip {
namespace {

bool all_finite(const FeatureVector& x) noexcept {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double dot(const FeatureVector& a, const FeatureVector& b) noexcept {
  double acc = 0.0;
  for (std::size_t k = 0; k < kNumScales; ++k) acc += a[k] * b[k];
  return acc;
}

}  // namespace

Standardizer Standardizer::identity() noexcept {
  Standardizer s;
  s.means.fill(0.0);
  s.stds.fill(1.0);
  return s;
}

FeatureVector Standardizer::apply(const FeatureVector& x) const noexcept {
  FeatureVector z;
  for (std::size_t k = 0; k < kNumScales; ++k) z[k] = (x[k] - means[k]) / stds[k];
  return z;
}

Standardizer fit_standardizer(std::span<const FeatureVector> rows) {
  if (rows.empty()) throw Error("cannot fit a standardizer on zero rows");
  const double n = static_cast<double>(rows.size());
  Standardizer s;
  for (std::size_t k = 0; k < kNumScales; ++k) {
    double sum = 0.0;
    bool constant = true;
    for (const auto& r : rows) {
      sum += r[k];
      constant = constant && r[k] == rows.front()[k];
    }
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& r : rows) sq += (r[k] - mean) * (r[k] - mean);
    const double sd = std::sqrt(sq / n);
    s.means[k] = mean;
    s.stds[k] = (constant || !(sd > 0.0)) ? 1.0 : sd;
  }
  return s;
}

Standardizer fit_standardizer(const FeatureMatrix& matrix) {
  std::vector<FeatureVector> rows;
  rows.reserve(matrix.size());
  for (const auto& r : matrix) rows.push_back(r.x);
  return fit_standardizer(rows);
}

LinearModel train_svm(const FeatureMatrix& matrix, const SvmParams& params,
                      ScaleVariant scale_variant, TrainTrace* trace) {
  if (matrix.size() < 2) throw Error("training needs at least 2 rows");
  std::vector<FeatureVector> raw;
  raw.reserve(matrix.size());
  bool pos = false;
  bool neg = false;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (!all_finite(matrix[i].x)) throw Error("non-finite feature in training row " + std::to_string(i));
    (matrix[i].record.label == 1 ? pos : neg) = true;
    raw.push_back(matrix[i].x);
  }
  if (!pos || !neg) throw Error("training data contains a single class");

  LinearModel model;
  model.params = params;
  model.scale_variant = scale_variant;
  model.standardizer = params.standardize ? fit_standardizer(raw) : Standardizer::identity();

  std::vector<double> x;
  std::vector<double> y;
  x.reserve(raw.size() * kNumScales);
  y.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto z = model.standardizer.apply(raw[i]);
    x.insert(x.end(), z.begin(), z.end());
    y.push_back(matrix[i].record.label == 1 ? 1.0 : -1.0);
  }

  const svm::Dataset data{x, y, kNumScales};
  const auto sol = svm::solve(data, svm::Options{params.C, params.epochs, params.tol, params.seed});
  std::copy(sol.weights.begin(), sol.weights.end(), model.weights.begin());
  model.bias = sol.bias;
  if (trace) {
    trace->epoch_objective = sol.epoch_objective;
    trace->converged = sol.converged;
  }
  return model;
}

double decision(const LinearModel& model, const FeatureVector& x) {
  if (!all_finite(x)) throw Error("non-finite feature value passed to decision");
  return dot(model.weights, model.standardizer.apply(x)) + model.bias;
}

int predict(const LinearModel& model, const FeatureVector& x) {
  return decision(model, x) >= 0.0 ? 1 : 0;
}

std::vector<double> decision_batch_serial(const LinearModel& model,
                                          std::span<const FeatureVector> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(decision(model, x));
  return out;
}

std::vector<double> decision_batch(const LinearModel& model, std::span<const FeatureVector> xs) {
  std::vector<double> out(xs.size());
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  std::ptrdiff_t first_bad = n;
#pragma omp parallel for schedule(static) reduction(min : first_bad)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    if (!all_finite(xs[r])) {
      first_bad = std::min(first_bad, i);
      continue;
    }
    out[r] = dot(model.weights, model.standardizer.apply(xs[r])) + model.bias;
  }
  if (first_bad < n) throw Error("non-finite feature value in row " + std::to_string(first_bad));
  return out;
}

// ---------------------------------------------------------------------------
// Model file

namespace {

std::string join(const FeatureVector& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ' ';
    out += format_full(v[k]);
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

double finite_number(const std::string& key, std::string_view token) {
  const auto v = parse_double(token);
  if (!v) throw Error("model file: malformed number for '" + key + "'");
  if (!std::isfinite(*v)) throw Error("model file: non-finite value for '" + key + "'");
  return *v;
}

FeatureVector vector_field(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  FeatureVector out{};
  std::string token;
  std::size_t k = 0;
  while (in >> token) {
    if (k == kNumScales) throw Error("model file: too many values for '" + key + "'");
    out[k++] = finite_number(key, token);
  }
  if (k != kNumScales) {
    throw Error("model file: '" + key + "' has " + std::to_string(k) + " values, expected " +
                std::to_string(kNumScales));
  }
  return out;
}

std::uint64_t unsigned_field(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw Error("model file: malformed integer for '" + key + "'");
  }
  return v;
}

}  // namespace

void save_model(const LinearModel& model, std::ostream& out) {
  out << "# " << kToolName << " linear SVM model\n";
  out << "format_version = " << kModelFormatVersion << '\n';
  out << "tool = " << kToolName << ' ' << kVersion << '\n';
  out << "scale_variant = " << variant_name(model.scale_variant) << '\n';
  out << "standardize = " << (model.params.standardize ? "true" : "false") << '\n';
  out << "C = " << format_full(model.params.C) << '\n';
  out << "epochs = " << model.params.epochs << '\n';
  out << "tol = " << format_full(model.params.tol) << '\n';
  out << "seed = " << model.params.seed << '\n';
  out << "means = " << join(model.standardizer.means) << '\n';
  out << "stds = " << join(model.standardizer.stds) << '\n';
  out << "weights = " << join(model.weights) << '\n';
  out << "bias = " << format_full(model.bias) << '\n';
}

void save_model(const LinearModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_model(model, out);
  if (!out) throw Error("failed writing model to '" + path + "'");
}

LinearModel load_model(std::istream& in) {
  std::map<std::string, std::string> fields;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "model file: expected 'key = value'");
    auto key = trim(std::string_view(trimmed).substr(0, eq));
    auto value = trim(std::string_view(trimmed).substr(eq + 1));
    if (!fields.emplace(key, value).second) {
      throw ParseError(lineno, "model file: duplicate key '" + key + "'");
    }
  }

  static const char* const kRequired[] = {"format_version", "scale_variant", "standardize", "C",
                                          "epochs", "tol", "seed", "means", "stds", "weights",
                                          "bias"};
  for (const char* key : kRequired) {
    if (!fields.contains(key)) {
      throw Error(std::string("model file is truncated or incomplete: missing '") + key + "'");
    }
  }
  for (const auto& [key, value] : fields) {
    bool known = key == "tool";
    for (const char* k : kRequired) known = known || key == k;
    if (!known) throw Error("model file: unknown key '" + key + "'");
  }

  const auto version = unsigned_field("format_version", fields["format_version"]);
  if (version != static_cast<std::uint64_t>(kModelFormatVersion)) {
    throw Error("model file: unsupported format_version " + fields["format_version"] +
                " (expected " + std::to_string(kModelFormatVersion) + ")");
  }

  LinearModel m;
  const auto variant = parse_variant(fields["scale_variant"]);
  if (!variant) throw Error("model file: unknown scale_variant '" + fields["scale_variant"] + "'");
  m.scale_variant = *variant;

  const auto& standardize = fields["standardize"];
  if (standardize != "true" && standardize != "false") {
    throw Error("model file: standardize must be true or false");
  }
  m.params.standardize = standardize == "true";
  m.params.C = finite_number("C", fields["C"]);
  m.params.epochs = unsigned_field("epochs", fields["epochs"]);
  m.params.tol = finite_number("tol", fields["tol"]);
  m.params.seed = unsigned_field("seed", fields["seed"]);
  m.standardizer.means = vector_field("means", fields["means"]);
  m.standardizer.stds = vector_field("stds", fields["stds"]);
  m.weights = vector_field("weights", fields["weights"]);
  m.bias = finite_number("bias", fields["bias"]);

  for (std::size_t k = 0; k < kNumScales; ++k) {
    if (!(m.standardizer.stds[k] > 0.0)) {
      throw Error("model file: std of " + std::string(kScaleNames[k]) + " must be positive");
    }
  }
  if (!(m.params.C > 0.0)) throw Error("model file: C must be positive");
  return m;
}

LinearModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path + "'");
  return load_model(in);
}

}  // namespace seqpip
