#include "seqpip/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numeric>

#include "seqpip/error.hpp"
#include "seqpip/random.hpp"

namespace seqpip {

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw Error("confusion: " + std::to_string(predictions.size()) + " predictions vs " +
                std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) throw Error("confusion: no predictions to score");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int p = predictions[i];
    const int l = labels[i];
    if ((p != 0 && p != 1) || (l != 0 && l != 1)) {
      throw Error("confusion: values must be 0 or 1 (index " + std::to_string(i) + ")");
    }
    if (p == 1) {
      ++(l == 1 ? cm.tp : cm.fp);
    } else {
      ++(l == 1 ? cm.fn : cm.tn);
    }
  }
  return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  MetricsReport r;
  r.precision = ratio(cm.tp, cm.tp + cm.fp);
  r.recall = ratio(cm.tp, cm.tp + cm.fn);
  r.accuracy = ratio(cm.tp + cm.tn, cm.total());
  if (r.precision && r.recall && *r.precision + *r.recall > 0.0) {
    r.f1 = 2.0 * *r.precision * *r.recall / (*r.precision + *r.recall);
  }
  return r;
}

MetricSummary summarize(std::span<const std::optional<double>> values) {
  MetricSummary s;
  double sum = 0.0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++s.defined;
    } else {
      ++s.undefined;
    }
  }
  if (s.defined == 0) return s;
  const double mean = sum / static_cast<double>(s.defined);
  double sq = 0.0;
  for (const auto& v : values) {
    if (v) sq += (*v - mean) * (*v - mean);
  }
  s.mean = mean;
  s.std = std::sqrt(sq / static_cast<double>(s.defined));
  return s;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k,
                                                       std::uint64_t seed) {
  if (k < 2) throw Error("k-fold needs k >= 2, got " + std::to_string(k));
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw Error("k-fold: labels must be 0 or 1");
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < k) {
      throw Error("k-fold with k=" + std::to_string(k) + " infeasible: class " + std::to_string(c) +
                  " has only " + std::to_string(by_class[c].size()) + " rows");
    }
  }

  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  // Class 1 continues the deal where class 0 stopped.
  std::size_t next = 0;
  for (auto& members : by_class) {
    rng.shuffle(std::span(members));
    for (std::size_t idx : members) folds[next++ % k].push_back(idx);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

ConfusionMatrix evaluate(const LinearModel& model, const FeatureMatrix& matrix) {
  std::vector<FeatureVector> xs;
  std::vector<int> labels;
  xs.reserve(matrix.size());
  labels.reserve(matrix.size());
  for (const auto& row : matrix) {
    xs.push_back(row.x);
    labels.push_back(row.record.label);
  }
  const auto scores = decision_batch(model, xs);
  std::vector<int> preds(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) preds[i] = scores[i] >= 0.0 ? 1 : 0;
  return confusion(preds, labels);
}

CvResult kfold_cv(const FeatureMatrix& matrix, std::size_t k, std::uint64_t seed,
                  const SvmParams& params, ScaleVariant scale_variant) {
  std::vector<int> labels(matrix.size());
  for (std::size_t i = 0; i < matrix.size(); ++i) labels[i] = matrix[i].record.label;
  const auto folds = stratified_folds(labels, k, seed);

  CvResult result;
  result.k = k;
  result.seed = seed;
  result.folds.resize(k);
  std::vector<std::exception_ptr> errors(k);

  const auto n_folds = static_cast<std::ptrdiff_t>(k);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t f = 0; f < n_folds; ++f) {
    const auto fold = static_cast<std::size_t>(f);
    try {
      std::vector<char> held_out(matrix.size(), 0);
      for (std::size_t i : folds[fold]) held_out[i] = 1;
      FeatureMatrix train;
      FeatureMatrix test;
      train.reserve(matrix.size() - folds[fold].size());
      test.reserve(folds[fold].size());
      for (std::size_t i = 0; i < matrix.size(); ++i) (held_out[i] ? test : train).push_back(matrix[i]);

      const auto model = train_svm(train, params, scale_variant);
      auto& out = result.folds[fold];
      out.test_indices = folds[fold];
      out.standardizer = model.standardizer;
      out.cm = evaluate(model, test);
      out.report = metrics(out.cm);
    } catch (...) {
      errors[fold] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Reduction in fold order.
  std::vector<std::optional<double>> p, r, a, f1;
  for (const auto& fold : result.folds) {
    p.push_back(fold.report.precision);
    r.push_back(fold.report.recall);
    a.push_back(fold.report.accuracy);
    f1.push_back(fold.report.f1);
  }
  result.precision = summarize(p);
  result.recall = summarize(r);
  result.accuracy = summarize(a);
  result.f1 = summarize(f1);
  return result;
}

}  // namespace seqpip
