#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seqpip/classifier.hpp"
#include "seqpip/features.hpp"

namespace seqpip {

// Positive class is 1.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Throws seqpip::Error on empty input, a length mismatch, or values other
// than 0/1.
ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels);

// nullopt marks a metric whose denominator is zero. F1 is the harmonic mean
// of precision and recall, undefined unless both are defined and their sum
// is positive.
struct MetricsReport {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
  std::optional<double> f1;
};

MetricsReport metrics(const ConfusionMatrix& cm);

// Mean and population std over the defined values only.
struct MetricSummary {
  std::optional<double> mean;
  std::optional<double> std;
  std::size_t defined = 0;
  std::size_t undefined = 0;
};

MetricSummary summarize(std::span<const std::optional<double>> values);

// Seeded stratified assignment: each class is shuffled and dealt round-robin,
// so per-class fold sizes differ by at most one. Each fold is sorted.
// Throws seqpip::Error when k < 2 or a class has fewer than k rows.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k,
                                                       std::uint64_t seed);

struct CvFold {
  std::vector<std::size_t> test_indices;
  ConfusionMatrix cm;
  MetricsReport report;
  Standardizer standardizer;  // fitted on this fold's training part
};

struct CvResult {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<CvFold> folds;  // fold index order
  MetricSummary precision;
  MetricSummary recall;
  MetricSummary accuracy;
  MetricSummary f1;
};

// Folds train and evaluate independently (in parallel); each model and its
// standardizer see only the other k-1 folds.
CvResult kfold_cv(const FeatureMatrix& matrix, std::size_t k, std::uint64_t seed,
                  const SvmParams& params,
                  ScaleVariant scale_variant = ScaleVariant::PaperVerbatim);

// Predict every row and score against its label.
ConfusionMatrix evaluate(const LinearModel& model, const FeatureMatrix& matrix);

}  // namespace seqpip
