#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "seqpip/features.hpp"
#include "seqpip/scales.hpp"

namespace seqpip {

// Per-column z-scoring fitted on training rows only.
struct Standardizer {
  FeatureVector means{};
  FeatureVector stds{};  // > 0; 1 for columns constant in the training data

  static Standardizer identity() noexcept;
  FeatureVector apply(const FeatureVector& x) const noexcept;

  friend bool operator==(const Standardizer&, const Standardizer&) = default;
};

// Column means and population standard deviations. Throws seqpip::Error on
// an empty input.
Standardizer fit_standardizer(std::span<const FeatureVector> rows);
Standardizer fit_standardizer(const FeatureMatrix& matrix);

struct SvmParams {
  double C = 1.0;
  std::size_t epochs = 200;
  double tol = 1e-6;
  std::uint64_t seed = 42;
  bool standardize = true;

  friend bool operator==(const SvmParams&, const SvmParams&) = default;
};

struct LinearModel {
  FeatureVector weights{};
  double bias = 0.0;
  Standardizer standardizer = Standardizer::identity();
  SvmParams params;
  ScaleVariant scale_variant = ScaleVariant::PaperVerbatim;

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

struct TrainTrace {
  std::vector<double> epoch_objective;
  bool converged = false;
};

// Labels 0/1 map to -1/+1. Throws seqpip::Error on fewer than 2 rows, a
// single class, or a non-finite feature (the message names the row).
LinearModel train_svm(const FeatureMatrix& matrix, const SvmParams& params,
                      ScaleVariant scale_variant = ScaleVariant::PaperVerbatim,
                      TrainTrace* trace = nullptr);

// weights . standardize(x) + bias. Throws seqpip::Error on non-finite input.
double decision(const LinearModel& model, const FeatureVector& x);

// 1 when decision >= 0 (a tie at exactly 0 is positive), else 0.
int predict(const LinearModel& model, const FeatureVector& x);

// Batched decisions. The parallel version is bit-identical to the serial one.
std::vector<double> decision_batch(const LinearModel& model, std::span<const FeatureVector> xs);
std::vector<double> decision_batch_serial(const LinearModel& model,
                                          std::span<const FeatureVector> xs);

inline constexpr int kModelFormatVersion = 1;

// Versioned "key = value" text; numbers at 17 significant digits.
void save_model(const LinearModel& model, std::ostream& out);
void save_model(const LinearModel& model, const std::string& path);

// Throws seqpip::Error on version mismatch, missing or duplicate keys,
// malformed or non-finite values, or a non-positive std.
LinearModel load_model(std::istream& in);
LinearModel load_model(const std::string& path);

}  // namespace seqpip
