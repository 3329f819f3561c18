#include "seqpip/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "seqpip/error.hpp"
#include "seqpip/random.hpp"

namespace seqpip::svm {
namespace {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

void validate(const Dataset& data, const Options& options) {
  if (data.dims == 0) throw Error("svm: feature dimension must be positive");
  if (data.x.size() != data.size() * data.dims) throw Error("svm: feature matrix shape mismatch");
  if (data.size() < 2) throw Error("svm: need at least 2 training rows");
  if (!(options.C > 0.0) || !std::isfinite(options.C)) throw Error("svm: C must be positive");
  if (options.epochs == 0) throw Error("svm: epochs must be positive");
  if (!(options.tol >= 0.0) || !std::isfinite(options.tol)) throw Error("svm: tol must be >= 0");

  bool pos = false;
  bool neg = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.y[i] == 1.0) {
      pos = true;
    } else if (data.y[i] == -1.0) {
      neg = true;
    } else {
      throw Error("svm: label of row " + std::to_string(i) + " is not -1 or +1");
    }
    for (double v : data.row(i)) {
      if (!std::isfinite(v)) throw Error("svm: non-finite feature in row " + std::to_string(i));
    }
  }
  if (!pos || !neg) throw Error("svm: training data contains a single class");
}

}  // namespace

double objective(const Dataset& data, std::span<const double> w, double b, double C) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    hinge += std::max(0.0, 1.0 - data.y[i] * (dot(w, data.row(i)) + b));
  }
  return 0.5 * dot(w, w) + C * hinge;
}

void objective_gradient(const Dataset& data, std::span<const double> w, double b, double C,
                        std::span<double> grad_w, double& grad_b) {
  std::copy(w.begin(), w.end(), grad_w.begin());
  grad_b = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double y = data.y[i];
    const auto x = data.row(i);
    if (y * (dot(w, x) + b) < 1.0) {
      for (std::size_t k = 0; k < w.size(); ++k) grad_w[k] -= C * y * x[k];
      grad_b -= C * y;
    }
  }
}

double optimal_bias(const Dataset& data, std::span<const double> w) {
  // Row i's hinge has its kink at b = y_i - w.x_i. Below the kink positives
  // are active, above it negatives are. The slope of the hinge sum is
  // -P + (number of kinks passed), so the minimum lies between the P-th and
  // (P+1)-th smallest kink.
  const std::size_t n = data.size();
  std::vector<double> kinks(n);
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    kinks[i] = data.y[i] - dot(w, data.row(i));
    if (data.y[i] > 0) ++positives;
  }
  if (positives == 0 || positives == n) throw Error("svm: optimal_bias needs both classes");
  std::sort(kinks.begin(), kinks.end());
  return 0.5 * (kinks[positives - 1] + kinks[positives]);
}

double mean_hinge(const Dataset& data, std::span<const double> w, double b) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    hinge += std::max(0.0, 1.0 - data.y[i] * (dot(w, data.row(i)) + b));
  }
  return hinge / static_cast<double>(data.size());
}

Solution solve(const Dataset& data, const Options& options) {
  validate(data, options);

  const std::size_t n = data.size();
  const std::size_t d = data.dims;
  const double lambda = 1.0 / (options.C * static_cast<double>(n));
  const double j0 = options.C * static_cast<double>(n);

  std::vector<double> w(d, 0.0);
  std::vector<double> avg_w(d, 0.0);
  double b = 0.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(options.seed);

  Solution sol;
  sol.epoch_objective.reserve(options.epochs);
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (std::size_t i : order) {
      const double y = data.y[i];
      const auto x = data.row(i);
      const double eta = 1.0 / (lambda * static_cast<double>(t + 1));
      const double margin = y * (dot(w, x) + b);
      const double shrink = 1.0 - eta * lambda;
      for (auto& wk : w) wk *= shrink;
      if (margin < 1.0) {
        for (std::size_t k = 0; k < d; ++k) w[k] += eta * y * x[k];
        b += y / std::sqrt(static_cast<double>(t + 1));
      }
      ++t;
      const double rho = 1.0 / static_cast<double>(t);
      for (std::size_t k = 0; k < d; ++k) avg_w[k] += rho * (w[k] - avg_w[k]);
    }

    const double bias = optimal_bias(data, avg_w);
    const double j = objective(data, avg_w, bias, options.C);
    sol.epoch_objective.push_back(j);
    if (epoch > 0) {
      const double prev = sol.epoch_objective[epoch - 1];
      if (std::abs(prev - j) < options.tol * j0) {
        sol.converged = true;
        break;
      }
    }
  }

  sol.weights = avg_w;
  sol.bias = optimal_bias(data, avg_w);
  return sol;
}

}  // namespace seqpip::svm
