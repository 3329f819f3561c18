#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Dimension-generic soft-margin linear SVM solver. classifier.hpp wraps it
// for 14-component feature vectors; tests use it directly on 1D/2D data.
//
//   J(w, b) = 1/2 ||w||^2 + C * sum_i max(0, 1 - y_i (w.x_i + b))

namespace seqpip::svm {

// Row-major n x dims matrix with labels in {-1, +1}.
struct Dataset {
  std::span<const double> x;
  std::span<const double> y;
  std::size_t dims = 0;

  std::size_t size() const noexcept { return y.size(); }
  std::span<const double> row(std::size_t i) const noexcept { return x.subspan(i * dims, dims); }
};

struct Options {
  double C = 1.0;
  std::size_t epochs = 200;
  double tol = 1e-6;
  std::uint64_t seed = 42;
};

struct Solution {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> epoch_objective;  // J of the returned-model candidate at each epoch end
  bool converged = false;               // stopped on tolerance rather than max epochs
};

double objective(const Dataset& data, std::span<const double> w, double b, double C);

// Subgradient of J; at a margin of exactly 1 the hinge term contributes 0.
void objective_gradient(const Dataset& data, std::span<const double> w, double b, double C,
                        std::span<double> grad_w, double& grad_b);

// Intercept minimising J for fixed w: midpoint of the interval where the
// piecewise-linear hinge sum is flat at its minimum.
double optimal_bias(const Dataset& data, std::span<const double> w);

double mean_hinge(const Dataset& data, std::span<const double> w, double b);

// Seeded stochastic subgradient descent with shuffled epochs.
//   w step: eta_t = 1 / (lambda (t + 1)), lambda = 1 / (C n), w shrinks by
//           (1 - eta_t lambda) every step;
//   b step: 1 / sqrt(t + 1), no shrink (the intercept is unregularised).
// Returns the uniform average of the w iterates with the intercept re-solved
// by optimal_bias. Stops after `epochs` or once J changes by less than
// tol * C * n between consecutive epochs.
//
// Throws seqpip::Error on fewer than 2 rows, a single class, labels outside
// {-1, +1}, non-finite values, or invalid options.
Solution solve(const Dataset& data, const Options& options);

}  // namespace seqpip::svm
