// Copyright 2026 The memcap-rc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memcap/reservoir.hpp"

namespace memcap {

enum class ReadoutKind { kRegression, kLogisticOvr };

/// Per-feature z-score taken from the training split. A zero-variance
/// feature keeps scale 1 so it maps to a constant 0.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> scale;

  bool empty() const noexcept { return mean.empty(); }
  static Standardization fit(const StateMatrix& X);
  StateMatrix apply(const StateMatrix& X) const;

  friend bool operator==(const Standardization&, const Standardization&) = default;
};

/// Affine readout y = standardize(x) . W + b. W is features x outputs,
/// row-major. For one-vs-all logistic readouts output c scores classes[c].
struct LinearReadout {
  ReadoutKind kind = ReadoutKind::kRegression;
  std::size_t features = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;
  Standardization standardization;
  std::vector<std::string> feature_names;
  std::vector<int> classes;

  double weight(std::size_t f, std::size_t o) const {
    return weights[f * outputs + o];
  }

  friend bool operator==(const LinearReadout&, const LinearReadout&) = default;
};

struct LinearConfig {
  enum class Method { kClosedForm, kGradientDescent };
  Method method = Method::kClosedForm;
  /// Penalty on the weights, never on the bias.
  double ridge_lambda = 1e-6;
  double lr = 0.1;
  std::size_t iters = 20000;
  bool standardize = true;
};

struct LogisticConfig {
  double l2_lambda = 1e-4;
  double lr = 0.1;
  std::size_t iters = 2000;
  bool standardize = true;
  /// Per-class fits are independent and may run concurrently.
  unsigned jobs = 1;
};

/// Minimizes mean((Xw + b - y)^2) + lambda * |w|^2.
/// Throws SingularSystem if the normal matrix is singular.
LinearReadout train_linear(const StateMatrix& X, std::span<const double> y,
                           const LinearConfig& cfg = {});

/// One binary logistic regression per class, each minimizing the mean
/// cross-entropy + lambda/2 * |w|^2 by full-batch gradient descent from 0.
LinearReadout train_logistic_ovr(const StateMatrix& X,
                                 std::span<const int> labels,
                                 const LogisticConfig& cfg = {});

/// rows x outputs, row-major: raw affine outputs for regression, sigmoid
/// scores for logistic readouts.
std::vector<double> predict(const LinearReadout& readout, const StateMatrix& X);

/// Class of each row: argmax of the scores, ties to the lowest index.
std::vector<int> predict_labels(const LinearReadout& readout,
                                const StateMatrix& X);

/// Index of the largest score; ties resolve to the lowest index.
std::size_t argmax(std::span<const double> scores);

/// sum (z - y)^2 / sum y^2
double nmse_ratio(std::span<const double> z, std::span<const double> y);
/// sum (z - y)^2 / sum (y - mean y)^2
double nmse_variance(std::span<const double> z, std::span<const double> y);

struct Metrics {
  std::optional<double> nmse_ratio;
  std::optional<double> nmse_variance;
  std::optional<double> accuracy;
  std::vector<int> classes;
  /// confusion[true][predicted], indexed like `classes`.
  std::vector<std::vector<std::size_t>> confusion;
};

Metrics evaluate_regression(std::span<const double> z, std::span<const double> y);
Metrics evaluate_classification(const LinearReadout& readout,
                                const StateMatrix& X,
                                std::span<const int> labels);
/// Confusion counts and accuracy for already-predicted labels.
Metrics tally(std::span<const int> classes, std::span<const int> truth,
              std::span<const int> predicted);

/// Training objectives on an already-prepared design matrix, exposed for
/// gradient checks.
namespace objective {
double squared(const StateMatrix& X, std::span<const double> y,
               std::span<const double> w, double b, double lambda);
void squared_gradient(const StateMatrix& X, std::span<const double> y,
                      std::span<const double> w, double b, double lambda,
                      std::span<double> grad_w, double& grad_b);
/// y holds 0/1 targets.
double logistic(const StateMatrix& X, std::span<const double> y,
                std::span<const double> w, double b, double lambda);
void logistic_gradient(const StateMatrix& X, std::span<const double> y,
                       std::span<const double> w, double b, double lambda,
                       std::span<double> grad_w, double& grad_b);
}  // namespace objective

/// Weights as CSV (one row per feature plus a final `bias` row); everything
/// else as JSON metadata.
std::string format_readout_weights_csv(const LinearReadout& readout);
std::string format_readout_metadata_json(const LinearReadout& readout);
LinearReadout parse_readout(const std::string& weights_csv,
                            const std::string& metadata_json,
                            const std::string& origin = "<string>");

}  // namespace memcap
