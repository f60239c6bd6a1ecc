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

#include "memcap/readout.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <nlohmann/json.hpp>
#include <thread>

#include "memcap/errors.hpp"
#include "memcap/io.hpp"
#include "memcap/kernels.hpp"

namespace memcap {

Standardization Standardization::fit(const StateMatrix& X) {
  Standardization s;
  const std::size_t n = X.rows();
  s.mean.assign(X.cols(), 0.0);
  s.scale.assign(X.cols(), 1.0);
  if (n == 0) return s;
  for (std::size_t c = 0; c < X.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += X(r, c);
    const double m = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (X(r, c) - m) * (X(r, c) - m);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    s.mean[c] = m;
    s.scale[c] = sd > 1e-300 ? sd : 1.0;
  }
  return s;
}

StateMatrix Standardization::apply(const StateMatrix& X) const {
  if (empty()) return X;
  if (X.cols() != mean.size()) {
    throw DimensionMismatch("standardization expects " +
                            std::to_string(mean.size()) + " features, got " +
                            std::to_string(X.cols()));
  }
  StateMatrix out = X;
  for (std::size_t r = 0; r < X.rows(); ++r) {
    for (std::size_t c = 0; c < X.cols(); ++c) {
      out(r, c) = (X(r, c) - mean[c]) / scale[c];
    }
  }
  return out;
}

namespace {

void check_training_input(const StateMatrix& X, std::size_t n_targets) {
  if (X.rows() == 0 || X.cols() == 0) {
    throw InvalidInput("training needs a non-empty state matrix");
  }
  if (X.rows() != n_targets) {
    throw DimensionMismatch("state matrix has " + std::to_string(X.rows()) +
                            " rows but " + std::to_string(n_targets) +
                            " targets were given");
  }
  X.check_finite();
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

namespace objective {

double squared(const StateMatrix& X, std::span<const double> y,
               std::span<const double> w, double b, double lambda) {
  double sum = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const double r = kernels::dot(X.row(i), w) + b - y[i];
    sum += r * r;
  }
  return sum / static_cast<double>(X.rows()) + lambda * kernels::dot(w, w);
}

void squared_gradient(const StateMatrix& X, std::span<const double> y,
                      std::span<const double> w, double b, double lambda,
                      std::span<double> grad_w, double& grad_b) {
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0.0;
  const double n = static_cast<double>(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const double r = kernels::dot(X.row(i), w) + b - y[i];
    kernels::axpy(2.0 * r / n, X.row(i), grad_w);
    grad_b += 2.0 * r / n;
  }
  kernels::axpy(2.0 * lambda, w, grad_w);
}

double logistic(const StateMatrix& X, std::span<const double> y,
                std::span<const double> w, double b, double lambda) {
  double sum = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const double z = kernels::dot(X.row(i), w) + b;
    sum += softplus(z) - y[i] * z;
  }
  return sum / static_cast<double>(X.rows()) + 0.5 * lambda * kernels::dot(w, w);
}

void logistic_gradient(const StateMatrix& X, std::span<const double> y,
                       std::span<const double> w, double b, double lambda,
                       std::span<double> grad_w, double& grad_b) {
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0.0;
  const double n = static_cast<double>(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const double r = (sigmoid(kernels::dot(X.row(i), w) + b) - y[i]) / n;
    kernels::axpy(r, X.row(i), grad_w);
    grad_b += r;
  }
  kernels::axpy(lambda, w, grad_w);
}

}  // namespace objective

namespace {

void solve_closed_form(const StateMatrix& Z, std::span<const double> y,
                       double lambda, std::vector<double>& w, double& b) {
  const auto n = static_cast<Eigen::Index>(Z.rows());
  const auto p = static_cast<Eigen::Index>(Z.cols());
  Eigen::MatrixXd A(n, p + 1);
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      A(i, j) = Z(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    A(i, p) = 1.0;
    t(i) = y[static_cast<std::size_t>(i)];
  }
  Eigen::MatrixXd M = A.transpose() * A / static_cast<double>(n);
  for (Eigen::Index j = 0; j < p; ++j) M(j, j) += lambda;
  const Eigen::VectorXd rhs = A.transpose() * t / static_cast<double>(n);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-13)) {
    throw SingularSystem(
        "normal matrix is singular or nearly so (rcond " +
        io::format_double(ldlt.rcond()) +
        "); use a positive ridge_lambda or fewer features");
  }
  const Eigen::VectorXd theta = ldlt.solve(rhs);
  w.assign(theta.data(), theta.data() + p);
  b = theta(p);
}

void gradient_descent_linear(const StateMatrix& Z, std::span<const double> y,
                             const LinearConfig& cfg, std::vector<double>& w,
                             double& b) {
  w.assign(Z.cols(), 0.0);
  b = 0.0;
  std::vector<double> gw(Z.cols());
  double gb = 0.0;
  for (std::size_t it = 0; it < cfg.iters; ++it) {
    objective::squared_gradient(Z, y, w, b, cfg.ridge_lambda, gw, gb);
    kernels::axpy(-cfg.lr, gw, w);
    b -= cfg.lr * gb;
  }
  for (double v : w) {
    if (!std::isfinite(v)) {
      throw SolverFailed("gradient descent diverged; reduce the learning rate");
    }
  }
}

LinearReadout make_readout(const StateMatrix& X, ReadoutKind kind,
                           std::size_t outputs, bool standardize) {
  LinearReadout r;
  r.kind = kind;
  r.features = X.cols();
  r.outputs = outputs;
  r.weights.assign(X.cols() * outputs, 0.0);
  r.bias.assign(outputs, 0.0);
  if (standardize) r.standardization = Standardization::fit(X);
  r.feature_names = X.column_names;
  return r;
}

}  // namespace

LinearReadout train_linear(const StateMatrix& X, std::span<const double> y,
                           const LinearConfig& cfg) {
  check_training_input(X, y.size());
  if (!(cfg.ridge_lambda >= 0.0)) throw InvalidInput("ridge_lambda must be >= 0");
  if (cfg.ridge_lambda == 0.0 && X.rows() < X.cols() + 1 &&
      cfg.method == LinearConfig::Method::kClosedForm) {
    throw SingularSystem("fewer rows than features + 1; use a positive ridge_lambda");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite regression target");
  }
  LinearReadout r = make_readout(X, ReadoutKind::kRegression, 1, cfg.standardize);
  const StateMatrix Z = r.standardization.apply(X);
  std::vector<double> w;
  double b = 0.0;
  if (cfg.method == LinearConfig::Method::kClosedForm) {
    solve_closed_form(Z, y, cfg.ridge_lambda, w, b);
  } else {
    gradient_descent_linear(Z, y, cfg, w, b);
  }
  r.weights = std::move(w);
  r.bias[0] = b;
  return r;
}

LinearReadout train_logistic_ovr(const StateMatrix& X,
                                 std::span<const int> labels,
                                 const LogisticConfig& cfg) {
  check_training_input(X, labels.size());
  if (!(cfg.l2_lambda >= 0.0)) throw InvalidInput("l2_lambda must be >= 0");
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() < 2) {
    throw InvalidInput("logistic readout needs at least two classes");
  }

  const std::size_t k = classes.size();
  LinearReadout r = make_readout(X, ReadoutKind::kLogisticOvr, k, cfg.standardize);
  r.classes = classes;
  const StateMatrix Z = r.standardization.apply(X);

  std::vector<std::vector<double>> w(k, std::vector<double>(X.cols(), 0.0));
  std::vector<double> b(k, 0.0);
  const auto fit = [&](std::size_t c) {
    std::vector<double> target(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      target[i] = labels[i] == classes[c] ? 1.0 : 0.0;
    }
    std::vector<double> gw(X.cols());
    double gb = 0.0;
    for (std::size_t it = 0; it < cfg.iters; ++it) {
      objective::logistic_gradient(Z, target, w[c], b[c], cfg.l2_lambda, gw, gb);
      kernels::axpy(-cfg.lr, gw, w[c]);
      b[c] -= cfg.lr * gb;
    }
  };

  const std::size_t workers = std::min<std::size_t>(std::max(1u, cfg.jobs), k);
  if (workers == 1) {
    for (std::size_t c = 0; c < k; ++c) fit(c);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> threads;
      for (std::size_t t = 0; t < workers; ++t) {
        threads.emplace_back([&, t] {
          try {
            for (std::size_t c = t; c < k; c += workers) fit(c);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t f = 0; f < X.cols(); ++f) r.weights[f * k + c] = w[c][f];
    r.bias[c] = b[c];
    if (!std::isfinite(b[c])) throw SolverFailed("logistic training diverged");
  }
  return r;
}

std::vector<double> predict(const LinearReadout& readout, const StateMatrix& X) {
  if (X.cols() != readout.features) {
    throw DimensionMismatch("readout expects " + std::to_string(readout.features) +
                            " features, got " + std::to_string(X.cols()));
  }
  const StateMatrix Z = readout.standardization.apply(X);
  const std::size_t k = readout.outputs;
  std::vector<double> column(readout.features);
  std::vector<double> out(X.rows() * k);
  for (std::size_t o = 0; o < k; ++o) {
    for (std::size_t f = 0; f < readout.features; ++f) column[f] = readout.weight(f, o);
    for (std::size_t i = 0; i < X.rows(); ++i) {
      const double z = kernels::dot(Z.row(i), column) + readout.bias[o];
      out[i * k + o] = readout.kind == ReadoutKind::kLogisticOvr ? sigmoid(z) : z;
    }
  }
  return out;
}

std::size_t argmax(std::span<const double> scores) {
  if (scores.empty()) throw InvalidInput("argmax of an empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

std::vector<int> predict_labels(const LinearReadout& readout,
                                const StateMatrix& X) {
  if (readout.kind != ReadoutKind::kLogisticOvr) {
    throw InvalidInput("predict_labels needs a classification readout");
  }
  const auto scores = predict(readout, X);
  const std::size_t k = readout.outputs;
  std::vector<int> out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    out[i] = readout.classes[argmax(std::span(scores).subspan(i * k, k))];
  }
  return out;
}

namespace {

void check_pair(std::span<const double> z, std::span<const double> y) {
  if (z.size() != y.size()) {
    throw DimensionMismatch("prediction and target lengths differ");
  }
  if (y.empty()) throw InvalidInput("empty target");
}

double squared_error(std::span<const double> z, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (z[i] - y[i]) * (z[i] - y[i]);
  return s;
}

}  // namespace

double nmse_ratio(std::span<const double> z, std::span<const double> y) {
  check_pair(z, y);
  double den = 0.0;
  for (double v : y) den += v * v;
  if (!(den > 0.0)) throw InvalidInput("nmse_ratio: target is all zero");
  return squared_error(z, y) / den;
}

double nmse_variance(std::span<const double> z, std::span<const double> y) {
  check_pair(z, y);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double den = 0.0;
  for (double v : y) den += (v - mean) * (v - mean);
  if (!(den > 0.0)) throw InvalidInput("nmse_variance: target is constant");
  return squared_error(z, y) / den;
}

Metrics evaluate_regression(std::span<const double> z, std::span<const double> y) {
  Metrics m;
  m.nmse_ratio = nmse_ratio(z, y);
  m.nmse_variance = nmse_variance(z, y);
  return m;
}

Metrics tally(std::span<const int> classes, std::span<const int> truth,
              std::span<const int> predicted) {
  if (truth.size() != predicted.size()) {
    throw DimensionMismatch("truth and prediction counts differ");
  }
  std::map<int, std::size_t> index;
  for (std::size_t c = 0; c < classes.size(); ++c) index[classes[c]] = c;
  Metrics m;
  m.classes.assign(classes.begin(), classes.end());
  m.confusion.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = index.find(truth[i]);
    const auto p = index.find(predicted[i]);
    if (t == index.end() || p == index.end()) {
      throw InvalidInput("label " + std::to_string(truth[i]) +
                         " is not one of the readout's classes");
    }
    ++m.confusion[t->second][p->second];
    if (t->second == p->second) ++hits;
  }
  m.accuracy = truth.empty() ? 0.0
                             : static_cast<double>(hits) /
                                   static_cast<double>(truth.size());
  return m;
}

Metrics evaluate_classification(const LinearReadout& readout,
                                const StateMatrix& X,
                                std::span<const int> labels) {
  if (X.rows() != labels.size()) {
    throw DimensionMismatch("state matrix rows and label count differ");
  }
  for (int l : labels) {
    if (!std::binary_search(readout.classes.begin(), readout.classes.end(), l)) {
      throw InvalidInput("label " + std::to_string(l) +
                         " was not seen in training");
    }
  }
  const auto predicted = predict_labels(readout, X);
  return tally(readout.classes, labels, predicted);
}

std::string format_readout_weights_csv(const LinearReadout& r) {
  std::string out = "feature";
  for (std::size_t o = 0; o < r.outputs; ++o) {
    out += ",out" + std::to_string(o);
  }
  out += '\n';
  for (std::size_t f = 0; f <= r.features; ++f) {
    out += f == r.features ? std::string("bias")
           : f < r.feature_names.size() ? r.feature_names[f]
                                        : "f" + std::to_string(f);
    for (std::size_t o = 0; o < r.outputs; ++o) {
      out += ',';
      out += io::format_double(f == r.features ? r.bias[o] : r.weight(f, o));
    }
    out += '\n';
  }
  return out;
}

std::string format_readout_metadata_json(const LinearReadout& r) {
  nlohmann::ordered_json j;
  j["kind"] = r.kind == ReadoutKind::kRegression ? "regression" : "logistic-ovr";
  j["features"] = r.features;
  j["outputs"] = r.outputs;
  j["feature_names"] = r.feature_names;
  j["classes"] = r.classes;
  j["standardization"] = {{"mean", r.standardization.mean},
                          {"scale", r.standardization.scale}};
  return j.dump(2) + "\n";
}

LinearReadout parse_readout(const std::string& weights_csv,
                            const std::string& metadata_json,
                            const std::string& origin) {
  LinearReadout r;
  try {
    const auto j = nlohmann::json::parse(metadata_json);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "regression") {
      r.kind = ReadoutKind::kRegression;
    } else if (kind == "logistic-ovr") {
      r.kind = ReadoutKind::kLogisticOvr;
    } else {
      throw ParseError(origin, "unknown readout kind '" + kind + "'");
    }
    r.features = j.at("features").get<std::size_t>();
    r.outputs = j.at("outputs").get<std::size_t>();
    r.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    r.classes = j.at("classes").get<std::vector<int>>();
    r.standardization.mean =
        j.at("standardization").at("mean").get<std::vector<double>>();
    r.standardization.scale =
        j.at("standardization").at("scale").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin, std::string("readout metadata: ") + e.what());
  }

  const auto rows = io::lines(weights_csv);
  if (rows.size() != r.features + 2) {
    throw ParseError(origin, "readout weights: expected " +
                                 std::to_string(r.features + 2) + " lines");
  }
  r.weights.assign(r.features * r.outputs, 0.0);
  r.bias.assign(r.outputs, 0.0);
  for (std::size_t f = 0; f <= r.features; ++f) {
    const auto cells = io::split(rows[f + 1], ',');
    if (cells.size() != r.outputs + 1) {
      throw ParseError(origin, "readout weights: wrong column count on line " +
                                   std::to_string(f + 2));
    }
    for (std::size_t o = 0; o < r.outputs; ++o) {
      const auto v = io::to_double(cells[o + 1]);
      if (!v) throw ParseError(origin, "readout weights: malformed number");
      (f == r.features ? r.bias[o] : r.weights[f * r.outputs + o]) = *v;
    }
  }
  return r;
}

}  // namespace memcap
