/* Copyright 2026 The probls Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Desk-scale test problems: seeded noisy synthetic objectives and small
// classifiers over CSV datasets. Every objective is an exchangeable sum
// over samples, so a uniformly drawn minibatch gives an unbiased estimate
// of the full loss and its gradient.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "probls/errors.hpp"

namespace probls {

// ---------------------------------------------------------------------------
// Datasets

struct Standardization {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
};

struct Dataset {
  Eigen::MatrixXd features;  // M x D
  std::vector<int> labels;   // length M, in [0, num_classes)
  int num_classes = 0;
  std::optional<Standardization> standardization;

  std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t dims() const { return static_cast<std::size_t>(features.cols()); }
};

// Shifts and scales every feature column to zero mean and unit variance,
// recording the parameters. Constant columns are only centered.
inline void standardize(Dataset& data) {
  const auto m = static_cast<double>(data.features.rows());
  Standardization st;
  st.mean = data.features.colwise().mean().transpose();
  st.scale.resize(data.features.cols());
  for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
    const double var = (data.features.col(j).array() - st.mean[j]).square().sum() / m;
    st.scale[j] = var > 0.0 ? std::sqrt(var) : 1.0;
    data.features.col(j) = (data.features.col(j).array() - st.mean[j]) / st.scale[j];
  }
  data.standardization = std::move(st);
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view field, double& out) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
  return res.ec == std::errc() && res.ptr == field.data() + field.size();
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Writes via a sibling temporary and renames over the target.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace detail

// Rows are "label,feat1,...,featD". D comes from the first row and every
// other row must match it. Blank lines are skipped.
inline Dataset parse_csv(std::istream& in, bool standardize_features = false) {
  std::vector<int> labels;
  std::vector<double> values;
  std::size_t dims = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = detail::split_commas(line);
    if (fields.size() < 2) throw ParseError("expected a label and at least one feature", line_no);
    if (labels.empty()) {
      dims = fields.size() - 1;
    } else if (fields.size() - 1 != dims) {
      throw ParseError("expected " + std::to_string(dims) + " features, found " +
                           std::to_string(fields.size() - 1),
                       line_no);
    }
    double label = 0.0;
    if (!detail::parse_double(fields[0], label) || label < 0.0 || label != std::floor(label)) {
      throw ParseError("label must be a non-negative integer", line_no);
    }
    labels.push_back(static_cast<int>(label));
    for (std::size_t j = 1; j < fields.size(); ++j) {
      double v = 0.0;
      if (!detail::parse_double(fields[j], v)) {
        throw ParseError("non-numeric field " + std::to_string(j + 1), line_no);
      }
      values.push_back(v);
    }
  }
  if (labels.empty()) throw ParseError("empty dataset", std::max<std::size_t>(line_no, 1));

  Dataset data;
  const auto m = static_cast<Eigen::Index>(labels.size());
  const auto d = static_cast<Eigen::Index>(dims);
  data.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                 Eigen::RowMajor>>(values.data(), m, d);
  data.num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  data.labels = std::move(labels);
  if (standardize_features) standardize(data);
  return data;
}

inline Dataset load_csv(const std::filesystem::path& path, bool standardize_features = false) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return parse_csv(in, standardize_features);
}

inline std::string to_csv(const Dataset& data) {
  std::string out;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out += std::to_string(data.labels[i]);
    for (std::size_t j = 0; j < data.dims(); ++j) {
      out += ',';
      out += detail::format_double(
          data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out += '\n';
  }
  return out;
}

inline void write_csv(const std::filesystem::path& path, const Dataset& data) {
  detail::write_file_atomically(path, to_csv(data));
}

struct SynthShape {
  double anisotropy = 2.0;  // axis standard deviations are exp(anisotropy * U(-1, 1))
  double scale = 1.0;       // multiplies every feature
};

// Mixture-of-Gaussians classification data. All classes share one rotated,
// anisotropic covariance; class means sit at distance `separation` from a
// common random offset in whitened coordinates, so `separation` is a
// Mahalanobis distance. Deterministic in seed.
inline Dataset gen_synth(int num_classes, std::size_t rows, std::size_t dims,
                         double separation, std::uint64_t seed, const SynthShape& shape = {}) {
  detail::expects(num_classes >= 1 && rows >= 1 && dims >= 1,
                  "gen_synth: need num_classes, rows, dims >= 1");
  detail::expects(std::isfinite(separation) && separation >= 0.0,
                  "gen_synth: separation must be finite and >= 0");
  detail::expects(std::isfinite(shape.anisotropy) && shape.anisotropy >= 0.0 &&
                      std::isfinite(shape.scale) && shape.scale > 0.0,
                  "gen_synth: invalid shape");
  const auto d = static_cast<Eigen::Index>(dims);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  auto gaussian_vector = [&](Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
  };

  Eigen::MatrixXd means(d, num_classes);
  for (int c = 0; c < num_classes; ++c) {
    Eigen::VectorXd u = gaussian_vector(d);
    means.col(c) = separation * u / u.norm();
  }
  const Eigen::VectorXd offset = gaussian_vector(d);

  Eigen::MatrixXd g(d, d);
  for (Eigen::Index j = 0; j < d; ++j) g.col(j) = gaussian_vector(d);
  const Eigen::MatrixXd rotation = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd axis_scale(d);
  for (Eigen::Index j = 0; j < d; ++j) axis_scale[j] = std::exp(shape.anisotropy * uniform(rng));
  const Eigen::MatrixXd mix = rotation * axis_scale.asDiagonal();
  // Means live in whitened coordinates: separation is a Mahalanobis distance.
  means = mix * means;

  std::uniform_int_distribution<int> pick_class(0, num_classes - 1);
  Dataset data;
  data.num_classes = num_classes;
  data.features.resize(static_cast<Eigen::Index>(rows), d);
  data.labels.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const int c = pick_class(rng);
    data.labels[i] = c;
    data.features.row(static_cast<Eigen::Index>(i)) =
        (shape.scale * (offset + means.col(c) + mix * gaussian_vector(d))).transpose();
  }
  return data;
}

// Splits off the trailing `test_fraction` of rows after a seeded shuffle.
inline std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double test_fraction,
                                                 std::uint64_t seed) {
  detail::expects(test_fraction >= 0.0 && test_fraction < 1.0,
                  "split_dataset: test_fraction must be in [0, 1)");
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_test = static_cast<std::size_t>(std::floor(test_fraction * data.rows()));
  const std::size_t n_train = data.rows() - n_test;
  auto take = [&](std::size_t begin, std::size_t end) {
    Dataset part;
    part.num_classes = data.num_classes;
    part.standardization = data.standardization;
    part.features.resize(static_cast<Eigen::Index>(end - begin), data.features.cols());
    for (std::size_t i = begin; i < end; ++i) {
      part.features.row(static_cast<Eigen::Index>(i - begin)) =
          data.features.row(static_cast<Eigen::Index>(order[i]));
      part.labels.push_back(data.labels[order[i]]);
    }
    return part;
  };
  return {take(0, n_train), take(n_train, data.rows())};
}

// ---------------------------------------------------------------------------
// Objectives

// Exchangeable loss L(x) = (1/M) sum_i l(x, d_i) with per-sample gradients.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::size_t num_samples() const = 0;

  // l(x, d_i); overwrites grad with its gradient (resized to dimension()).
  virtual double sample_loss(const Eigen::VectorXd& x, std::size_t i,
                             Eigen::VectorXd& grad) const = 0;

  virtual Eigen::VectorXd initial_point(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 0.1);
    Eigen::VectorXd x(static_cast<Eigen::Index>(dimension()));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
    return x;
  }

  virtual double full_loss(const Eigen::VectorXd& x) const {
    Eigen::VectorXd grad;
    double sum = 0.0;
    for (std::size_t i = 0; i < num_samples(); ++i) sum += sample_loss(x, i, grad);
    return sum / static_cast<double>(num_samples());
  }

  Eigen::VectorXd full_gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd grad;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension()));
    for (std::size_t i = 0; i < num_samples(); ++i) {
      sample_loss(x, i, grad);
      sum += grad;
    }
    return sum / static_cast<double>(num_samples());
  }

  // Classification error rates, for objectives that have them.
  virtual std::optional<double> train_error(const Eigen::VectorXd&) const { return std::nullopt; }
  virtual std::optional<double> test_error(const Eigen::VectorXd&) const { return std::nullopt; }
};

// l(x, d) = 0.5 (x - d)^T A (x - d) with A diagonal and d ~ N(center, noise^2 I).
// The full-data minimizer is the sample mean of the d_i.
class NoisyQuadratic final : public Objective {
 public:
  NoisyQuadratic(Eigen::VectorXd curvature, Eigen::VectorXd center, double noise,
                 std::size_t samples, std::uint64_t seed)
      : curvature_(std::move(curvature)) {
    detail::expects(curvature_.size() == center.size() && curvature_.size() >= 1,
                    "NoisyQuadratic: dimension mismatch");
    detail::expects((curvature_.array() > 0.0).all(), "NoisyQuadratic: curvature must be > 0");
    detail::expects(samples >= 1 && noise >= 0.0, "NoisyQuadratic: bad samples or noise");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    samples_.resize(center.size(), static_cast<Eigen::Index>(samples));
    for (Eigen::Index j = 0; j < samples_.cols(); ++j) {
      for (Eigen::Index i = 0; i < samples_.rows(); ++i) {
        samples_(i, j) = center[i] + noise * normal(rng);
      }
    }
  }

  // Curvatures log-spaced over [1, condition].
  static Eigen::VectorXd log_spaced_curvature(std::size_t dims, double condition) {
    Eigen::VectorXd a(static_cast<Eigen::Index>(dims));
    for (std::size_t i = 0; i < dims; ++i) {
      const double frac = dims > 1 ? static_cast<double>(i) / static_cast<double>(dims - 1) : 0.0;
      a[static_cast<Eigen::Index>(i)] = std::pow(condition, frac);
    }
    return a;
  }

  std::size_t dimension() const override { return static_cast<std::size_t>(curvature_.size()); }
  std::size_t num_samples() const override { return static_cast<std::size_t>(samples_.cols()); }

  double sample_loss(const Eigen::VectorXd& x, std::size_t i,
                     Eigen::VectorXd& grad) const override {
    const Eigen::VectorXd r = x - samples_.col(static_cast<Eigen::Index>(i));
    grad = curvature_.cwiseProduct(r);
    return 0.5 * r.dot(grad);
  }

  Eigen::VectorXd initial_point(std::uint64_t seed) const override {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd x = minimizer();
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += normal(rng);
    return x;
  }

  Eigen::VectorXd minimizer() const { return samples_.rowwise().mean(); }
  const Eigen::VectorXd& curvature() const { return curvature_; }

 private:
  Eigen::VectorXd curvature_;
  Eigen::MatrixXd samples_;  // D x M
};

// Chained Rosenbrock valley with a random linear tilt per sample:
//   l(x, d) = sum_i [ b (x_{i+1} - x_i^2)^2 + (1 - x_i)^2 ] + d^T x,
// d ~ N(0, noise^2 I).
class NoisyRosenbrock final : public Objective {
 public:
  NoisyRosenbrock(std::size_t dims, double noise, std::size_t samples, std::uint64_t seed,
                  double valley = 10.0)
      : valley_(valley) {
    detail::expects(dims >= 2 && samples >= 1 && noise >= 0.0,
                    "NoisyRosenbrock: need dims >= 2, samples >= 1, noise >= 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, noise);
    tilts_.resize(static_cast<Eigen::Index>(dims), static_cast<Eigen::Index>(samples));
    for (Eigen::Index j = 0; j < tilts_.cols(); ++j) {
      for (Eigen::Index i = 0; i < tilts_.rows(); ++i) tilts_(i, j) = noise > 0 ? normal(rng) : 0.0;
    }
  }

  std::size_t dimension() const override { return static_cast<std::size_t>(tilts_.rows()); }
  std::size_t num_samples() const override { return static_cast<std::size_t>(tilts_.cols()); }

  double sample_loss(const Eigen::VectorXd& x, std::size_t i,
                     Eigen::VectorXd& grad) const override {
    const auto d = tilts_.col(static_cast<Eigen::Index>(i));
    grad = d;
    double loss = d.dot(x);
    for (Eigen::Index k = 0; k + 1 < x.size(); ++k) {
      const double ridge = x[k + 1] - x[k] * x[k];
      const double slope = 1.0 - x[k];
      loss += valley_ * ridge * ridge + slope * slope;
      grad[k] += -4.0 * valley_ * ridge * x[k] - 2.0 * slope;
      grad[k + 1] += 2.0 * valley_ * ridge;
    }
    return loss;
  }

  Eigen::VectorXd initial_point(std::uint64_t seed) const override {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 0.5);
    Eigen::VectorXd x(tilts_.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = -1.0 + normal(rng);
    return x;
  }

 private:
  double valley_;
  Eigen::MatrixXd tilts_;
};

namespace detail {

// Softmax cross-entropy on logits z for label y; writes dloss/dz.
inline double softmax_xent(const Eigen::VectorXd& z, int y, Eigen::VectorXd& dz) {
  const double zmax = z.maxCoeff();
  dz = (z.array() - zmax).exp();
  const double norm = dz.sum();
  dz /= norm;
  const double loss = std::log(norm) + zmax - z[y];
  dz[y] -= 1.0;
  return loss;
}

inline Eigen::Index argmax(const Eigen::VectorXd& z) {
  Eigen::Index best = 0;
  z.maxCoeff(&best);
  return best;
}

}  // namespace detail

// Common bookkeeping for classifiers over a train/test split.
class Classifier : public Objective {
 public:
  Classifier(Dataset train, std::optional<Dataset> test)
      : train_(std::move(train)), test_(std::move(test)) {
    detail::expects(train_.rows() >= 1, "Classifier: empty training set");
    classes_ = std::max(train_.num_classes, test_ ? test_->num_classes : 0);
    detail::expects(classes_ >= 2, "Classifier: need at least two classes");
  }

  std::size_t num_samples() const override { return train_.rows(); }
  int num_classes() const { return classes_; }

  // Adds (l2 / 2) * |x|^2 to every per-sample loss.
  void set_l2(double l2) {
    detail::expects(l2 >= 0.0 && std::isfinite(l2), "Classifier: l2 must be finite and >= 0");
    l2_ = l2;
  }
  double l2() const { return l2_; }
  const Dataset& train() const { return train_; }

  virtual Eigen::VectorXd logits(const Eigen::VectorXd& x, const Eigen::VectorXd& features) const = 0;

  std::optional<double> train_error(const Eigen::VectorXd& x) const override {
    return error_rate(x, train_);
  }
  std::optional<double> test_error(const Eigen::VectorXd& x) const override {
    if (!test_ || test_->rows() == 0) return std::nullopt;
    return error_rate(x, *test_);
  }

 protected:
  double error_rate(const Eigen::VectorXd& x, const Dataset& data) const {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      const Eigen::VectorXd f = data.features.row(static_cast<Eigen::Index>(i)).transpose();
      if (detail::argmax(logits(x, f)) != data.labels[i]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(data.rows());
  }

  double penalize(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const {
    if (l2_ == 0.0) return 0.0;
    grad += l2_ * x;
    return 0.5 * l2_ * x.squaredNorm();
  }

  Dataset train_;
  std::optional<Dataset> test_;
  int classes_ = 2;
  double l2_ = 0.0;
};

// Multinomial logistic regression. Parameters are C blocks of D weights
// followed by one bias each.
class LogisticRegression final : public Classifier {
 public:
  using Classifier::Classifier;

  std::size_t dimension() const override {
    return static_cast<std::size_t>(classes_) * (train_.dims() + 1);
  }

  Eigen::VectorXd logits(const Eigen::VectorXd& x, const Eigen::VectorXd& f) const override {
    const auto d = f.size();
    Eigen::VectorXd z(classes_);
    for (int c = 0; c < classes_; ++c) {
      z[c] = x.segment(c * (d + 1), d).dot(f) + x[c * (d + 1) + d];
    }
    return z;
  }

  double sample_loss(const Eigen::VectorXd& x, std::size_t i,
                     Eigen::VectorXd& grad) const override {
    const Eigen::VectorXd f = train_.features.row(static_cast<Eigen::Index>(i)).transpose();
    const auto d = f.size();
    Eigen::VectorXd dz;
    const double loss = detail::softmax_xent(logits(x, f), train_.labels[i], dz);
    grad.resize(static_cast<Eigen::Index>(dimension()));
    for (int c = 0; c < classes_; ++c) {
      grad.segment(c * (d + 1), d) = dz[c] * f;
      grad[c * (d + 1) + d] = dz[c];
    }
    return loss + penalize(x, grad);
  }
};

// Two-layer network: logistic hidden layer, softmax output.
// Parameter layout: W1 (H x D, row-major), b1 (H), W2 (C x H, row-major), b2 (C).
class Mlp2 final : public Classifier {
 public:
  Mlp2(Dataset train, std::optional<Dataset> test, std::size_t hidden)
      : Classifier(std::move(train), std::move(test)), hidden_(static_cast<Eigen::Index>(hidden)) {
    detail::expects(hidden >= 1, "Mlp2: hidden width must be >= 1");
  }

  std::size_t dimension() const override {
    const auto d = static_cast<std::size_t>(train_.dims());
    const auto h = static_cast<std::size_t>(hidden_);
    return h * d + h + static_cast<std::size_t>(classes_) * h + static_cast<std::size_t>(classes_);
  }

  Eigen::VectorXd initial_point(std::uint64_t seed) const override {
    std::mt19937_64 rng(seed);
    const auto d = static_cast<Eigen::Index>(train_.dims());
    std::normal_distribution<double> first(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
    std::normal_distribution<double> second(0.0, 1.0 / std::sqrt(static_cast<double>(hidden_)));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension()));
    for (Eigen::Index i = 0; i < hidden_ * d; ++i) x[i] = first(rng);
    const Eigen::Index w2 = hidden_ * d + hidden_;
    for (Eigen::Index i = 0; i < classes_ * hidden_; ++i) x[w2 + i] = second(rng);
    return x;
  }

  Eigen::VectorXd logits(const Eigen::VectorXd& x, const Eigen::VectorXd& f) const override {
    Eigen::VectorXd hidden;
    return forward(x, f, hidden);
  }

  double sample_loss(const Eigen::VectorXd& x, std::size_t i,
                     Eigen::VectorXd& grad) const override {
    const Eigen::VectorXd f = train_.features.row(static_cast<Eigen::Index>(i)).transpose();
    const auto d = f.size();
    Eigen::VectorXd act;
    const Eigen::VectorXd z = forward(x, f, act);
    Eigen::VectorXd dz;
    const double loss = detail::softmax_xent(z, train_.labels[i], dz);

    const Layout l = layout(d);
    grad.setZero(static_cast<Eigen::Index>(dimension()));
    const auto w2 = Eigen::Map<const RowMatrix>(x.data() + l.w2, classes_, hidden_);
    Eigen::Map<RowMatrix>(grad.data() + l.w2, classes_, hidden_) = dz * act.transpose();
    grad.segment(l.b2, classes_) = dz;
    const Eigen::VectorXd dact = w2.transpose() * dz;
    const Eigen::VectorXd dpre = dact.array() * act.array() * (1.0 - act.array());
    Eigen::Map<RowMatrix>(grad.data() + l.w1, hidden_, d) = dpre * f.transpose();
    grad.segment(l.b1, hidden_) = dpre;
    return loss + penalize(x, grad);
  }

 private:
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  struct Layout {
    Eigen::Index w1, b1, w2, b2;
  };

  Layout layout(Eigen::Index d) const {
    const Eigen::Index b1 = hidden_ * d;
    const Eigen::Index w2 = b1 + hidden_;
    return {0, b1, w2, w2 + classes_ * hidden_};
  }

  Eigen::VectorXd forward(const Eigen::VectorXd& x, const Eigen::VectorXd& f,
                          Eigen::VectorXd& act) const {
    const auto d = f.size();
    const Layout l = layout(d);
    const auto w1 = Eigen::Map<const RowMatrix>(x.data() + l.w1, hidden_, d);
    const auto w2 = Eigen::Map<const RowMatrix>(x.data() + l.w2, classes_, hidden_);
    const Eigen::VectorXd pre = w1 * f + x.segment(l.b1, hidden_);
    act = (1.0 + (-pre.array()).exp()).inverse().matrix();
    return w2 * act + x.segment(l.b2, classes_);
  }

  Eigen::Index hidden_;
};

// ---------------------------------------------------------------------------
// Problem specification

enum class ProblemKind { noisy_quadratic, noisy_rosenbrock, logistic_regression, mlp2 };

inline std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::noisy_quadratic: return "noisy-quadratic";
    case ProblemKind::noisy_rosenbrock: return "noisy-rosenbrock-like";
    case ProblemKind::logistic_regression: return "logistic-regression";
    case ProblemKind::mlp2: return "mlp2";
  }
  return "?";
}

inline std::optional<ProblemKind> parse_problem_kind(std::string_view name) {
  if (name == "noisy-quadratic") return ProblemKind::noisy_quadratic;
  if (name == "noisy-rosenbrock-like" || name == "noisy-rosenbrock") {
    return ProblemKind::noisy_rosenbrock;
  }
  if (name == "logistic-regression") return ProblemKind::logistic_regression;
  if (name == "mlp2") return ProblemKind::mlp2;
  return std::nullopt;
}

struct ProblemSpec {
  ProblemKind kind = ProblemKind::noisy_quadratic;
  std::size_t dimension = 10;
  std::size_t samples = 1000;  // M; for classifiers, rows before the split
  double noise = 1.0;          // sample spread of the synthetic objectives
  double condition = 10.0;     // noisy-quadratic curvature spread
  int classes = 2;
  double separation = 3.0;
  SynthShape shape;
  double l2 = 0.0;  // classifier weight penalty
  std::size_t hidden = 32;
  double test_fraction = 0.2;
  bool standardize = false;
  std::string data_path;  // CSV; empty means generate synthetic data
  std::uint64_t seed = 1;
};

inline std::unique_ptr<Objective> make_problem(const ProblemSpec& spec) {
  detail::expects(spec.dimension >= 1, "ProblemSpec: dimension must be >= 1");
  switch (spec.kind) {
    case ProblemKind::noisy_quadratic:
      return std::make_unique<NoisyQuadratic>(
          NoisyQuadratic::log_spaced_curvature(spec.dimension, spec.condition),
          Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.dimension)), spec.noise,
          spec.samples, spec.seed);
    case ProblemKind::noisy_rosenbrock:
      return std::make_unique<NoisyRosenbrock>(spec.dimension, spec.noise, spec.samples,
                                               spec.seed);
    case ProblemKind::logistic_regression:
    case ProblemKind::mlp2: {
      Dataset data = spec.data_path.empty()
                         ? gen_synth(spec.classes, spec.samples, spec.dimension, spec.separation,
                                     spec.seed, spec.shape)
                         : load_csv(spec.data_path);
      if (spec.standardize) standardize(data);
      auto [train, test] = split_dataset(data, spec.test_fraction, spec.seed);
      std::optional<Dataset> held_out;
      if (test.rows() > 0) held_out = std::move(test);
      std::unique_ptr<Classifier> model;
      if (spec.kind == ProblemKind::mlp2) {
        model = std::make_unique<Mlp2>(std::move(train), std::move(held_out), spec.hidden);
      } else {
        model = std::make_unique<LogisticRegression>(std::move(train), std::move(held_out));
      }
      model->set_l2(spec.l2);
      return model;
    }
  }
  throw ContractViolation("make_problem: unknown kind");
}

}  // namespace probls
