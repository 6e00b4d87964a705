/**
 * @file robust_classification.hpp
 * @brief Distributionally robust multiclass logistic regression.
 *
 * Given samples (a_i, b_i) with a_i in R^d and labels b_i in {1..k}, the
 * adversary reweights the per-sample losses subject to a chi-squared
 * proximity penalty around the uniform weights:
 *
 *   L(Theta, y) = (1/n) sum_i y_i * log(1 + exp(Tr(Theta A_i)))
 *               - (lambda'/2) ||y - (1/n) 1||^2
 *
 * over X = NuclearBall(k, d, r) and, by default, Y = Simplex(n). The margin
 * matrices A_i (d x k) have column j equal to a_i for j != b_i and
 * -(k-1) a_i for j = b_i, so Tr(Theta A_i) = sum(s) - k * s_{b_i} with
 * s = Theta a_i, and ||A_i||_F^2 = k(k-1) ||a_i||^2.
 *
 * The loss term carries an explicit 1/n so L is the weighted average loss;
 * the smoothness constants below are scaled to match (see lipschitz_rc).
 * The quadratic penalty makes L exactly lambda'-strongly concave in y, and
 * since it is isotropic the exact and regularized dual best responses are
 * projections of closed-form targets onto Y.
 */
#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mmx/point.hpp"
#include "mmx/problem.hpp"
#include "mmx/rng.hpp"
#include "mmx/sets.hpp"

namespace mmx {

/// Labeled dataset: features stored one sample per column (d x n), labels
/// in {1..k}.
struct ClassificationData {
  Matrix features;
  std::vector<int> labels;
  int num_classes = 0;

  Index sample_count() const { return features.cols(); }
  Index feature_dim() const { return features.rows(); }
};

namespace detail {

/// log(1 + exp(t)) without overflow.
inline double log1p_exp(double t) {
  if (t > 0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

/// exp(t) / (1 + exp(t)) without overflow.
inline double logistic(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace detail

/// argmax over the n-simplex of (1/n) l'y - (lambda'/2)||y - (1/n)1||^2,
/// computed by completing the square and projecting:
/// simplex_project((1/n)1 + l/(n lambda')).
inline Point best_response_simplex_chi2(const Vector& losses,
                                        double lambda_prime, Index n) {
  if (!(lambda_prime > 0)) {
    throw ConfigError("best_response_simplex_chi2: lambda' must be positive");
  }
  if (losses.size() != n) {
    throw ConfigError("best_response_simplex_chi2: loss vector size mismatch");
  }
  Vector target = Vector::Constant(n, 1.0 / static_cast<double>(n)) +
                  losses / (static_cast<double>(n) * lambda_prime);
  return Point::of_vector(detail::project_capped_simplex(target, 1.0));
}

/// Smoothness constants of the robust classification payoff, scaled by the
/// 1/n factor carried by the loss term:
///   L_ThetaTheta = k(k-1) max_i ||a_i||^2 / (4n)
///   L_yTheta     = (1/n) sqrt(k(k-1)/2 * sum_i ||a_i||^2)
///   L_yy         = sqrt(2) lambda'   (the penalty is unscaled)
///   mu           = lambda'           (exact curvature of the penalty)
struct RobustClassificationConstants {
  double lipschitz_xx;
  double lipschitz_yx;
  double lipschitz_yy;
  double mu;
};

inline RobustClassificationConstants lipschitz_rc(const Matrix& features,
                                                  int num_classes,
                                                  double lambda_prime,
                                                  Index n) {
  const double k = static_cast<double>(num_classes);
  const double dn = static_cast<double>(n);
  double max_sq = 0.0;
  double sum_sq = 0.0;
  for (Index i = 0; i < features.cols(); ++i) {
    const double sq = features.col(i).squaredNorm();
    max_sq = std::max(max_sq, sq);
    sum_sq += sq;
  }
  RobustClassificationConstants c;
  c.lipschitz_xx = k * (k - 1.0) * max_sq / (4.0 * dn);
  c.lipschitz_yx = std::sqrt(k * (k - 1.0) / 2.0 * sum_sq) / dn;
  c.lipschitz_yy = std::sqrt(2.0) * lambda_prime;
  c.mu = lambda_prime;
  return c;
}

class RobustClassification final : public PayoffProblem {
 public:
  /// Dual feasible set: the simplex (default, matching the reference
  /// experiments) or the ball {||ny - 1|| <= rho} it relaxes to.
  enum class DualDomain { kSimplex, kBall };

  RobustClassification(ClassificationData data, double radius,
                       double lambda_prime,
                       DualDomain domain = DualDomain::kSimplex,
                       double rho = 1.0)
      : data_(std::move(data)),
        radius_(radius),
        lambda_prime_(lambda_prime) {
    const Index n = data_.sample_count();
    if (n < 1) throw ConfigError("RobustClassification: empty dataset");
    if (static_cast<Index>(data_.labels.size()) != n) {
      throw ConfigError("RobustClassification: one label per sample required");
    }
    if (data_.num_classes < 2) {
      throw ConfigError("RobustClassification: need at least two classes");
    }
    for (int b : data_.labels) {
      if (b < 1 || b > data_.num_classes) {
        throw ConfigError("RobustClassification: label out of range [1, k]");
      }
    }
    if (!(radius_ > 0)) {
      throw ConfigError("RobustClassification: radius must be positive");
    }
    if (!(lambda_prime_ > 0)) {
      throw ConfigError("RobustClassification: lambda' must be positive");
    }
    x_set_ = std::make_shared<NuclearBall>(data_.num_classes,
                                           data_.feature_dim(), radius_);
    if (domain == DualDomain::kSimplex) {
      y_set_ = std::make_shared<Simplex>(n);
    } else {
      if (!(rho > 0)) {
        throw ConfigError("RobustClassification: rho must be positive");
      }
      y_set_ = std::make_shared<L2Ball>(
          Vector::Constant(n, 1.0 / static_cast<double>(n)),
          rho / static_cast<double>(n));
    }
    // Each loss term is convex in the model, so the weighted sum is convex
    // exactly when no feasible weight is negative: always on the simplex,
    // and on the ball only while it stays inside the nonnegative orthant
    // (min coordinate (1 - rho)/n).
    nonnegative_weights_ = domain == DualDomain::kSimplex || rho <= 1.0;
    constants_ =
        lipschitz_rc(data_.features, data_.num_classes, lambda_prime_, n);
  }

  const FeasibleSet& x_set() const override { return *x_set_; }
  const FeasibleSet& y_set() const override { return *y_set_; }

  double value(const Point& x, const Point& y) const override {
    const Vector losses = per_sample_losses(x);
    const Index n = data_.sample_count();
    const Vector centered =
        y.flat() - Vector::Constant(n, 1.0 / static_cast<double>(n));
    return losses.dot(y.flat()) / static_cast<double>(n) -
           0.5 * lambda_prime_ * centered.squaredNorm();
  }

  /// (1/n) sum_i y_i sigma(Tr(Theta A_i)) A_i^T, assembled as
  /// row_j = total - k * class_sum_j with per-class weighted feature sums.
  Point grad_x(const Point& x, const Point& y) const override {
    const auto theta = x.as_matrix();
    const Index n = data_.sample_count();
    const Index d = data_.feature_dim();
    const int k = data_.num_classes;
    Vector total = Vector::Zero(d);
    Matrix class_sum = Matrix::Zero(d, k);
    for (Index i = 0; i < n; ++i) {
      const double w = y.flat()[i] *
                       detail::logistic(margin_trace(theta, i)) /
                       static_cast<double>(n);
      total += w * data_.features.col(i);
      class_sum.col(data_.labels[static_cast<size_t>(i)] - 1) +=
          w * data_.features.col(i);
    }
    Matrix g(k, d);
    for (int j = 0; j < k; ++j) {
      g.row(j) = (total - static_cast<double>(k) * class_sum.col(j)).transpose();
    }
    return Point::of_matrix(g);
  }

  Point grad_y(const Point& x, const Point& y) const override {
    const Index n = data_.sample_count();
    Vector g = per_sample_losses(x) / static_cast<double>(n) -
               lambda_prime_ * (y.flat() - Vector::Constant(
                                               n, 1.0 / static_cast<double>(n)));
    return Point::of_vector(std::move(g));
  }

  double lipschitz_xx() const override { return constants_.lipschitz_xx; }
  double lipschitz_yx() const override { return constants_.lipschitz_yx; }
  double lipschitz_yy() const override { return constants_.lipschitz_yy; }
  double concavity_mu() const override { return constants_.mu; }
  bool convex_in_x() const override { return nonnegative_weights_; }

  bool has_best_response_y() const override { return true; }
  bool has_smoothed_best_response_y() const override { return true; }

  /// The y-part of L is an isotropic concave quadratic, so the constrained
  /// maximizer is the projection of the unconstrained one onto Y.
  Point best_response_y(const Point& x) const override {
    const Index n = data_.sample_count();
    Vector target =
        Vector::Constant(n, 1.0 / static_cast<double>(n)) +
        per_sample_losses(x) / (static_cast<double>(n) * lambda_prime_);
    return y_set_->project(Point::of_vector(std::move(target)));
  }

  Point smoothed_best_response_y(const Point& x, double beta,
                                 const Point& y0) const override {
    if (!(lambda_prime_ + beta > 0)) {
      throw ConfigError("RobustClassification: beta + mu must be positive");
    }
    const Index n = data_.sample_count();
    Vector target =
        (lambda_prime_ * Vector::Constant(n, 1.0 / static_cast<double>(n)) +
         beta * y0.flat() + per_sample_losses(x) / static_cast<double>(n)) /
        (lambda_prime_ + beta);
    return y_set_->project(Point::of_vector(std::move(target)));
  }

  /// Loss vector (log(1+exp(Tr(Theta A_i))))_i; used by the dual oracles.
  Vector per_sample_losses(const Point& x) const {
    const auto theta = x.as_matrix();
    const Index n = data_.sample_count();
    Vector losses(n);
    for (Index i = 0; i < n; ++i) {
      losses[i] = detail::log1p_exp(margin_trace(theta, i));
    }
    return losses;
  }

  std::map<std::string, double> metadata() const override {
    const double n = static_cast<double>(data_.sample_count());
    return {{"n", n},
            {"d", static_cast<double>(data_.feature_dim())},
            {"k", static_cast<double>(data_.num_classes)},
            {"radius", radius_},
            {"lambda_prime", lambda_prime_},
            {"lambda", lambda_prime_ / (2.0 * n * n)}};
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "RobustClassification(n=" << data_.sample_count()
       << ", d=" << data_.feature_dim() << ", k=" << data_.num_classes << ")";
    return os.str();
  }

  const ClassificationData& data() const { return data_; }

 private:
  /// Tr(Theta A_i) = sum(s) - k * s_{b_i} with s = Theta a_i.
  double margin_trace(const Eigen::Map<const Matrix>& theta, Index i) const {
    const Vector s = theta * data_.features.col(i);
    return s.sum() - static_cast<double>(data_.num_classes) *
                         s[data_.labels[static_cast<size_t>(i)] - 1];
  }

  ClassificationData data_;
  double radius_;
  double lambda_prime_;
  bool nonnegative_weights_ = true;
  RobustClassificationConstants constants_;
  SetPtr x_set_;
  SetPtr y_set_;
};

/// Synthetic dataset with standard normal features and uniform labels.
inline ClassificationData rc_synthetic(Index n, Index d, int k,
                                       std::uint64_t seed) {
  if (n < 1 || d < 1 || k < 2) {
    throw ConfigError("rc_synthetic: need n >= 1, d >= 1, k >= 2");
  }
  Rng rng(seed);
  ClassificationData data;
  data.features = rng.normal_matrix(d, n);
  data.labels.reserve(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    data.labels.push_back(
        1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k))));
  }
  data.num_classes = k;
  return data;
}

/// Reads the LIBSVM text format: one "label idx:val idx:val ..." line per
/// sample with 1-based strictly increasing indices. Labels are remapped to
/// 1..k in order of first appearance; the feature dimension is the largest
/// index seen. Parse failures report the offending line number.
inline ClassificationData read_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_libsvm: cannot open " + path);

  struct Entry {
    std::vector<std::pair<Index, double>> features;
    int label;
  };
  std::vector<Entry> rows;
  std::map<std::string, int> label_ids;
  Index max_index = 0;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // Strip comments and skip blank lines.
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string label_token;
    if (!(ls >> label_token)) continue;

    Entry entry;
    auto [it, inserted] = label_ids.try_emplace(
        label_token, static_cast<int>(label_ids.size()) + 1);
    entry.label = it->second;
    (void)inserted;

    Index prev_index = 0;
    std::string feature_token;
    while (ls >> feature_token) {
      const auto colon = feature_token.find(':');
      if (colon == std::string::npos) {
        throw IoError("read_libsvm: " + path + ":" + std::to_string(line_no) +
                      ": expected idx:val, got '" + feature_token + "'");
      }
      Index idx = 0;
      double val = 0.0;
      try {
        idx = static_cast<Index>(std::stoll(feature_token.substr(0, colon)));
        val = std::stod(feature_token.substr(colon + 1));
      } catch (const std::exception&) {
        throw IoError("read_libsvm: " + path + ":" + std::to_string(line_no) +
                      ": malformed entry '" + feature_token + "'");
      }
      if (idx < 1) {
        throw IoError("read_libsvm: " + path + ":" + std::to_string(line_no) +
                      ": indices are 1-based");
      }
      if (idx <= prev_index) {
        throw IoError("read_libsvm: " + path + ":" + std::to_string(line_no) +
                      ": indices must be strictly increasing");
      }
      prev_index = idx;
      max_index = std::max(max_index, idx);
      entry.features.emplace_back(idx, val);
    }
    rows.push_back(std::move(entry));
  }
  if (rows.empty()) throw IoError("read_libsvm: no samples in " + path);

  ClassificationData data;
  data.features = Matrix::Zero(max_index, static_cast<Index>(rows.size()));
  data.labels.reserve(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [idx, val] : rows[i].features) {
      data.features(idx - 1, static_cast<Index>(i)) = val;
    }
    data.labels.push_back(rows[i].label);
  }
  data.num_classes = static_cast<int>(label_ids.size());
  return data;
}

/// Writes samples in the LIBSVM text format (remapped numeric labels, only
/// nonzero features). read_libsvm(write_libsvm(data)) reproduces `data`
/// whenever every feature index up to the dimension appears somewhere.
inline void write_libsvm(const std::string& path,
                         const ClassificationData& data) {
  std::ofstream out(path);
  if (!out) throw IoError("write_libsvm: cannot open " + path);
  out.precision(17);
  for (Index i = 0; i < data.sample_count(); ++i) {
    out << data.labels[static_cast<size_t>(i)];
    for (Index j = 0; j < data.feature_dim(); ++j) {
      const double v = data.features(j, i);
      if (v != 0.0) out << ' ' << (j + 1) << ':' << v;
    }
    out << '\n';
  }
  if (!out) throw IoError("write_libsvm: write failed for " + path);
}

}  // namespace mmx
