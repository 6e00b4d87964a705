/**
 * @file sets.hpp
 * @brief Feasible-set library: linear minimization and projection oracles.
 *
 * Every set implements both oracles plus membership, sampling, diameter, and
 * (where applicable) a strong-convexity modulus:
 *   - lmo(d)      returns a minimizer of d'v over the set; ties are broken
 *                 deterministically (documented per set).
 *   - project(u)  returns the Euclidean projection of u onto the set.
 *   - contains()  membership up to a residual tolerance (kMembershipTol).
 *   - sample()    a random feasible point with full support over the set
 *                 (distributions documented per set) for property testing.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mmx/linalg.hpp"
#include "mmx/point.hpp"
#include "mmx/rng.hpp"

namespace mmx {

/// Default residual tolerance for membership checks.
inline constexpr double kMembershipTol = 1e-9;

class FeasibleSet {
 public:
  virtual ~FeasibleSet() = default;

  virtual const Shape& shape() const = 0;
  Index dim() const { return shape().size(); }

  /// Euclidean diameter max ||u - v|| over the set.
  virtual double diameter() const = 0;

  /// Strong-convexity modulus of the set (0 when not strongly convex).
  virtual double strong_convexity_alpha() const { return 0.0; }

  virtual Point lmo(const Point& direction) const = 0;
  virtual Point project(const Point& point) const = 0;
  bool contains(const Point& point, double tol = kMembershipTol) const {
    return contains_impl(point, tol);
  }
  virtual Point sample(Rng& rng) const = 0;

  /// A fixed feasible point used as a default initializer.
  virtual Point canonical_point() const = 0;

  virtual std::string describe() const = 0;

 protected:
  virtual bool contains_impl(const Point& point, double tol) const = 0;

  void check_shape(const Point& p, const char* op) const {
    if (p.shape() != shape()) {
      throw ConfigError(describe() + ": " + op + " got shape " +
                        p.shape().describe() + ", expected " +
                        shape().describe());
    }
  }
};

using SetPtr = std::shared_ptr<const FeasibleSet>;

namespace detail {

/// Threshold step shared by the simplex and nuclear-ball projections:
/// projects z onto {x >= 0, sum(x) = total}. O(n log n).
inline Vector project_capped_simplex(const Vector& z, double total) {
  const Index n = z.size();
  std::vector<double> sorted(z.data(), z.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = (z.sum() - total) / static_cast<double>(n);
  for (Index j = 0; j < n; ++j) {
    cumulative += sorted[static_cast<size_t>(j)];
    const double candidate = (cumulative - total) / static_cast<double>(j + 1);
    if (j + 1 == n || sorted[static_cast<size_t>(j + 1)] <= candidate) {
      theta = candidate;
      break;
    }
  }
  return (z.array() - theta).max(0.0).matrix();
}

}  // namespace detail

/// Closed interval [lo, hi] in one dimension.
///
/// LMO tie rule: direction 0 returns lo. Sampling: uniform on [lo, hi].
/// The default strong-convexity modulus is 1/(hi - lo) — the value the
/// experimental setup this library reproduces assigns to [0, B] — and can be
/// overridden at construction (the classical modulus of a 1-D ball of radius
/// (hi-lo)/2 would be 2/(hi - lo)).
class Interval : public FeasibleSet {
 public:
  Interval(double lo, double hi)
      : Interval(lo, hi, hi > lo ? 1.0 / (hi - lo) : 0.0) {}

  Interval(double lo, double hi, double alpha)
      : lo_(lo), hi_(hi), alpha_(alpha), shape_(Shape::vector(1)) {
    if (!(hi > lo)) throw ConfigError("Interval: need hi > lo");
    if (alpha < 0) throw ConfigError("Interval: alpha must be nonnegative");
  }

  const Shape& shape() const override { return shape_; }
  double diameter() const override { return hi_ - lo_; }
  double strong_convexity_alpha() const override { return alpha_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  Point lmo(const Point& d) const override {
    check_shape(d, "lmo");
    return Point::of_scalar(d.flat()[0] < 0 ? hi_ : lo_);
  }

  Point project(const Point& p) const override {
    check_shape(p, "project");
    return Point::of_scalar(std::clamp(p.flat()[0], lo_, hi_));
  }

  bool contains_impl(const Point& p, double tol) const override {
    check_shape(p, "contains");
    const double x = p.flat()[0];
    return x >= lo_ - tol && x <= hi_ + tol;
  }

  Point sample(Rng& rng) const override {
    return Point::of_scalar(rng.uniform(lo_, hi_));
  }

  Point canonical_point() const override { return Point::of_scalar(lo_); }

  std::string describe() const override {
    std::ostringstream os;
    os << "Interval[" << lo_ << ", " << hi_ << "]";
    return os.str();
  }

 private:
  double lo_, hi_, alpha_;
  Shape shape_;
};

/// Axis-aligned box {lo <= x <= hi} coordinate-wise.
///
/// LMO tie rule: zero coordinates pick lo. Sampling: coordinate-wise uniform.
class Box : public FeasibleSet {
 public:
  Box(Vector lo, Vector hi)
      : lo_(std::move(lo)), hi_(std::move(hi)), shape_(Shape::vector(lo_.size())) {
    if (lo_.size() != hi_.size()) throw ConfigError("Box: lo/hi size mismatch");
    for (Index i = 0; i < lo_.size(); ++i) {
      if (!(hi_[i] >= lo_[i])) throw ConfigError("Box: need hi >= lo");
    }
  }

  const Shape& shape() const override { return shape_; }
  double diameter() const override { return (hi_ - lo_).norm(); }

  Point lmo(const Point& d) const override {
    check_shape(d, "lmo");
    Vector v(lo_.size());
    for (Index i = 0; i < v.size(); ++i) {
      v[i] = d.flat()[i] < 0 ? hi_[i] : lo_[i];
    }
    return Point(std::move(v), shape_);
  }

  Point project(const Point& p) const override {
    check_shape(p, "project");
    Vector v = p.flat().cwiseMax(lo_).cwiseMin(hi_);
    return Point(std::move(v), shape_);
  }

  bool contains_impl(const Point& p, double tol) const override {
    check_shape(p, "contains");
    return (p.flat().array() >= lo_.array() - tol).all() &&
           (p.flat().array() <= hi_.array() + tol).all();
  }

  Point sample(Rng& rng) const override {
    Vector v(lo_.size());
    for (Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(lo_[i], hi_[i]);
    return Point(std::move(v), shape_);
  }

  Point canonical_point() const override {
    return Point(0.5 * (lo_ + hi_), shape_);
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "Box(dim=" << lo_.size() << ")";
    return os.str();
  }

 private:
  Vector lo_, hi_;
  Shape shape_;
};

/// Euclidean ball {||x - center|| <= radius}; strong-convexity modulus
/// 1/radius.
///
/// LMO tie rule: direction 0 returns the center. Sampling: uniform direction,
/// radius scaled by u^(1/n) so draws are uniform over the ball's volume.
class L2Ball : public FeasibleSet {
 public:
  L2Ball(Vector center, double radius)
      : center_(std::move(center)),
        radius_(radius),
        shape_(Shape::vector(center_.size())) {
    if (!(radius > 0)) throw ConfigError("L2Ball: radius must be positive");
  }

  static L2Ball origin(Index dim, double radius) {
    return L2Ball(Vector::Zero(dim), radius);
  }

  const Shape& shape() const override { return shape_; }
  double diameter() const override { return 2.0 * radius_; }
  double strong_convexity_alpha() const override { return 1.0 / radius_; }
  double radius() const { return radius_; }
  const Vector& center() const { return center_; }

  Point lmo(const Point& d) const override {
    check_shape(d, "lmo");
    const double nd = d.flat().norm();
    if (nd == 0.0) return Point(center_, shape_);
    return Point(center_ - (radius_ / nd) * d.flat(), shape_);
  }

  Point project(const Point& p) const override {
    check_shape(p, "project");
    const Vector delta = p.flat() - center_;
    const double nd = delta.norm();
    if (nd <= radius_) return p;
    return Point(center_ + (radius_ / nd) * delta, shape_);
  }

  bool contains_impl(const Point& p, double tol) const override {
    check_shape(p, "contains");
    return (p.flat() - center_).norm() <= radius_ + tol;
  }

  Point sample(Rng& rng) const override {
    Vector dir = rng.normal_vector(center_.size());
    const double nd = dir.norm();
    if (nd == 0.0) return Point(center_, shape_);
    const double scale =
        radius_ *
        std::pow(rng.uniform(), 1.0 / static_cast<double>(center_.size()));
    return Point(center_ + (scale / nd) * dir, shape_);
  }

  Point canonical_point() const override { return Point(center_, shape_); }

  std::string describe() const override {
    std::ostringstream os;
    os << "L2Ball(dim=" << center_.size() << ", r=" << radius_ << ")";
    return os.str();
  }

 private:
  Vector center_;
  double radius_;
  Shape shape_;
};

/// Probability simplex {x >= 0, sum(x) = 1}.
///
/// LMO returns the basis vector at the smallest direction coordinate (lowest
/// index on ties). Projection is the classic sort-and-threshold algorithm.
/// Sampling: normalized exponential spacings (uniform over the simplex).
class Simplex : public FeasibleSet {
 public:
  explicit Simplex(Index n) : n_(n), shape_(Shape::vector(n)) {
    if (n < 1) throw ConfigError("Simplex: dimension must be >= 1");
  }

  const Shape& shape() const override { return shape_; }
  double diameter() const override { return n_ >= 2 ? std::sqrt(2.0) : 0.0; }

  Point lmo(const Point& d) const override {
    check_shape(d, "lmo");
    Index best = 0;
    for (Index i = 1; i < n_; ++i) {
      if (d.flat()[i] < d.flat()[best]) best = i;
    }
    Vector v = Vector::Zero(n_);
    v[best] = 1.0;
    return Point(std::move(v), shape_);
  }

  Point project(const Point& p) const override {
    check_shape(p, "project");
    return Point(detail::project_capped_simplex(p.flat(), 1.0), shape_);
  }

  bool contains_impl(const Point& p, double tol) const override {
    check_shape(p, "contains");
    return p.flat().minCoeff() >= -tol &&
           std::abs(p.flat().sum() - 1.0) <= tol;
  }

  Point sample(Rng& rng) const override {
    Vector v(n_);
    for (Index i = 0; i < n_; ++i) {
      double u;
      do {
        u = rng.uniform();
      } while (u >= 1.0);
      v[i] = -std::log1p(-u);
    }
    v /= v.sum();
    return Point(std::move(v), shape_);
  }

  Point canonical_point() const override {
    return Point(Vector::Constant(n_, 1.0 / static_cast<double>(n_)), shape_);
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "Simplex(" << n_ << ")";
    return os.str();
  }

 private:
  Index n_;
  Shape shape_;
};

/// Nuclear-norm ball {||M||_* <= radius} over rows x cols matrices.
///
/// LMO returns -radius * u1 v1' for the leading singular triple (u1, v1) of
/// the direction; a zero direction falls back to -radius * e1 e1'. The
/// projection thresholds the singular values onto the nonnegative l1 ball of
/// radius `radius` (reusing the simplex threshold) and rebuilds the matrix.
/// Sampling: a Gaussian matrix rescaled to a uniformly drawn nuclear norm.
class NuclearBall : public FeasibleSet {
 public:
  NuclearBall(Index rows, Index cols, double radius)
      : rows_(rows), cols_(cols), radius_(radius),
        shape_(Shape::matrix(rows, cols)) {
    if (rows < 1 || cols < 1) throw ConfigError("NuclearBall: empty shape");
    if (!(radius > 0)) throw ConfigError("NuclearBall: radius must be positive");
  }

  const Shape& shape() const override { return shape_; }
  double diameter() const override { return 2.0 * radius_; }
  double radius() const { return radius_; }

  Point lmo(const Point& d) const override {
    check_shape(d, "lmo");
    const auto g = d.as_matrix();
    const SingularTriple t = detail::top_singular_triple(g);
    Matrix m;
    if (t.sigma <= 0.0) {
      m = Matrix::Zero(rows_, cols_);
      m(0, 0) = -radius_;
    } else {
      m.noalias() = (-radius_) * (t.u * t.v.transpose());
    }
    return Point::of_matrix(m);
  }

  Point project(const Point& p) const override {
    check_shape(p, "project");
    Eigen::BDCSVD<Matrix> svd(p.as_matrix(),
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    if (sv.sum() <= radius_) return p;
    const Vector clipped = detail::project_capped_simplex(sv, radius_);
    Matrix m = svd.matrixU() * clipped.asDiagonal() * svd.matrixV().transpose();
    return Point::of_matrix(m);
  }

  bool contains_impl(const Point& p, double tol) const override {
    check_shape(p, "contains");
    return detail::nuclear_norm(p.as_matrix()) <= radius_ + tol;
  }

  Point sample(Rng& rng) const override {
    Matrix m = rng.normal_matrix(rows_, cols_);
    const double nn = detail::nuclear_norm(m);
    if (nn == 0.0) return Point::of_matrix(Matrix::Zero(rows_, cols_));
    return Point::of_matrix(m * (radius_ * rng.uniform() / nn));
  }

  Point canonical_point() const override {
    return Point::of_matrix(Matrix::Zero(rows_, cols_));
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "NuclearBall(" << rows_ << "x" << cols_ << ", r=" << radius_ << ")";
    return os.str();
  }

 private:
  Index rows_, cols_;
  double radius_;
  Shape shape_;
};

/// Product of per-column Euclidean balls: {M : ||M.col(j)|| <= radius, all j},
/// centered at the origin. Not strongly convex (it is a product).
///
/// LMO: each column independently -radius * g_j/||g_j|| (zero column -> 0).
/// Sampling: independent per-column ball samples.
class ColumnBallProduct : public FeasibleSet {
 public:
  ColumnBallProduct(Index rows, Index cols, double radius)
      : rows_(rows), cols_(cols), radius_(radius),
        shape_(Shape::matrix(rows, cols)) {
    if (rows < 1 || cols < 1) throw ConfigError("ColumnBallProduct: empty shape");
    if (!(radius > 0))
      throw ConfigError("ColumnBallProduct: radius must be positive");
  }

  const Shape& shape() const override { return shape_; }
  double diameter() const override {
    return 2.0 * radius_ * std::sqrt(static_cast<double>(cols_));
  }
  double radius() const { return radius_; }

  Point lmo(const Point& d) const override {
    check_shape(d, "lmo");
    const auto g = d.as_matrix();
    Matrix m(rows_, cols_);
    for (Index j = 0; j < cols_; ++j) {
      const double nj = g.col(j).norm();
      if (nj == 0.0) {
        m.col(j).setZero();
      } else {
        m.col(j) = (-radius_ / nj) * g.col(j);
      }
    }
    return Point::of_matrix(m);
  }

  Point project(const Point& p) const override {
    check_shape(p, "project");
    Matrix m = p.as_matrix();
    for (Index j = 0; j < cols_; ++j) {
      const double nj = m.col(j).norm();
      if (nj > radius_) m.col(j) *= radius_ / nj;
    }
    return Point::of_matrix(m);
  }

  bool contains_impl(const Point& p, double tol) const override {
    check_shape(p, "contains");
    const auto m = p.as_matrix();
    for (Index j = 0; j < cols_; ++j) {
      if (m.col(j).norm() > radius_ + tol) return false;
    }
    return true;
  }

  Point sample(Rng& rng) const override {
    Matrix m(rows_, cols_);
    for (Index j = 0; j < cols_; ++j) {
      Vector dir = rng.normal_vector(rows_);
      const double nd = dir.norm();
      const double scale =
          radius_ * std::pow(rng.uniform(), 1.0 / static_cast<double>(rows_));
      m.col(j) = nd == 0.0 ? Vector::Zero(rows_) : Vector((scale / nd) * dir);
    }
    return Point::of_matrix(m);
  }

  Point canonical_point() const override {
    return Point::of_matrix(Matrix::Zero(rows_, cols_));
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "ColumnBallProduct(" << rows_ << "x" << cols_ << ", r=" << radius_
       << ")";
    return os.str();
  }

 private:
  Index rows_, cols_;
  double radius_;
  Shape shape_;
};

/// Cartesian product of feasible sets over tuple-shaped points. All oracles
/// act block-wise; the diameter is the root of the summed squared block
/// diameters. Not strongly convex unless it has exactly one block.
class Product : public FeasibleSet {
 public:
  explicit Product(std::vector<SetPtr> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw ConfigError("Product: needs at least one block");
    std::vector<Shape> shapes;
    shapes.reserve(blocks_.size());
    for (const SetPtr& b : blocks_) shapes.push_back(b->shape());
    shape_ = std::make_unique<Shape>(Shape::tuple(std::move(shapes)));
  }

  const Shape& shape() const override { return *shape_; }

  double diameter() const override {
    double sq = 0.0;
    for (const SetPtr& b : blocks_) sq += b->diameter() * b->diameter();
    return std::sqrt(sq);
  }

  double strong_convexity_alpha() const override {
    return blocks_.size() == 1 ? blocks_[0]->strong_convexity_alpha() : 0.0;
  }

  Index block_count() const { return static_cast<Index>(blocks_.size()); }
  const FeasibleSet& block_set(Index i) const {
    return *blocks_.at(static_cast<size_t>(i));
  }

  Point lmo(const Point& d) const override {
    check_shape(d, "lmo");
    return map_blocks(d, [](const FeasibleSet& s, const Point& b) {
      return s.lmo(b);
    });
  }

  Point project(const Point& p) const override {
    check_shape(p, "project");
    return map_blocks(p, [](const FeasibleSet& s, const Point& b) {
      return s.project(b);
    });
  }

  bool contains_impl(const Point& p, double tol) const override {
    check_shape(p, "contains");
    for (size_t i = 0; i < blocks_.size(); ++i) {
      if (!blocks_[i]->contains(p.block(static_cast<Index>(i)), tol)) {
        return false;
      }
    }
    return true;
  }

  Point sample(Rng& rng) const override {
    std::vector<Point> parts;
    parts.reserve(blocks_.size());
    for (const SetPtr& b : blocks_) parts.push_back(b->sample(rng));
    return Point::concat(parts);
  }

  Point canonical_point() const override {
    std::vector<Point> parts;
    parts.reserve(blocks_.size());
    for (const SetPtr& b : blocks_) parts.push_back(b->canonical_point());
    return Point::concat(parts);
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "Product(";
    for (size_t i = 0; i < blocks_.size(); ++i) {
      if (i) os << " x ";
      os << blocks_[i]->describe();
    }
    os << ")";
    return os.str();
  }

 private:
  template <typename F>
  Point map_blocks(const Point& p, F&& f) const {
    std::vector<Point> parts;
    parts.reserve(blocks_.size());
    for (size_t i = 0; i < blocks_.size(); ++i) {
      parts.push_back(f(*blocks_[i], p.block(static_cast<Index>(i))));
    }
    return Point::concat(parts);
  }

  std::vector<SetPtr> blocks_;
  std::unique_ptr<Shape> shape_;
};

}  // namespace mmx
