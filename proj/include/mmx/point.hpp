/**
 * @file point.hpp
 * @brief Flat coordinate vectors with shape descriptors, plus compensated sums.
 *
 * A Point stores its coordinates as one contiguous vector together with a
 * Shape describing how those coordinates are interpreted: a plain vector, a
 * matrix (flattened column-major, matching Eigen's default storage), or a
 * tuple of blocks (concatenated in order). Points are value types; all
 * operations return new Points and never mutate their inputs.
 */
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mmx/errors.hpp"

namespace mmx {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Describes how a flat coordinate vector is interpreted.
class Shape {
 public:
  enum class Kind { kVector, kMatrix, kTuple };

  static Shape vector(Index n) { return Shape(Kind::kVector, n, 1, {}); }

  static Shape matrix(Index rows, Index cols) {
    return Shape(Kind::kMatrix, rows, cols, {});
  }

  static Shape tuple(std::vector<Shape> blocks) {
    return Shape(Kind::kTuple, 0, 0, std::move(blocks));
  }

  Kind kind() const { return kind_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const std::vector<Shape>& blocks() const { return blocks_; }

  /// Total number of flat coordinates.
  Index size() const {
    switch (kind_) {
      case Kind::kVector:
        return rows_;
      case Kind::kMatrix:
        return rows_ * cols_;
      case Kind::kTuple: {
        Index total = 0;
        for (const Shape& b : blocks_) total += b.size();
        return total;
      }
    }
    return 0;
  }

  /// Flat offset of tuple block `i`.
  Index block_offset(Index i) const {
    require_tuple();
    Index off = 0;
    for (Index k = 0; k < i; ++k) off += blocks_[static_cast<size_t>(k)].size();
    return off;
  }

  Index block_count() const {
    require_tuple();
    return static_cast<Index>(blocks_.size());
  }

  bool operator==(const Shape& o) const {
    if (kind_ != o.kind_) return false;
    if (kind_ == Kind::kTuple) return blocks_ == o.blocks_;
    return rows_ == o.rows_ && cols_ == o.cols_;
  }
  bool operator!=(const Shape& o) const { return !(*this == o); }

  std::string describe() const {
    std::ostringstream os;
    switch (kind_) {
      case Kind::kVector:
        os << "vector(" << rows_ << ")";
        break;
      case Kind::kMatrix:
        os << "matrix(" << rows_ << "x" << cols_ << ")";
        break;
      case Kind::kTuple:
        os << "tuple(";
        for (size_t i = 0; i < blocks_.size(); ++i) {
          if (i) os << ", ";
          os << blocks_[i].describe();
        }
        os << ")";
        break;
    }
    return os.str();
  }

 private:
  Shape(Kind kind, Index rows, Index cols, std::vector<Shape> blocks)
      : kind_(kind), rows_(rows), cols_(cols), blocks_(std::move(blocks)) {
    if (kind_ != Kind::kTuple && (rows_ < 0 || cols_ < 0)) {
      throw ConfigError("Shape: dimensions must be nonnegative");
    }
  }

  void require_tuple() const {
    if (kind_ != Kind::kTuple) {
      throw ConfigError("Shape: block access on non-tuple shape " + describe());
    }
  }

  Kind kind_;
  Index rows_;
  Index cols_;
  std::vector<Shape> blocks_;
};

/// A shaped coordinate vector. Immutable by convention: no mutating API
/// beyond construction/assignment; arithmetic returns new Points.
class Point {
 public:
  Point() : data_(0), shape_(Shape::vector(0)) {}

  Point(Vector data, Shape shape)
      : data_(std::move(data)), shape_(std::move(shape)) {
    if (data_.size() != shape_.size()) {
      throw ConfigError("Point: " + std::to_string(data_.size()) +
                        " coordinates do not match shape " + shape_.describe());
    }
  }

  /// Vector-shaped point from raw coordinates.
  static Point of_vector(Vector v) {
    const Index n = v.size();
    return Point(std::move(v), Shape::vector(n));
  }

  static Point of_vector(std::initializer_list<double> coords) {
    Vector v(static_cast<Index>(coords.size()));
    Index i = 0;
    for (double c : coords) v[i++] = c;
    return of_vector(std::move(v));
  }

  /// Matrix-shaped point; coordinates are the column-major flattening.
  static Point of_matrix(const Matrix& m) {
    Vector v = Eigen::Map<const Vector>(m.data(), m.size());
    return Point(std::move(v), Shape::matrix(m.rows(), m.cols()));
  }

  /// Scalar convenience (vector of length 1).
  static Point of_scalar(double s) {
    Vector v(1);
    v[0] = s;
    return of_vector(std::move(v));
  }

  static Point zeros(const Shape& shape) {
    return Point(Vector::Zero(shape.size()), shape);
  }

  /// Tuple point from blocks (shape is the tuple of block shapes).
  static Point concat(const std::vector<Point>& blocks) {
    std::vector<Shape> shapes;
    Index total = 0;
    shapes.reserve(blocks.size());
    for (const Point& b : blocks) {
      shapes.push_back(b.shape());
      total += b.size();
    }
    Vector v(total);
    Index off = 0;
    for (const Point& b : blocks) {
      v.segment(off, b.size()) = b.flat();
      off += b.size();
    }
    return Point(std::move(v), Shape::tuple(std::move(shapes)));
  }

  const Vector& flat() const { return data_; }
  const Shape& shape() const { return shape_; }
  Index size() const { return data_.size(); }

  double scalar() const {
    if (data_.size() != 1) {
      throw ConfigError("Point: scalar() on " + shape_.describe());
    }
    return data_[0];
  }

  /// Matrix view of a matrix-shaped point (column-major, zero copy).
  Eigen::Map<const Matrix> as_matrix() const {
    if (shape_.kind() != Shape::Kind::kMatrix) {
      throw ConfigError("Point: as_matrix() on " + shape_.describe());
    }
    return Eigen::Map<const Matrix>(data_.data(), shape_.rows(), shape_.cols());
  }

  /// Copy of tuple block `i` as its own Point.
  Point block(Index i) const {
    const Shape& bs = shape_.blocks().at(static_cast<size_t>(i));
    const Index off = shape_.block_offset(i);
    return Point(data_.segment(off, bs.size()), bs);
  }

  /// Matrix view of matrix-shaped tuple block `i` (zero copy).
  Eigen::Map<const Matrix> block_as_matrix(Index i) const {
    const Shape& bs = shape_.blocks().at(static_cast<size_t>(i));
    if (bs.kind() != Shape::Kind::kMatrix) {
      throw ConfigError("Point: block_as_matrix() on block shaped " +
                        bs.describe());
    }
    const Index off = shape_.block_offset(i);
    return Eigen::Map<const Matrix>(data_.data() + off, bs.rows(), bs.cols());
  }

  double dot(const Point& o) const {
    check_same_shape(o, "dot");
    return data_.dot(o.data_);
  }

  double norm() const { return data_.norm(); }
  double squared_norm() const { return data_.squaredNorm(); }

  Point operator+(const Point& o) const {
    check_same_shape(o, "operator+");
    return Point(data_ + o.data_, shape_);
  }

  Point operator-(const Point& o) const {
    check_same_shape(o, "operator-");
    return Point(data_ - o.data_, shape_);
  }

  Point scaled(double s) const { return Point(s * data_, shape_); }

  /// this + step * (other - this); the workhorse of every update rule.
  Point blend_toward(const Point& other, double step) const {
    check_same_shape(other, "blend_toward");
    return Point(data_ + step * (other.data_ - data_), shape_);
  }

 private:
  void check_same_shape(const Point& o, const char* op) const {
    if (shape_ != o.shape_) {
      throw ConfigError(std::string("Point: ") + op + " on mismatched shapes " +
                        shape_.describe() + " vs " + o.shape_.describe());
    }
  }

  Vector data_;
  Shape shape_;
};

inline Point operator*(double s, const Point& p) { return p.scaled(s); }

/// Compensated (Kahan) scalar accumulator for long-running sums.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }
  void reset() { sum_ = carry_ = 0.0; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Compensated coordinate-wise accumulator for iterate averages.
class KahanVector {
 public:
  explicit KahanVector(Index n)
      : sum_(Vector::Zero(n)), carry_(Vector::Zero(n)) {}

  void add(const Vector& v) {
    const Vector y = v - carry_;
    const Vector t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }

  const Vector& value() const { return sum_; }

 private:
  Vector sum_;
  Vector carry_;
};

}  // namespace mmx
