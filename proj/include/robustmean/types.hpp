#pragma once

#include <Eigen/Core>

#include "robustmean/errors.hpp"

namespace robustmean {

using Index = Eigen::Index;
// Rows are datapoints; row-major keeps per-point access contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Length-n vector in [0,1]^n flagging each point's outlier mass
/// (h_i near 1 means point i is treated as an outlier).
using OutlierIndicator = Vector;

/// n x d set of observation vectors. All entries finite, n >= 1, d >= 1.
class PointSet {
public:
  explicit PointSet(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 1 || data_.cols() < 1)
      throw ContractViolation("PointSet requires n >= 1 and d >= 1");
    if (!data_.allFinite())
      throw ContractViolation("PointSet entries must be finite");
  }

  Index size() const { return data_.rows(); }
  Index dim() const { return data_.cols(); }
  const Matrix& data() const { return data_; }

private:
  Matrix data_;
};

/// Per-point weights w with 0 <= w_i <= 1 (typically w = 1 - h).
class WeightVector {
public:
  explicit WeightVector(Vector w) : w_(std::move(w)) {
    if ((w_.array() < 0.0).any() || (w_.array() > 1.0).any() || !w_.allFinite())
      throw ContractViolation("weights must lie in [0,1]");
  }

  /// w = 1 - h for an outlier indicator h in [0,1]^n.
  static WeightVector complement(const OutlierIndicator& h) {
    return WeightVector((1.0 - h.array()).matrix());
  }

  const Vector& values() const { return w_; }
  Index size() const { return w_.size(); }

private:
  Vector w_;
};

}  // namespace robustmean
