#include "robustmean/linalg.hpp"

#include <cmath>

namespace robustmean {

namespace {

void check_shapes(const PointSet& points, Index wn, const Vector& center,
                  const Vector* v) {
  if (wn != points.size())
    throw ContractViolation("weight length must equal the number of points");
  if (center.size() != points.dim())
    throw ContractViolation("center dimension must equal the point dimension");
  if (v != nullptr && v->size() != points.dim())
    throw ContractViolation("vector dimension must equal the point dimension");
  if (!center.allFinite() || (v != nullptr && !v->allFinite()))
    throw ContractViolation("inputs must be finite");
}

// out = sum_i s_i y_i - center * sum_i s_i with s_i = w_i <y_i - center, v>,
// assembled from two matrix-vector products.
Vector apply_impl(const Matrix& data, const Vector& w, const Vector& center,
                  const Vector& v) {
  Vector t = data * v;
  t.array() -= center.dot(v);
  const Vector s = w.cwiseProduct(t);
  return data.transpose() * s - center * s.sum();
}

}  // namespace

Vector apply_weighted_cov(const PointSet& points, const WeightVector& w,
                          const Vector& center, const Vector& v) {
  check_shapes(points, w.size(), center, &v);
  return apply_impl(points.data(), w.values(), center, v);
}

SpectralResult lambda_max(const PointSet& points, const WeightVector& w,
                          const Vector& center, double tol, int max_iters,
                          const Vector* warm_start) {
  check_shapes(points, w.size(), center, warm_start);
  if (!(tol > 0.0)) throw ParameterError("tol must be positive");
  if (max_iters < 1) throw ParameterError("max_iters must be at least 1");

  const Matrix& data = points.data();
  const Vector& wv = w.values();
  const Index d = points.dim();

  // Trace of the operator: sum_i w_i ||y_i - center||^2. Zero trace means the
  // zero operator; it also sets the scale for null-space detection.
  Vector t0 = data * center;
  const double cc = center.squaredNorm();
  double trace = 0.0;
  for (Index i = 0; i < points.size(); ++i)
    trace += wv[i] * (data.row(i).squaredNorm() - 2.0 * t0[i] + cc);
  trace = std::max(trace, 0.0);

  SpectralResult res;
  res.direction = Vector::Zero(d);
  res.direction[0] = 1.0;
  if (trace == 0.0) {
    res.converged = true;
    return res;
  }

  Vector v;
  if (warm_start != nullptr && warm_start->norm() > 0.0) {
    v = warm_start->normalized();
  } else {
    v = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    Vector z0 = apply_impl(data, wv, center, v);
    if (z0.norm() < 1e-14 * trace) {
      v = Vector::LinSpaced(d, 1.0, static_cast<double>(d)).normalized();
    }
  }

  Vector z = apply_impl(data, wv, center, v);
  double lambda_prev = std::max(v.dot(z), 0.0);
  res.iterations = 1;
  for (int k = 1; k < max_iters; ++k) {
    const double zn = z.norm();
    if (zn == 0.0) {
      // v is annihilated: Rayleigh quotient 0 is exact for this direction.
      res.value = 0.0;
      res.direction = v;
      res.converged = true;
      return res;
    }
    v = z / zn;
    z = apply_impl(data, wv, center, v);
    const double lambda = std::max(v.dot(z), 0.0);
    ++res.iterations;
    if (std::abs(lambda - lambda_prev) <= tol * std::max(lambda, lambda_prev)) {
      res.value = lambda;
      res.direction = v;
      res.converged = true;
      return res;
    }
    lambda_prev = lambda;
  }
  res.value = lambda_prev;
  res.direction = v;
  res.converged = false;
  return res;
}

double feasibility_residual(const PointSet& points, const OutlierIndicator& h,
                            const Vector& center, double bound, double tol,
                            int max_iters) {
  if (!(bound > 0.0)) throw ParameterError("bound must be positive");
  const SpectralResult top =
      lambda_max(points, WeightVector::complement(h), center, tol, max_iters);
  return top.value / bound - 1.0;
}

}  // namespace robustmean
