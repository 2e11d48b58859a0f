#include "robustmean/datagen.hpp"

#include <algorithm>
#include <cmath>

#include "robustmean/linalg.hpp"

namespace robustmean {

namespace {

void check_eps(double eps) {
  if (!(eps >= 0.0) || !(eps < 0.5))
    throw ParameterError("eps must lie in [0, 1/2)");
}

// Uniform subset of size m from {0, ..., n-1} via partial Fisher-Yates,
// returned sorted.
std::vector<Index> sample_indices(std::mt19937_64& rng, Index n, Index m) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < m; ++i) {
    const Index j =
        i + static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> chosen(idx.begin(), idx.begin() + m);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

LabeledSample assemble(Matrix data, const std::vector<Index>& corrupted,
                       Vector true_mean) {
  const Index n = data.rows();
  std::vector<bool> mask(static_cast<std::size_t>(n), true);
  for (Index i : corrupted) mask[static_cast<std::size_t>(i)] = false;

  Vector oracle = Vector::Zero(data.cols());
  Index kept = 0;
  for (Index i = 0; i < n; ++i) {
    if (mask[static_cast<std::size_t>(i)]) {
      oracle += data.row(i).transpose();
      ++kept;
    }
  }
  if (kept > 0) oracle /= static_cast<double>(kept);

  LabeledSample sample{PointSet(std::move(data)), std::move(mask),
                       std::move(oracle), std::move(true_mean),
                       static_cast<double>(corrupted.size()) / static_cast<double>(n)};
  return sample;
}

}  // namespace

Index LabeledSample::inlier_count() const {
  return static_cast<Index>(
      std::count(inlier_mask.begin(), inlier_mask.end(), true));
}

LabeledSample gen_gaussian_two_cluster(Index d, Index n, double eps, RngSeed seed) {
  check_eps(eps);
  if (d < 2) throw ParameterError("two-cluster setting requires d >= 2");
  if (n < 1) throw ParameterError("n must be positive");

  auto rng = seed.stream();
  Matrix data(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) data(i, j) = standard_normal(rng);

  const Index m = static_cast<Index>(std::llround(eps * static_cast<double>(n)));
  const auto corrupted = sample_indices(rng, n, m);

  const double a = std::sqrt(static_cast<double>(d) / 2.0);
  const Index first_cluster = (m + 1) / 2;  // ceil(m/2)
  for (Index k = 0; k < m; ++k) {
    const Index row = corrupted[static_cast<std::size_t>(k)];
    data.row(row).setZero();
    data(row, 0) = a;
    data(row, 1) = (k < first_cluster) ? a : -a;
  }
  return assemble(std::move(data), corrupted, Vector::Zero(d));
}

LabeledSample gen_pareto_constant(Index d, Index n, double eps, double shape,
                                  double scale, RngSeed seed) {
  check_eps(eps);
  if (!(shape > 2.0))
    throw ParameterError("shape must exceed 2 (finite variance required)");
  if (!(scale > 0.0)) throw ParameterError("scale must be positive");
  if (n < 1 || d < 1) throw ParameterError("n and d must be positive");

  auto rng = seed.stream();
  Matrix data(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) data(i, j) = pareto(rng, scale, shape);

  double g = 0.0;
  for (Index i = 0; i < n; ++i) g += data.row(i).norm();
  g /= static_cast<double>(n);

  const Index m = static_cast<Index>(std::llround(eps * static_cast<double>(n)));
  const auto corrupted = sample_indices(rng, n, m);
  const double v = 2.0 + std::sqrt(g / static_cast<double>(d));
  for (Index row : corrupted) data.row(row).setConstant(v);

  const double mean_coord = scale * shape / (shape - 1.0);
  return assemble(std::move(data), corrupted, Vector::Constant(d, mean_coord));
}

LabeledSample corrupt(const PointSet& points, const std::vector<Index>& indices,
                      const Matrix& replacements) {
  const Index n = points.size();
  if (static_cast<Index>(indices.size()) != replacements.rows())
    throw ContractViolation("index count must match replacement row count");
  if (replacements.rows() > 0 &&
      (replacements.cols() != points.dim() || !replacements.allFinite()))
    throw ContractViolation("replacement rows must be finite with matching dimension");
  if (2 * static_cast<Index>(indices.size()) >= n)
    throw ContractViolation("fewer than half the rows may be corrupted");
  std::vector<Index> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ContractViolation("corruption indices must be distinct");
  for (Index i : sorted)
    if (i < 0 || i >= n) throw ContractViolation("corruption index out of range");

  Matrix data = points.data();
  Vector pre_mean = data.colwise().mean().transpose();
  for (std::size_t k = 0; k < indices.size(); ++k)
    data.row(indices[k]) = replacements.row(static_cast<Index>(k));
  return assemble(std::move(data), sorted, std::move(pre_mean));
}

double empirical_sigma(const LabeledSample& sample, double tol, int max_iters) {
  const Index n = sample.points.size();
  Vector w(n);
  for (Index i = 0; i < n; ++i)
    w[i] = sample.inlier_mask[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
  const Index kept = sample.inlier_count();
  if (kept == 0) throw ContractViolation("sample has no inliers");
  const SpectralResult top = lambda_max(sample.points, WeightVector(w),
                                        sample.oracle_mean, tol, max_iters);
  return std::sqrt(top.value / static_cast<double>(kept));
}

double pareto_sigma(double shape, double scale) {
  if (!(shape > 2.0)) throw ParameterError("shape must exceed 2");
  return scale * std::sqrt(shape / ((shape - 1.0) * (shape - 1.0) * (shape - 2.0)));
}

}  // namespace robustmean
