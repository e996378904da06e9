#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fanet/error.hpp"
#include "fanet/first_passage.hpp"
#include "fanet/graph.hpp"
#include "fanet/ingest.hpp"

namespace fanet {

template <class Scalar>
struct LinearFit {
  Scalar slope;
  Scalar intercept;
};

namespace detail {

template <class DX, class DY>
void check_pair(const Eigen::DenseBase<DX>& x, const Eigen::DenseBase<DY>& y) {
  if (x.size() != y.size()) throw AlignmentError("series lengths differ");
  if (x.size() < 2) throw ValidationError("at least two samples required");
}

}  // namespace detail

/// Product-moment correlation. Throws ValidationError when either series is
/// constant. Symmetric in its arguments bit for bit.
template <class DX, class DY>
typename DX::Scalar pearson(const Eigen::DenseBase<DX>& x, const Eigen::DenseBase<DY>& y) {
  using Scalar = typename DX::Scalar;
  detail::check_pair(x, y);
  const auto dx = (x.derived().array() - x.derived().mean()).eval();
  const auto dy = (y.derived().array() - y.derived().mean()).eval();
  const Scalar sxx = dx.square().sum();
  const Scalar syy = dy.square().sum();
  if (sxx == Scalar(0) || syy == Scalar(0)) throw ValidationError("correlation undefined for a constant series");
  const Scalar r = (dx * dy).sum() / std::sqrt(sxx * syy);
  return std::clamp(r, Scalar(-1), Scalar(1));
}

/// Ordinary least squares of y on x.
template <class DX, class DY>
LinearFit<typename DX::Scalar> linear_fit(const Eigen::DenseBase<DX>& x, const Eigen::DenseBase<DY>& y) {
  using Scalar = typename DX::Scalar;
  detail::check_pair(x, y);
  const Scalar mx = x.derived().mean();
  const Scalar my = y.derived().mean();
  const auto dx = (x.derived().array() - mx).eval();
  const Scalar sxx = dx.square().sum();
  if (sxx == Scalar(0)) throw ValidationError("linear fit undefined for a constant regressor");
  const Scalar slope = (dx * (y.derived().array() - my)).sum() / sxx;
  return {slope, my - slope * mx};
}

inline Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  return pearson(as_vector(x), as_vector(y));
}

inline LinearFit<double> linear_fit(std::span<const double> x, std::span<const double> y) {
  return linear_fit(as_vector(x), as_vector(y));
}

/// Slope of log(count) against log(degree) over histogram entries with
/// degree >= min_degree. The power-law exponent is the negated slope.
double loglog_tail_slope(std::span<const DegreeCount> histogram, std::size_t min_degree);

struct CorrelationReport {
  std::string predictor;
  std::vector<std::size_t> alpha;
  std::vector<double> x;  // predictor
  std::vector<double> y;  // hardness
  double pearson_rho = 0;
  LinearFit<double> fit{0, 0};
  std::size_t n = 0;
  /// Hardness is always the dependent variable.
  static constexpr const char* regression = "hardness ~ predictor";
};

CorrelationReport correlate(std::string predictor, std::vector<std::size_t> alpha, std::vector<double> x,
                            std::vector<double> y);

/// Reports for p0, every lambda in the predictors, inverse weight, and
/// (when given) simulator accuracy, each paired with hardness. Problems
/// whose lambda solve failed are left out of that lambda's report.
std::vector<CorrelationReport> correlate_predictors(std::span<const PredictorResult> predictors,
                                                    const RatDataset& data,
                                                    std::span<const double> simulator_accuracy = {});

/// `alpha,predictor,value,hardness` rows for every report.
void write_scatter_csv(std::ostream& out, std::span<const CorrelationReport> reports);

/// Shortest decimal that reads back to the same double; NaN gives "".
std::string format_real(double v);

/// Column suffix for a lambda: 0.5 -> "05", 1 -> "1", 0.25 -> "025".
std::string lambda_tag(double lambda);

}  // namespace fanet
