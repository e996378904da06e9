#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fanet/graph.hpp"
#include "fanet/ingest.hpp"

namespace fanet {

struct FixedPointOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 100000;
};

/// Iterates z <- W^- e_r + lambda * W^- z until successive iterates agree to
/// `tolerance` in the max norm, where W^- is W with every out-edge of `r`
/// removed. Entry s of the result is pi_{s,r}(lambda), the damped sum over
/// all walks s -> ... -> r that touch r only at the end; entry r is 0.
/// Throws NonConvergenceError on hitting the iteration cap.
Eigen::VectorXd first_passage_to(const WeightedDigraph& g, NodeId r, double lambda,
                                 const FixedPointOptions& options = {});

/// pi_{s,r}(lambda) for a single source. Requires s != r and 0 <= lambda <= 1.
double first_passage(const WeightedDigraph& g, NodeId s, NodeId r, double lambda,
                     const FixedPointOptions& options = {});

/// Mean direct stimulus -> response weight.
double p0(const WeightedDigraph& g, const RatProblem& problem);

/// Mean of first_passage over the three stimuli.
double p_lambda(const WeightedDigraph& g, const RatProblem& problem, double lambda,
                const FixedPointOptions& options = {});

/// Mean response -> stimulus weight.
double inverse_weight(const WeightedDigraph& g, const RatProblem& problem);

struct LambdaValue {
  double lambda;
  /// Empty when the solve did not converge.
  std::optional<double> value;
  double residual = 0;
};

struct PredictorResult {
  std::size_t alpha;  // 1-based position in the dataset
  double p0;
  std::vector<LambdaValue> p_lambda;  // in requested lambda order
  double inverse_weight;

  std::optional<double> at(double lambda) const;
};

/// Evaluates every predictor for each problem. A non-converged lambda is
/// recorded as an empty value rather than aborting the batch.
std::vector<PredictorResult> compute_predictors(const WeightedDigraph& g, const RatDataset& data,
                                                std::span<const double> lambdas, unsigned threads = 0,
                                                const FixedPointOptions& options = {});

}  // namespace fanet
