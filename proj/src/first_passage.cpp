#include "fanet/first_passage.hpp"

#include <cmath>

#include "fanet/error.hpp"
#include "fanet/parallel.hpp"

namespace fanet {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must lie in [0,1]");
}

}  // namespace

Eigen::VectorXd first_passage_to(const WeightedDigraph& g, NodeId r, double lambda,
                                 const FixedPointOptions& options) {
  check_lambda(lambda);
  if (!g.valid(r)) throw RangeError("response id out of range");
  const auto n = static_cast<Eigen::Index>(g.node_count());

  // b = W^- e_r is column r of W; row r of W^- is empty, so b_r = 0.
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  const auto in = g.in_edges(r);
  for (std::size_t k = 0; k < in.size(); ++k) b[in.nodes[k]] = in.weights[k];
  b[r] = 0.0;

  if (lambda == 0.0) return b;

  const auto& w = g.weights();
  Eigen::VectorXd z = b;
  Eigen::VectorXd next(n);
  double residual = 0;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    next.noalias() = w * z;
    next[r] = 0.0;
    next = b + lambda * next;
    residual = (next - z).lpNorm<Eigen::Infinity>();
    z.swap(next);
    if (residual <= options.tolerance) return z;
    if (!std::isfinite(residual)) break;
  }
  throw NonConvergenceError(residual, options.max_iterations);
}

double first_passage(const WeightedDigraph& g, NodeId s, NodeId r, double lambda, const FixedPointOptions& options) {
  if (!g.valid(s)) throw RangeError("source id out of range");
  if (s == r) throw ValidationError("first_passage requires s != r");
  return first_passage_to(g, r, lambda, options)[s];
}

double p0(const WeightedDigraph& g, const RatProblem& problem) {
  double sum = 0;
  for (NodeId s : problem.stimuli) sum += g.weight(s, problem.response);
  return sum / 3.0;
}

double p_lambda(const WeightedDigraph& g, const RatProblem& problem, double lambda, const FixedPointOptions& options) {
  const auto z = first_passage_to(g, problem.response, lambda, options);
  double sum = 0;
  for (NodeId s : problem.stimuli) sum += z[s];
  return sum / 3.0;
}

double inverse_weight(const WeightedDigraph& g, const RatProblem& problem) {
  double sum = 0;
  for (NodeId s : problem.stimuli) sum += g.weight(problem.response, s);
  return sum / 3.0;
}

std::optional<double> PredictorResult::at(double lambda) const {
  for (const auto& v : p_lambda)
    if (v.lambda == lambda) return v.value;
  return std::nullopt;
}

std::vector<PredictorResult> compute_predictors(const WeightedDigraph& g, const RatDataset& data,
                                                std::span<const double> lambdas, unsigned threads,
                                                const FixedPointOptions& options) {
  for (double l : lambdas) check_lambda(l);
  std::vector<PredictorResult> results(data.problems.size());
  parallel_for(data.problems.size(), threads, [&](std::size_t i) {
    const auto& p = data.problems[i];
    auto& out = results[i];
    out.alpha = i + 1;
    out.p0 = p0(g, p);
    out.inverse_weight = inverse_weight(g, p);
    for (double l : lambdas) {
      LambdaValue v{l, std::nullopt, 0};
      try {
        v.value = p_lambda(g, p, l, options);
      } catch (const NonConvergenceError& e) {
        v.residual = e.residual();
      }
      out.p_lambda.push_back(v);
    }
  });
  return results;
}

}  // namespace fanet
