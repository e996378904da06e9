#pragma once

// Shared toy graphs, random generators and independent oracles for tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fanet/graph.hpp"
#include "fanet/ingest.hpp"

namespace fanet::test {

inline WeightedDigraph make_graph(std::vector<std::string> words, std::vector<Edge> edges) {
  return WeightedDigraph::from_edges(std::move(words), edges);
}

inline NodeId id(const WeightedDigraph& g, const std::string& w) { return *g.find(w); }

// T1: a->b 0.5, a->r 0.5, b->r 1.0, c->a 1.0
inline WeightedDigraph t1() {
  return make_graph({"a", "b", "r", "c"}, {{0, 1, 0.5}, {0, 2, 0.5}, {1, 2, 1.0}, {3, 0, 1.0}});
}

inline const char* t1_tsv = "a\tb\t0.5\na\tr\t0.5\nb\tr\t1.0\nc\ta\t1.0\n";

inline RatProblem problem(const WeightedDigraph& g, const std::string& s1, const std::string& s2,
                          const std::string& s3, const std::string& r, double hardness = 0.5) {
  RatProblem p;
  p.stimuli = {id(g, s1), id(g, s2), id(g, s3)};
  p.response = id(g, r);
  p.hardness = hardness;
  p.category = categorize(hardness);
  p.labels = {s1, s2, s3, r};
  return p;
}

inline RatDataset dataset(std::vector<RatProblem> problems) {
  RatDataset d;
  d.problems = std::move(problems);
  return d;
}

inline std::vector<std::string> labels(std::size_t n) {
  std::vector<std::string> w;
  for (std::size_t i = 0; i < n; ++i) w.push_back("w" + std::to_string(i));
  return w;
}

/// Random digraph with edge probability p and weights in (0,1]. When
/// max_row_sum < n, rows are rescaled so no row sum exceeds it.
inline WeightedDigraph random_graph(std::mt19937_64& rng, std::size_t n, double p, double max_row_sum = 1e9) {
  std::bernoulli_distribution has(p);
  std::uniform_real_distribution<double> w(0.01, 1.0);
  std::vector<Edge> edges;
  for (NodeId s = 0; s < static_cast<NodeId>(n); ++s) {
    std::vector<Edge> row;
    double sum = 0;
    for (NodeId t = 0; t < static_cast<NodeId>(n); ++t) {
      if (s == t || !has(rng)) continue;
      row.push_back({s, t, w(rng)});
      sum += row.back().weight;
    }
    if (sum > max_row_sum)
      for (auto& e : row) e.weight *= max_row_sum / sum;
    edges.insert(edges.end(), row.begin(), row.end());
  }
  return make_graph(labels(n), edges);
}

inline Eigen::MatrixXd dense(const WeightedDigraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) m(e.source, e.target) = e.weight;
  return m;
}

/// Damped walk sum  sum_{k=1..L} lambda^{k-1} [(W^-)^k]_{s,r} by explicit
/// dense matrix powers, with L picked from the row-sum bound so the
/// truncated tail is below 1e-10.
inline double path_sum_oracle(const WeightedDigraph& g, NodeId s, NodeId r, double lambda) {
  Eigen::MatrixXd w = dense(g);
  w.row(r).setZero();
  const double rho = w.rowwise().sum().maxCoeff();
  const double decay = lambda * rho;
  std::size_t length = 1;
  if (rho > 0 && decay > 0) {
    if (decay >= 1) throw std::logic_error("oracle needs lambda * row sum < 1");
    length = static_cast<std::size_t>(std::ceil(std::log(1e-10 * (1 - decay) / std::max(rho, 1e-300)) / std::log(decay))) + 1;
  }
  Eigen::MatrixXd power = w;
  double sum = power(s, r);
  double damping = 1;
  for (std::size_t k = 2; k <= length; ++k) {
    power = power * w;
    damping *= lambda;
    sum += damping * power(s, r);
  }
  return sum;
}

/// Explicit depth-first walk enumeration; only for acyclic graphs.
inline double enumerate_walks(const WeightedDigraph& g, NodeId v, NodeId r, double lambda, double product,
                              std::size_t depth) {
  double total = 0;
  const auto out = g.out_edges(v);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double weight = product * out.weights[k] * (depth > 0 ? lambda : 1.0);
    if (out.nodes[k] == r) total += weight;
    else total += enumerate_walks(g, out.nodes[k], r, lambda, weight, depth + 1);
  }
  return total;
}

/// Mutual-reachability partition from a Floyd-Warshall closure.
inline std::vector<std::vector<NodeId>> scc_oracle(const WeightedDigraph& g) {
  const auto n = static_cast<NodeId>(g.node_count());
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (NodeId v = 0; v < n; ++v) reach[v][v] = 1;
  for (const auto& e : g.edges()) reach[e.source][e.target] = 1;
  for (NodeId k = 0; k < n; ++k)
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
  std::vector<std::vector<NodeId>> parts;
  std::vector<char> placed(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    if (placed[i]) continue;
    std::vector<NodeId> part;
    for (NodeId j = i; j < n; ++j)
      if (reach[i][j] && reach[j][i]) { part.push_back(j); placed[j] = 1; }
    parts.push_back(part);
  }
  return parts;
}

}  // namespace fanet::test
