#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>

namespace fanet {

using NodeId = std::int32_t;
using Weight = double;

/// Row-major sparse weight matrix: row i holds the out-edges of node i.
using SparseWeights = Eigen::SparseMatrix<Weight, Eigen::RowMajor, NodeId>;

struct Edge {
  NodeId source;
  NodeId target;
  Weight weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Contiguous view of one adjacency row, neighbours in ascending id order.
struct Neighbors {
  std::span<const NodeId> nodes;
  std::span<const Weight> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  bool empty() const noexcept { return nodes.empty(); }
};

/// Immutable weighted directed word network.
///
/// Out-edges are stored as a CSR matrix `W` with `W(i,j) = w_ij`; in-edges
/// are the CSR form of `W^T`, so both directions iterate contiguously. Every
/// weight lies in (0, 1] and each ordered pair carries at most one edge.
class WeightedDigraph {
 public:
  WeightedDigraph() = default;

  /// Builds the graph, rejecting out-of-range ids, weights outside (0,1],
  /// and repeated ordered pairs with ValidationError.
  static WeightedDigraph from_edges(std::vector<std::string> words, std::span<const Edge> edges);

  std::size_t node_count() const noexcept { return words_.size(); }
  std::size_t edge_count() const noexcept { return static_cast<std::size_t>(out_.nonZeros()); }

  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& word(NodeId v) const;
  std::optional<NodeId> find(std::string_view word) const;

  Neighbors out_edges(NodeId v) const;
  Neighbors in_edges(NodeId v) const;

  /// w_{source,target}, or 0 when the edge is absent.
  Weight weight(NodeId source, NodeId target) const;

  const SparseWeights& weights() const noexcept { return out_; }
  const SparseWeights& transposed_weights() const noexcept { return in_; }

  bool valid(NodeId v) const noexcept { return v >= 0 && static_cast<std::size_t>(v) < words_.size(); }

  /// All edges in (source, target) order.
  std::vector<Edge> edges() const;

 private:
  void check(NodeId v) const;

  std::vector<std::string> words_;
  std::unordered_map<std::string, NodeId> index_;
  SparseWeights out_;
  SparseWeights in_;
};

enum class Direction { in, out };

struct DegreeCount {
  std::size_t degree;
  std::size_t count;
  friend bool operator==(const DegreeCount&, const DegreeCount&) = default;
};

struct CdfPoint {
  Weight weight;
  double fraction;
  friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

struct PercolationPoint {
  Weight cutoff;
  double largest_scc_fraction;
};

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double mean_degree = 0;
  /// Longest shortest path in the largest component of the undirected projection.
  std::size_t diameter = 0;
  /// 3 x triangles / connected triples of the undirected projection.
  double transitivity = 0;
  double scc_fraction = 0;
};

std::size_t out_degree(const WeightedDigraph& g, NodeId v);
std::size_t in_degree(const WeightedDigraph& g, NodeId v);

/// (degree, count) pairs for every degree that occurs, ascending.
std::vector<DegreeCount> degree_histogram(const WeightedDigraph& g, Direction direction);

/// Empirical CDF at each distinct weight. Throws EmptyInputError on an edgeless graph.
std::vector<CdfPoint> weight_cdf(const WeightedDigraph& g);

/// Keeps edges with min_w <= w <= max_w; the node set is unchanged.
WeightedDigraph filter_edges(const WeightedDigraph& g, Weight min_w, Weight max_w);

/// Tarjan's algorithm. Members of each component are sorted, and components
/// are ordered by their smallest member.
std::vector<std::vector<NodeId>> strongly_connected_components(const WeightedDigraph& g);

double largest_scc_fraction(const WeightedDigraph& g);

/// Largest-SCC fraction after filtering at min_w = cutoff, for ascending cutoffs in [0,1].
std::vector<PercolationPoint> percolation_curve(const WeightedDigraph& g, std::span<const Weight> cutoffs);

/// Throws EmptyInputError on a graph with no nodes. `threads` = 0 uses every core.
GraphStats global_stats(const WeightedDigraph& g, unsigned threads = 0);

}  // namespace fanet
