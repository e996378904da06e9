#include "fanet/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "fanet/error.hpp"
#include "fanet/parallel.hpp"

namespace fanet {

namespace {

Neighbors row(const SparseWeights& m, NodeId v) {
  const auto begin = m.outerIndexPtr()[v];
  const auto end = m.outerIndexPtr()[v + 1];
  const auto n = static_cast<std::size_t>(end - begin);
  return {{m.innerIndexPtr() + begin, n}, {m.valuePtr() + begin, n}};
}

// Simple undirected projection: sorted unique neighbour lists, no self-loops.
std::vector<std::vector<NodeId>> undirected_projection(const WeightedDigraph& g) {
  const auto n = static_cast<NodeId>(g.node_count());
  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId v = 0; v < n; ++v) {
    auto& a = adj[v];
    const auto out = g.out_edges(v);
    const auto in = g.in_edges(v);
    a.reserve(out.size() + in.size());
    std::set_union(out.nodes.begin(), out.nodes.end(), in.nodes.begin(), in.nodes.end(),
                   std::back_inserter(a));
  }
  return adj;
}

std::size_t bfs_eccentricity(const std::vector<std::vector<NodeId>>& adj, NodeId source,
                             std::vector<std::int32_t>& dist, std::vector<NodeId>& queue) {
  std::fill(dist.begin(), dist.end(), -1);
  queue.clear();
  queue.push_back(source);
  dist[source] = 0;
  std::int32_t far = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        far = dist[v];
        queue.push_back(v);
      }
    }
  }
  return static_cast<std::size_t>(far);
}

}  // namespace

WeightedDigraph WeightedDigraph::from_edges(std::vector<std::string> words, std::span<const Edge> edges) {
  WeightedDigraph g;
  const auto n = static_cast<NodeId>(words.size());
  g.index_.reserve(words.size());
  for (NodeId v = 0; v < n; ++v) {
    if (!g.index_.emplace(words[v], v).second)
      throw ValidationError("duplicate word label '" + words[v] + "'");
  }
  g.words_ = std::move(words);

  std::vector<Eigen::Triplet<Weight, NodeId>> triplets;
  triplets.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n)
      throw RangeError("edge endpoint out of range");
    if (!(e.weight > 0.0 && e.weight <= 1.0))
      throw ValidationError("edge weight " + std::to_string(e.weight) + " outside (0,1]");
    triplets.emplace_back(e.source, e.target, e.weight);
  }
  g.out_.resize(n, n);
  bool duplicate = false;
  g.out_.setFromTriplets(triplets.begin(), triplets.end(), [&duplicate](Weight a, Weight) {
    duplicate = true;
    return a;
  });
  if (duplicate) throw ValidationError("more than one edge for an ordered node pair");
  g.out_.makeCompressed();
  g.in_ = g.out_.transpose();
  g.in_.makeCompressed();
  return g;
}

const std::string& WeightedDigraph::word(NodeId v) const {
  check(v);
  return words_[v];
}

std::optional<NodeId> WeightedDigraph::find(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Neighbors WeightedDigraph::out_edges(NodeId v) const {
  check(v);
  return row(out_, v);
}

Neighbors WeightedDigraph::in_edges(NodeId v) const {
  check(v);
  return row(in_, v);
}

Weight WeightedDigraph::weight(NodeId source, NodeId target) const {
  check(target);
  const auto r = out_edges(source);
  const auto it = std::lower_bound(r.nodes.begin(), r.nodes.end(), target);
  if (it == r.nodes.end() || *it != target) return 0.0;
  return r.weights[static_cast<std::size_t>(it - r.nodes.begin())];
}

std::vector<Edge> WeightedDigraph::edges() const {
  std::vector<Edge> result;
  result.reserve(edge_count());
  for (NodeId v = 0; v < static_cast<NodeId>(node_count()); ++v) {
    const auto r = row(out_, v);
    for (std::size_t k = 0; k < r.size(); ++k) result.push_back({v, r.nodes[k], r.weights[k]});
  }
  return result;
}

void WeightedDigraph::check(NodeId v) const {
  if (!valid(v)) throw RangeError("node id " + std::to_string(v) + " out of range");
}

std::size_t out_degree(const WeightedDigraph& g, NodeId v) { return g.out_edges(v).size(); }

std::size_t in_degree(const WeightedDigraph& g, NodeId v) { return g.in_edges(v).size(); }

std::vector<DegreeCount> degree_histogram(const WeightedDigraph& g, Direction direction) {
  std::map<std::size_t, std::size_t> counts;
  for (NodeId v = 0; v < static_cast<NodeId>(g.node_count()); ++v)
    ++counts[direction == Direction::out ? out_degree(g, v) : in_degree(g, v)];
  std::vector<DegreeCount> result;
  result.reserve(counts.size());
  for (const auto& [degree, count] : counts) result.push_back({degree, count});
  return result;
}

std::vector<CdfPoint> weight_cdf(const WeightedDigraph& g) {
  if (g.edge_count() == 0) throw EmptyInputError("weight CDF of a graph without edges");
  const auto& m = g.weights();
  std::vector<Weight> w(m.valuePtr(), m.valuePtr() + m.nonZeros());
  std::sort(w.begin(), w.end());
  std::vector<CdfPoint> cdf;
  const auto total = static_cast<double>(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i + 1 < w.size() && w[i + 1] == w[i]) continue;
    cdf.push_back({w[i], static_cast<double>(i + 1) / total});
  }
  return cdf;
}

WeightedDigraph filter_edges(const WeightedDigraph& g, Weight min_w, Weight max_w) {
  if (!(min_w <= max_w)) throw ValidationError("filter_edges: min_w exceeds max_w");
  std::vector<Edge> kept;
  for (const Edge& e : g.edges())
    if (e.weight >= min_w && e.weight <= max_w) kept.push_back(e);
  return WeightedDigraph::from_edges(g.words(), kept);
}

std::vector<std::vector<NodeId>> strongly_connected_components(const WeightedDigraph& g) {
  const auto n = static_cast<NodeId>(g.node_count());
  constexpr std::int32_t unvisited = -1;
  std::vector<std::int32_t> index(n, unvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<NodeId> stack;
  // (node, position of next out-edge to explore)
  std::vector<std::pair<NodeId, std::size_t>> frames;
  std::vector<std::vector<NodeId>> components;
  std::int32_t counter = 0;

  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      const auto out = g.out_edges(v);
      if (next < out.size()) {
        const NodeId w = out.nodes[next++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const NodeId done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const NodeId parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::vector<NodeId> component;
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          component.push_back(w);
        } while (w != done);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
    }
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

double largest_scc_fraction(const WeightedDigraph& g) {
  if (g.node_count() == 0) return 0.0;
  std::size_t largest = 0;
  for (const auto& c : strongly_connected_components(g)) largest = std::max(largest, c.size());
  return static_cast<double>(largest) / static_cast<double>(g.node_count());
}

std::vector<PercolationPoint> percolation_curve(const WeightedDigraph& g, std::span<const Weight> cutoffs) {
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] >= 0.0 && cutoffs[i] <= 1.0)) throw ValidationError("cutoff outside [0,1]");
    if (i > 0 && cutoffs[i] < cutoffs[i - 1]) throw ValidationError("cutoffs must be ascending");
  }
  std::vector<PercolationPoint> curve;
  curve.reserve(cutoffs.size());
  for (Weight c : cutoffs) curve.push_back({c, largest_scc_fraction(filter_edges(g, c, 1.0))});
  return curve;
}

GraphStats global_stats(const WeightedDigraph& g, unsigned threads) {
  const auto n = g.node_count();
  if (n == 0) throw EmptyInputError("statistics of an empty graph");
  GraphStats s;
  s.node_count = n;
  s.edge_count = g.edge_count();
  s.mean_degree = static_cast<double>(g.edge_count()) / static_cast<double>(n);
  s.scc_fraction = largest_scc_fraction(g);

  const auto adj = undirected_projection(g);

  double triples = 0;
  std::uint64_t triangles = 0;
  for (NodeId u = 0; u < static_cast<NodeId>(n); ++u) {
    const auto d = static_cast<double>(adj[u].size());
    triples += d * (d - 1) / 2;
    for (NodeId v : adj[u]) {
      if (v <= u) continue;
      // common neighbours w > v, so each triangle u < v < w is counted once
      auto a = std::upper_bound(adj[u].begin(), adj[u].end(), v);
      auto b = std::upper_bound(adj[v].begin(), adj[v].end(), v);
      while (a != adj[u].end() && b != adj[v].end()) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else { ++triangles; ++a; ++b; }
      }
    }
  }
  s.transitivity = triples > 0 ? 3.0 * static_cast<double>(triangles) / triples : 0.0;

  // largest connected component of the projection
  std::vector<std::int32_t> comp(n, -1);
  std::vector<NodeId> queue;
  std::int32_t best = -1;
  std::size_t best_size = 0;
  for (NodeId root = 0, label = 0; root < static_cast<NodeId>(n); ++root) {
    if (comp[root] >= 0) continue;
    queue.assign(1, root);
    comp[root] = label;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (NodeId v : adj[queue[head]])
        if (comp[v] < 0) { comp[v] = label; queue.push_back(v); }
    if (queue.size() > best_size) { best_size = queue.size(); best = label; }
    ++label;
  }
  std::vector<NodeId> members;
  for (NodeId v = 0; v < static_cast<NodeId>(n); ++v)
    if (comp[v] == best) members.push_back(v);

  constexpr std::size_t chunk = 64;
  const std::size_t tasks = (members.size() + chunk - 1) / chunk;
  std::vector<std::size_t> ecc(tasks, 0);
  parallel_for(tasks, threads, [&](std::size_t t) {
    std::vector<std::int32_t> dist(n);
    std::vector<NodeId> q;
    q.reserve(n);
    const auto end = std::min(members.size(), (t + 1) * chunk);
    for (std::size_t i = t * chunk; i < end; ++i)
      ecc[t] = std::max(ecc[t], bfs_eccentricity(adj, members[i], dist, q));
  });
  s.diameter = ecc.empty() ? 0 : *std::max_element(ecc.begin(), ecc.end());
  return s;
}

}  // namespace fanet
