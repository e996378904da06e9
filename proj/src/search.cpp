#include "fanet/search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "fanet/error.hpp"
#include "fanet/parallel.hpp"

namespace fanet {

namespace {

constexpr std::size_t runs_per_task = 500;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void SearchConfig::validate() const {
  if (t_max < 1) throw ValidationError("t_max must be positive");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be a finite value >= 0");
  if (!(w_max > 0.0 && w_max <= 1.0)) throw ValidationError("w_max must lie in (0,1]");
  if (n_runs < 1) throw ValidationError("n_runs must be positive");
}

Rng run_stream(std::uint64_t seed, std::size_t problem, std::size_t run) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(problem));
  h = splitmix64(h ^ static_cast<std::uint64_t>(run));
  return Rng(h);
}

ActivationSearch::ActivationSearch(const WeightedDigraph& g, double tau, double w_max)
    : graph_(&g), tau_(tau), w_max_(w_max), excluded_(g.node_count(), 0), score_(g.node_count(), 0.0) {}

void ActivationSearch::begin_run() {
  if (++epoch_ == 0) {
    std::fill(excluded_.begin(), excluded_.end(), 0);
    epoch_ = 1;
  }
}

void ActivationSearch::gather(std::span<const NodeId> active) {
  touched_.clear();
  for (NodeId a : active) {
    const auto out = graph_->out_edges(a);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const NodeId x = out.nodes[k];
      const double w = out.weights[k];
      if (w > w_max_ || excluded_[x] == epoch_) continue;
      if (score_[x] == 0.0) touched_.push_back(x);
      score_[x] += w;
    }
  }
  candidates_.clear();
  total_ = 0;
  for (NodeId x : touched_) {
    const double s = score_[x];
    score_[x] = 0.0;
    if (s < tau_) continue;
    candidates_.push_back({x, s});
    total_ += s;
  }
}

const std::vector<Candidate>& ActivationSearch::candidates(std::span<const NodeId> active,
                                                           std::span<const NodeId> checked) {
  begin_run();
  for (NodeId v : active) exclude(v);
  for (NodeId v : checked) exclude(v);
  gather(active);
  return candidates_;
}

NodeId ActivationSearch::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng) * total_;
  double cumulative = 0;
  for (const auto& c : candidates_) {
    cumulative += c.score;
    if (u < cumulative) return c.node;
  }
  return candidates_.back().node;
}

SearchOutcome ActivationSearch::run(const RatProblem& problem, std::size_t t_max, Rng& rng,
                                    std::vector<NodeId>* trace) {
  begin_run();
  std::array<NodeId, 4> active{problem.stimuli[0], problem.stimuli[1], problem.stimuli[2], 0};
  std::size_t active_count = 3;
  for (std::size_t i = 0; i < 3; ++i) exclude(active[i]);

  for (std::size_t step = 1; step <= t_max; ++step) {
    gather(std::span<const NodeId>(active.data(), active_count));
    if (candidates_.empty()) return {false, step - 1, FailureKind::dead_end};
    const NodeId x = sample(rng);
    if (trace) trace->push_back(x);
    if (x == problem.response) return {true, step, FailureKind::none};
    // the previous guess is already excluded, which makes it "checked"
    exclude(x);
    active[3] = x;
    active_count = 4;
  }
  return {false, t_max, FailureKind::exhausted_tmax};
}

std::uint64_t ProblemTally::solved(std::size_t t) const {
  std::uint64_t n = 0;
  for (std::size_t k = 1; k < solved_at.size() && k <= t; ++k) n += solved_at[k];
  return n;
}

std::uint64_t ProblemTally::dead_ends(std::size_t t) const {
  std::uint64_t n = 0;
  for (std::size_t k = 1; k < dead_end_at.size() && k <= t; ++k) n += dead_end_at[k];
  return n;
}

std::uint64_t ProblemTally::solved_steps(std::size_t t) const {
  std::uint64_t n = 0;
  for (std::size_t k = 1; k < solved_at.size() && k <= t; ++k) n += k * solved_at[k];
  return n;
}

ProblemTally& ProblemTally::operator+=(const ProblemTally& other) {
  runs += other.runs;
  if (solved_at.size() < other.solved_at.size()) solved_at.resize(other.solved_at.size(), 0);
  if (dead_end_at.size() < other.dead_end_at.size()) dead_end_at.resize(other.dead_end_at.size(), 0);
  for (std::size_t k = 0; k < other.solved_at.size(); ++k) solved_at[k] += other.solved_at[k];
  for (std::size_t k = 0; k < other.dead_end_at.size(); ++k) dead_end_at[k] += other.dead_end_at[k];
  return *this;
}

const CategoryAccuracy& AccuracyReport::category(Category c) const {
  for (const auto& cat : categories)
    if (cat.category == c) return cat;
  throw ValidationError("category missing from report");
}

std::vector<double> AccuracyReport::accuracies() const {
  std::vector<double> a;
  a.reserve(problems.size());
  for (const auto& p : problems) a.push_back(p.accuracy);
  return a;
}

std::vector<ProblemTally> simulate(const WeightedDigraph& g, const RatDataset& data, const SearchConfig& config,
                                   unsigned threads) {
  config.validate();
  const std::size_t chunks = (config.n_runs + runs_per_task - 1) / runs_per_task;
  const std::size_t tasks = data.problems.size() * chunks;
  std::vector<ProblemTally> partial(tasks);
  parallel_for(tasks, threads, [&](std::size_t task) {
    const std::size_t problem = task / chunks;
    const std::size_t first = (task % chunks) * runs_per_task;
    const std::size_t last = std::min(config.n_runs, first + runs_per_task);
    ActivationSearch search(g, config.tau, config.w_max);
    ProblemTally& tally = partial[task];
    tally.solved_at.assign(config.t_max + 1, 0);
    tally.dead_end_at.assign(config.t_max + 1, 0);
    for (std::size_t run = first; run < last; ++run) {
      auto rng = run_stream(config.seed, problem, run);
      const auto outcome = search.run(data.problems[problem], config.t_max, rng);
      ++tally.runs;
      if (outcome.solved) ++tally.solved_at[outcome.steps];
      else if (outcome.failure == FailureKind::dead_end) ++tally.dead_end_at[outcome.steps + 1];
    }
  });
  std::vector<ProblemTally> tallies(data.problems.size());
  for (std::size_t task = 0; task < tasks; ++task) tallies[task / chunks] += partial[task];
  return tallies;
}

AccuracyReport summarize(std::span<const ProblemTally> tallies, const RatDataset& data, const SearchConfig& config) {
  if (tallies.size() != data.problems.size()) throw AlignmentError("one tally per problem required");
  AccuracyReport report;
  report.config = config;
  const std::size_t t = config.t_max;
  for (const auto& tally : tallies)
    if (t >= tally.solved_at.size() && tally.runs) throw ValidationError("horizon exceeds the simulated t_max");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < tallies.size(); ++i) {
    const auto& tally = tallies[i];
    const auto& p = data.problems[i];
    ProblemAccuracy a{};
    a.alpha = i + 1;
    a.category = p.category;
    a.hardness = p.hardness;
    a.runs = tally.runs;
    a.solved = tally.solved(t);
    a.dead_ends = tally.dead_ends(t);
    a.exhausted = tally.runs - a.solved - a.dead_ends;
    a.accuracy = tally.runs ? static_cast<double>(a.solved) / static_cast<double>(tally.runs) : 0.0;
    a.mean_length = a.solved ? static_cast<double>(tally.solved_steps(t)) / static_cast<double>(a.solved) : nan;
    report.problems.push_back(a);
  }
  for (Category c : all_categories) {
    CategoryAccuracy cat;
    cat.category = c;
    double variance = 0, hardness = 0;
    std::uint64_t solved = 0, steps = 0, runs = 0, dead = 0, exhausted = 0;
    for (std::size_t i = 0; i < report.problems.size(); ++i) {
      const auto& a = report.problems[i];
      if (a.category != c) continue;
      ++cat.problems;
      cat.mean_accuracy += a.accuracy;
      hardness += a.hardness;
      if (a.runs) variance += a.accuracy * (1.0 - a.accuracy) / static_cast<double>(a.runs);
      solved += a.solved;
      steps += tallies[i].solved_steps(t);
      runs += a.runs;
      dead += a.dead_ends;
      exhausted += a.exhausted;
    }
    if (cat.problems) {
      const auto n = static_cast<double>(cat.problems);
      cat.mean_accuracy /= n;
      cat.mean_hardness = hardness / n;
      cat.sigma = std::sqrt(variance) / n;
    }
    cat.mean_length = solved ? static_cast<double>(steps) / static_cast<double>(solved) : nan;
    cat.dead_end_rate = runs ? static_cast<double>(dead) / static_cast<double>(runs) : 0.0;
    cat.exhausted_rate = runs ? static_cast<double>(exhausted) / static_cast<double>(runs) : 0.0;
    report.categories.push_back(cat);
  }
  return report;
}

AccuracyReport accuracy(const WeightedDigraph& g, const RatDataset& data, const SearchConfig& config,
                        unsigned threads) {
  const auto tallies = simulate(g, data, config, threads);
  return summarize(tallies, data, config);
}

std::vector<AccuracyReport> sweep_tmax(const WeightedDigraph& g, const RatDataset& data, const SearchConfig& base,
                                       std::span<const std::size_t> t_max_values, unsigned threads) {
  if (!std::is_sorted(t_max_values.begin(), t_max_values.end()))
    throw ValidationError("t_max values must be ascending");
  std::vector<AccuracyReport> reports;
  if (t_max_values.empty()) return reports;
  SearchConfig longest = base;
  longest.t_max = std::max<std::size_t>(1, t_max_values.back());
  const auto tallies = simulate(g, data, longest, threads);
  for (std::size_t t : t_max_values) {
    SearchConfig c = base;
    c.t_max = t;
    reports.push_back(summarize(tallies, data, c));
  }
  return reports;
}

std::vector<AccuracyReport> sweep_tau(const WeightedDigraph& g, const RatDataset& data, const SearchConfig& base,
                                      std::span<const double> taus, unsigned threads) {
  if (!std::is_sorted(taus.begin(), taus.end())) throw ValidationError("tau values must be ascending");
  std::vector<AccuracyReport> reports;
  for (double tau : taus) {
    SearchConfig c = base;
    c.tau = tau;
    reports.push_back(accuracy(g, data, c, threads));
  }
  return reports;
}

double max_accuracy(std::span<const AccuracyReport> sweep, Category c) {
  double best = 0;
  for (const auto& r : sweep) best = std::max(best, r.category(c).mean_accuracy);
  return best;
}

double CutoffComparison::gain(Category c) const {
  const double without = max_accuracy(baseline, c);
  return without > 0 ? max_accuracy(cutoff, c) / without : std::numeric_limits<double>::quiet_NaN();
}

CutoffComparison sweep_wmax(const WeightedDigraph& g, const RatDataset& data, const SearchConfig& base,
                            std::span<const double> taus, unsigned threads) {
  SearchConfig unrestricted = base;
  unrestricted.w_max = 1.0;
  return {sweep_tau(g, data, unrestricted, taus, threads), sweep_tau(g, data, base, taus, threads)};
}

}  // namespace fanet
