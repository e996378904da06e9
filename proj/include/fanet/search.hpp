#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fanet/graph.hpp"
#include "fanet/ingest.hpp"

namespace fanet {

struct SearchConfig {
  std::size_t t_max = 20;     // activation attempts per run
  double tau = 0.0;           // minimum summed activation of a candidate
  double w_max = 1.0;         // edges heavier than this carry no activation
  std::size_t n_runs = 10000;
  std::uint64_t seed = 0;

  /// Throws ValidationError unless t_max >= 1, tau >= 0, 0 < w_max <= 1, n_runs >= 1.
  void validate() const;
};

enum class FailureKind { none, exhausted_tmax, dead_end };

struct SearchOutcome {
  bool solved = false;
  std::size_t steps = 0;  // activations performed
  FailureKind failure = FailureKind::none;
};

struct Candidate {
  NodeId node;
  double score;
};

using Rng = std::mt19937_64;

/// Independent stream for one run, a pure function of (seed, problem, run).
Rng run_stream(std::uint64_t seed, std::size_t problem, std::size_t run);

/// Stimulus-attracted spreading activation over a read-only graph.
///
/// The three stimuli stay active for the whole run. Each step scores every
/// out-neighbour x of the active words by sum_a w_{a,x} (only edges with
/// w <= w_max contribute), drops words activated earlier in the run and
/// candidates scoring below tau, and samples x with probability proportional
/// to its score. A wrong guess becomes the fourth active word until the next
/// step, after which it stays checked. Holds per-run scratch, so one instance
/// per thread.
class ActivationSearch {
 public:
  ActivationSearch(const WeightedDigraph& g, double tau, double w_max);

  /// Eligible candidates and their scores for a frozen state, in first-touch
  /// order (active words in order, neighbours ascending). Words in `active`
  /// and `checked` are never candidates.
  const std::vector<Candidate>& candidates(std::span<const NodeId> active, std::span<const NodeId> checked);

  /// Draws from the list produced by the last call to candidates(). Requires
  /// a non-empty list.
  NodeId sample(Rng& rng) const;

  /// One run; when `trace` is given it receives every activated word in order.
  SearchOutcome run(const RatProblem& problem, std::size_t t_max, Rng& rng, std::vector<NodeId>* trace = nullptr);

 private:
  void begin_run();
  void exclude(NodeId v) { excluded_[v] = epoch_; }
  void gather(std::span<const NodeId> active);

  const WeightedDigraph* graph_;
  double tau_;
  double w_max_;
  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> excluded_;
  std::vector<double> score_;
  std::vector<NodeId> touched_;
  std::vector<Candidate> candidates_;
  double total_ = 0;
};

/// Run outcomes of one problem, binned by step so that any t <= t_max can be
/// read back without re-simulating.
struct ProblemTally {
  std::size_t runs = 0;
  std::vector<std::uint64_t> solved_at;    // [k]: solved on activation k
  std::vector<std::uint64_t> dead_end_at;  // [k]: no candidate at attempt k

  std::uint64_t solved(std::size_t t) const;
  std::uint64_t dead_ends(std::size_t t) const;
  std::uint64_t solved_steps(std::size_t t) const;
  ProblemTally& operator+=(const ProblemTally& other);
};

struct ProblemAccuracy {
  std::size_t alpha;
  Category category;
  double hardness;
  std::size_t runs;
  std::uint64_t solved;
  std::uint64_t dead_ends;
  std::uint64_t exhausted;
  double accuracy;
  double mean_length;  // NaN without solved runs
};

struct CategoryAccuracy {
  Category category;
  std::size_t problems = 0;
  double mean_accuracy = 0;
  double mean_hardness = 0;
  /// Pooled over solved runs of every problem in the category; NaN if none.
  double mean_length = 0;
  /// Monte Carlo standard error of mean_accuracy.
  double sigma = 0;
  double dead_end_rate = 0;
  double exhausted_rate = 0;
};

struct AccuracyReport {
  SearchConfig config;
  std::vector<ProblemAccuracy> problems;
  std::vector<CategoryAccuracy> categories;  // easy, medium, hard

  const CategoryAccuracy& category(Category c) const;
  std::vector<double> accuracies() const;
};

/// One tally per problem. Runs are split into fixed-size tasks with their own
/// streams, so the result does not depend on `threads`.
std::vector<ProblemTally> simulate(const WeightedDigraph& g, const RatDataset& data, const SearchConfig& config,
                                   unsigned threads = 0);

/// Report for a horizon t_max <= the simulated one.
AccuracyReport summarize(std::span<const ProblemTally> tallies, const RatDataset& data, const SearchConfig& config);

AccuracyReport accuracy(const WeightedDigraph& g, const RatDataset& data, const SearchConfig& config,
                        unsigned threads = 0);

/// Simulates once at the largest value and reads smaller horizons back.
std::vector<AccuracyReport> sweep_tmax(const WeightedDigraph& g, const RatDataset& data, const SearchConfig& base,
                                       std::span<const std::size_t> t_max_values, unsigned threads = 0);

std::vector<AccuracyReport> sweep_tau(const WeightedDigraph& g, const RatDataset& data, const SearchConfig& base,
                                      std::span<const double> taus, unsigned threads = 0);

struct CutoffComparison {
  std::vector<AccuracyReport> baseline;  // w_max = 1
  std::vector<AccuracyReport> cutoff;    // w_max from the base config

  /// max-over-tau accuracy with the cutoff divided by that without it.
  double gain(Category c) const;
};

CutoffComparison sweep_wmax(const WeightedDigraph& g, const RatDataset& data, const SearchConfig& base,
                            std::span<const double> taus, unsigned threads = 0);

/// Largest category mean accuracy across a sweep.
double max_accuracy(std::span<const AccuracyReport> sweep, Category c);

}  // namespace fanet
