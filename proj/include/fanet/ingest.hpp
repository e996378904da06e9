#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fanet/graph.hpp"

namespace fanet {

/// Trims surrounding whitespace, applies Unicode case folding and NFC.
std::string normalize_word(std::string_view word);

struct IngestReport {
  std::size_t lines_read = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_merged = 0;
  std::size_t weights_clamped = 0;
  std::vector<std::string> warnings;
};

struct LoadedGraph {
  WeightedDigraph graph;
  IngestReport report;
};

/// Reads `source<TAB>target<TAB>weight` lines; `#` lines and blank lines are
/// skipped. Node ids follow first appearance. Self-loops are dropped and
/// duplicate pairs are summed (clamped to 1), each with a warning.
LoadedGraph parse_graph(std::istream& in);
LoadedGraph load_graph(const std::filesystem::path& path);

/// Writes the TSV form read by parse_graph, lines sorted by (source, target) word, weights at round-trip precision.
void write_graph(std::ostream& out, const WeightedDigraph& g);

enum class Category { easy, medium, hard };

inline constexpr std::array<Category, 3> all_categories{Category::easy, Category::medium, Category::hard};

/// Easy for H >= 0.64, medium for 0.32 <= H < 0.64, hard below.
Category categorize(double hardness);
std::string_view to_string(Category c);

struct RatProblem {
  std::array<NodeId, 3> stimuli{};
  NodeId response = 0;
  double hardness = 0;
  Category category = Category::hard;
  /// s1, s2, s3, response as written in the file.
  std::array<std::string, 4> labels;
  std::size_t line = 0;
};

struct RatExclusion {
  std::size_t line;
  std::string reason;
};

struct RatDataset {
  std::vector<RatProblem> problems;
  std::vector<RatExclusion> excluded;

  std::size_t count(Category c) const;
  std::vector<double> hardness() const;
};

/// Parses the `s1,s2,s3,response,hardness` CSV and validates every row
/// against `g`. Rows naming absent words, a stimulus without out-edges, or
/// repeated words are excluded with a diagnostic. A hardness outside [0,1]
/// raises RangeError; structural problems raise ParseError.
RatDataset parse_rats(std::istream& in, const WeightedDigraph& g);
RatDataset load_rats(const std::filesystem::path& path, const WeightedDigraph& g);

}  // namespace fanet
