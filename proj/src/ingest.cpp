#include "fanet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "fanet/error.hpp"

namespace fanet {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view space = " \t\r\n\v\f";
  const auto b = s.find_first_not_of(space);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(space);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

bool parse_real(std::string_view text, double& value) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

void strip_bom(std::string& line) {
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

std::string normalize_word(std::string_view word) {
  word = trim(word);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  auto text = icu::UnicodeString::fromUTF8(icu::StringPiece(word.data(), static_cast<int32_t>(word.size())));
  text.foldCase();
  const auto normalized = nfc->normalize(text, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

LoadedGraph parse_graph(std::istream& in) {
  IngestReport report;
  std::vector<std::string> words;
  std::unordered_map<std::string, NodeId> ids;
  // ordered so the merged edge list is deterministic
  std::map<std::pair<NodeId, NodeId>, Weight> weights;

  auto id_of = [&](std::string word) {
    const auto [it, inserted] = ids.emplace(std::move(word), static_cast<NodeId>(words.size()));
    if (inserted) words.push_back(it->first);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) strip_bom(line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    ++report.lines_read;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) throw ParseError("expected 3 tab-separated fields, found " + std::to_string(fields.size()), line_no);
    double w = 0;
    if (!parse_real(fields[2], w)) throw ParseError("non-numeric weight '" + std::string(fields[2]) + "'", line_no);
    if (!(w > 0.0 && w <= 1.0)) throw ParseError("weight " + std::string(trim(fields[2])) + " outside (0,1]", line_no);
    auto source = normalize_word(fields[0]);
    auto target = normalize_word(fields[1]);
    if (source.empty() || target.empty()) throw ParseError("empty word", line_no);
    if (source == target) {
      ++report.self_loops_dropped;
      report.warnings.push_back("line " + std::to_string(line_no) + ": dropped self-loop on '" + source + "'");
      continue;
    }
    const NodeId s = id_of(std::move(source));
    const NodeId t = id_of(std::move(target));
    auto [it, inserted] = weights.emplace(std::pair{s, t}, w);
    if (!inserted) {
      ++report.duplicates_merged;
      report.warnings.push_back("line " + std::to_string(line_no) + ": merged duplicate edge '" + words[s] + "' -> '" +
                                words[t] + "'");
      it->second += w;
    }
  }
  if (in.bad()) throw IoError("read error after line " + std::to_string(line_no));

  std::vector<Edge> edges;
  edges.reserve(weights.size());
  for (auto& [pair, w] : weights) {
    if (w > 1.0) {
      ++report.weights_clamped;
      report.warnings.push_back("clamped merged weight of '" + words[pair.first] + "' -> '" + words[pair.second] +
                                "' to 1");
      w = 1.0;
    }
    edges.push_back({pair.first, pair.second, w});
  }
  return {WeightedDigraph::from_edges(std::move(words), edges), std::move(report)};
}

LoadedGraph load_graph(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_graph(in);
}

void write_graph(std::ostream& out, const WeightedDigraph& g) {
  const auto precision = out.precision(std::numeric_limits<Weight>::max_digits10);
  auto edges = g.edges();
  std::ranges::sort(edges, [&](const Edge& a, const Edge& b) {
    return std::tie(g.word(a.source), g.word(a.target)) < std::tie(g.word(b.source), g.word(b.target));
  });
  for (const Edge& e : edges) out << g.word(e.source) << '\t' << g.word(e.target) << '\t' << e.weight << '\n';
  out.precision(precision);
}

Category categorize(double hardness) {
  if (hardness >= 0.64) return Category::easy;
  if (hardness >= 0.32) return Category::medium;
  return Category::hard;
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::easy: return "easy";
    case Category::medium: return "medium";
    case Category::hard: return "hard";
  }
  return "?";
}

std::size_t RatDataset::count(Category c) const {
  return static_cast<std::size_t>(
      std::count_if(problems.begin(), problems.end(), [c](const RatProblem& p) { return p.category == c; }));
}

std::vector<double> RatDataset::hardness() const {
  std::vector<double> h;
  h.reserve(problems.size());
  for (const auto& p : problems) h.push_back(p.hardness);
  return h;
}

RatDataset parse_rats(std::istream& in, const WeightedDigraph& g) {
  RatDataset data;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) strip_bom(line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split(line, ',');
    if (!header) {
      const std::array<std::string_view, 5> expected{"s1", "s2", "s3", "response", "hardness"};
      bool ok = fields.size() == expected.size();
      for (std::size_t i = 0; ok && i < expected.size(); ++i) ok = trim(fields[i]) == expected[i];
      if (!ok) throw ParseError("expected header 's1,s2,s3,response,hardness'", line_no);
      header = true;
      continue;
    }
    if (fields.size() != 5) throw ParseError("expected 5 comma-separated fields, found " + std::to_string(fields.size()), line_no);
    double h = 0;
    if (!parse_real(fields[4], h)) throw ParseError("non-numeric hardness '" + std::string(fields[4]) + "'", line_no);
    if (!(h >= 0.0 && h <= 1.0))
      throw RangeError("line " + std::to_string(line_no) + ": hardness " + std::string(trim(fields[4])) + " outside [0,1]");

    RatProblem p;
    p.hardness = h;
    p.category = categorize(h);
    p.line = line_no;
    std::array<std::string, 4> keys;
    for (std::size_t i = 0; i < 4; ++i) {
      p.labels[i] = std::string(trim(fields[i]));
      keys[i] = normalize_word(fields[i]);
    }

    std::string reason;
    std::array<NodeId, 4> ids{};
    for (std::size_t i = 0; i < 4 && reason.empty(); ++i) {
      const auto id = g.find(keys[i]);
      if (!id) reason = "word '" + p.labels[i] + "' not in network";
      else ids[i] = *id;
    }
    for (std::size_t i = 0; i < 4 && reason.empty(); ++i)
      for (std::size_t j = i + 1; j < 4 && reason.empty(); ++j)
        if (ids[i] == ids[j]) reason = "word '" + p.labels[j] + "' repeated";
    for (std::size_t i = 0; i < 3 && reason.empty(); ++i)
      if (out_degree(g, ids[i]) == 0) reason = "stimulus '" + p.labels[i] + "' has no out-edges";
    if (!reason.empty()) {
      data.excluded.push_back({line_no, std::move(reason)});
      continue;
    }
    p.stimuli = {ids[0], ids[1], ids[2]};
    p.response = ids[3];
    data.problems.push_back(std::move(p));
  }
  if (!header) throw ParseError("missing header", 0);
  return data;
}

RatDataset load_rats(const std::filesystem::path& path, const WeightedDigraph& g) {
  auto in = open(path);
  return parse_rats(in, g);
}

}  // namespace fanet
