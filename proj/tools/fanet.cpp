// Command-line front end: network statistics, percolation, analytic
// predictors and the spreading-activation simulator. Every subcommand writes
// plot-ready CSV plus JSON carrying a run manifest into --out.

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "fanet/error.hpp"
#include "fanet/first_passage.hpp"
#include "fanet/graph.hpp"
#include "fanet/ingest.hpp"
#include "fanet/search.hpp"
#include "fanet/stats.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode : int { ok = 0, io_or_parse = 2, invalid = 3, nonconvergent = 4 };

std::string num(double v) { return fanet::format_real(v); }

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fanet::IoError("cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

double parse_number(std::string_view text, const std::string& what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw fanet::ValidationError("invalid number '" + std::string(text) + "' in " + what);
  return v;
}

// Grid points are snapped to 12 decimals so 0:0.1:0.005 yields the literal values.
double snap(double v) { return std::round(v * 1e12) / 1e12; }

/// `start:stop:step` (stop inclusive) or a single value.
std::vector<double> parse_grid(const std::string& spec, const std::string& what) {
  std::vector<std::string_view> parts;
  std::string_view rest = spec;
  for (;;) {
    const auto pos = rest.find(':');
    parts.push_back(rest.substr(0, pos));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  if (parts.size() == 1) return {parse_number(parts[0], what)};
  if (parts.size() != 3) throw fanet::ValidationError(what + " grid must be start:stop:step");
  const double start = parse_number(parts[0], what);
  const double stop = parse_number(parts[1], what);
  const double step = parse_number(parts[2], what);
  if (!(step > 0)) throw fanet::ValidationError(what + " grid step must be positive");
  if (stop < start) throw fanet::ValidationError(what + " grid is empty");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid;
  for (std::size_t i = 0; i < count; ++i) grid.push_back(snap(start + static_cast<double>(i) * step));
  return grid;
}

std::vector<double> parse_list(const std::string& spec, const std::string& what) {
  std::vector<double> values;
  std::string_view rest = spec;
  for (;;) {
    const auto pos = rest.find(',');
    values.push_back(parse_number(rest.substr(0, pos), what));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  return values;
}

struct Manifest {
  std::string subcommand;
  json parameters = json::object();
  std::uint64_t seed = 0;
  json inputs = json::array();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void input(const fs::path& path) { inputs.push_back({{"path", path.string()}, {"sha256", sha256_file(path)}}); }

  json to_json() const {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return {{"subcommand", subcommand}, {"parameters", parameters}, {"seed", seed},       {"inputs", inputs},
            {"version", FANET_VERSION}, {"wall_clock_seconds", elapsed.count()}};
  }
};

std::ofstream create(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fanet::IoError("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& j) { create(path) << j.dump(2) << '\n'; }

void finish(const fs::path& out_dir, const Manifest& m) { write_json(out_dir / "manifest.json", m.to_json()); }

fanet::WeightedDigraph read_graph(const fs::path& path, Manifest& m) {
  auto loaded = fanet::load_graph(path);
  m.input(path);
  for (const auto& w : loaded.report.warnings) std::cerr << "warning: " << path.string() << ": " << w << '\n';
  return std::move(loaded.graph);
}

fanet::RatDataset read_rats(const fs::path& path, const fanet::WeightedDigraph& g, Manifest& m) {
  auto data = fanet::load_rats(path, g);
  m.input(path);
  for (const auto& e : data.excluded)
    std::cerr << "excluded: " << path.string() << ": line " << e.line << ": " << e.reason << '\n';
  if (data.problems.empty()) throw fanet::ValidationError("no valid problems in " + path.string());
  return data;
}

json exclusions_json(const fanet::RatDataset& data) {
  json j = json::array();
  for (const auto& e : data.excluded) j.push_back({{"line", e.line}, {"reason", e.reason}});
  return j;
}

json report_json(const fanet::CorrelationReport& r) {
  return {{"predictor", r.predictor},       {"n", r.n},
          {"pearson_rho", r.pearson_rho},   {"slope", r.fit.slope},
          {"intercept", r.fit.intercept},   {"regression", fanet::CorrelationReport::regression}};
}

struct Common {
  std::string graph;
  std::string rats;
  std::string out = ".";
  unsigned threads = 0;
};

void cmd_stats(const Common& c) {
  Manifest m{"stats"};
  m.parameters = {{"graph", c.graph}};
  const auto g = read_graph(c.graph, m);
  const auto s = fanet::global_stats(g, c.threads);
  const auto in_hist = fanet::degree_histogram(g, fanet::Direction::in);
  const auto out_hist = fanet::degree_histogram(g, fanet::Direction::out);
  const auto cdf = fanet::weight_cdf(g);

  const fs::path dir = c.out;
  for (const auto& [name, hist] : {std::pair{"degree_in.csv", &in_hist}, std::pair{"degree_out.csv", &out_hist}}) {
    auto f = create(dir / name);
    f << "degree,count\n";
    for (const auto& h : *hist) f << h.degree << ',' << h.count << '\n';
  }
  auto f = create(dir / "weight_cdf.csv");
  f << "weight,fraction\n";
  for (const auto& p : cdf) f << num(p.weight) << ',' << num(p.fraction) << '\n';

  json j;
  j["manifest"] = m.to_json();
  j["stats"] = {{"node_count", s.node_count},   {"edge_count", s.edge_count},
                {"mean_degree", s.mean_degree}, {"diameter", s.diameter},
                {"transitivity", s.transitivity}, {"scc_fraction", s.scc_fraction}};
  double tail = std::nan("");
  try {
    tail = fanet::loglog_tail_slope(in_hist, 50);
  } catch (const fanet::ValidationError&) {
    // fewer than two tail points
  }
  j["in_degree_tail"] = {{"min_degree", 50}, {"loglog_slope", std::isnan(tail) ? json() : json(tail)}};
  write_json(dir / "stats.json", j);
  finish(dir, m);
}

void cmd_percolation(const Common& c, const std::string& cutoffs) {
  Manifest m{"percolation"};
  m.parameters = {{"graph", c.graph}, {"cutoffs", cutoffs}};
  const auto grid = parse_grid(cutoffs, "--cutoffs");
  const auto g = read_graph(c.graph, m);
  const auto curve = fanet::percolation_curve(g, grid);
  auto f = create(fs::path(c.out) / "percolation.csv");
  f << "w_cut,largest_scc_fraction\n";
  for (const auto& p : curve) f << num(p.cutoff) << ',' << num(p.largest_scc_fraction) << '\n';
  finish(c.out, m);
}

void cmd_predict(const Common& c, const std::string& lambda_list) {
  Manifest m{"predict"};
  m.parameters = {{"graph", c.graph}, {"rats", c.rats}, {"lambda", lambda_list}};
  const auto lambdas = parse_list(lambda_list, "--lambda");
  for (double l : lambdas)
    if (!(l >= 0 && l <= 1)) throw fanet::ValidationError("--lambda values must lie in [0,1]");
  const auto g = read_graph(c.graph, m);
  const auto data = read_rats(c.rats, g, m);
  const auto predictors = fanet::compute_predictors(g, data, lambdas, c.threads);

  const fs::path dir = c.out;
  auto f = create(dir / "predictors.csv");
  f << "alpha,s1,s2,s3,response,category,p0";
  for (double l : lambdas) f << ",p_" << fanet::lambda_tag(l);
  f << ",inverse_weight,hardness,nonconverged\n";
  for (std::size_t i = 0; i < predictors.size(); ++i) {
    const auto& p = predictors[i];
    const auto& prob = data.problems[i];
    f << p.alpha;
    for (const auto& label : prob.labels) f << ',' << label;
    f << ',' << fanet::to_string(prob.category) << ',' << num(p.p0);
    std::string failed;
    for (const auto& v : p.p_lambda) {
      f << ',' << (v.value ? num(*v.value) : std::string());
      if (!v.value) {
        failed += (failed.empty() ? "" : ";") + num(v.lambda);
        std::cerr << "warning: problem " << p.alpha << ": lambda " << v.lambda << " did not converge (residual "
                  << v.residual << ")\n";
      }
    }
    f << ',' << num(p.inverse_weight) << ',' << num(prob.hardness) << ',' << failed << '\n';
  }

  std::vector<fanet::CorrelationReport> reports;
  json j;
  j["manifest"] = m.to_json();
  j["problems"] = data.problems.size();
  j["excluded"] = exclusions_json(data);
  j["reports"] = json::array();
  try {
    reports = fanet::correlate_predictors(predictors, data);
  } catch (const fanet::AlignmentError&) {
    throw;
  } catch (const fanet::ValidationError& e) {
    std::cerr << "warning: correlations not computed: " << e.what() << '\n';
    j["note"] = e.what();
  }
  for (const auto& r : reports) j["reports"].push_back(report_json(r));
  write_json(dir / "correlations.json", j);
  auto scatter = create(dir / "scatter.csv");
  fanet::write_scatter_csv(scatter, reports);
  finish(dir, m);
}

struct SimulateFlags {
  std::uint64_t seed = 0;
  std::size_t runs = 10000;
  std::size_t tmax = 20;
  std::string tau = "0";
  double wmax = 1.0;
  bool wmax_given = false;
  std::string sweep = "none";
};

struct SweepPoint {
  std::string series;
  std::string param;
  double value;
  fanet::AccuracyReport report;
};

void cmd_simulate(const Common& c, const SimulateFlags& s) {
  Manifest m{"simulate"};
  m.seed = s.seed;
  const auto taus = parse_grid(s.tau, "--tau");
  fanet::SearchConfig base;
  base.seed = s.seed;
  base.n_runs = s.runs;
  base.t_max = s.tmax;
  base.tau = taus.front();
  base.w_max = (s.sweep == "wmax" && !s.wmax_given) ? 0.05 : s.wmax;
  if (s.sweep != "none" && s.sweep != "tmax" && s.sweep != "tau" && s.sweep != "wmax")
    throw fanet::ValidationError("--sweep must be one of none, tmax, tau, wmax");
  if ((s.sweep == "none" || s.sweep == "tmax") && taus.size() != 1)
    throw fanet::ValidationError("--tau grid requires --sweep tau or wmax");
  if (s.sweep == "wmax" && base.w_max >= 1.0) throw fanet::ValidationError("--sweep wmax needs --wmax below 1");
  base.validate();
  m.parameters = {{"graph", c.graph}, {"rats", c.rats},   {"runs", s.runs},      {"tmax", s.tmax},
                  {"tau", s.tau},     {"wmax", base.w_max}, {"sweep", s.sweep}};

  const auto g = read_graph(c.graph, m);
  const auto data = read_rats(c.rats, g, m);

  std::vector<SweepPoint> points;
  const std::string wlabel = "wmax=" + num(base.w_max);
  if (s.sweep == "none") {
    points.push_back({wlabel, "tau", base.tau, fanet::accuracy(g, data, base, c.threads)});
  } else if (s.sweep == "tmax") {
    std::vector<std::size_t> values;
    for (std::size_t t = 0; t <= s.tmax; ++t) values.push_back(t);
    auto reports = fanet::sweep_tmax(g, data, base, values, c.threads);
    for (std::size_t i = 0; i < values.size(); ++i)
      points.push_back({wlabel, "tmax", static_cast<double>(values[i]), std::move(reports[i])});
  } else if (s.sweep == "tau") {
    auto reports = fanet::sweep_tau(g, data, base, taus, c.threads);
    for (std::size_t i = 0; i < taus.size(); ++i) points.push_back({wlabel, "tau", taus[i], std::move(reports[i])});
  } else {
    auto cmp = fanet::sweep_wmax(g, data, base, taus, c.threads);
    for (std::size_t i = 0; i < taus.size(); ++i) points.push_back({"wmax=1", "tau", taus[i], cmp.baseline[i]});
    for (std::size_t i = 0; i < taus.size(); ++i) points.push_back({wlabel, "tau", taus[i], cmp.cutoff[i]});
  }

  const fs::path dir = c.out;
  auto acc = create(dir / "accuracy.csv");
  acc << "series,param,value,alpha,category,hardness,accuracy,solved,dead_ends,exhausted,mean_length\n";
  auto len = create(dir / "lengths.csv");
  len << "series,param,value,category,problems,mean_accuracy,sigma,mean_hardness,mean_length,dead_end_rate,"
         "exhausted_rate\n";
  std::vector<fanet::CorrelationReport> scatter;
  json j;
  j["manifest"] = m.to_json();
  j["problems"] = data.problems.size();
  j["excluded"] = exclusions_json(data);
  j["reports"] = json::array();
  for (const auto& p : points) {
    const std::string key = p.series + "," + p.param + "," + num(p.value);
    for (const auto& a : p.report.problems)
      acc << key << ',' << a.alpha << ',' << fanet::to_string(a.category) << ',' << num(a.hardness) << ','
          << num(a.accuracy) << ',' << a.solved << ',' << a.dead_ends << ',' << a.exhausted << ','
          << num(a.mean_length) << '\n';
    for (const auto& cat : p.report.categories)
      len << key << ',' << fanet::to_string(cat.category) << ',' << cat.problems << ',' << num(cat.mean_accuracy)
          << ',' << num(cat.sigma) << ',' << num(cat.mean_hardness) << ',' << num(cat.mean_length) << ','
          << num(cat.dead_end_rate) << ',' << num(cat.exhausted_rate) << '\n';

    json entry = {{"series", p.series}, {"param", p.param}, {"value", p.value}};
    try {
      std::vector<std::size_t> alpha;
      for (const auto& a : p.report.problems) alpha.push_back(a.alpha);
      auto r = fanet::correlate("accuracy:" + p.series + ":" + p.param + "=" + num(p.value), std::move(alpha),
                                p.report.accuracies(), data.hardness());
      entry.update(report_json(r));
      scatter.push_back(std::move(r));
    } catch (const fanet::ValidationError& e) {
      entry["pearson_rho"] = nullptr;
      entry["note"] = e.what();
    }
    j["reports"].push_back(entry);
  }
  if (s.sweep == "tau" || s.sweep == "wmax") {
    json best = json::array();
    std::vector<std::string> series_names{wlabel};
    if (s.sweep == "wmax") series_names.insert(series_names.begin(), "wmax=1");
    for (const std::string& series : series_names) {
      for (auto cat : fanet::all_categories) {
        double top = -1, arg = 0;
        for (const auto& p : points) {
          if (p.series != series) continue;
          const double a = p.report.category(cat).mean_accuracy;
          if (a > top) { top = a; arg = p.value; }
        }
        if (top >= 0)
          best.push_back({{"series", series}, {"category", fanet::to_string(cat)}, {"max_accuracy", top},
                          {"argmax_tau", arg}});
      }
    }
    j["maxima"] = best;
  }
  write_json(dir / "correlations.json", j);
  auto sc = create(dir / "scatter.csv");
  fanet::write_scatter_csv(sc, scatter);
  finish(dir, m);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-association network analysis and RAT search simulation"};
  app.set_version_flag("--version", FANET_VERSION);
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool rats) {
    sub->add_option("--graph", common.graph, "Edge list (source<TAB>target<TAB>weight)")->required();
    if (rats) sub->add_option("--rats", common.rats, "RAT CSV (s1,s2,s3,response,hardness)")->required();
    sub->add_option("--out", common.out, "Output directory")->capture_default_str();
    sub->add_option("--threads", common.threads, "Worker threads, 0 = all cores")->capture_default_str();
  };

  auto* stats = app.add_subcommand("stats", "Topology statistics, degree histograms, weight CDF");
  add_common(stats, false);

  std::string cutoffs = "0:0.2:0.005";
  auto* perc = app.add_subcommand("percolation", "Largest SCC fraction against the weight cutoff");
  add_common(perc, false);
  perc->add_option("--cutoffs", cutoffs, "Cutoff grid start:stop:step")->capture_default_str();

  std::string lambdas = "0,0.5,1";
  auto* predict = app.add_subcommand("predict", "Analytic first-passage predictors of hardness");
  add_common(predict, true);
  predict->add_option("--lambda", lambdas, "Comma-separated lambda values")->capture_default_str();

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Spreading-activation search simulation");
  add_common(simulate, true);
  simulate->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
  simulate->add_option("--runs", sim.runs, "Runs per problem")->capture_default_str();
  simulate->add_option("--tmax", sim.tmax, "Maximum activations per run")->capture_default_str();
  simulate->add_option("--tau", sim.tau, "Threshold value or grid start:stop:step")->capture_default_str();
  auto* wmax_opt = simulate->add_option("--wmax", sim.wmax, "Upper edge-weight cutoff")->capture_default_str();
  simulate->add_option("--sweep", sim.sweep, "none | tmax | tau | wmax")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : invalid;
  }

  try {
    fs::create_directories(common.out);
    if (*stats) cmd_stats(common);
    else if (*perc) cmd_percolation(common, cutoffs);
    else if (*predict) cmd_predict(common, lambdas);
    else if (*simulate) {
      sim.wmax_given = wmax_opt->count() > 0;
      cmd_simulate(common, sim);
    }
  } catch (const fanet::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return io_or_parse;
  } catch (const fanet::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return io_or_parse;
  } catch (const fanet::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return invalid;
  } catch (const fanet::NonConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return nonconvergent;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return io_or_parse;
  }
  return ok;
}
