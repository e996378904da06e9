#include "fanet/stats.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <ostream>

namespace fanet {

double loglog_tail_slope(std::span<const DegreeCount> histogram, std::size_t min_degree) {
  std::vector<double> x, y;
  for (const auto& h : histogram) {
    if (h.degree < min_degree || h.degree == 0 || h.count == 0) continue;
    x.push_back(std::log(static_cast<double>(h.degree)));
    y.push_back(std::log(static_cast<double>(h.count)));
  }
  return linear_fit(x, y).slope;
}

CorrelationReport correlate(std::string predictor, std::vector<std::size_t> alpha, std::vector<double> x,
                            std::vector<double> y) {
  if (alpha.size() != x.size()) throw AlignmentError("alpha and predictor lengths differ");
  CorrelationReport r;
  r.predictor = std::move(predictor);
  r.pearson_rho = pearson(x, y);
  r.fit = linear_fit(x, y);
  r.n = x.size();
  r.alpha = std::move(alpha);
  r.x = std::move(x);
  r.y = std::move(y);
  return r;
}

std::string format_real(double v) {
  if (std::isnan(v)) return {};
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::string lambda_tag(double lambda) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", lambda);
  std::string tag;
  for (const char* c = buf; *c; ++c)
    if (*c != '.') tag += *c;
  return tag;
}

std::vector<CorrelationReport> correlate_predictors(std::span<const PredictorResult> predictors,
                                                    const RatDataset& data,
                                                    std::span<const double> simulator_accuracy) {
  if (predictors.size() != data.problems.size()) throw AlignmentError("predictors and dataset differ in length");
  if (!simulator_accuracy.empty() && simulator_accuracy.size() != data.problems.size())
    throw AlignmentError("simulator accuracy and dataset differ in length");

  std::vector<std::size_t> alpha;
  std::vector<double> p0s, inverse, hardness;
  for (std::size_t i = 0; i < predictors.size(); ++i) {
    if (predictors[i].alpha != i + 1) throw AlignmentError("predictor results out of problem order");
    alpha.push_back(predictors[i].alpha);
    p0s.push_back(predictors[i].p0);
    inverse.push_back(predictors[i].inverse_weight);
    hardness.push_back(data.problems[i].hardness);
  }

  std::vector<CorrelationReport> reports;
  reports.push_back(correlate("p0", alpha, p0s, hardness));
  if (!predictors.empty()) {
    for (std::size_t l = 0; l < predictors.front().p_lambda.size(); ++l) {
      const double lambda = predictors.front().p_lambda[l].lambda;
      std::vector<std::size_t> a;
      std::vector<double> x, y;
      for (std::size_t i = 0; i < predictors.size(); ++i) {
        const auto& v = predictors[i].p_lambda.at(l);
        if (!v.value) continue;
        a.push_back(alpha[i]);
        x.push_back(*v.value);
        y.push_back(hardness[i]);
      }
      reports.push_back(correlate("p_" + lambda_tag(lambda), std::move(a), std::move(x), std::move(y)));
    }
  }
  reports.push_back(correlate("inverse_weight", alpha, inverse, hardness));
  if (!simulator_accuracy.empty())
    reports.push_back(correlate("accuracy", alpha, {simulator_accuracy.begin(), simulator_accuracy.end()}, hardness));
  return reports;
}

void write_scatter_csv(std::ostream& out, std::span<const CorrelationReport> reports) {
  out << "alpha,predictor,value,hardness\n";
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.n; ++i)
      out << r.alpha[i] << ',' << r.predictor << ',' << format_real(r.x[i]) << ',' << format_real(r.y[i]) << '\n';
}

}  // namespace fanet
