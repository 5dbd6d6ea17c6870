#include "noderank/evalcorr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "noderank/error.hpp"
#include "noderank/scores.hpp"

namespace noderank {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("correlation inputs differ in length");
  if (x.size() < 2) throw std::invalid_argument("correlation needs at least two observations");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelationError("correlation undefined for a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share ranks i+1..j+1
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("correlation inputs differ in length");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

std::optional<double> population_variance(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  return std::max(0.0, m2 / static_cast<double>(n));
}

namespace {

struct Coefficients {
  std::optional<double> pearson;
  std::optional<double> spearman;
};

Coefficients correlate_slice(std::span<const double> x, std::span<const double> y) {
  Coefficients c;
  if (x.size() < 2) return c;
  try {
    c.pearson = pearson(x, y);
  } catch (const UndefinedCorrelationError&) {
  }
  try {
    c.spearman = spearman(x, y);
  } catch (const UndefinedCorrelationError&) {
  }
  return c;
}

std::string field(const std::optional<double>& v) { return v ? format_score(*v) : std::string(); }

}  // namespace

CorrelationReport correlation_at_cuts(std::span<const double> scores, std::span<const double> visits,
                                      std::span<const std::size_t> cuts, std::string metric_name) {
  if (scores.size() != visits.size()) throw std::invalid_argument("scores and visits differ in length");
  if (!std::is_sorted(cuts.begin(), cuts.end())) throw std::invalid_argument("cuts must be ascending");

  CorrelationReport report;
  report.metric_name = std::move(metric_name);

  // Everything is correlated in ranking order, so the cut k = n performs the
  // same arithmetic as the overall coefficients.
  const auto order = ranking_order(scores);
  std::vector<double> sorted_scores(order.size());
  std::vector<double> sorted_visits(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted_scores[i] = scores[order[i]];
    sorted_visits[i] = visits[order[i]];
  }

  const Coefficients overall = correlate_slice(sorted_scores, sorted_visits);
  report.overall_pearson = overall.pearson;
  report.overall_spearman = overall.spearman;
  if (!overall.pearson || !overall.spearman) {
    report.warnings.push_back(report.metric_name + ": overall correlation undefined");
  }

  std::vector<double> pearson_series;
  std::vector<double> spearman_series;
  for (std::size_t k : cuts) {
    if (k > order.size()) {
      report.warnings.push_back(report.metric_name + ": cut " + std::to_string(k) +
                                " exceeds node count " + std::to_string(order.size()) + ", skipped");
      continue;
    }
    const auto c = correlate_slice(std::span<const double>(sorted_scores).first(k),
                                   std::span<const double>(sorted_visits).first(k));
    if (!c.pearson || !c.spearman) {
      report.warnings.push_back(report.metric_name + ": correlation undefined at cut " + std::to_string(k));
    }
    if (c.pearson) pearson_series.push_back(*c.pearson);
    if (c.spearman) spearman_series.push_back(*c.spearman);
    report.cuts.push_back({k, c.pearson, c.spearman});
  }
  report.variance_pearson = population_variance(pearson_series);
  report.variance_spearman = population_variance(spearman_series);
  return report;
}

void write_correlation_csv(std::ostream& out, std::span<const CorrelationReport> reports) {
  out << "metric,k,pearson,spearman,variance_pearson,variance_spearman\n";
  for (const auto& r : reports) {
    for (const auto& c : r.cuts) {
      out << r.metric_name << ',' << c.k << ',' << field(c.pearson) << ',' << field(c.spearman)
          << ",,\n";
    }
    out << r.metric_name << ",all," << field(r.overall_pearson) << ',' << field(r.overall_spearman)
        << ',' << field(r.variance_pearson) << ',' << field(r.variance_spearman) << '\n';
  }
}

}  // namespace noderank
