#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace noderank {

// Sample Pearson coefficient. Throws UndefinedCorrelationError when either
// input is constant, std::invalid_argument on length mismatch or n < 2.
double pearson(std::span<const double> x, std::span<const double> y);

// Pearson on average (fractional) ranks.
double spearman(std::span<const double> x, std::span<const double> y);

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

inline const std::vector<std::size_t> kDefaultCuts{10, 25, 100, 250, 500, 1000, 2500, 5000, 10000};

struct CutCorrelation {
  std::size_t k = 0;
  std::optional<double> pearson;   // empty when the slice is constant
  std::optional<double> spearman;
};

struct CorrelationReport {
  std::string metric_name;
  std::vector<CutCorrelation> cuts;
  std::optional<double> overall_pearson;
  std::optional<double> overall_spearman;
  // Population variance over the cuts with a defined coefficient.
  std::optional<double> variance_pearson;
  std::optional<double> variance_spearman;
  std::vector<std::string> warnings;
};

// For each k: keep the k nodes with the highest score (ties by lower index),
// correlate their scores with their visits. Cuts larger than the input are
// skipped with a warning. `cuts` must be ascending.
CorrelationReport correlation_at_cuts(std::span<const double> scores, std::span<const double> visits,
                                      std::span<const std::size_t> cuts,
                                      std::string metric_name = "score");

// Population variance computed with Welford's recurrence.
std::optional<double> population_variance(std::span<const double> values);

// CSV rows `metric,k,pearson,spearman` plus a summary row per report:
// `metric,all,<overall pearson>,<overall spearman>,<var pearson>,<var spearman>`.
// Missing coefficients are written as empty fields.
void write_correlation_csv(std::ostream& out, std::span<const CorrelationReport> reports);

}  // namespace noderank
