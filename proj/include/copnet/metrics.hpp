#ifndef COPNET_METRICS_HPP
#define COPNET_METRICS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "copnet/graph.hpp"
#include "copnet/ingest.hpp"

namespace copnet {

/// Observed vs. uniform entropy of a member-size distribution, in bits.
struct EntropyReport {
  std::vector<uint64_t> member_sizes;
  double h1 = 0.0;  // observed
  double h0 = 0.0;  // log2(number of members)
};

struct PowerLawFit {
  double alpha = 0.0;      // slope on log2-log2 axes
  double intercept = 0.0;  // log2 count at log2 value = 0
  double r_squared = 0.0;
};

/// H1 = -sum p_i log2 p_i with p_i = size_i / total; H0 = log2(n).
EntropyReport size_entropy(const std::vector<uint64_t>& member_sizes);

/// Day gaps between consecutive distinct purchase dates per customer.
/// Requires the log's canonical (customer, time) order.
std::map<int64_t, uint64_t> interpurchase_histogram(const SaleLog& log);

/// Least-squares line through (log2 value, log2 count) over bins with
/// positive value and count. Needs at least two usable bins.
PowerLawFit fit_power_law(const std::map<double, double>& histogram);

/// Spearman rank correlation with average ranks for ties.
double rank_correlation(const std::vector<double>& xs,
                        const std::vector<double>& ys);

std::map<double, double> degree_histogram(const ProductGraph& graph);
std::map<double, double> sales_histogram(const ProductGraph& graph);

/// Two-column "value,count" CSV, sorted by value.
template <class K, class V>
void write_histogram_csv(const std::map<K, V>& histogram,
                         const std::filesystem::path& path);

}  // namespace copnet

#endif
