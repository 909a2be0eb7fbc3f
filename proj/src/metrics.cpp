#include "copnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "copnet/util.hpp"

namespace copnet {

EntropyReport size_entropy(const std::vector<uint64_t>& member_sizes) {
  if (member_sizes.empty()) fail("size_entropy: empty size list");
  long double total = 0;
  for (uint64_t s : member_sizes) {
    if (s < 1) fail("size_entropy: sizes must be >= 1");
    total += static_cast<long double>(s);
  }
  long double h1 = 0;
  for (uint64_t s : member_sizes) {
    long double p = static_cast<long double>(s) / total;
    h1 -= p * std::log2(p);
  }
  EntropyReport report;
  report.member_sizes = member_sizes;
  report.h1 = std::max(0.0, static_cast<double>(h1));
  report.h0 = std::log2(static_cast<double>(member_sizes.size()));
  return report;
}

std::map<int64_t, uint64_t> interpurchase_histogram(const SaleLog& log) {
  if (!log.is_sorted())
    fail("interpurchase_histogram: log is not sorted by (customer_id, time)");
  std::map<int64_t, uint64_t> histogram;
  const auto& events = log.events;
  for (std::size_t i = 0; i < events.size();) {
    std::size_t j = i;
    int64_t prev_day = events[i].time.day;
    while (j < events.size() && events[j].customer_id == events[i].customer_id) {
      int64_t day = events[j].time.day;
      if (day != prev_day) {
        ++histogram[day - prev_day];
        prev_day = day;
      }
      ++j;
    }
    i = j;
  }
  return histogram;
}

PowerLawFit fit_power_law(const std::map<double, double>& histogram) {
  std::vector<double> xs, ys;
  for (const auto& [value, count] : histogram) {
    if (value <= 0.0 || count <= 0.0) continue;
    xs.push_back(std::log2(value));
    ys.push_back(std::log2(count));
  }
  if (xs.size() < 2)
    fail("fit_power_law: need at least two bins with positive value and count");

  double n = static_cast<double>(xs.size());
  double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  if (sxx == 0.0) fail("fit_power_law: degenerate fit, all values equal");

  PowerLawFit fit;
  fit.alpha = sxy / sxx;
  fit.intercept = mean_y - fit.alpha * mean_x;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double pred = fit.intercept + fit.alpha * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  fit.r_squared = ss_tot == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  return fit;
}

namespace {

// Average ranks, 1-based; equal values share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    double rank = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

}  // namespace

double rank_correlation(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  if (xs.size() != ys.size()) fail("rank_correlation: length mismatch");
  if (xs.size() < 2) fail("rank_correlation: need at least two observations");

  auto rx = average_ranks(xs);
  auto ry = average_ranks(ys);
  double n = static_cast<double>(rx.size());
  double mean = (n + 1.0) / 2.0;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
    sxy += (rx[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0)
    fail("rank_correlation: an input vector is constant");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::map<double, double> degree_histogram(const ProductGraph& graph) {
  std::map<double, double> histogram;
  for (uint32_t v = 0; v < graph.node_count(); ++v)
    histogram[static_cast<double>(graph.degree(v))] += 1.0;
  return histogram;
}

std::map<double, double> sales_histogram(const ProductGraph& graph) {
  std::map<double, double> histogram;
  for (uint32_t v = 0; v < graph.node_count(); ++v)
    histogram[static_cast<double>(graph.sales_volume(v))] += 1.0;
  return histogram;
}

template <class K, class V>
void write_histogram_csv(const std::map<K, V>& histogram,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  out << "value,count\n";
  std::ostringstream line;
  for (const auto& [value, count] : histogram) {
    line.str("");
    line << value << ',' << count;
    out << line.str() << '\n';
  }
}

template void write_histogram_csv(const std::map<int64_t, uint64_t>&,
                                  const std::filesystem::path&);
template void write_histogram_csv(const std::map<double, double>&,
                                  const std::filesystem::path&);
template void write_histogram_csv(const std::map<std::size_t, std::size_t>&,
                                  const std::filesystem::path&);

}  // namespace copnet
