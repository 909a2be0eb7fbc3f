#ifndef COPNET_COOCCUR_HPP
#define COPNET_COOCCUR_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "copnet/ingest.hpp"

namespace copnet {

struct PairCount {
  std::string a;  // canonical order: a < b
  std::string b;
  uint64_t count = 0;
};

/// Togetherness counts for unordered product pairs. Pairs are keyed in
/// canonical lexicographic order; no (A, A) pair is ever present.
class CoOccurrenceCounts {
 public:
  int window_days = 7;

  uint64_t count(const std::string& a, const std::string& b) const;
  std::size_t pair_count() const { return counts_.size(); }
  uint64_t total() const;

  /// Pairs in canonical order, sorted lexicographically by (a, b).
  std::vector<PairCount> sorted_pairs() const;

  /// fn(product_index_a, product_index_b, count); indexes refer to
  /// products(). Iteration order is unspecified.
  template <class F>
  void for_each(F&& fn) const {
    for (const auto& [key, n] : counts_)
      fn(static_cast<uint32_t>(key >> 32), static_cast<uint32_t>(key), n);
  }

  /// Distinct products of the source log, sorted; indexes into this vector
  /// are the pair-key halves.
  const std::vector<std::string>& products() const { return products_; }

  void add(uint32_t a, uint32_t b, uint64_t n);
  void set_products(std::vector<std::string> products) { products_ = std::move(products); }

 private:
  std::vector<std::string> products_;           // sorted ascending
  std::unordered_map<uint64_t, uint64_t> counts_;  // (lo << 32 | hi), lo < hi
};

/// Count same-customer co-purchases within window_days (pairwise day
/// distance, not basket partitioning). Each qualifying pair of sale events
/// adds 1; with dedup_per_customer, each product pair counts at most once
/// per customer. The log must already be sorted by (customer_id, time).
CoOccurrenceCounts count_copurchases(const SaleLog& log, int window_days,
                                     bool dedup_per_customer = false,
                                     int workers = 1);

/// "productA\tproductB\tcount" lines, canonical pair order, sorted.
void write_pairs_tsv(const CoOccurrenceCounts& counts,
                     const std::filesystem::path& path);
CoOccurrenceCounts read_pairs_tsv(const std::filesystem::path& path,
                                  int window_days);

}  // namespace copnet

#endif
