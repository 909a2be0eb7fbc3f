#include "copnet/cooccur.hpp"

#include <algorithm>
#include <fstream>

#include "copnet/util.hpp"

namespace copnet {

namespace {

uint64_t pair_key(uint32_t a, uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(a) << 32) | b;
}

}  // namespace

uint64_t CoOccurrenceCounts::count(const std::string& a, const std::string& b) const {
  auto ia = std::lower_bound(products_.begin(), products_.end(), a);
  auto ib = std::lower_bound(products_.begin(), products_.end(), b);
  if (ia == products_.end() || *ia != a) return 0;
  if (ib == products_.end() || *ib != b) return 0;
  auto it = counts_.find(pair_key(static_cast<uint32_t>(ia - products_.begin()),
                                  static_cast<uint32_t>(ib - products_.begin())));
  return it == counts_.end() ? 0 : it->second;
}

uint64_t CoOccurrenceCounts::total() const {
  uint64_t sum = 0;
  for (const auto& [key, n] : counts_) sum += n;
  return sum;
}

std::vector<PairCount> CoOccurrenceCounts::sorted_pairs() const {
  std::vector<uint64_t> keys;
  keys.reserve(counts_.size());
  for (const auto& [key, n] : counts_) keys.push_back(key);
  // Products are stored sorted, so index order is lexicographic order.
  std::sort(keys.begin(), keys.end());
  std::vector<PairCount> out;
  out.reserve(keys.size());
  for (uint64_t key : keys) {
    const auto& a = products_[key >> 32];
    const auto& b = products_[static_cast<uint32_t>(key)];
    out.push_back({a, b, counts_.at(key)});
  }
  return out;
}

void CoOccurrenceCounts::add(uint32_t a, uint32_t b, uint64_t n) {
  if (a == b) fail("co-occurrence pair must join two distinct products");
  counts_[pair_key(a, b)] += n;
}

CoOccurrenceCounts count_copurchases(const SaleLog& log, int window_days,
                                     bool dedup_per_customer, int workers) {
  if (window_days < 1) fail("window_days must be >= 1");
  if (!log.is_sorted())
    fail("count_copurchases: log is not sorted by (customer_id, time)");

  CoOccurrenceCounts result;
  result.window_days = window_days;

  // Sorted product table; pair keys use indexes into it.
  std::vector<std::string> products;
  products.reserve(log.events.size());
  for (const auto& ev : log.events) products.push_back(ev.product_id);
  std::sort(products.begin(), products.end());
  products.erase(std::unique(products.begin(), products.end()), products.end());

  std::vector<uint32_t> product_of(log.events.size());
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    auto it = std::lower_bound(products.begin(), products.end(),
                               log.events[i].product_id);
    product_of[i] = static_cast<uint32_t>(it - products.begin());
  }

  // Customer ranges are contiguous in the sorted log.
  std::vector<std::pair<std::size_t, std::size_t>> customers;
  for (std::size_t i = 0; i < log.events.size();) {
    std::size_t j = i + 1;
    while (j < log.events.size() &&
           log.events[j].customer_id == log.events[i].customer_id)
      ++j;
    customers.emplace_back(i, j);
    i = j;
  }

  std::size_t n_chunks = 1;
  if (workers > 1 && customers.size() > 1)
    n_chunks = std::min<std::size_t>(customers.size(),
                                     static_cast<std::size_t>(workers) * 4);
  std::size_t per_chunk = (customers.size() + n_chunks - 1) / std::max<std::size_t>(n_chunks, 1);

  std::vector<std::unordered_map<uint64_t, uint64_t>> partial(n_chunks);
  parallel_chunks(n_chunks, workers, [&](std::size_t chunk) {
    auto& local = partial[chunk];
    std::size_t begin = chunk * per_chunk;
    std::size_t end = std::min(customers.size(), begin + per_chunk);
    std::vector<uint64_t> seen;  // per-customer pair set when deduping
    for (std::size_t c = begin; c < end; ++c) {
      auto [lo, hi] = customers[c];
      seen.clear();
      for (std::size_t i = lo; i < hi; ++i) {
        int64_t day_i = log.events[i].time.day;
        for (std::size_t j = i + 1; j < hi; ++j) {
          if (log.events[j].time.day - day_i > window_days) break;
          if (product_of[i] == product_of[j]) continue;
          uint64_t key = pair_key(product_of[i], product_of[j]);
          if (dedup_per_customer)
            seen.push_back(key);
          else
            ++local[key];
        }
      }
      if (dedup_per_customer) {
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (uint64_t key : seen) ++local[key];
      }
    }
  });

  // Summed merge: the result is independent of chunking and thread count.
  auto& merged = partial[0];
  for (std::size_t c = 1; c < n_chunks; ++c)
    for (const auto& [key, n] : partial[c]) merged[key] += n;

  result.set_products(std::move(products));
  for (const auto& [key, n] : merged)
    result.add(static_cast<uint32_t>(key >> 32), static_cast<uint32_t>(key), n);
  return result;
}

void write_pairs_tsv(const CoOccurrenceCounts& counts,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  for (const auto& pc : counts.sorted_pairs())
    out << pc.a << '\t' << pc.b << '\t' << pc.count << '\n';
}

CoOccurrenceCounts read_pairs_tsv(const std::filesystem::path& path,
                                  int window_days) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(strprintf("cannot open '%s'", path.string().c_str()));
  struct Row { std::string a, b; uint64_t n; };
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos)
      fail(strprintf("%s line %zu: expected 'a\\tb\\tcount'",
                     path.string().c_str(), lineno));
    Row row;
    row.a = line.substr(0, t1);
    row.b = line.substr(t1 + 1, t2 - t1 - 1);
    try {
      row.n = std::stoull(line.substr(t2 + 1));
    } catch (const std::exception&) {
      fail(strprintf("%s line %zu: bad count", path.string().c_str(), lineno));
    }
    if (row.a == row.b)
      fail(strprintf("%s line %zu: self-pair", path.string().c_str(), lineno));
    if (row.b < row.a) std::swap(row.a, row.b);
    rows.push_back(std::move(row));
  }

  std::vector<std::string> products;
  for (const auto& row : rows) {
    products.push_back(row.a);
    products.push_back(row.b);
  }
  std::sort(products.begin(), products.end());
  products.erase(std::unique(products.begin(), products.end()), products.end());

  CoOccurrenceCounts counts;
  counts.window_days = window_days;
  auto index_of = [&](const std::string& id) {
    return static_cast<uint32_t>(
        std::lower_bound(products.begin(), products.end(), id) - products.begin());
  };
  std::vector<std::pair<uint32_t, uint32_t>> keys;
  keys.reserve(rows.size());
  for (const auto& row : rows) keys.emplace_back(index_of(row.a), index_of(row.b));
  counts.set_products(std::move(products));
  for (std::size_t i = 0; i < rows.size(); ++i)
    counts.add(keys[i].first, keys[i].second, rows[i].n);
  return counts;
}

}  // namespace copnet
