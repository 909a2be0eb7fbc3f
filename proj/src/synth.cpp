#include "copnet/synth.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "copnet/csv.hpp"
#include "copnet/util.hpp"

namespace copnet {

namespace {

std::string node_id(int n) { return strprintf("P%06d", n); }

Tile make_truth(TileKind kind, std::vector<std::string> members) {
  Tile tile;
  tile.kind = kind;
  tile.label = label_for(kind);
  std::sort(members.begin(), members.end());
  tile.members = std::move(members);
  return tile;
}

}  // namespace

PlantedGraph generate_planted_graph(const PlantSpec& spec) {
  for (const auto& star : spec.star_specs) {
    if (star.leaf_count < 0 || star.chord_count < 0) fail("negative star spec");
    if (star.chord_count > star.leaf_count / 2)
      fail(strprintf("unplantable star: %d chords exceed budget %d",
                     star.chord_count, star.leaf_count / 2));
  }
  for (int s : spec.clique_specs)
    if (s < 1) fail("clique size must be >= 1");
  for (int len : spec.path_specs)
    if (len < 1) fail("path length must be >= 1");
  if (spec.filler_nodes < 0 || spec.noise_edges < 0) fail("negative counts");

  Rng rng(spec.seed);
  ProductGraph::Builder builder;
  std::vector<Tile> truth;
  int next = 0;
  auto fresh = [&] {
    std::string id = node_id(next++);
    builder.add_node(id, 1 + rng.bounded(50));
    return id;
  };

  for (const auto& star : spec.star_specs) {
    std::string center = fresh();
    std::vector<std::string> leaves;
    for (int i = 0; i < star.leaf_count; ++i) {
      leaves.push_back(fresh());
      builder.add_edge(center, leaves.back());
    }
    // Chords pair distinct leaves so every leaf keeps degree <= 2.
    for (int i = 0; i < star.chord_count; ++i)
      builder.add_edge(leaves[2 * i], leaves[2 * i + 1]);
    std::vector<std::string> members = leaves;
    members.push_back(center);
    Tile tile = make_truth(TileKind::star, std::move(members));
    tile.center = center;
    tile.chord_count = static_cast<std::size_t>(star.chord_count);
    truth.push_back(std::move(tile));
  }

  for (int size : spec.clique_specs) {
    std::vector<std::string> nodes;
    for (int i = 0; i < size; ++i) nodes.push_back(fresh());
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j) builder.add_edge(nodes[i], nodes[j]);
    Tile tile = make_truth(TileKind::community, std::move(nodes));
    tile.k = 3;
    truth.push_back(std::move(tile));
  }

  for (int len : spec.path_specs) {
    std::vector<std::string> nodes;
    for (int i = 0; i < len; ++i) {
      nodes.push_back(fresh());
      if (i > 0) builder.add_edge(nodes[i - 1], nodes[i]);
    }
    truth.push_back(make_truth(TileKind::linear, std::move(nodes)));
  }

  std::vector<std::string> filler;
  for (int i = 0; i < spec.filler_nodes; ++i) filler.push_back(fresh());
  uint64_t n = filler.size();
  uint64_t max_edges = n * (n - (n > 0 ? 1 : 0)) / 2;
  if (static_cast<uint64_t>(spec.noise_edges) > max_edges)
    fail(strprintf("noise_edges %d exceeds filler pair budget %llu",
                   spec.noise_edges,
                   static_cast<unsigned long long>(max_edges)));
  std::set<std::pair<uint64_t, uint64_t>> chosen;
  while (chosen.size() < static_cast<std::size_t>(spec.noise_edges)) {
    uint64_t a = rng.bounded(n);
    uint64_t b = rng.bounded(n);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (chosen.insert({a, b}).second) builder.add_edge(filler[a], filler[b]);
  }

  for (std::size_t i = 0; i < truth.size(); ++i)
    truth[i].tile_id = strprintf("planted-%06zu", i);
  return {std::move(builder).build(), std::move(truth)};
}

SaleLog generate_transactions(int n_customers,
                              const std::vector<PlantedPair>& planted_pairs,
                              int window_days, uint64_t seed) {
  if (window_days < 1) fail("window_days must be >= 1");
  SaleLog log;
  if (n_customers <= 0) return log;

  Rng rng(seed);
  uint32_t rep_counter = 0;
  for (const auto& pair : planted_pairs) {
    if (pair.repetitions < 1) fail("repetitions must be >= 1");
    if (pair.product_a == pair.product_b)
      fail("planted pair must join two distinct products");
    for (int rep = 0; rep < pair.repetitions; ++rep) {
      SaleEvent a;
      a.customer_id = strprintf("C%06llu",
          static_cast<unsigned long long>(rng.bounded(n_customers)));
      a.register_id = strprintf("R%08u", rep_counter++);
      a.store_id = "S01";
      a.quantity = 1;
      SaleEvent b = a;
      a.product_id = pair.product_a;
      b.product_id = pair.product_b;
      int64_t day = 15000 + static_cast<int64_t>(rng.bounded(365));
      a.time.day = day;
      b.time.day = day + static_cast<int64_t>(
          rng.bounded(static_cast<uint64_t>(window_days) + 1));
      log.events.push_back(std::move(a));
      log.events.push_back(std::move(b));
    }
  }
  log.normalize();
  return log;
}

ProductCatalog Corpus::catalog() const {
  ProductCatalog catalog;
  for (const auto& rec : products) {
    if (rec.kind == ProductKind::non_material) {
      ++catalog.meta.excluded_non_material;
    } else if (rec.kind == ProductKind::mixed) {
      ++catalog.meta.excluded_mixed;
    } else {
      catalog.add(rec);
    }
  }
  return catalog;
}

Corpus generate_corpus(const CorpusSpec& spec) {
  if (spec.n_products < 1) fail("n_products must be >= 1");
  if (spec.n_customers < 1) fail("n_customers must be >= 1");
  if (spec.horizon_days < 8) fail("horizon_days must be >= 8");
  if (spec.pool_size < 2 || spec.pool_stride < 1)
    fail("pool_size must be >= 2 and pool_stride >= 1");

  Corpus corpus;
  for (int i = 0; i < spec.n_products; ++i) {
    ProductRecord rec;
    rec.product_id = node_id(i);
    rec.description = strprintf("product %d", i);
    rec.subcategory_id = strprintf("SUB%05d", i / 8);
    rec.class_id = strprintf("CLS%05d", i / 64);
    rec.group_id = strprintf("GRP%03d", i / 1024);
    rec.kind = ProductKind::material;
    corpus.products.push_back(std::move(rec));
  }
  for (int i = 0; i < spec.n_non_material; ++i) {
    ProductRecord rec;
    rec.product_id = strprintf("NM%04d", i);
    rec.description = strprintf("service %d", i);
    rec.kind = ProductKind::non_material;
    corpus.products.push_back(std::move(rec));
  }
  for (int i = 0; i < spec.n_mixed; ++i) {
    ProductRecord rec;
    rec.product_id = strprintf("MX%04d", i);
    rec.description = strprintf("bundle %d", i);
    rec.kind = ProductKind::mixed;
    corpus.products.push_back(std::move(rec));
  }

  int pool_size = std::min(spec.pool_size, spec.n_products);
  int n_pools = std::max(1, (spec.n_products - pool_size) / spec.pool_stride);
  int n_staples = std::max(
      1, static_cast<int>(spec.staple_fraction * spec.n_products));

  Rng rng(spec.seed);
  auto pool_product = [&](int pool) {
    int base = pool * spec.pool_stride;
    return static_cast<int>(base + rng.bounded(pool_size));
  };
  auto pick_pool = [&] {
    // Quadratic skew: low-index pools are visited far more often.
    double u = rng.unit();
    return static_cast<int>(u * u * n_pools);
  };

  auto emit = [&](int product, const std::string& customer, int64_t day) {
    SaleEvent ev;
    ev.customer_id = customer;
    ev.product_id = node_id(product);
    ev.time.day = day;
    ev.time.sec = static_cast<int32_t>(rng.bounded(86400));
    ev.register_id = strprintf("R%03llu",
        static_cast<unsigned long long>(rng.bounded(200)));
    ev.store_id = strprintf("S%02llu",
        static_cast<unsigned long long>(rng.bounded(50)));
    ev.quantity = 1 + rng.bounded(3);
    corpus.log.events.push_back(std::move(ev));
  };

  long long target = spec.n_events;
  while (static_cast<long long>(corpus.log.events.size()) < target) {
    std::string customer = strprintf("C%06llu",
        static_cast<unsigned long long>(rng.bounded(spec.n_customers)));
    int pool = pick_pool();
    int64_t day = static_cast<int64_t>(rng.bounded(spec.horizon_days));

    auto session = [&](int64_t session_day) {
      uint64_t items = 2 + rng.bounded(3);
      for (uint64_t i = 0; i < items; ++i)
        emit(pool_product(pool), customer, session_day);
      if (rng.unit() < 0.35)
        emit(static_cast<int>(rng.bounded(n_staples)), customer, session_day);
    };
    session(day);
    // Follow-up trip to the same pool within the togetherness window.
    if (rng.unit() < 0.5)
      session(day + 1 + static_cast<int64_t>(rng.bounded(6)));
  }

  if (spec.return_fraction > 0.0) {
    auto n_returns = static_cast<std::size_t>(
        spec.return_fraction * static_cast<double>(corpus.log.events.size()));
    for (std::size_t i = 0; i < n_returns; ++i) {
      SaleEvent ev;
      ev.customer_id = strprintf("C%06llu",
          static_cast<unsigned long long>(rng.bounded(spec.n_customers)));
      ev.product_id = node_id(static_cast<int>(rng.bounded(spec.n_products)));
      ev.time.day = static_cast<int64_t>(rng.bounded(spec.horizon_days));
      ev.time.sec = static_cast<int32_t>(rng.bounded(86400));
      ev.register_id = strprintf("R%03llu",
          static_cast<unsigned long long>(rng.bounded(200)));
      ev.store_id = strprintf("S%02llu",
          static_cast<unsigned long long>(rng.bounded(50)));
      ev.quantity = 1;
      ev.kind = SaleKind::return_;
      corpus.returns.push_back(std::move(ev));
    }
  }

  corpus.log.normalize();
  return corpus;
}

void write_products_csv(const std::vector<ProductRecord>& products,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  out << "product_id,description,subcategory_id,class_id,group_id,kind\n";
  for (const auto& rec : products) {
    out << csv_escape(rec.product_id) << ',' << csv_escape(rec.description)
        << ',' << csv_escape(rec.subcategory_id) << ','
        << csv_escape(rec.class_id) << ',' << csv_escape(rec.group_id) << ','
        << to_string(rec.kind) << '\n';
  }
}

void write_products_csv(const ProductCatalog& catalog,
                        const std::filesystem::path& path) {
  std::vector<ProductRecord> products;
  products.reserve(catalog.size());
  for (const auto& [id, rec] : catalog.records()) products.push_back(rec);
  write_products_csv(products, path);
}

void write_sales_csv(const SaleLog& log, const std::filesystem::path& path,
                     const std::vector<SaleEvent>& returns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(strprintf("cannot write '%s'", path.string().c_str()));
  out << "customer_id,product_id,timestamp,register_id,store_id,quantity,kind\n";
  auto write_event = [&](const SaleEvent& ev) {
    out << csv_escape(ev.customer_id) << ',' << csv_escape(ev.product_id)
        << ',' << format_timestamp(ev.time) << ',' << csv_escape(ev.register_id)
        << ',' << csv_escape(ev.store_id) << ',' << ev.quantity << ','
        << to_string(ev.kind) << '\n';
  };
  for (const auto& ev : log.events) write_event(ev);
  for (const auto& ev : returns) write_event(ev);
}

}  // namespace copnet
