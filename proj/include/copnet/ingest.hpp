#ifndef COPNET_INGEST_HPP
#define COPNET_INGEST_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "copnet/timestamp.hpp"

namespace copnet {

enum class ProductKind { material, non_material, mixed };
enum class SaleKind { sale, return_ };

struct ProductRecord {
  std::string product_id;
  std::string description;
  std::string subcategory_id;
  std::string class_id;
  std::string group_id;
  ProductKind kind = ProductKind::material;
};

/// Catalog of material items, keyed by product_id.
class ProductCatalog {
 public:
  struct LoadMeta {
    std::size_t excluded_non_material = 0;
    std::size_t excluded_mixed = 0;
    std::size_t excluded() const { return excluded_non_material + excluded_mixed; }
  };

  void add(ProductRecord record);
  const ProductRecord* find(const std::string& product_id) const;
  bool contains(const std::string& product_id) const { return find(product_id) != nullptr; }
  std::size_t size() const { return records_.size(); }

  /// Records in product_id order.
  const std::map<std::string, ProductRecord>& records() const { return records_; }

  LoadMeta meta;

 private:
  std::map<std::string, ProductRecord> records_;
};

struct SaleEvent {
  std::string customer_id;
  std::string product_id;
  Timestamp time;
  std::string register_id;
  std::string store_id;
  uint64_t quantity = 1;
  SaleKind kind = SaleKind::sale;
};

/// Deduplicated sale events, sorted by (customer_id, time, product_id,
/// register_id). Immutable after load.
struct SaleLog {
  struct LoadMeta {
    std::size_t returns_dropped = 0;
    std::size_t unknown_dropped = 0;
    std::size_t duplicates_collapsed = 0;
  };

  std::vector<SaleEvent> events;
  LoadMeta meta;

  bool is_sorted() const;
  /// Re-establishes the canonical order and collapses duplicate
  /// (customer, product, register, time) events by summing quantities.
  void normalize();
};

/// Load products.csv (header: product_id,description,subcategory_id,
/// class_id,group_id,kind). Non-material and mixed rows are excluded and
/// counted in meta.
ProductCatalog load_products(const std::filesystem::path& path);

/// Load sales.csv (header: customer_id,product_id,timestamp,register_id,
/// store_id,quantity,kind). Returns and rows referencing products outside
/// the catalog are dropped with counted warnings; duplicates collapse.
SaleLog load_sales(const std::filesystem::path& path, const ProductCatalog& catalog);

const char* to_string(ProductKind kind);
const char* to_string(SaleKind kind);

}  // namespace copnet

#endif
