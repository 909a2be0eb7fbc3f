#include "copnet/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>
#include <unordered_map>

#include "copnet/csv.hpp"
#include "copnet/util.hpp"

namespace copnet {

namespace {

constexpr std::size_t kProductColumns = 6;
constexpr std::size_t kSaleColumns = 7;

std::ifstream open_or_fail(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(strprintf("cannot open '%s'", path.string().c_str()));
  return in;
}

void expect_header(const CsvRow& row, const std::vector<std::string>& expected,
                   const std::filesystem::path& path) {
  if (row.fields != expected) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i)
      want += (i ? "," : "") + expected[i];
    fail(strprintf("%s: bad header, expected '%s'", path.string().c_str(),
                   want.c_str()));
  }
}

ProductKind parse_product_kind(const std::string& text, std::size_t line) {
  if (text == "material") return ProductKind::material;
  if (text == "non_material") return ProductKind::non_material;
  if (text == "mixed") return ProductKind::mixed;
  fail(strprintf("line %zu: unknown product kind '%s'", line, text.c_str()));
}

SaleKind parse_sale_kind(const std::string& text, std::size_t line) {
  if (text == "sale") return SaleKind::sale;
  if (text == "return") return SaleKind::return_;
  fail(strprintf("line %zu: unknown sale kind '%s'", line, text.c_str()));
}

int64_t parse_int(const std::string& text, std::size_t line, const char* what) {
  if (text.empty()) fail(strprintf("line %zu: empty %s", line, what));
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &pos);
  } catch (const std::exception&) {
    fail(strprintf("line %zu: bad %s '%s'", line, what, text.c_str()));
  }
  if (pos != text.size())
    fail(strprintf("line %zu: bad %s '%s'", line, what, text.c_str()));
  return value;
}

bool event_key_less(const SaleEvent& a, const SaleEvent& b) {
  return std::tie(a.customer_id, a.time, a.product_id, a.register_id, a.store_id) <
         std::tie(b.customer_id, b.time, b.product_id, b.register_id, b.store_id);
}

bool same_sale(const SaleEvent& a, const SaleEvent& b) {
  return a.customer_id == b.customer_id && a.product_id == b.product_id &&
         a.register_id == b.register_id && a.time == b.time;
}

}  // namespace

const char* to_string(ProductKind kind) {
  switch (kind) {
    case ProductKind::material: return "material";
    case ProductKind::non_material: return "non_material";
    case ProductKind::mixed: return "mixed";
  }
  return "?";
}

const char* to_string(SaleKind kind) {
  return kind == SaleKind::sale ? "sale" : "return";
}

void ProductCatalog::add(ProductRecord record) {
  auto key = record.product_id;
  records_.emplace(std::move(key), std::move(record));
}

const ProductRecord* ProductCatalog::find(const std::string& product_id) const {
  auto it = records_.find(product_id);
  return it == records_.end() ? nullptr : &it->second;
}

ProductCatalog load_products(const std::filesystem::path& path) {
  std::ifstream in = open_or_fail(path);
  CsvReader reader(in);

  auto header = reader.next();
  if (!header)
    fail(strprintf("%s: empty file, expected header", path.string().c_str()));
  expect_header(*header,
                {"product_id", "description", "subcategory_id", "class_id",
                 "group_id", "kind"},
                path);

  ProductCatalog catalog;
  std::unordered_map<std::string, std::size_t> seen_line;
  while (auto row = reader.next()) {
    if (row->fields.size() == 1 && row->fields[0].empty()) continue;  // blank line
    if (row->fields.size() != kProductColumns)
      fail(strprintf("line %zu: expected %zu columns, got %zu", row->line,
                     kProductColumns, row->fields.size()));
    ProductRecord rec;
    rec.product_id = row->fields[0];
    rec.description = row->fields[1];
    rec.subcategory_id = row->fields[2];
    rec.class_id = row->fields[3];
    rec.group_id = row->fields[4];
    rec.kind = parse_product_kind(row->fields[5], row->line);
    if (rec.product_id.empty())
      fail(strprintf("line %zu: empty product_id", row->line));

    auto [it, inserted] = seen_line.emplace(rec.product_id, row->line);
    if (!inserted)
      fail(strprintf("duplicate product_id '%s' on lines %zu and %zu",
                     rec.product_id.c_str(), it->second, row->line));

    if (rec.kind == ProductKind::non_material) {
      ++catalog.meta.excluded_non_material;
      continue;
    }
    if (rec.kind == ProductKind::mixed) {
      ++catalog.meta.excluded_mixed;
      continue;
    }
    if (rec.subcategory_id.empty() || rec.class_id.empty() || rec.group_id.empty())
      fail(strprintf("line %zu: material product '%s' must reference a "
                     "subcategory, class, and group",
                     row->line, rec.product_id.c_str()));
    catalog.add(std::move(rec));
  }
  return catalog;
}

bool SaleLog::is_sorted() const {
  return std::is_sorted(events.begin(), events.end(),
                        [](const SaleEvent& a, const SaleEvent& b) {
                          return std::tie(a.customer_id, a.time) <
                                 std::tie(b.customer_id, b.time);
                        });
}

void SaleLog::normalize() {
  std::sort(events.begin(), events.end(), event_key_less);
  std::vector<SaleEvent> out;
  out.reserve(events.size());
  for (auto& ev : events) {
    if (!out.empty() && same_sale(out.back(), ev)) {
      out.back().quantity += ev.quantity;
      ++meta.duplicates_collapsed;
    } else {
      out.push_back(std::move(ev));
    }
  }
  events = std::move(out);
}

SaleLog load_sales(const std::filesystem::path& path, const ProductCatalog& catalog) {
  std::ifstream in = open_or_fail(path);
  CsvReader reader(in);

  auto header = reader.next();
  if (!header)
    fail(strprintf("%s: empty file, expected header", path.string().c_str()));
  expect_header(*header,
                {"customer_id", "product_id", "timestamp", "register_id",
                 "store_id", "quantity", "kind"},
                path);

  SaleLog log;
  while (auto row = reader.next()) {
    if (row->fields.size() == 1 && row->fields[0].empty()) continue;
    if (row->fields.size() != kSaleColumns)
      fail(strprintf("line %zu: expected %zu columns, got %zu", row->line,
                     kSaleColumns, row->fields.size()));
    SaleEvent ev;
    ev.customer_id = row->fields[0];
    ev.product_id = row->fields[1];
    if (ev.customer_id.empty())
      fail(strprintf("line %zu: empty customer_id", row->line));
    if (ev.product_id.empty())
      fail(strprintf("line %zu: empty product_id", row->line));
    try {
      ev.time = parse_timestamp(row->fields[2]);
    } catch (const Error& e) {
      fail(strprintf("line %zu: %s", row->line, e.what()));
    }
    ev.register_id = row->fields[3];
    ev.store_id = row->fields[4];
    int64_t quantity = parse_int(row->fields[5], row->line, "quantity");
    ev.kind = parse_sale_kind(row->fields[6], row->line);

    if (ev.kind == SaleKind::return_) {
      ++log.meta.returns_dropped;
      continue;
    }
    if (quantity < 1)
      fail(strprintf("line %zu: non-positive quantity %lld on a sale",
                     row->line, static_cast<long long>(quantity)));
    ev.quantity = static_cast<uint64_t>(quantity);
    if (!catalog.contains(ev.product_id)) {
      ++log.meta.unknown_dropped;
      continue;
    }
    log.events.push_back(std::move(ev));
  }
  log.normalize();
  return log;
}

}  // namespace copnet
