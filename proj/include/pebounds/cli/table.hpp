#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace pebounds::cli {

/// Empty cells (monostate) render as an empty CSV field and JSON null.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Header line plus one line per row; doubles use 17 significant digits.
std::string render_csv(const Table& table);
/// Array of objects keyed by column name, one per row.
std::string render_json(const Table& table);

}  // namespace pebounds::cli
