#include "pebounds/cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace pebounds::cli {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row width mismatch");
  rows.push_back(std::move(row));
}

std::string render_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += std::visit(Overloaded{
                            [](std::monostate) { return std::string(); },
                            [](std::int64_t v) { return std::to_string(v); },
                            [](double v) { return format_double(v); },
                            [](const std::string& v) { return csv_escape(v); },
                            [](bool v) { return std::string(v ? "true" : "false"); },
                        },
                        row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Table& table) {
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json object = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(Overloaded{
                     [&](std::monostate) { object[table.columns[i]] = nullptr; },
                     [&](double v) {
                       if (std::isfinite(v)) {
                         object[table.columns[i]] = v;
                       } else {
                         object[table.columns[i]] = format_double(v);
                       }
                     },
                     [&](const auto& v) { object[table.columns[i]] = v; },
                 },
                 row[i]);
    }
    array.push_back(std::move(object));
  }
  return array.dump(2) + "\n";
}

}  // namespace pebounds::cli
