#include "dbk/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dbk::csv {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string num(long long v) { return std::to_string(v); }

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

Table& Table::row() {
  if (!rows_.empty() && rows_.back().size() != header_.size()) {
    throw std::logic_error("csv row has the wrong number of cells");
  }
  rows_.emplace_back();
  rows_.back().reserve(header_.size());
  return *this;
}

Table& Table::add(const std::string& cell) {
  if (rows_.empty()) row();
  rows_.back().push_back(cell);
  return *this;
}

void Table::write(std::ostream& os) const {
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) {
    if (r.size() != header_.size()) throw std::logic_error("csv row has the wrong number of cells");
    line(r);
  }
}

}  // namespace dbk::csv
