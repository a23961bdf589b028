#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dbk::csv {

/// Shortest decimal text that reads back to the same double; "nan", "inf"
/// and "-inf" for non-finite values.
std::string num(double v);
std::string num(long long v);

/// Collects rows of a fixed-width table and writes them comma-separated.
class Table {
public:
  explicit Table(std::vector<std::string> header);
  Table& row();
  Table& add(const std::string& cell);
  Table& add(double v) { return add(num(v)); }
  Table& add(int v) { return add(num(static_cast<long long>(v))); }
  Table& add(std::size_t v) { return add(num(static_cast<long long>(v))); }
  Table& add(bool v) { return add(std::string(v ? "1" : "0")); }
  std::size_t rows() const { return rows_.size(); }
  void write(std::ostream& os) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace dbk::csv
