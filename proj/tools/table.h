#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace motionsplice::cli {

// Column-aligned text table. The first column is left-aligned, the rest
// right-aligned.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row);
  void print(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Fixed-point with `digits` decimals, the form used in every table.
std::string fixed(double value, int digits = 4);

}  // namespace motionsplice::cli
