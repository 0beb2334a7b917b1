#include "table.h"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace motionsplice::cli {

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw std::logic_error("table row width does not match header");
  }
  rows_.push_back(std::move(row));
}

void Table::print(std::ostream& out) const {
  std::vector<std::size_t> width(header_.size());
  for (std::size_t c = 0; c < header_.size(); ++c) {
    width[c] = header_[c].size();
    for (const auto& row : rows_) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string pad(width[c] - cells[c].size(), ' ');
      if (c > 0) {
        out << "  " << pad << cells[c];
      } else {
        out << cells[c] << pad;
      }
    }
    out << '\n';
  };
  line(header_);
  std::size_t total = 0;
  for (const std::size_t w : width) {
    total += w;
  }
  out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& row : rows_) {
    line(row);
  }
}

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

}  // namespace motionsplice::cli
