#include "mwcli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mwcli {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

CsvWriter& CsvWriter::operator<<(const std::string& cell) {
  out_ << (pending_ ? "," : "") << cell;
  ++pending_;
  return *this;
}

void CsvWriter::end_row() {
  if (pending_ != columns_)
    throw std::logic_error("csv row has " + std::to_string(pending_) + " cells, header has " +
                           std::to_string(columns_));
  out_ << '\n';
  pending_ = 0;
}

}  // namespace mwcli
