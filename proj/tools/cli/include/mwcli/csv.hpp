#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mwcli {

/// %.17g, with `inf`/`-inf`/`nan` spelled out.
std::string fmt(double x);

/// Comma separated rows with a header and LF line endings.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  CsvWriter& operator<<(const std::string& cell);
  CsvWriter& operator<<(const char* cell) { return *this << std::string(cell); }
  CsvWriter& operator<<(double x) { return *this << fmt(x); }
  CsvWriter& operator<<(int x) { return *this << std::to_string(x); }
  CsvWriter& operator<<(long x) { return *this << std::to_string(x); }
  CsvWriter& operator<<(long long x) { return *this << std::to_string(x); }
  CsvWriter& operator<<(unsigned long x) { return *this << std::to_string(x); }
  CsvWriter& operator<<(unsigned long long x) { return *this << std::to_string(x); }
  CsvWriter& operator<<(bool x) { return *this << std::string(x ? "1" : "0"); }
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t pending_ = 0;
};

}  // namespace mwcli
