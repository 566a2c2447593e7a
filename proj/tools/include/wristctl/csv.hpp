#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace wristctl {

/// Shortest round-trip decimal form; identical bits always print identically.
std::string format_number(double value);

/// Comma-separated rows with a mandatory header.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  std::size_t columns() const { return columns_; }

 private:
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace wristctl
