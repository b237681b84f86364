#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cpauct {

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double x);

class CsvWriter {
 public:
  void comment(std::string_view text);
  void row(const std::vector<std::string>& cells);
  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
};

}  // namespace cpauct
