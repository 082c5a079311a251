#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

namespace records {

/// Shortest round-trip decimal form, '.' separator, independent of locale.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

/// Minimal RFC 4180 row writer.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  CsvWriter& cell(const std::string& s) {
    sep();
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
      os_ << s;
    } else {
      os_ << '"';
      for (char c : s) {
        if (c == '"') os_ << '"';
        os_ << c;
      }
      os_ << '"';
    }
    return *this;
  }
  CsvWriter& cell(const char* s) { return cell(std::string(s)); }
  CsvWriter& cell(double x) { return cell(format_double(x)); }
  template <class Int>
    requires std::is_integral_v<Int>
  CsvWriter& cell(Int v) {
    return cell(std::to_string(v));
  }
  void end_row() {
    os_ << "\r\n";
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) os_ << ',';
    first_ = false;
  }
  std::ostream& os_;
  bool first_ = true;
};

}  // namespace records
