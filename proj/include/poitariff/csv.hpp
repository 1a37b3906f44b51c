#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace poitariff {

// RFC-4180 CSV output. Numbers print with 12 significant digits, '.' decimal
// separator, locale independent.

inline std::string csv_number(double value) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::general, 12);
  return std::string(buf, end);
}

inline std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos)
    return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& field(std::string_view text) {
    if (!first_) out_ << ',';
    out_ << csv_field(text);
    first_ = false;
    return *this;
  }

  CsvWriter& field(double value) { return field(csv_number(value)); }

  void endrow() {
    out_ << "\r\n";
    first_ = true;
  }

  void row(const std::vector<std::string>& fields) {
    for (const auto& f : fields) field(f);
    endrow();
  }

 private:
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace poitariff
