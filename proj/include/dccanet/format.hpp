#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dccanet {

/// printf-style %.{digits}g; non-finite values render as "nan", "inf", "-inf".
std::string format_number(double value, int significant_digits = 6);

/// Splits one CSV record on commas, honoring double-quoted fields. Surrounding
/// whitespace and a trailing '\r' are removed from each field.
std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes a field if it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

}  // namespace dccanet
