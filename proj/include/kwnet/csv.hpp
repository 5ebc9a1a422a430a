#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kwnet {

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
// Blank lines are skipped.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Quotes the field only when it contains a comma, quote or line break.
std::string csv_field(std::string_view field);

}  // namespace kwnet
