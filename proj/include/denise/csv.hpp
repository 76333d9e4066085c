#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace denise {

using CsvRow = std::vector<std::string>;

// Strict RFC-4180 reader (UTF-8, CRLF or LF line ends, '"' quoting with ""
// escapes). Quoted fields may contain commas and newlines. Raises
// CsvFormatError with the 0-based record number on malformed input or invalid
// UTF-8. A final line terminator is optional; blank records are not skipped.
std::vector<CsvRow> parse_csv(std::string_view content);

// Quotes a field only when it contains ',', '"', CR or LF.
std::string csv_escape(std::string_view field);
// One record terminated by CRLF.
std::string format_csv_row(const CsvRow& row);

bool is_valid_utf8(std::string_view text);

}  // namespace denise
