#include "denise/csv.hpp"

#include <cstdint>

#include "denise/errors.hpp"

namespace denise {

bool is_valid_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
        (extra == 3 && cp < 0x10000) || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

std::vector<CsvRow> parse_csv(std::string_view content) {
  std::vector<CsvRow> rows;
  std::size_t i = 0;
  const std::size_t n = content.size();

  while (i < n) {
    const std::size_t row_index = rows.size();
    const std::size_t row_start = i;
    CsvRow row;
    while (true) {
      std::string field;
      if (i < n && content[i] == '"') {
        ++i;
        while (true) {
          if (i >= n) throw CsvFormatError("unterminated quoted field", row_index);
          if (content[i] == '"') {
            if (i + 1 < n && content[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          field += content[i++];
        }
        if (i < n && content[i] != ',' && content[i] != '\n' &&
            !(content[i] == '\r' && i + 1 < n && content[i + 1] == '\n')) {
          throw CsvFormatError("unexpected character after closing quote", row_index);
        }
      } else {
        while (i < n && content[i] != ',' && content[i] != '\n' && content[i] != '\r') {
          if (content[i] == '"') throw CsvFormatError("quote inside unquoted field", row_index);
          field += content[i++];
        }
        if (i < n && content[i] == '\r' && !(i + 1 < n && content[i + 1] == '\n')) {
          throw CsvFormatError("bare carriage return", row_index);
        }
      }
      row.push_back(std::move(field));
      if (i < n && content[i] == ',') {
        ++i;
        continue;
      }
      break;
    }
    if (i < n && content[i] == '\r') ++i;
    if (i < n && content[i] == '\n') ++i;
    if (!is_valid_utf8(content.substr(row_start, i - row_start))) {
      throw CsvFormatError("invalid UTF-8", row_index);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_csv_row(const CsvRow& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_escape(row[i]);
  }
  out += "\r\n";
  return out;
}

}  // namespace denise
