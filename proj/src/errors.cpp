#include "denise/errors.hpp"

namespace denise {

Error::Error(const std::string& message)
    : std::runtime_error(message), message_(message), full_(message) {}

void Error::add_context(const std::string& context) {
  full_ = context + ": " + full_;
}

FormatError::FormatError(const std::string& message, std::size_t line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

CsvFormatError::CsvFormatError(const std::string& message, std::size_t row)
    : Error("row " + std::to_string(row) + ": " + message), row_(row) {}

AlignmentError::AlignmentError(const std::string& message, std::size_t index)
    : Error("token " + std::to_string(index) + ": " + message), index_(index) {}

}  // namespace denise
