#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace denise {

// Base of every typed failure raised by the library. Context strings can be
// prepended while the error propagates (e.g. the keyword being processed).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message);

  const char* what() const noexcept override { return full_.c_str(); }
  const std::string& message() const noexcept { return message_; }
  // Type name, e.g. "DegenerateLabels".
  virtual const char* kind() const noexcept { return "Error"; }

  void add_context(const std::string& context);

 private:
  std::string message_;
  std::string full_;
};

#define DENISE_DECLARE_ERROR(Name)                        \
  class Name : public Error {                             \
   public:                                                \
    explicit Name(const std::string& m) : Error(m) {}     \
    const char* kind() const noexcept override {          \
      return #Name;                                       \
    }                                                     \
  }

DENISE_DECLARE_ERROR(UnsupportedLanguage);
DENISE_DECLARE_ERROR(EmptyCorpus);
DENISE_DECLARE_ERROR(DegenerateLabels);
DENISE_DECLARE_ERROR(EmptyGraph);
DENISE_DECLARE_ERROR(NotFound);
DENISE_DECLARE_ERROR(NoSubwordCoverage);
DENISE_DECLARE_ERROR(ModelMissing);
DENISE_DECLARE_ERROR(UnknownLabel);
DENISE_DECLARE_ERROR(EmptyMatrix);
DENISE_DECLARE_ERROR(TooFewSamples);
DENISE_DECLARE_ERROR(VersionMismatch);
DENISE_DECLARE_ERROR(SchemaError);
DENISE_DECLARE_ERROR(IoError);
DENISE_DECLARE_ERROR(InvalidArgument);

#undef DENISE_DECLARE_ERROR

// Malformed vector or lexicon file. line is 1-based; 0 when not line-specific.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t line);
  const char* kind() const noexcept override { return "FormatError"; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Malformed CSV. row 0 is the header record.
class CsvFormatError : public Error {
 public:
  CsvFormatError(const std::string& message, std::size_t row);
  const char* kind() const noexcept override { return "CsvFormatError"; }
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// Token stream and CoNLL-U annotation disagree at index.
class AlignmentError : public Error {
 public:
  AlignmentError(const std::string& message, std::size_t index);
  const char* kind() const noexcept override { return "AlignmentError"; }
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace denise
