#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

#include "denise/types.hpp"

namespace denise {

// Lowercase, NFC-compose, replace controls/symbols/punctuation (except '-' and
// '_') by single spaces, drop non-Latin characters, collapse whitespace.
// Idempotent.
std::string normalize(std::string_view text);

// True when token is non-empty and made only of Latin letters (with their
// combining marks), ASCII digits and internal '-' / '_'.
bool is_valid_token(std::string_view token);

// Splits normalized text on whitespace, trims leading/trailing punctuation and
// assigns consecutive positions starting at 0.
TokenStream tokenize(std::string_view normalized_text, Language language,
                     std::string doc_id = {});

class StopwordTable {
 public:
  using WordSet = std::unordered_set<std::string>;

  StopwordTable() = default;

  // Tables shipped with the library (resources/stopwords/<code>.txt).
  static StopwordTable bundled();
  // Reads <dir>/<code>.txt for every supported language present in dir.
  static StopwordTable load_directory(const std::filesystem::path& dir);
  // One word per line, '#' starts a comment. Entries are normalized.
  static WordSet parse(std::string_view content);

  void set(Language language, WordSet words);
  bool has(Language language) const { return tables_.contains(language); }
  // Throws UnsupportedLanguage when no table is loaded for language.
  const WordSet& words(Language language) const;
  bool contains(Language language, std::string_view word) const;

 private:
  std::map<Language, WordSet> tables_;
};

TokenStream remove_stopwords(const TokenStream& stream, const StopwordTable& table);

inline constexpr double kLanguageDetectionThreshold = 0.05;

struct LanguageGuess {
  bool supported = false;
  std::optional<Language> language;
  // Fraction of tokens found in each stopword table, in kSupportedLanguages order.
  std::array<double, 3> scores{};
};

LanguageGuess detect_language(std::string_view text, const StopwordTable& table);

// normalize, tokenize and remove stopwords in one go.
TokenStream prepare_text(std::string_view text, Language language,
                         const StopwordTable& table, std::string doc_id = {});

// Number of Unicode code points in a UTF-8 string (invalid bytes count as one each).
std::size_t utf8_length(std::string_view text);

}  // namespace denise
