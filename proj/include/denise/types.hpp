#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace denise {

enum class Language { kSpanish, kCatalan, kFrench };

// Fixed order; also the tie-break order of language detection.
inline constexpr std::array<Language, 3> kSupportedLanguages = {
    Language::kSpanish, Language::kCatalan, Language::kFrench};

std::string_view language_code(Language language);
std::optional<Language> parse_language(std::string_view code);

// Coarse Universal Dependencies tags. Only NOUN, VERB and ADJ reach TextRank.
enum class PosTag { kNoun, kVerb, kAdj, kAdv, kOther };

std::string_view pos_name(PosTag tag);
std::optional<PosTag> parse_pos(std::string_view name);
bool is_content_tag(PosTag tag);

struct RawDocument {
  std::string id;
  std::string text;
  std::optional<Language> declared_language;
  std::optional<std::string> declared_topic;

  bool operator==(const RawDocument&) const = default;
};

struct Token {
  std::string surface;
  std::string normalized;
  std::size_t position = 0;
  std::optional<PosTag> pos;

  bool operator==(const Token&) const = default;
};

struct TokenStream {
  std::string doc_id;
  std::vector<Token> tokens;
  Language language = Language::kSpanish;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
  bool operator==(const TokenStream&) const = default;
};

}  // namespace denise
