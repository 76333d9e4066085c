#include "denise/textprep.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>
#include <unicode/utf16.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "denise/errors.hpp"
#include "denise/resources.hpp"

namespace denise {

namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || instance == nullptr) {
    throw Error("ICU NFC normalizer unavailable");
  }
  return *instance;
}

icu::UnicodeString to_nfc(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(text, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  return out;
}

bool is_latin_letter(UChar32 c) {
  if (!u_isalpha(c)) return false;
  UErrorCode status = U_ZERO_ERROR;
  return uscript_getScript(c, &status) == USCRIPT_LATIN && U_SUCCESS(status);
}

bool is_mark(int8_t category) {
  return category == U_NON_SPACING_MARK || category == U_ENCLOSING_MARK ||
         category == U_COMBINING_SPACING_MARK;
}

bool is_separator_like(UChar32 c, int8_t category) {
  if (u_isUWhiteSpace(c)) return true;
  switch (category) {
    case U_CONTROL_CHAR:
    case U_SPACE_SEPARATOR:
    case U_LINE_SEPARATOR:
    case U_PARAGRAPH_SEPARATOR:
    case U_DASH_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_CONNECTOR_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
    case U_MATH_SYMBOL:
    case U_CURRENCY_SYMBOL:
    case U_MODIFIER_SYMBOL:
    case U_OTHER_SYMBOL:
      return true;
    default:
      return false;
  }
}

bool is_ascii_digit(UChar32 c) { return c >= '0' && c <= '9'; }
bool is_joiner(UChar32 c) { return c == '-' || c == '_'; }

std::string to_utf8(const icu::UnicodeString& text) {
  std::string out;
  text.toUTF8String(out);
  return out;
}

}  // namespace

std::string normalize(std::string_view text) {
  icu::UnicodeString input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  input = to_nfc(input);
  input.toLower(icu::Locale::getRoot());
  input = to_nfc(input);

  icu::UnicodeString out;
  bool pending_space = false;
  bool after_letter = false;
  auto emit = [&](UChar32 c) {
    if (pending_space && !out.isEmpty()) out.append(static_cast<UChar>(' '));
    pending_space = false;
    out.append(c);
  };

  for (int32_t i = 0; i < input.length();) {
    const UChar32 c = input.char32At(i);
    i += U16_LENGTH(c);
    const auto category = static_cast<int8_t>(u_charType(c));

    if (is_latin_letter(c)) {
      emit(c);
      after_letter = true;
    } else if (is_ascii_digit(c) || is_joiner(c)) {
      emit(c);
      after_letter = false;
    } else if (is_mark(category)) {
      // Marks survive only on a kept Latin letter.
      if (after_letter) out.append(c);
    } else if (is_separator_like(c, category)) {
      pending_space = true;
      after_letter = false;
    } else {
      // Non-Latin letters, other digits, format characters: dropped.
      after_letter = false;
    }
  }
  return to_utf8(to_nfc(out));
}

bool is_valid_token(std::string_view token) {
  if (token.empty()) return false;
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(token.data(), static_cast<int32_t>(token.size())));
  if (to_utf8(text) != token) return false;  // invalid UTF-8

  bool after_letter = false;
  bool first = true;
  UChar32 last = 0;
  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    const auto category = static_cast<int8_t>(u_charType(c));
    if (is_latin_letter(c)) {
      after_letter = true;
    } else if (is_mark(category)) {
      if (!after_letter) return false;
    } else if (is_ascii_digit(c)) {
      after_letter = false;
    } else if (is_joiner(c)) {
      if (first) return false;
      after_letter = false;
    } else {
      return false;
    }
    first = false;
    last = c;
  }
  return !is_joiner(last);
}

TokenStream tokenize(std::string_view normalized_text, Language language,
                     std::string doc_id) {
  TokenStream stream;
  stream.doc_id = std::move(doc_id);
  stream.language = language;

  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  // Only ASCII punctuation can border a token once text is normalized.
  auto is_edge_punct = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u) != 0;
  };

  std::size_t i = 0;
  while (i < normalized_text.size()) {
    while (i < normalized_text.size() && is_space(normalized_text[i])) ++i;
    std::size_t j = i;
    while (j < normalized_text.size() && !is_space(normalized_text[j])) ++j;
    std::string_view word = normalized_text.substr(i, j - i);
    while (!word.empty() && is_edge_punct(word.front())) word.remove_prefix(1);
    while (!word.empty() && is_edge_punct(word.back())) word.remove_suffix(1);
    if (!word.empty()) {
      Token token;
      token.surface = std::string(word);
      token.normalized = std::string(word);
      token.position = stream.tokens.size();
      stream.tokens.push_back(std::move(token));
    }
    i = j;
  }
  return stream;
}

StopwordTable StopwordTable::bundled() {
  StopwordTable table;
  for (Language language : kSupportedLanguages) {
    const std::string name = "stopwords/" + std::string(language_code(language)) + ".txt";
    auto content = detail::bundled_resource(name);
    if (!content) throw Error("missing bundled resource " + name);
    table.set(language, parse(*content));
  }
  return table;
}

StopwordTable StopwordTable::load_directory(const std::filesystem::path& dir) {
  StopwordTable table;
  for (Language language : kSupportedLanguages) {
    const auto path = dir / (std::string(language_code(language)) + ".txt");
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    table.set(language, parse(buffer.str()));
  }
  return table;
}

StopwordTable::WordSet StopwordTable::parse(std::string_view content) {
  WordSet words;
  std::size_t line_no = 0;
  while (!content.empty()) {
    ++line_no;
    const auto eol = content.find('\n');
    std::string_view line = content.substr(0, eol);
    content = eol == std::string_view::npos ? std::string_view{} : content.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::string word = normalize(line);
    if (word.empty()) continue;
    if (word.find(' ') != std::string::npos) {
      throw FormatError("stopword entry must be a single word", line_no);
    }
    words.insert(std::move(word));
  }
  return words;
}

void StopwordTable::set(Language language, WordSet words) {
  tables_[language] = std::move(words);
}

const StopwordTable::WordSet& StopwordTable::words(Language language) const {
  auto it = tables_.find(language);
  if (it == tables_.end()) {
    throw UnsupportedLanguage("no stopword table for language '" +
                              std::string(language_code(language)) + "'");
  }
  return it->second;
}

bool StopwordTable::contains(Language language, std::string_view word) const {
  auto it = tables_.find(language);
  return it != tables_.end() && it->second.contains(std::string(word));
}

TokenStream remove_stopwords(const TokenStream& stream, const StopwordTable& table) {
  const auto& words = table.words(stream.language);
  TokenStream out;
  out.doc_id = stream.doc_id;
  out.language = stream.language;
  for (const Token& token : stream.tokens) {
    if (!words.contains(token.normalized)) out.tokens.push_back(token);
  }
  return out;
}

LanguageGuess detect_language(std::string_view text, const StopwordTable& table) {
  LanguageGuess guess;
  const TokenStream stream = tokenize(normalize(text), Language::kSpanish);
  if (stream.empty()) return guess;

  std::size_t best = 0;
  for (std::size_t l = 0; l < kSupportedLanguages.size(); ++l) {
    const Language language = kSupportedLanguages[l];
    if (!table.has(language)) continue;
    const auto& words = table.words(language);
    std::size_t hits = 0;
    for (const Token& token : stream.tokens) {
      if (words.contains(token.normalized)) ++hits;
    }
    guess.scores[l] = static_cast<double>(hits) / static_cast<double>(stream.size());
    if (guess.scores[l] > guess.scores[best]) best = l;
  }
  if (guess.scores[best] >= kLanguageDetectionThreshold) {
    guess.supported = true;
    guess.language = kSupportedLanguages[best];
  }
  return guess;
}

TokenStream prepare_text(std::string_view text, Language language,
                         const StopwordTable& table, std::string doc_id) {
  return remove_stopwords(tokenize(normalize(text), language, std::move(doc_id)), table);
}

std::size_t utf8_length(std::string_view text) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < text.size();) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t width = 1;
    if (lead >= 0xF0 && lead < 0xF8) width = 4;
    else if (lead >= 0xE0) width = lead < 0xF0 ? 3 : 1;
    else if (lead >= 0xC0) width = 2;
    bool valid = i + width <= text.size();
    for (std::size_t k = 1; valid && k < width; ++k) {
      valid = (static_cast<unsigned char>(text[i + k]) & 0xC0) == 0x80;
    }
    i += valid ? width : 1;
    ++count;
  }
  return count;
}

}  // namespace denise
