#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string_view>

#include "denise/postag.hpp"
#include "denise/textprep.hpp"

namespace denise {

namespace detail {
// Contents of a file under resources/, e.g. "stopwords/es.txt".
std::optional<std::string_view> bundled_resource(std::string_view name);
}  // namespace detail

// Environment variable naming an override directory with the same layout as
// resources/ (stopwords/<code>.txt, lexicon/<code>.tsv).
inline constexpr const char* kResourceDirEnv = "DENISE_RESOURCE_DIR";

// Per-language linguistic resources used by the text side of the pipeline.
struct LanguageResources {
  StopwordTable stopwords;
  std::map<Language, PosLexicon> lexicons;

  static LanguageResources bundled();
  // Files missing from dir fall back to the bundled copy.
  static LanguageResources from_directory(const std::filesystem::path& dir);
  // from_directory($DENISE_RESOURCE_DIR) when set, bundled() otherwise.
  static LanguageResources from_environment();

  // Throws UnsupportedLanguage when the language has no lexicon.
  const PosLexicon& lexicon(Language language) const;
};

}  // namespace denise
