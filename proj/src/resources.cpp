#include "denise/resources.hpp"

#include <cstdlib>

#include "denise/errors.hpp"

namespace denise {

LanguageResources LanguageResources::bundled() {
  LanguageResources resources;
  resources.stopwords = StopwordTable::bundled();
  for (Language language : kSupportedLanguages) {
    resources.lexicons.emplace(language, PosLexicon::bundled(language));
  }
  return resources;
}

LanguageResources LanguageResources::from_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("resource directory not found: " + dir.string());
  }
  LanguageResources resources = bundled();
  const StopwordTable overrides = StopwordTable::load_directory(dir / "stopwords");
  for (Language language : kSupportedLanguages) {
    if (overrides.has(language)) {
      resources.stopwords.set(language, overrides.words(language));
    }
    const auto lexicon_path = dir / "lexicon" / (std::string(language_code(language)) + ".tsv");
    if (std::filesystem::exists(lexicon_path)) {
      resources.lexicons.insert_or_assign(language, PosLexicon::load(lexicon_path));
    }
  }
  return resources;
}

LanguageResources LanguageResources::from_environment() {
  if (const char* dir = std::getenv(kResourceDirEnv); dir != nullptr && *dir != '\0') {
    return from_directory(dir);
  }
  return bundled();
}

const PosLexicon& LanguageResources::lexicon(Language language) const {
  auto it = lexicons.find(language);
  if (it == lexicons.end()) {
    throw UnsupportedLanguage("no POS lexicon for language '" +
                              std::string(language_code(language)) + "'");
  }
  return it->second;
}

}  // namespace denise
