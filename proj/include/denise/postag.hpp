#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "denise/types.hpp"

namespace denise {

struct SuffixRule {
  std::string suffix;
  PosTag tag = PosTag::kOther;
};

// Word-level lexicon plus ordered suffix fallbacks. Lexicon hits always win;
// suffix rules are tried longest-first and only on tokens strictly longer
// than the suffix; anything else is OTHER.
//
// File format (UTF-8 TSV): `token<TAB>TAG` for lexicon entries and
// `-suffix<TAB>TAG` for suffix rules; '#' starts a comment.
class PosLexicon {
 public:
  PosLexicon() = default;
  PosLexicon(std::unordered_map<std::string, PosTag> entries, std::vector<SuffixRule> rules);

  static PosLexicon parse(std::string_view content);
  static PosLexicon load(const std::filesystem::path& path);
  static PosLexicon bundled(Language language);

  PosTag lookup(std::string_view token) const;
  bool contains(std::string_view token) const;

  const std::unordered_map<std::string, PosTag>& entries() const { return entries_; }
  const std::vector<SuffixRule>& rules() const { return rules_; }

 private:
  std::unordered_map<std::string, PosTag> entries_;
  std::vector<SuffixRule> rules_;  // longest suffix first
};

// Tags every token (overwriting existing tags).
TokenStream tag(TokenStream stream, const PosLexicon& lexicon);

// Copies UPOS tags from a CoNLL-U annotation of the same text. Forms are
// normalized and tokenized exactly like the stream; rows that normalize to
// nothing (punctuation) are skipped, as are comments, multiword ranges and
// empty nodes. UPOS values outside the coarse tagset collapse (PROPN -> NOUN,
// everything else -> OTHER).
TokenStream load_conllu_tags(TokenStream stream, std::string_view conllu);

PosTag coarse_from_upos(std::string_view upos);

}  // namespace denise
