#include "denise/types.hpp"

namespace denise {

std::string_view language_code(Language language) {
  switch (language) {
    case Language::kSpanish: return "es";
    case Language::kCatalan: return "ca";
    case Language::kFrench: return "fr";
  }
  return "??";
}

std::optional<Language> parse_language(std::string_view code) {
  for (Language language : kSupportedLanguages) {
    if (language_code(language) == code) return language;
  }
  return std::nullopt;
}

std::string_view pos_name(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun: return "NOUN";
    case PosTag::kVerb: return "VERB";
    case PosTag::kAdj: return "ADJ";
    case PosTag::kAdv: return "ADV";
    case PosTag::kOther: return "OTHER";
  }
  return "OTHER";
}

std::optional<PosTag> parse_pos(std::string_view name) {
  for (PosTag tag : {PosTag::kNoun, PosTag::kVerb, PosTag::kAdj, PosTag::kAdv,
                     PosTag::kOther}) {
    if (pos_name(tag) == name) return tag;
  }
  return std::nullopt;
}

bool is_content_tag(PosTag tag) {
  return tag == PosTag::kNoun || tag == PosTag::kVerb || tag == PosTag::kAdj;
}

}  // namespace denise
