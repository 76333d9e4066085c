#include "denise/postag.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "denise/errors.hpp"
#include "denise/resources.hpp"
#include "denise/textprep.hpp"

namespace denise {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

}  // namespace

PosLexicon::PosLexicon(std::unordered_map<std::string, PosTag> entries,
                       std::vector<SuffixRule> rules)
    : entries_(std::move(entries)), rules_(std::move(rules)) {
  std::stable_sort(rules_.begin(), rules_.end(), [](const SuffixRule& a, const SuffixRule& b) {
    const auto la = utf8_length(a.suffix);
    const auto lb = utf8_length(b.suffix);
    if (la != lb) return la > lb;
    return a.suffix < b.suffix;
  });
  for (std::size_t i = 1; i < rules_.size(); ++i) {
    if (rules_[i].suffix == rules_[i - 1].suffix) {
      throw FormatError("duplicate suffix rule '-" + rules_[i].suffix + "'", 0);
    }
  }
}

PosLexicon PosLexicon::parse(std::string_view content) {
  std::unordered_map<std::string, PosTag> entries;
  std::vector<SuffixRule> rules;
  std::size_t line_no = 0;
  while (!content.empty()) {
    ++line_no;
    const auto eol = content.find('\n');
    std::string_view line = content.substr(0, eol);
    content = eol == std::string_view::npos ? std::string_view{} : content.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto fields = split(line, '\t');
    if (fields.size() != 2) throw FormatError("expected token<TAB>TAG", line_no);
    const auto tag = parse_pos(trim(fields[1]));
    if (!tag) throw FormatError("unknown tag '" + std::string(fields[1]) + "'", line_no);

    std::string_view key = trim(fields[0]);
    const bool is_suffix = !key.empty() && key.front() == '-';
    if (is_suffix) key.remove_prefix(1);
    std::string word = normalize(key);
    if (!is_valid_token(word)) {
      throw FormatError("invalid lexicon token '" + std::string(key) + "'", line_no);
    }
    if (is_suffix) {
      rules.push_back({std::move(word), *tag});
    } else if (!entries.emplace(std::move(word), *tag).second) {
      throw FormatError("duplicate lexicon entry '" + std::string(key) + "'", line_no);
    }
  }
  return PosLexicon(std::move(entries), std::move(rules));
}

PosLexicon PosLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read lexicon " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

PosLexicon PosLexicon::bundled(Language language) {
  const std::string name = "lexicon/" + std::string(language_code(language)) + ".tsv";
  auto content = detail::bundled_resource(name);
  if (!content) throw Error("missing bundled resource " + name);
  return parse(*content);
}

PosTag PosLexicon::lookup(std::string_view token) const {
  if (auto it = entries_.find(std::string(token)); it != entries_.end()) return it->second;
  for (const SuffixRule& rule : rules_) {
    if (token.size() > rule.suffix.size() && token.ends_with(rule.suffix)) return rule.tag;
  }
  return PosTag::kOther;
}

bool PosLexicon::contains(std::string_view token) const {
  return entries_.contains(std::string(token));
}

TokenStream tag(TokenStream stream, const PosLexicon& lexicon) {
  for (Token& token : stream.tokens) token.pos = lexicon.lookup(token.normalized);
  return stream;
}

PosTag coarse_from_upos(std::string_view upos) {
  if (upos == "NOUN" || upos == "PROPN") return PosTag::kNoun;
  if (upos == "VERB") return PosTag::kVerb;
  if (upos == "ADJ") return PosTag::kAdj;
  if (upos == "ADV") return PosTag::kAdv;
  return PosTag::kOther;
}

TokenStream load_conllu_tags(TokenStream stream, std::string_view conllu) {
  struct Annotated {
    std::string normalized;
    PosTag tag;
  };
  std::vector<Annotated> annotated;

  std::size_t line_no = 0;
  while (!conllu.empty()) {
    ++line_no;
    const auto eol = conllu.find('\n');
    std::string_view line = conllu.substr(0, eol);
    conllu = eol == std::string_view::npos ? std::string_view{} : conllu.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split(line, '\t');
    if (fields.size() != 10) throw FormatError("CoNLL-U row must have 10 columns", line_no);
    const std::string_view id = fields[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) {
      continue;
    }
    const PosTag coarse = coarse_from_upos(fields[3]);
    for (Token& t : tokenize(normalize(fields[1]), stream.language).tokens) {
      annotated.push_back({std::move(t.normalized), coarse});
    }
  }

  for (std::size_t i = 0; i < annotated.size(); ++i) {
    if (i >= stream.tokens.size()) {
      throw AlignmentError("annotation has more tokens than the stream (" +
                               std::to_string(annotated.size()) + " vs " +
                               std::to_string(stream.tokens.size()) + ")",
                           i);
    }
    if (annotated[i].normalized != stream.tokens[i].normalized) {
      throw AlignmentError("annotation form '" + annotated[i].normalized +
                               "' does not match token '" + stream.tokens[i].normalized + "'",
                           i);
    }
    stream.tokens[i].pos = annotated[i].tag;
  }
  if (annotated.size() < stream.tokens.size()) {
    throw AlignmentError("annotation has fewer tokens than the stream", annotated.size());
  }
  return stream;
}

}  // namespace denise
