#include <doctest.h>

#include <random>
#include <string>

#include "denise/errors.hpp"
#include "denise/textprep.hpp"

using namespace denise;

namespace {

const StopwordTable& table() {
  static const StopwordTable t = StopwordTable::bundled();
  return t;
}

std::vector<std::string> words_of(const TokenStream& s) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens) out.push_back(t.normalized);
  return out;
}

// Random byte strings biased towards UTF-8 sequences from several scripts.
std::string random_text(std::mt19937_64& rng) {
  static const char* pieces[] = {"a",  "Z",  "é",  "Ñ",  "ç",  "ß",  "α",  "漢", "й",  "-",
                                 "_",  " ",  "\t", "\n", ",",  "!",  "¿",  "«",  "»",  "1",
                                 "٣",  "é", "́", "​", "\xff", "\xc3", "—", "ﬁ", "Ⓐ", "x"};
  std::string out;
  const std::size_t n = rng() % 40;
  for (std::size_t i = 0; i < n; ++i) out += pieces[rng() % std::size(pieces)];
  return out;
}

}  // namespace

TEST_CASE("normalize examples") {
  CHECK(normalize("Virus INFORMÁTICO, ¡nuevo!") == "virus informático nuevo");
  CHECK(normalize("") == "");
  CHECK(normalize("αβγ 漢字") == "");
  CHECK(normalize("  la\tnube\n\n es ") == "la nube es");
  CHECK(normalize("correo_electrónico e-mail") == "correo_electrónico e-mail");
  // decomposed input is composed
  CHECK(normalize("informática") == "informática");
}

TEST_CASE("normalize is idempotent and tokens respect the character invariant") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5000; ++i) {
    const std::string text = random_text(rng);
    const std::string once = normalize(text);
    REQUIRE(normalize(once) == once);
    for (const Token& token : tokenize(once, Language::kSpanish).tokens) {
      REQUIRE(is_valid_token(token.normalized));
    }
  }
}

TEST_CASE("tokenize examples") {
  const TokenStream s = tokenize("la nube es viral", Language::kSpanish, "d1");
  CHECK(words_of(s) == std::vector<std::string>{"la", "nube", "es", "viral"});
  for (std::size_t i = 0; i < s.tokens.size(); ++i) CHECK(s.tokens[i].position == i);
  CHECK(s.doc_id == "d1");
  CHECK(words_of(tokenize("correo_electrónico falló", Language::kSpanish)) ==
        std::vector<std::string>{"correo_electrónico", "falló"});
  CHECK(tokenize("", Language::kSpanish).empty());
  CHECK(words_of(tokenize("-guion- __", Language::kSpanish)) == std::vector<std::string>{"guion"});
}

TEST_CASE("remove_stopwords") {
  const TokenStream s = tokenize("la nube es viral", Language::kSpanish);
  const TokenStream kept = remove_stopwords(s, table());
  CHECK(words_of(kept) == std::vector<std::string>{"nube", "viral"});
  CHECK(kept.tokens[0].position == 1);
  CHECK(kept.tokens[1].position == 3);

  CHECK(remove_stopwords(TokenStream{}, table()).empty());
  const TokenStream content = tokenize("nube viral", Language::kSpanish);
  CHECK(remove_stopwords(content, table()) == content);

  StopwordTable only_es;
  only_es.set(Language::kSpanish, {"la"});
  CHECK_THROWS_AS(remove_stopwords(tokenize("la", Language::kFrench), only_es), UnsupportedLanguage);
}

TEST_CASE("bundled stopword tables") {
  for (Language lang : kSupportedLanguages) {
    const auto& words = table().words(lang);
    CHECK(words.size() >= 250);
    for (const std::string& w : words) CHECK(normalize(w) == w);
  }
  CHECK(table().contains(Language::kSpanish, "la"));
  CHECK(table().contains(Language::kSpanish, "es"));
}

TEST_CASE("stopword parsing") {
  const auto words = StopwordTable::parse("# comment\nLa\n\n  ÉL \n");
  CHECK(words == StopwordTable::WordSet{"la", "él"});
  CHECK_THROWS_AS(StopwordTable::parse("el qual\n"), FormatError);
}

TEST_CASE("detect_language examples") {
  const LanguageGuess es = detect_language("el virus se propaga por la red de la empresa", table());
  CHECK(es.supported);
  CHECK(es.language == Language::kSpanish);

  const LanguageGuess en = detect_language("the quick brown fox jumps over things", table());
  CHECK_FALSE(en.supported);
  CHECK_FALSE(en.language.has_value());
  for (double s : en.scores) CHECK(s < kLanguageDetectionThreshold);

  CHECK_FALSE(detect_language("", table()).supported);

  CHECK(detect_language("el virus informàtic es propaga per la xarxa de l'empresa i els usuaris", table())
            .language == Language::kCatalan);
  CHECK(detect_language("le virus se propage dans le réseau de l'entreprise avec les utilisateurs", table())
            .language == Language::kFrench);
}

TEST_CASE("detect_language on stopword-only Spanish text") {
  std::vector<std::string> es(table().words(Language::kSpanish).begin(),
                              table().words(Language::kSpanish).end());
  std::sort(es.begin(), es.end());
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const std::size_t n = 30 + rng() % 30;
    for (std::size_t i = 0; i < n; ++i) text += es[rng() % es.size()] + " ";
    const LanguageGuess g = detect_language(text, table());
    REQUIRE(g.supported);
    REQUIRE(g.language == Language::kSpanish);
  }
}

TEST_CASE("utf8_length counts code points") {
  CHECK(utf8_length("") == 0);
  CHECK(utf8_length("informática") == 11);
  CHECK(utf8_length("漢字") == 2);
}
