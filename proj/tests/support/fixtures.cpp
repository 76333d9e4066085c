#include "fixtures.hpp"

#include <cstdio>
#include <map>
#include <random>

namespace denise::testing {
namespace {

std::string numbered(const char* prefix, std::size_t n) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%s%03zu", prefix, n);
  return buffer;
}

std::vector<std::pair<std::string, std::vector<std::string>>> topics() {
  return {{kCs, cs_words()}, {kHealth, health_words()}, {kNature, nature_words()}};
}

}  // namespace

const std::vector<std::string>& cs_words() {
  static const std::vector<std::string> words = {
      "ordenador", "teclado",  "pantalla",   "software",   "programa",   "servidor",
      "archivo",   "sistema",  "memoria",    "procesador", "código",     "aplicación",
      "internet",  "usuario",  "contraseña", "navegador",  "correo",     "descarga",
      "impresora", "ratón",    "disco",      "portátil",   "algoritmo",  "hardware",
      "red",       "datos",    "instalación"};
  return words;
}

const std::vector<std::string>& health_words() {
  static const std::vector<std::string> words = {
      "virus",      "enfermedad", "paciente",  "médico",  "hospital",    "infección",
      "fiebre",     "vacuna",     "síntoma",   "tratamiento", "bacteria", "contagio",
      "epidemia",   "gripe",      "sangre",    "diagnóstico", "dolor",    "cirugía",
      "medicamento", "enfermera"};
  return words;
}

const std::vector<std::string>& nature_words() {
  static const std::vector<std::string> words = {
      "gusano", "nube",    "tierra", "planta",  "animal", "bosque",  "lluvia",
      "cielo",  "río",     "árbol",  "suelo",   "lombriz", "insecto", "campo",
      "montaña", "tormenta", "clima", "agua",   "hoja",   "flor",    "semilla",
      "jardín", "pájaro",  "viento", "nieve"};
  return words;
}

LabeledCorpus toy_corpus() {
  std::mt19937_64 rng(20191);
  LabeledCorpus corpus;
  std::size_t row = 0;
  for (const auto& [label, words] : topics()) {
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    for (int d = 0; d < 30; ++d) {
      std::string text = "El texto trata de";
      for (int w = 0; w < 25; ++w) text += " " + words[pick(rng)];
      text += ".";
      RawDocument doc;
      doc.id = "row-" + std::to_string(++row);
      doc.text = std::move(text);
      corpus.documents.push_back({label, std::move(doc)});
    }
  }
  return corpus;
}

TopicModel toy_topic_model() {
  static const TopicModel model = [] {
    const StopwordTable stopwords = StopwordTable::bundled();
    std::vector<TokenStream> streams;
    std::vector<std::string> labels;
    for (const auto& doc : toy_corpus().documents) {
      streams.push_back(prepare_text(doc.document.text, Language::kSpanish, stopwords));
      labels.push_back(doc.label);
    }
    return train_topic_model(streams, labels, Language::kSpanish);
  }();
  return model;
}

std::vector<std::pair<std::string, std::vector<float>>> toy_vector_entries() {
  constexpr std::size_t kDim = 24;
  constexpr std::size_t kClusterSize = 150;
  static const char* kFillers[] = {"cpx", "hlx", "ntx"};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<float> noise(-0.15F, 0.15F);
  std::vector<std::pair<std::string, std::vector<float>>> entries;
  const auto all = topics();
  for (std::size_t c = 0; c < all.size(); ++c) {
    std::vector<std::string> keys = all[c].second;
    for (std::size_t n = 0; keys.size() < kClusterSize; ++n) keys.push_back(numbered(kFillers[c], n));
    for (const std::string& key : keys) {
      std::vector<float> v(kDim);
      for (float& x : v) x = noise(rng);
      v[c] += 1.0F;
      entries.emplace_back(key, std::move(v));
    }
  }
  return entries;
}

EmbeddingStore toy_store(Backend backend) {
  auto entries = toy_vector_entries();
  if (backend == Backend::kSense) {
    for (auto& [key, v] : entries) key += "|NOUN";
  }
  std::vector<std::pair<std::string, std::vector<float>>> grams;
  if (backend == Backend::kSubword) {
    // n-gram vectors averaged from the words that contain them
    std::map<std::string, std::pair<std::vector<float>, int>> sums;
    for (const auto& [key, v] : entries) {
      for (const std::string& g : char_ngrams(key)) {
        auto& [sum, count] = sums[g];
        if (sum.empty()) sum.assign(v.size(), 0.0F);
        for (std::size_t d = 0; d < v.size(); ++d) sum[d] += v[d];
        ++count;
      }
    }
    for (auto& [g, acc] : sums) {
      for (float& x : acc.first) x /= static_cast<float>(acc.second);
      grams.emplace_back(g, std::move(acc.first));
    }
  }
  return EmbeddingStore::from_entries(backend, 24, std::move(entries), std::move(grams));
}

PipelineModels toy_models(Backend backend) {
  PipelineModels models;
  models.resources = LanguageResources::bundled();
  models.topic_models.emplace(Language::kSpanish, toy_topic_model());
  models.store = toy_store(backend);
  return models;
}

std::string cs_text() {
  return "El virus y el gusano atacan el ordenador. El virus entra en el servidor y el gusano "
         "llega a la nube. En la nube el servidor guarda el ordenador del usuario. El usuario "
         "limpia el teclado y la pantalla del ordenador.";
}

std::vector<TermConcordance> batch_rows() {
  std::vector<std::string> terms;
  for (const auto& [key, v] : toy_vector_entries()) {
    if (terms.size() == 100) break;
    terms.push_back(key);
  }
  for (std::size_t n = 0; n < 25; ++n) terms.push_back(numbered("nsx", n));
  std::vector<TermConcordance> rows;
  for (const std::string& term : terms) {
    rows.push_back({term, "Según la revista, el término " + term +
                              " se usa cada vez más entre los usuarios de la red y los expertos "
                              "lo consideran una palabra con un sentido nuevo en el ámbito técnico."});
  }
  return rows;
}

SyntheticCorpus synthetic_corpus(std::uint64_t seed) {
  constexpr std::size_t kVocab = 60;
  constexpr std::size_t kDocsPerClass = 100;
  constexpr std::size_t kTokens = 30;
  constexpr double kNoiseShare = 0.2;
  static const char* kClasses[] = {"clase_a", "clase_b", "clase_c"};
  static const char* kPrefixes[] = {"aa", "bb", "cc"};

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> word(0, kVocab - 1);
  std::bernoulli_distribution noisy(kNoiseShare);
  SyntheticCorpus corpus;
  std::size_t doc = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t d = 0; d < kDocsPerClass; ++d) {
      TokenStream stream;
      stream.doc_id = numbered("doc-", doc++);
      for (std::size_t t = 0; t < kTokens; ++t) {
        const std::string term = noisy(rng) ? numbered("zz", word(rng)) : numbered(kPrefixes[c], word(rng));
        stream.tokens.push_back({term, term, t, std::nullopt});
      }
      corpus.ids.push_back(stream.doc_id);
      corpus.labels.push_back(kClasses[c]);
      corpus.streams.push_back(std::move(stream));
    }
  }
  return corpus;
}

}  // namespace denise::testing
