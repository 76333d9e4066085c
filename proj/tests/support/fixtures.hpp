#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "denise/embeddings.hpp"
#include "denise/pipeline.hpp"
#include "denise/storage.hpp"
#include "denise/topicmodel.hpp"

namespace denise::testing {

inline constexpr const char* kCs = "informática";
inline constexpr const char* kHealth = "salud";
inline constexpr const char* kNature = "naturaleza";

// Real Spanish vocabulary of each toy topic.
const std::vector<std::string>& cs_words();
const std::vector<std::string>& health_words();
const std::vector<std::string>& nature_words();

// 3 topics x 30 generated documents.
LabeledCorpus toy_corpus();
TopicModel toy_topic_model();

// Three well separated clusters of 150 entries each: computing (teclado,
// pantalla, ...), health (virus, ...) and nature (gusano, nube, ...). Every
// cluster holds its topic's words padded with out-of-vocabulary fillers.
std::vector<std::pair<std::string, std::vector<float>>> toy_vector_entries();
EmbeddingStore toy_store(Backend backend = Backend::kPlain);
PipelineModels toy_models(Backend backend = Backend::kPlain);

// Computing text mentioning virus, gusano, nube, teclado and pantalla.
std::string cs_text();

// 125 term-concordance rows; the first 100 terms are stored in toy_store().
std::vector<TermConcordance> batch_rows();

// 3 classes x 100 documents: class vocabularies with 20% shared noise.
struct SyntheticCorpus {
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<TokenStream> streams;
};
SyntheticCorpus synthetic_corpus(std::uint64_t seed);

}  // namespace denise::testing
