#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cacheback {

/// Synthetic whitespace-tokenized corpus with two kinds of locality:
/// corpus-wide stock phrases (Zipf-weighted, so a frequency table learns
/// them) and per-document topic phrases that recur within one document
/// only (so a recency table learns them). Everything else is filler drawn
/// uniformly from a shared vocabulary.
struct DeskCorpusOptions {
  std::size_t documents = 60;
  std::size_t doc_tokens = 400;
  std::size_t shared_words = 400;
  std::size_t common_phrases = 48;
  std::size_t topic_phrases = 4;  // per document
  std::size_t topic_words = 10;   // per document
  std::size_t phrase_min = 4;
  std::size_t phrase_max = 8;
  double p_common = 0.3;  // segment is a stock phrase
  double p_topic = 0.3;   // segment is one of the document's topic phrases
  std::uint64_t seed = 7;
};

/// One string per document; deterministic in `options`.
std::vector<std::string> generate_desk_corpus(const DeskCorpusOptions& options);

}  // namespace cacheback
