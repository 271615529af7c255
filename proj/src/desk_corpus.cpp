#include "cacheback/desk_corpus.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace cacheback {

namespace {

// Portable draws from mt19937_64 (the standard distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

  // Index i drawn with weight 1 / (i + 1).
  std::size_t zipf(const std::vector<double>& cumulative) {
    const double u = uniform() * cumulative.back();
    std::size_t i = 0;
    while (i + 1 < cumulative.size() && cumulative[i] <= u) ++i;
    return i;
  }

 private:
  std::mt19937_64 gen_;
};

using Phrase = std::vector<std::string>;

}  // namespace

std::vector<std::string> generate_desk_corpus(const DeskCorpusOptions& o) {
  if (o.shared_words == 0 || o.phrase_min == 0 || o.phrase_min > o.phrase_max ||
      o.p_common < 0 || o.p_topic < 0 || o.p_common + o.p_topic > 1.0) {
    throw std::invalid_argument("desk corpus: invalid options");
  }
  Rng rng(o.seed);
  auto shared = [&](std::size_t i) { return "w" + std::to_string(i); };

  std::vector<Phrase> common(o.common_phrases);
  for (auto& p : common) {
    const std::size_t len = rng.between(o.phrase_min, o.phrase_max);
    for (std::size_t i = 0; i < len; ++i) p.push_back(shared(rng.below(o.shared_words)));
  }
  std::vector<double> cumulative;
  double acc = 0;
  for (std::size_t i = 0; i < common.size(); ++i) cumulative.push_back(acc += 1.0 / double(i + 1));

  std::vector<std::string> docs;
  docs.reserve(o.documents);
  for (std::size_t d = 0; d < o.documents; ++d) {
    // Topic phrases interleave document-local words with shared ones, so the
    // same shared leader gets different followers in different documents.
    std::vector<Phrase> topics(o.topic_phrases);
    for (auto& p : topics) {
      const std::size_t len = rng.between(o.phrase_min, o.phrase_max);
      for (std::size_t i = 0; i < len; ++i) {
        if (o.topic_words > 0 && rng.uniform() < 0.6) {
          p.push_back("d" + std::to_string(d) + "_" + std::to_string(rng.below(o.topic_words)));
        } else {
          p.push_back(shared(rng.below(o.shared_words)));
        }
      }
    }

    std::string text;
    std::size_t n = 0;
    auto emit = [&](const std::string& w) {
      if (!text.empty()) text += ' ';
      text += w;
      ++n;
    };
    while (n < o.doc_tokens) {
      const double u = rng.uniform();
      if (u < o.p_common && !common.empty()) {
        for (const auto& w : common[rng.zipf(cumulative)]) emit(w);
      } else if (u < o.p_common + o.p_topic && !topics.empty()) {
        for (const auto& w : topics[rng.below(topics.size())]) emit(w);
      } else {
        emit(shared(rng.below(o.shared_words)));
      }
    }
    docs.push_back(std::move(text));
  }
  return docs;
}

}  // namespace cacheback
