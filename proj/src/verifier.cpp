#include "cacheback/verifier.hpp"

#include <map>
#include <utility>

namespace cacheback {

ReplayOracle::ReplayOracle(std::size_t prompt_len, TokenSeq reference, TokenId eos)
    : prompt_len_(prompt_len), reference_(std::move(reference)), eos_(eos) {}

TokenId ReplayOracle::greedy_next(std::span<const TokenId> prefix) const {
  if (prefix.size() < prompt_len_) throw UsageError("replay oracle: prefix shorter than prompt");
  const std::size_t i = prefix.size() - prompt_len_;
  return i < reference_.size() ? reference_[i] : eos_;
}

KGramVerifier::KGramVerifier(std::size_t k, std::span<const TokenSeq> corpus,
                             std::optional<TokenId> eos)
    : k_(k), eos_(eos) {
  if (k == 0 || k > kMaxGramLength) throw UsageError("kgram verifier: order must be in [1, 8]");

  std::unordered_map<NGram, std::map<TokenId, std::uint64_t>, NGramHash> next;
  std::map<TokenId, std::uint64_t> unigram;
  for (const TokenSeq& doc : corpus) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      ++unigram[doc[i]];
      if (i >= k) ++next[NGram(std::span<const TokenId>(doc.data() + i - k, k))][doc[i]];
    }
  }

  // std::map iterates ids ascending, so strict > keeps the smallest id on ties.
  auto argmax = [](const std::map<TokenId, std::uint64_t>& counts) {
    TokenId best = 0;
    std::uint64_t best_n = 0;
    for (const auto& [tok, n] : counts) {
      if (n > best_n) {
        best = tok;
        best_n = n;
      }
    }
    return best;
  };
  fallback_ = argmax(unigram);
  best_.reserve(next.size());
  for (const auto& [ctx, counts] : next) best_.emplace(ctx, argmax(counts));
}

TokenId KGramVerifier::greedy_next(std::span<const TokenId> prefix) const {
  if (prefix.size() < k_) return fallback_;
  auto it = best_.find(NGram(prefix.last(k_)));
  return it == best_.end() ? fallback_ : it->second;
}

TokenSeq greedy_decode(const Verifier& verifier, std::span<const TokenId> prompt,
                       std::size_t max_new_tokens, bool stop_at_eos) {
  TokenSeq seq(prompt.begin(), prompt.end());
  const auto eos = verifier.eos();
  for (std::size_t i = 0; i < max_new_tokens; ++i) {
    const TokenId t = verifier.greedy_next(seq);
    seq.push_back(t);
    if (stop_at_eos && eos && t == *eos) break;
  }
  return TokenSeq(seq.begin() + static_cast<std::ptrdiff_t>(prompt.size()), seq.end());
}

}  // namespace cacheback
