#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>

#include "cacheback/ngram.hpp"

namespace cacheback {

/// Deterministic greedy next-token model standing in for the LLM forward
/// pass. greedy_next must be a pure function of the prefix.
class Verifier {
 public:
  virtual ~Verifier() = default;

  virtual TokenId greedy_next(std::span<const TokenId> prefix) const = 0;
  virtual std::optional<TokenId> eos() const { return std::nullopt; }
};

/// Replays a fixed reference continuation: the prediction for a prefix of
/// length n is reference[n - prompt_len], and EOS once the reference runs out.
class ReplayOracle final : public Verifier {
 public:
  ReplayOracle(std::size_t prompt_len, TokenSeq reference, TokenId eos);

  TokenId greedy_next(std::span<const TokenId> prefix) const override;
  std::optional<TokenId> eos() const override { return eos_; }

 private:
  std::size_t prompt_len_;
  TokenSeq reference_;
  TokenId eos_;
};

/// Order-k maximum-likelihood model: predicts the most frequent continuation
/// of the last k tokens (ties to the smaller id), falling back to the
/// corpus-wide most frequent token for unseen or short contexts.
class KGramVerifier final : public Verifier {
 public:
  KGramVerifier(std::size_t k, std::span<const TokenSeq> corpus,
                std::optional<TokenId> eos = std::nullopt);

  TokenId greedy_next(std::span<const TokenId> prefix) const override;
  std::optional<TokenId> eos() const override { return eos_; }

  std::size_t order() const { return k_; }
  TokenId fallback() const { return fallback_; }

 private:
  std::size_t k_;
  std::unordered_map<NGram, TokenId, NGramHash> best_;
  TokenId fallback_ = 0;
  std::optional<TokenId> eos_;
};

/// Plain one-token-at-a-time greedy decoding; the reference output that
/// speculative decoding must reproduce exactly.
TokenSeq greedy_decode(const Verifier& verifier, std::span<const TokenId> prompt,
                       std::size_t max_new_tokens, bool stop_at_eos);

}  // namespace cacheback
