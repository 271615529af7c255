#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cacheback/ngram.hpp"

namespace cacheback {

enum class TokenizerMode { kWhitespace, kByte };

TokenizerMode parse_tokenizer_mode(std::string_view name);

/// Insertion-ordered word vocabulary for the whitespace tokenizer.
class Vocabulary {
 public:
  TokenId intern(std::string_view word);
  const std::string& word(TokenId id) const { return words_.at(id); }
  std::size_t size() const { return words_.size(); }

  /// One word per line; the line number is the id.
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, TokenId> ids_;
};

/// Whitespace mode splits on ASCII whitespace and interns each word into
/// `vocab`; byte mode maps each byte to its value and ignores `vocab`.
TokenSeq tokenize(std::string_view text, TokenizerMode mode, Vocabulary& vocab);

enum class CorpusMode { kFile, kLine };

/// Reads documents: each file is one document, or each non-empty line is.
std::vector<std::string> read_documents(const std::vector<std::string>& paths, CorpusMode mode);

/// Indices kept by a seeded Bernoulli sample with probability `fraction` in
/// (0, 1], ascending.
std::vector<std::size_t> sample_indices(std::size_t n, double fraction, std::uint64_t seed);

/// Seeded Bernoulli sample keeping each document with probability
/// `fraction` in (0, 1]. Order is preserved.
std::vector<std::string> sample_documents(const std::vector<std::string>& docs, double fraction,
                                          std::uint64_t seed);

}  // namespace cacheback
