#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace cacheback {

using TokenId = std::uint32_t;
using TokenSeq = std::vector<TokenId>;

// Leaders and followers are short; storing them inline keeps table nodes
// allocation-free and cheap to copy.
inline constexpr std::size_t kMaxGramLength = 8;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fixed-capacity token tuple used for both leaders and followers.
class NGram {
 public:
  NGram() = default;

  explicit NGram(std::span<const TokenId> tokens) {
    if (tokens.size() > kMaxGramLength) {
      throw UsageError("n-gram longer than kMaxGramLength");
    }
    std::copy(tokens.begin(), tokens.end(), tokens_.begin());
    size_ = static_cast<std::uint8_t>(tokens.size());
  }

  NGram(std::initializer_list<TokenId> tokens)
      : NGram(std::span<const TokenId>(tokens.begin(), tokens.size())) {}

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  TokenId operator[](std::size_t i) const { return tokens_[i]; }
  const TokenId* begin() const { return tokens_.data(); }
  const TokenId* end() const { return tokens_.data() + size_; }
  std::span<const TokenId> span() const { return {tokens_.data(), size_}; }
  TokenSeq to_vector() const { return TokenSeq(begin(), end()); }

  friend bool operator==(const NGram& a, const NGram& b) {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }

  // Lexicographic over token ids; shorter prefix sorts first.
  friend bool operator<(const NGram& a, const NGram& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }

  std::size_t hash() const {
    // FNV-1a over the token words, finished with a 64-bit mix.
    std::uint64_t h = 1469598103934665603ULL ^ size_;
    for (TokenId t : span()) {
      h ^= t;
      h *= 1099511628211ULL;
    }
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }

 private:
  std::array<TokenId, kMaxGramLength> tokens_{};
  std::uint8_t size_ = 0;
};

struct NGramHash {
  std::size_t operator()(const NGram& g) const { return g.hash(); }
};

std::ostream& operator<<(std::ostream& os, const NGram& g);

}  // namespace cacheback
