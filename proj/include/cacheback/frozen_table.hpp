#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cacheback/cache_table.hpp"
#include "cacheback/ngram.hpp"

namespace cacheback {

/// Leader and (leader, follower) frequencies over in-document windows of
/// LL + FL tokens.
struct NGramCounts {
  using FollowerCounts = std::unordered_map<NGram, std::uint64_t, NGramHash>;

  std::unordered_map<NGram, std::uint64_t, NGramHash> leaders;
  std::unordered_map<NGram, FollowerCounts, NGramHash> pairs;

  bool empty() const { return leaders.empty(); }

  /// Adds `other` into this; counting is commutative so shards can merge in
  /// any order.
  void merge(const NGramCounts& other);
};

NGramCounts count_ngrams(std::span<const TokenSeq> documents, const CacheTableConfig& config);

/// Immutable leader -> followers table ranked by corpus frequency.
class FrozenTable {
 public:
  struct Entry {
    NGram leader;
    std::vector<NGram> followers;  // frequency-descending
  };

  FrozenTable() = default;
  FrozenTable(const CacheTableConfig& config, std::vector<Entry> entries);

  const CacheTableConfig& config() const { return config_; }

  /// Followers of `leader` in frequency order, or empty. Never mutates.
  std::span<const NGram> query(const NGram& leader) const;

  std::size_t leader_count() const { return entries_.size(); }

  /// Leaders in frequency order (ties lexicographic).
  const std::vector<Entry>& entries() const { return entries_; }

  friend bool operator==(const FrozenTable& a, const FrozenTable& b);

 private:
  CacheTableConfig config_{};
  std::vector<Entry> entries_;
  std::unordered_map<NGram, std::size_t, NGramHash> index_;
};

/// Top-LC leaders by frequency, each with its top-FC followers. Ties break by
/// ascending lexicographic token ids.
FrozenTable build_frozen(const NGramCounts& counts, const CacheTableConfig& config);

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

inline constexpr std::uint32_t kFrozenFormatVersion = 1;
inline constexpr std::size_t kFrozenHeaderBytes = 28;

// CBFT layout, all integers little-endian:
//   "CBFT" | version u32 | LL u32 | FL u32 | leader count u64 | FC u32
//   per leader: LL x u32 | follower count u32 | count x (FL x u32)
void save_frozen(const FrozenTable& table, std::ostream& out);
std::vector<std::uint8_t> serialize_frozen(const FrozenTable& table);

/// The loaded table's LC is its leader count (LC is not stored on disk).
FrozenTable load_frozen(std::istream& in);
FrozenTable deserialize_frozen(std::span<const std::uint8_t> bytes);

void save_frozen_file(const FrozenTable& table, const std::string& path);
FrozenTable load_frozen_file(const std::string& path);

}  // namespace cacheback
