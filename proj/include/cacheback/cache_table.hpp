#pragma once

#include <cstddef>
#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cacheback/ngram.hpp"

namespace cacheback {

/// Shape and capacity of a leader -> followers table.
struct CacheTableConfig {
  std::size_t ll = 1;  // leader length
  std::size_t fl = 3;  // follower length
  std::size_t lc = std::size_t{1} << 20;  // leader capacity
  std::size_t fc = 128;  // follower capacity per leader

  /// Throws UsageError on a zero field or a length above kMaxGramLength.
  void validate() const;

  friend bool operator==(const CacheTableConfig&, const CacheTableConfig&) = default;
};

/// Upper bound on tokens a full table retains: LC * (LL + FC * FL).
/// Throws std::overflow_error if the product does not fit in 64 bits.
std::uint64_t max_retained_tokens(const CacheTableConfig& config);

struct Eviction {
  enum class Kind { kNone, kLeader, kFollower };

  Kind kind = Kind::kNone;
  NGram leader;    // the evicted leader, or the leader that lost a follower
  NGram follower;  // set only for kFollower

  bool none() const { return kind == Kind::kNone; }
};

/// Bounded map from leader n-grams to recency-ordered follower n-grams.
///
/// Leaders form one LRU domain refreshed by both query() and insert().
/// Each leader's followers form their own LRU domain refreshed only by
/// insert(). All operations are O(1) in LC and O(1) expected in FC;
/// query() additionally copies the follower list it returns.
///
/// Not thread-safe: queries mutate leader recency.
class LruCacheTable {
 public:
  explicit LruCacheTable(const CacheTableConfig& config);

  LruCacheTable(LruCacheTable&&) noexcept = default;
  LruCacheTable& operator=(LruCacheTable&&) noexcept = default;
  LruCacheTable(const LruCacheTable&) = delete;
  LruCacheTable& operator=(const LruCacheTable&) = delete;

  const CacheTableConfig& config() const { return config_; }

  /// Followers of `leader`, most recently inserted first; empty if absent.
  /// Refreshes the leader's recency when present.
  std::vector<NGram> query(const NGram& leader);

  Eviction insert(const NGram& leader, const NGram& follower);

  /// Same result as query() without touching recency.
  std::optional<std::vector<NGram>> peek(const NGram& leader) const;

  /// Resident leaders, most recently used first.
  std::vector<NGram> leaders_by_recency() const;

  std::size_t leader_count() const { return leaders_.size(); }

  void clear();

 private:
  struct FollowerSet {
    std::list<NGram> order;  // front = most recent
    std::unordered_map<NGram, std::list<NGram>::iterator, NGramHash> index;
  };
  struct LeaderEntry {
    NGram leader;
    FollowerSet followers;
  };
  using LeaderList = std::list<LeaderEntry>;

  void check_leader(const NGram& leader) const;
  void check_follower(const NGram& follower) const;

  CacheTableConfig config_;
  LeaderList leaders_;  // front = most recent
  std::unordered_map<NGram, LeaderList::iterator, NGramHash> index_;
};

}  // namespace cacheback
