#include "cacheback/cache_table.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cacheback {

std::ostream& operator<<(std::ostream& os, const NGram& g) {
  os << '(';
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) os << ',';
    os << g[i];
  }
  return os << ')';
}

void CacheTableConfig::validate() const {
  if (ll == 0 || fl == 0 || lc == 0 || fc == 0) {
    throw UsageError("cache table config: ll, fl, lc and fc must be positive");
  }
  if (ll > kMaxGramLength || fl > kMaxGramLength) {
    throw UsageError("cache table config: ll and fl must be <= " +
                     std::to_string(kMaxGramLength));
  }
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw std::overflow_error("max_retained_tokens: overflow");
  }
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a) {
    throw std::overflow_error("max_retained_tokens: overflow");
  }
  return a + b;
}

}  // namespace

std::uint64_t max_retained_tokens(const CacheTableConfig& config) {
  config.validate();
  const std::uint64_t per_leader = checked_add(config.ll, checked_mul(config.fc, config.fl));
  return checked_mul(config.lc, per_leader);
}

LruCacheTable::LruCacheTable(const CacheTableConfig& config) : config_(config) {
  config_.validate();
}

void LruCacheTable::check_leader(const NGram& leader) const {
  if (leader.size() != config_.ll) {
    throw UsageError("leader length " + std::to_string(leader.size()) + " != LL " +
                     std::to_string(config_.ll));
  }
}

void LruCacheTable::check_follower(const NGram& follower) const {
  if (follower.size() != config_.fl) {
    throw UsageError("follower length " + std::to_string(follower.size()) + " != FL " +
                     std::to_string(config_.fl));
  }
}

std::vector<NGram> LruCacheTable::query(const NGram& leader) {
  check_leader(leader);
  auto it = index_.find(leader);
  if (it == index_.end()) return {};
  leaders_.splice(leaders_.begin(), leaders_, it->second);
  const auto& order = it->second->followers.order;
  return {order.begin(), order.end()};
}

Eviction LruCacheTable::insert(const NGram& leader, const NGram& follower) {
  check_leader(leader);
  check_follower(follower);
  Eviction report;

  auto it = index_.find(leader);
  if (it == index_.end()) {
    if (leaders_.size() == config_.lc) {
      report.kind = Eviction::Kind::kLeader;
      report.leader = leaders_.back().leader;
      index_.erase(leaders_.back().leader);
      leaders_.pop_back();
    }
    leaders_.emplace_front();
    leaders_.front().leader = leader;
    it = index_.emplace(leader, leaders_.begin()).first;
  } else {
    leaders_.splice(leaders_.begin(), leaders_, it->second);
  }

  FollowerSet& set = it->second->followers;
  if (auto f = set.index.find(follower); f != set.index.end()) {
    set.order.splice(set.order.begin(), set.order, f->second);
    return report;
  }
  if (set.order.size() == config_.fc) {
    report.kind = Eviction::Kind::kFollower;
    report.leader = leader;
    report.follower = set.order.back();
    set.index.erase(set.order.back());
    set.order.pop_back();
  }
  set.order.push_front(follower);
  set.index.emplace(follower, set.order.begin());
  return report;
}

std::optional<std::vector<NGram>> LruCacheTable::peek(const NGram& leader) const {
  auto it = index_.find(leader);
  if (it == index_.end()) return std::nullopt;
  const auto& order = it->second->followers.order;
  return std::vector<NGram>(order.begin(), order.end());
}

std::vector<NGram> LruCacheTable::leaders_by_recency() const {
  std::vector<NGram> out;
  out.reserve(leaders_.size());
  for (const auto& e : leaders_) out.push_back(e.leader);
  return out;
}

void LruCacheTable::clear() {
  index_.clear();
  leaders_.clear();
}

}  // namespace cacheback
