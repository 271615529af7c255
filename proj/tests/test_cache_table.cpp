#include <doctest.h>

#include <random>

#include "cacheback/cache_table.hpp"
#include "support/reference_lru.hpp"

using namespace cacheback;
using cacheback::testing::ReferenceLru;
using cacheback::testing::Tokens;

namespace {

Tokens tok(const NGram& g) { return g.to_vector(); }

std::vector<Tokens> toks(const std::vector<NGram>& gs) {
  std::vector<Tokens> out;
  for (const auto& g : gs) out.push_back(tok(g));
  return out;
}

// Full observable state: leaders in recency order with their follower lists.
bool same_state(const LruCacheTable& t, const ReferenceLru& ref) {
  const auto leaders = t.leaders_by_recency();
  if (leaders.size() != ref.entries().size()) return false;
  for (std::size_t i = 0; i < leaders.size(); ++i) {
    if (tok(leaders[i]) != ref.entries()[i].leader) return false;
    if (toks(*t.peek(leaders[i])) != ref.entries()[i].followers) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("new tables start empty") {
  CHECK(LruCacheTable({1, 3, 4, 2}).leader_count() == 0);
  CHECK(LruCacheTable({2, 2, 1, 1}).leader_count() == 0);
  CHECK(LruCacheTable({1, 3, std::size_t{1} << 20, 128}).leader_count() == 0);
}

TEST_CASE("zero or oversized config fields are rejected") {
  CHECK_THROWS_AS(LruCacheTable({0, 3, 4, 2}), UsageError);
  CHECK_THROWS_AS(LruCacheTable({1, 0, 4, 2}), UsageError);
  CHECK_THROWS_AS(LruCacheTable({1, 3, 0, 2}), UsageError);
  CHECK_THROWS_AS(LruCacheTable({1, 3, 4, 0}), UsageError);
  CHECK_THROWS_AS(LruCacheTable({kMaxGramLength + 1, 1, 4, 2}), UsageError);
}

TEST_CASE("query") {
  LruCacheTable t({1, 3, 4, 2});
  CHECK(t.query({7}).empty());
  CHECK(t.leader_count() == 0);

  t.insert({7}, {1, 2, 3});
  CHECK(toks(t.query({7})) == std::vector<Tokens>{{1, 2, 3}});

  CHECK_THROWS_AS(t.query({7, 8}), UsageError);
  CHECK_THROWS_AS(t.insert({7}, {1, 2}), UsageError);
  CHECK_THROWS_AS(t.insert({7, 7}, {1, 2, 3}), UsageError);
}

TEST_CASE("query refreshes leader recency") {
  LruCacheTable t({1, 1, 2, 4});
  t.insert({1}, {10});
  t.insert({2}, {20});
  t.query({1});
  const Eviction e = t.insert({3}, {30});
  CHECK(e.kind == Eviction::Kind::kLeader);
  CHECK(e.leader == NGram{2});
  CHECK(t.peek({1}).has_value());
  CHECK_FALSE(t.peek({2}).has_value());
  CHECK(t.peek({3}).has_value());
}

TEST_CASE("follower capacity evicts least recently inserted follower") {
  LruCacheTable t({1, 1, 4, 2});
  CHECK(t.insert({5}, {1}).none());
  CHECK(t.insert({5}, {2}).none());
  const Eviction e = t.insert({5}, {3});
  CHECK(e.kind == Eviction::Kind::kFollower);
  CHECK(e.leader == NGram{5});
  CHECK(e.follower == NGram{1});
  CHECK(toks(t.query({5})) == std::vector<Tokens>{{3}, {2}});
}

TEST_CASE("duplicate follower insert refreshes without growing") {
  LruCacheTable t({1, 1, 4, 3});
  t.insert({5}, {1});
  t.insert({5}, {1});
  CHECK(t.query({5}).size() == 1);

  t.insert({5}, {2});
  t.insert({5}, {1});
  CHECK(toks(*t.peek({5})) == std::vector<Tokens>{{1}, {2}});
  CHECK(t.leader_count() == 1);
}

TEST_CASE("LC=1 keeps only the newest leader") {
  LruCacheTable t({1, 1, 1, 4});
  t.insert({1}, {9});
  const Eviction e = t.insert({2}, {9});
  CHECK(e.kind == Eviction::Kind::kLeader);
  CHECK(e.leader == NGram{1});
  CHECK(t.leader_count() == 1);
}

TEST_CASE("leader_count is capped at LC") {
  LruCacheTable t({1, 1, 5, 1});
  CHECK(t.leader_count() == 0);
  t.insert({0}, {0});
  CHECK(t.leader_count() == 1);
  for (TokenId i = 1; i <= 5; ++i) t.insert({i}, {0});
  CHECK(t.leader_count() == 5);
}

TEST_CASE("peek does not touch recency") {
  LruCacheTable t({1, 1, 2, 2});
  ReferenceLru ref(2, 2);
  t.insert({1}, {1});
  ref.insert({1}, {1});
  t.insert({2}, {2});
  ref.insert({2}, {2});
  CHECK_FALSE(t.peek({9}).has_value());
  CHECK(toks(*t.peek({1})) == toks(t.query({1})));
  ref.query({1});
  t.peek({2});
  t.peek({2});
  CHECK(same_state(t, ref));
  t.insert({3}, {3});
  ref.insert({3}, {3});
  CHECK(same_state(t, ref));
  CHECK_FALSE(t.peek({2}).has_value());
}

TEST_CASE("max_retained_tokens") {
  CHECK(max_retained_tokens({1, 3, std::size_t{1} << 20, 128}) == 403'701'760ULL);
  CHECK(max_retained_tokens({1, 1, 1, 1}) == 2);
  CHECK(max_retained_tokens({2, 2, 10, 3}) == 80);
  CHECK_THROWS_AS(max_retained_tokens({1, 1, std::size_t{1} << 62, 1024}), std::overflow_error);
}

TEST_CASE("clear empties the table") {
  LruCacheTable t({1, 1, 4, 4});
  t.insert({1}, {2});
  t.clear();
  CHECK(t.leader_count() == 0);
  CHECK(t.query({1}).empty());
}

TEST_CASE("random op sequences match the reference model") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t ll = 1 + rng() % 2, fl = 1 + rng() % 3;
    const std::size_t lc = 1 + rng() % 6, fc = 1 + rng() % 4;
    const TokenId alphabet = 2 + static_cast<TokenId>(rng() % 3);
    LruCacheTable t({ll, fl, lc, fc});
    ReferenceLru ref(lc, fc);
    auto gram = [&](std::size_t n) {
      Tokens v;
      for (std::size_t i = 0; i < n; ++i) v.push_back(static_cast<TokenId>(rng() % alphabet));
      return v;
    };
    for (int op = 0; op < 5000; ++op) {
      const Tokens leader = gram(ll);
      if (rng() % 3 == 0) {
        const auto before = t.peek(NGram(leader));
        REQUIRE(toks(t.query(NGram(leader))) == ref.query(leader));
        CHECK(t.peek(NGram(leader)) == before);  // followers untouched by query
      } else {
        const Tokens follower = gram(fl);
        const bool dup = [&] {
          auto f = ref.peek(leader);
          return f && std::find(f->begin(), f->end(), follower) != f->end();
        }();
        const std::size_t leaders_before = t.leader_count();
        const std::size_t len_before = t.peek(NGram(leader)).value_or(std::vector<NGram>{}).size();
        t.insert(NGram(leader), NGram(follower));
        ref.insert(leader, follower);
        if (dup) {
          CHECK(t.leader_count() == leaders_before);
          CHECK(t.peek(NGram(leader))->size() == len_before);
        }
      }
      REQUIRE(t.leader_count() <= lc);
      if (op % 50 == 0) REQUIRE(same_state(t, ref));
    }
    CHECK(same_state(t, ref));
  }
}
