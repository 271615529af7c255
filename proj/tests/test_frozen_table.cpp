#include <doctest.h>

#include <random>
#include <sstream>

#include "cacheback/frozen_table.hpp"
#include "support/brute_force.hpp"

using namespace cacheback;
using cacheback::testing::Tokens;

namespace {

std::vector<Tokens> toks(std::span<const NGram> gs) {
  std::vector<Tokens> out;
  for (const auto& g : gs) out.push_back(g.to_vector());
  return out;
}

}  // namespace

TEST_CASE("count_ngrams over in-document windows") {
  // [a,b,a,b,a] with LL=FL=1: windows (a,b) (b,a) (a,b) (b,a).
  const TokenId a = 0, b = 1;
  const std::vector<TokenSeq> docs{{a, b, a, b, a}};
  const NGramCounts c = count_ngrams(docs, {1, 1, 8, 8});
  CHECK(c.leaders.at({a}) == 2);
  CHECK(c.leaders.at({b}) == 2);
  CHECK(c.pairs.at({a}).at({b}) == 2);
  CHECK(c.pairs.at({b}).at({a}) == 2);
  CHECK(c.pairs.at({a}).size() == 1);

  CHECK(count_ngrams(std::vector<TokenSeq>{}, {1, 1, 8, 8}).empty());
  CHECK(count_ngrams(std::vector<TokenSeq>{{1, 2, 3}}, {2, 2, 8, 8}).empty());
}

TEST_CASE("windows never cross document boundaries") {
  const std::vector<TokenSeq> docs{{1, 2}, {3, 4}};
  const NGramCounts c = count_ngrams(docs, {1, 1, 8, 8});
  CHECK(c.leaders.size() == 2);
  CHECK(c.leaders.count({2}) == 0);
}

TEST_CASE("count merge is additive") {
  const std::vector<TokenSeq> one{{1, 2, 1, 2}}, two{{1, 2, 3}};
  NGramCounts a = count_ngrams(one, {1, 1, 8, 8});
  a.merge(count_ngrams(two, {1, 1, 8, 8}));
  const std::vector<TokenSeq> both{{1, 2, 1, 2}, {1, 2, 3}};
  const NGramCounts b = count_ngrams(both, {1, 1, 8, 8});
  CHECK(a.leaders == b.leaders);
  CHECK(a.pairs == b.pairs);
}

TEST_CASE("build_frozen ranks by frequency with lexicographic ties") {
  const TokenId a = 1, b = 2, c = 3;
  NGramCounts counts;
  counts.leaders[{a}] = 4;
  counts.pairs[{a}][{b}] = 3;
  counts.pairs[{a}][{c}] = 1;
  {
    const FrozenTable t = build_frozen(counts, {1, 1, 8, 1});
    CHECK(toks(t.query({a})) == std::vector<Tokens>{{b}});
  }

  counts.pairs[{a}][{b}] = 2;
  counts.pairs[{a}][{c}] = 2;
  CHECK(toks(build_frozen(counts, {1, 1, 8, 2}).query({a})) == std::vector<Tokens>{{b}, {c}});

  NGramCounts two;
  two.leaders[{a}] = 5;
  two.leaders[{b}] = 3;
  const FrozenTable t = build_frozen(two, {1, 1, 1, 4});
  CHECK(t.leader_count() == 1);
  CHECK(t.entries()[0].leader == NGram{a});
}

TEST_CASE("query_frozen is pure") {
  const std::vector<TokenSeq> docs{{1, 2, 1, 3, 1, 2}};
  const FrozenTable t = build_frozen(count_ngrams(docs, {1, 1, 8, 8}), {1, 1, 8, 8});
  CHECK(t.query({9}).empty());
  const auto first = toks(t.query({1}));
  CHECK(first == std::vector<Tokens>{{2}, {3}});
  CHECK(toks(t.query({1})) == first);
}

TEST_CASE("top-k selection matches a brute-force sorter") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t ll = 1 + rng() % 2, fl = 1 + rng() % 2;
    const std::size_t lc = 1 + rng() % 5, fc = 1 + rng() % 3;
    std::vector<TokenSeq> docs(1 + rng() % 4);
    for (auto& d : docs) {
      d.resize(rng() % 30);
      for (auto& t : d) t = static_cast<TokenId>(rng() % 4);
    }
    const FrozenTable t = build_frozen(count_ngrams(docs, {ll, fl, lc, fc}), {ll, fl, lc, fc});
    const auto naive = cacheback::testing::naive_build_frozen(docs, ll, fl, lc, fc);
    REQUIRE(t.leader_count() == naive.entries.size());
    for (std::size_t i = 0; i < naive.entries.size(); ++i) {
      CHECK(t.entries()[i].leader.to_vector() == naive.entries[i].first);
      CHECK(toks(t.entries()[i].followers) == naive.entries[i].second);
    }
  }
}

namespace {

FrozenTable sample_table() {
  const std::vector<TokenSeq> docs{{1, 2, 3, 1, 2, 4, 1, 2, 3}, {7, 1, 2, 3, 0x01020304}};
  return build_frozen(count_ngrams(docs, {2, 1, 16, 4}), {2, 1, 16, 4});
}

}  // namespace

TEST_CASE("CBFT header layout") {
  const FrozenTable empty({1, 3, 4, 2}, {});
  const auto bytes = serialize_frozen(empty);
  REQUIRE(bytes.size() == kFrozenHeaderBytes);
  const std::vector<std::uint8_t> expect{'C', 'B', 'F', 'T', 1, 0, 0, 0, 1, 0, 0, 0, 3, 0, 0, 0,
                                         0,   0,   0,   0,   0, 0, 0, 0, 2, 0, 0, 0};
  CHECK(bytes == expect);
}

TEST_CASE("CBFT record layout is little-endian") {
  const FrozenTable t({1, 1, 1, 2}, {{NGram{0x0A0B0C0D}, {NGram{0x11223344}}}});
  const auto bytes = serialize_frozen(t);
  const std::vector<std::uint8_t> body(bytes.begin() + kFrozenHeaderBytes, bytes.end());
  CHECK(body == std::vector<std::uint8_t>{0x0D, 0x0C, 0x0B, 0x0A, 1, 0, 0, 0, 0x44, 0x33, 0x22, 0x11});
}

TEST_CASE("CBFT round trip") {
  const FrozenTable t = sample_table();
  std::stringstream ss;
  save_frozen(t, ss);
  const FrozenTable back = load_frozen(ss);
  CHECK(back == t);
  for (const auto& e : t.entries()) CHECK(toks(back.query(e.leader)) == toks(e.followers));
  CHECK(serialize_frozen(back) == serialize_frozen(t));

  const FrozenTable empty({1, 3, 4, 2}, {});
  CHECK(deserialize_frozen(serialize_frozen(empty)) == empty);
}

TEST_CASE("CBFT rebuilds are byte-identical") {
  CHECK(serialize_frozen(sample_table()) == serialize_frozen(sample_table()));
}

TEST_CASE("CBFT load errors carry byte offsets") {
  auto bytes = serialize_frozen(sample_table());

  SUBCASE("bad magic") {
    bytes[0] = 'X';
    try {
      deserialize_frozen(bytes);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.offset() == 0);
    }
  }
  SUBCASE("bad version") {
    bytes[4] = 2;
    try {
      deserialize_frozen(bytes);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.offset() == 4);
    }
  }
  SUBCASE("truncated header") {
    bytes.resize(10);
    try {
      deserialize_frozen(bytes);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.offset() == 8);
    }
  }
  SUBCASE("truncated body") {
    bytes.pop_back();
    CHECK_THROWS_AS(deserialize_frozen(bytes), FormatError);
  }
  SUBCASE("trailing bytes") {
    bytes.push_back(0);
    CHECK_THROWS_AS(deserialize_frozen(bytes), FormatError);
  }
  SUBCASE("zero leader length") {
    bytes[8] = 0;
    CHECK_THROWS_AS(deserialize_frozen(bytes), FormatError);
  }
}
