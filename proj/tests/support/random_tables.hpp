#pragma once

// Seeded random table contents shared by the draft-tree and acceptance tests.

#include <random>
#include <vector>

#include "cacheback/cache_table.hpp"
#include "cacheback/frozen_table.hpp"
#include "reference_lru.hpp"

namespace cacheback::testing {

struct RandomCase {
  std::size_t ll, fl, lc, fc, tdl, crt, pending;
  Tokens context;
  std::vector<std::pair<Tokens, Tokens>> inserts;  // replayed into both tables
  std::vector<Tokens> frozen_docs;
};

inline RandomCase random_case(std::mt19937_64& rng) {
  RandomCase c{};
  c.ll = 1 + rng() % 3;
  c.fl = 1 + rng() % 4;
  c.lc = 1 + rng() % 32;
  c.fc = 1 + rng() % 8;
  c.tdl = 1 + rng() % 40;
  c.crt = rng() % c.tdl;
  const TokenId alphabet = 2 + static_cast<TokenId>(rng() % 5);
  auto token = [&] { return static_cast<TokenId>(rng() % alphabet); };
  c.context.resize(rng() % 12);
  for (auto& t : c.context) t = token();
  c.pending = c.context.empty() ? 0 : rng() % (std::min<std::size_t>(c.context.size(), c.tdl) + 1);
  const std::size_t n = rng() % 80;
  for (std::size_t i = 0; i < n; ++i) {
    Tokens l(c.ll), f(c.fl);
    for (auto& t : l) t = token();
    for (auto& t : f) t = token();
    c.inserts.emplace_back(l, f);
  }
  c.frozen_docs.resize(rng() % 4);
  for (auto& d : c.frozen_docs) {
    d.resize(rng() % 40);
    for (auto& t : d) t = token();
  }
  return c;
}

inline void fill(LruCacheTable& t, const RandomCase& c) {
  for (const auto& [l, f] : c.inserts) t.insert(NGram(l), NGram(f));
}

inline void fill(ReferenceLru& t, const RandomCase& c) {
  for (const auto& [l, f] : c.inserts) t.insert(l, f);
}

}  // namespace cacheback::testing
