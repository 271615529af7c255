#pragma once

// Brute-force oracles: a frequency table built by sorting every window, a
// draft tree built from explicit per-node paths with linear dedup scans, and
// a step simulator wiring those to the naive LRU model. Nothing here calls
// into the library except the Verifier being simulated.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cacheback/verifier.hpp"
#include "reference_lru.hpp"

namespace cacheback::testing {

inline Tokens tail(const Tokens& seq, std::size_t n) {
  return Tokens(seq.end() - static_cast<std::ptrdiff_t>(std::min(n, seq.size())), seq.end());
}

inline Tokens concat(Tokens a, const Tokens& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

struct NaiveFrozen {
  std::vector<std::pair<Tokens, std::vector<Tokens>>> entries;

  std::vector<Tokens> query(const Tokens& leader) const {
    for (const auto& [l, f] : entries) {
      if (l == leader) return f;
    }
    return {};
  }
};

// Count by sorting the full list of observations and measuring runs.
inline std::vector<std::pair<Tokens, std::size_t>> rank_by_count(std::vector<Tokens> seen) {
  std::sort(seen.begin(), seen.end());
  std::vector<std::pair<Tokens, std::size_t>> runs;
  for (std::size_t i = 0; i < seen.size();) {
    std::size_t j = i;
    while (j < seen.size() && seen[j] == seen[i]) ++j;
    runs.emplace_back(seen[i], j - i);
    i = j;
  }
  std::stable_sort(runs.begin(), runs.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return runs;
}

inline NaiveFrozen naive_build_frozen(const std::vector<Tokens>& docs, std::size_t ll,
                                      std::size_t fl, std::size_t lc, std::size_t fc) {
  std::vector<std::pair<Tokens, Tokens>> windows;
  for (const auto& d : docs) {
    for (std::size_t i = 0; i + ll + fl <= d.size(); ++i) {
      windows.emplace_back(Tokens(d.begin() + i, d.begin() + i + ll),
                           Tokens(d.begin() + i + ll, d.begin() + i + ll + fl));
    }
  }
  std::vector<Tokens> leaders;
  for (const auto& w : windows) leaders.push_back(w.first);
  NaiveFrozen out;
  for (const auto& [leader, n] : rank_by_count(leaders)) {
    if (out.entries.size() == lc) break;
    std::vector<Tokens> followers;
    for (const auto& w : windows) {
      if (w.first == leader) followers.push_back(w.second);
    }
    std::vector<Tokens> kept;
    for (const auto& [f, m] : rank_by_count(followers)) {
      if (kept.size() == fc) break;
      kept.push_back(f);
    }
    out.entries.emplace_back(leader, kept);
  }
  return out;
}

struct NaiveNode {
  TokenId token;
  int parent;  // -1 = anchor
  Tokens path;
};

struct NaiveTree {
  Tokens pending;
  std::vector<NaiveNode> nodes;
};

struct NaiveShape {
  std::size_t ll, fl, tdl, crt;
};

inline NaiveTree naive_build_tree(const Tokens& ctx, std::size_t pending_len, ReferenceLru* dyn,
                                  const NaiveFrozen* frozen, const NaiveShape& s) {
  NaiveTree tree;
  tree.pending = tail(ctx, pending_len);
  if ((!dyn && !frozen) || ctx.size() < s.ll) return tree;

  auto used = [&] { return tree.pending.size() + tree.nodes.size(); };
  auto has_path = [&](const Tokens& p) {
    for (const auto& n : tree.nodes) {
      if (n.path == p) return true;
    }
    return false;
  };

  auto phase = [&](std::deque<int> frontier, auto lookup) {
    while (!frontier.empty()) {
      const int at = frontier.front();
      frontier.pop_front();
      const std::size_t limit = at < 0 ? s.tdl - s.crt : s.tdl;
      if (used() + s.fl > s.tdl) return;
      if (used() + s.fl > limit) continue;
      const Tokens path = at < 0 ? Tokens{} : tree.nodes[at].path;
      const Tokens leader = tail(concat(ctx, path), s.ll);
      for (const Tokens& f : lookup(leader)) {
        if (used() + s.fl > limit) break;
        if (has_path(concat(path, f))) continue;
        int parent = at;
        Tokens p = path;
        for (TokenId t : f) {
          p.push_back(t);
          tree.nodes.push_back({t, parent, p});
          parent = static_cast<int>(tree.nodes.size()) - 1;
        }
        frontier.push_back(parent);
      }
    }
  };

  if (dyn) phase({-1}, [&](const Tokens& l) { return dyn->query(l); });
  if (frozen) {
    std::deque<int> leaves;
    auto childless = [&](int i) {
      return std::none_of(tree.nodes.begin(), tree.nodes.end(),
                          [&](const NaiveNode& n) { return n.parent == i; });
    };
    if (childless(-1)) leaves.push_back(-1);
    for (int i = 0; i < static_cast<int>(tree.nodes.size()); ++i) {
      if (childless(i)) leaves.push_back(i);
    }
    phase(leaves, [&](const Tokens& l) { return frozen->query(l); });
  }
  return tree;
}

struct NaiveStep {
  std::size_t drafted = 0;
  std::size_t longest = 0;
  std::size_t accepted = 0;
  Tokens emitted;
};

struct NaiveRun {
  Tokens output;
  std::vector<NaiveStep> steps;
  std::size_t total_emitted = 0;
  double mat() const { return steps.empty() ? 0.0 : double(total_emitted) / double(steps.size()); }
};

/// Full speculative run. `use_dynamic` false models frozen-only wiring.
inline NaiveRun naive_run(const Tokens& prompt, const Verifier& v, const NaiveShape& s,
                          std::size_t lc, std::size_t fc, bool use_dynamic,
                          const NaiveFrozen* frozen, std::size_t max_new, bool stop_at_eos) {
  ReferenceLru table(lc, fc);
  auto slide = [&](const Tokens& src) {
    if (!use_dynamic) return;
    for (std::size_t i = 0; i + s.ll + s.fl <= src.size(); ++i) {
      table.insert(Tokens(src.begin() + i, src.begin() + i + s.ll),
                   Tokens(src.begin() + i + s.ll, src.begin() + i + s.ll + s.fl));
    }
  };

  Tokens ctx = prompt;
  std::size_t pending = std::min<std::size_t>(1, prompt.size());
  slide(prompt);
  NaiveRun run;
  const auto eos = v.eos();
  while (run.output.size() < max_new) {
    NaiveTree tree = naive_build_tree(ctx, pending, use_dynamic ? &table : nullptr, frozen, s);
    NaiveStep step;
    step.drafted = tree.nodes.size();
    for (const auto& n : tree.nodes) step.longest = std::max(step.longest, n.path.size());

    int cur = -1;
    TokenId want = v.greedy_next(ctx);
    for (;;) {
      int pick = -1;
      for (int i = 0; i < static_cast<int>(tree.nodes.size()); ++i) {
        if (tree.nodes[i].parent == cur && tree.nodes[i].token == want) {
          pick = i;
          break;
        }
      }
      if (pick < 0) break;
      step.emitted.push_back(want);
      cur = pick;
      want = v.greedy_next(concat(ctx, tree.nodes[pick].path));
    }
    step.accepted = step.emitted.size();
    step.emitted.push_back(want);
    if (stop_at_eos && eos) {
      auto it = std::find(step.emitted.begin(), step.emitted.end(), *eos);
      if (it != step.emitted.end()) step.emitted.erase(it + 1, step.emitted.end());
    }
    if (step.emitted.size() > max_new - run.output.size()) step.emitted.resize(max_new - run.output.size());

    const Tokens window = concat(tail(ctx, s.ll + s.fl - 1), step.emitted);
    ctx = concat(ctx, step.emitted);
    pending = step.emitted.size();
    slide(window);
    run.output = concat(run.output, step.emitted);
    run.total_emitted += step.emitted.size();
    const bool hit_eos = stop_at_eos && eos && step.emitted.back() == *eos;
    run.steps.push_back(std::move(step));
    if (hit_eos) break;
  }
  return run;
}

}  // namespace cacheback::testing
