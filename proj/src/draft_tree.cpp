#include "cacheback/draft_tree.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace cacheback {

void DraftConfig::validate() const {
  if (tdl == 0) throw UsageError("draft config: tdl must be positive");
  if (crt >= tdl) throw UsageError("draft config: crt must be < tdl");
}

TokenSeq DraftTree::path_to(std::size_t node) const {
  TokenSeq path;
  for (auto i = static_cast<std::int32_t>(node); i != kAnchor; i = nodes[i].parent) {
    path.push_back(nodes[i].token);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::size_t DraftTree::max_depth() const {
  std::size_t d = 0;
  for (const auto& n : nodes) d = std::max<std::size_t>(d, n.depth);
  return d;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(std::span<const TokenId> context, std::size_t pending_len, std::size_t ll,
              std::size_t fl, const DraftConfig& config)
      : context_(context), ll_(ll), fl_(fl), config_(config) {
    tree_.pending.assign(context.end() - static_cast<std::ptrdiff_t>(pending_len), context.end());
    children_.emplace_back();  // anchor
  }

  // Breadth-first growth from `start`, querying `lookup` for each popped path.
  template <typename Lookup>
  void grow(std::deque<std::int32_t> frontier, Lookup&& lookup) {
    while (!frontier.empty()) {
      const std::int32_t at = frontier.front();
      frontier.pop_front();
      if (tree_.size() + fl_ > limit_for(at)) {
        if (tree_.size() + fl_ > config_.tdl) return;
        continue;
      }
      for (const NGram& follower : lookup(leader_for(at))) {
        if (tree_.size() + fl_ > limit_for(at)) break;
        if (hangs_from(at, follower)) continue;
        frontier.push_back(add_chain(at, follower));
      }
    }
  }

  std::deque<std::int32_t> leaves() const {
    std::deque<std::int32_t> out;
    if (children_[0].empty()) out.push_back(kAnchor);
    for (std::size_t i = 0; i < tree_.nodes.size(); ++i) {
      if (children_[i + 1].empty()) out.push_back(static_cast<std::int32_t>(i));
    }
    return out;
  }

  DraftTree take() { return std::move(tree_); }

 private:
  std::size_t limit_for(std::int32_t at) const {
    return at == kAnchor ? config_.tdl - config_.crt : config_.tdl;
  }

  // Last LL tokens of context ++ path(at).
  NGram leader_for(std::int32_t at) const {
    std::array<TokenId, kMaxGramLength> buf{};
    std::size_t filled = 0;
    for (std::int32_t i = at; i != kAnchor && filled < ll_; i = tree_.nodes[i].parent) {
      buf[ll_ - 1 - filled++] = tree_.nodes[i].token;
    }
    for (std::size_t k = 0; filled < ll_; ++k) {
      buf[ll_ - 1 - filled++] = context_[context_.size() - 1 - k];
    }
    return NGram(std::span<const TokenId>(buf.data(), ll_));
  }

  bool hangs_from(std::int32_t at, const NGram& follower) const {
    std::int32_t cur = at;
    for (TokenId t : follower) {
      const auto& kids = children_[static_cast<std::size_t>(cur + 1)];
      auto it = std::find_if(kids.begin(), kids.end(),
                             [&](std::int32_t c) { return tree_.nodes[c].token == t; });
      if (it == kids.end()) return false;
      cur = *it;
    }
    return true;
  }

  std::int32_t add_chain(std::int32_t at, const NGram& follower) {
    std::int32_t parent = at;
    std::uint32_t depth = at == kAnchor ? 0 : tree_.nodes[at].depth;
    for (TokenId t : follower) {
      const auto idx = static_cast<std::int32_t>(tree_.nodes.size());
      tree_.nodes.push_back({t, parent, ++depth});
      children_[static_cast<std::size_t>(parent + 1)].push_back(idx);
      children_.emplace_back();
      parent = idx;
    }
    return parent;
  }

  std::span<const TokenId> context_;
  std::size_t ll_;
  std::size_t fl_;
  DraftConfig config_;
  DraftTree tree_;
  std::vector<std::vector<std::int32_t>> children_;  // [0] = anchor, [i + 1] = node i
};

}  // namespace

DraftTree build_draft_tree(std::span<const TokenId> context, std::size_t pending_len,
                           LruCacheTable* dynamic, const FrozenTable* frozen,
                           const DraftConfig& config) {
  config.validate();
  if (pending_len > context.size()) throw UsageError("pending_len exceeds context length");
  if (!dynamic && !frozen) {
    DraftTree t;
    t.pending.assign(context.end() - static_cast<std::ptrdiff_t>(pending_len), context.end());
    return t;
  }
  const CacheTableConfig& shape = dynamic ? dynamic->config() : frozen->config();
  if (dynamic && frozen &&
      (frozen->config().ll != shape.ll || frozen->config().fl != shape.fl)) {
    throw UsageError("dynamic and frozen tables disagree on LL/FL");
  }

  TreeBuilder builder(context, pending_len, shape.ll, shape.fl, config);
  if (context.size() < shape.ll) return builder.take();

  if (dynamic) {
    builder.grow({kAnchor}, [&](const NGram& leader) { return dynamic->query(leader); });
  }
  if (frozen) {
    builder.grow(builder.leaves(), [&](const NGram& leader) { return frozen->query(leader); });
  }
  return builder.take();
}

AttentionMask::AttentionMask(std::size_t n)
    : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

namespace {

std::optional<std::size_t> node_parent_position(const DraftTree& tree, std::size_t node) {
  const std::size_t p = tree.pending.size();
  const std::int32_t parent = tree.nodes[node].parent;
  if (parent != kAnchor) return p + static_cast<std::size_t>(parent);
  if (p > 0) return p - 1;
  return std::nullopt;
}

}  // namespace

AttentionMask attention_mask(const DraftTree& tree) {
  AttentionMask mask(tree.size());
  const std::size_t p = tree.pending.size();
  for (std::size_t i = 0; i < tree.size(); ++i) {
    std::optional<std::size_t> parent;
    if (i < p) {
      if (i > 0) parent = i - 1;
    } else {
      parent = node_parent_position(tree, i - p);
    }
    if (parent) {
      auto src = mask.row_words(*parent);
      std::copy(src.begin(), src.end(), mask.row_words(i).begin());
    }
    mask.set(i, i);
  }
  return mask;
}

LinearTree linearize(const DraftTree& tree) {
  LinearTree out;
  const std::size_t p = tree.pending.size();
  out.tokens.reserve(tree.size());
  out.parents.reserve(tree.size());
  for (std::size_t i = 0; i < p; ++i) {
    out.tokens.push_back(tree.pending[i]);
    out.parents.push_back(i == 0 ? std::nullopt : std::optional<std::size_t>(i - 1));
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    out.tokens.push_back(tree.nodes[i].token);
    out.parents.push_back(node_parent_position(tree, i));
  }
  return out;
}

std::vector<TokenSeq> branches(const DraftTree& tree) {
  std::vector<bool> has_child(tree.nodes.size(), false);
  for (const auto& n : tree.nodes) {
    if (n.parent != kAnchor) has_child[static_cast<std::size_t>(n.parent)] = true;
  }
  std::vector<TokenSeq> out;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (!has_child[i]) out.push_back(tree.path_to(i));
  }
  return out;
}

}  // namespace cacheback
