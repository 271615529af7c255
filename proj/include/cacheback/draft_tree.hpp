#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cacheback/cache_table.hpp"
#include "cacheback/frozen_table.hpp"
#include "cacheback/ngram.hpp"

namespace cacheback {

struct DraftConfig {
  std::size_t tdl = 96;  // total draft length: draft nodes + pending tokens
  std::size_t crt = 16;  // tokens reserved for depth >= 2

  void validate() const;
};

inline constexpr std::int32_t kAnchor = -1;

struct DraftNode {
  TokenId token = 0;
  std::int32_t parent = kAnchor;  // kAnchor: hangs directly off the anchor
  std::uint32_t depth = 1;
};

/// Token-level speculation tree. `pending` holds the tokens emitted by the
/// previous step that no forward pass has consumed yet; its last token (or
/// the last committed token when empty) is the anchor every branch hangs off.
/// Nodes are stored in BFS insertion order, so parent < own index.
struct DraftTree {
  TokenSeq pending;
  std::vector<DraftNode> nodes;

  std::size_t size() const { return pending.size() + nodes.size(); }

  /// Tokens on the path from the anchor's first child down to `node`.
  TokenSeq path_to(std::size_t node) const;

  /// Length in tokens of the deepest root-to-leaf path.
  std::size_t max_depth() const;
};

/// Draft generation. `context` is the committed sequence whose last
/// `pending_len` tokens are pending. Grows the tree breadth-first from the
/// anchor using `dynamic`, then extends the remaining leaves using `frozen`.
/// Either table may be null. Returns an empty tree when the context is
/// shorter than LL.
DraftTree build_draft_tree(std::span<const TokenId> context, std::size_t pending_len,
                           LruCacheTable* dynamic, const FrozenTable* frozen,
                           const DraftConfig& config);

/// Ancestor-only attention mask over (pending ++ nodes), bit-packed by row.
class AttentionMask {
 public:
  explicit AttentionMask(std::size_t n);

  std::size_t size() const { return n_; }
  bool operator()(std::size_t row, std::size_t col) const {
    return (row_words(row)[col / 64] >> (col % 64)) & 1U;
  }

  std::span<std::uint64_t> row_words(std::size_t row) {
    return {bits_.data() + row * words_, words_};
  }
  std::span<const std::uint64_t> row_words(std::size_t row) const {
    return {bits_.data() + row * words_, words_};
  }

  void set(std::size_t row, std::size_t col) { row_words(row)[col / 64] |= std::uint64_t{1} << (col % 64); }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

AttentionMask attention_mask(const DraftTree& tree);

/// Flat encoding of (pending ++ nodes): each position's parent position, with
/// pending tokens chained to their predecessor.
struct LinearTree {
  TokenSeq tokens;
  std::vector<std::optional<std::size_t>> parents;
};

LinearTree linearize(const DraftTree& tree);

/// Root-to-leaf node-token paths, one per leaf, in leaf insertion order.
std::vector<TokenSeq> branches(const DraftTree& tree);

}  // namespace cacheback
