#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cacheback/cache_table.hpp"
#include "cacheback/draft_tree.hpp"
#include "cacheback/frozen_table.hpp"
#include "cacheback/verifier.hpp"

namespace cacheback {

/// Which tables feed draft generation.
enum class TableWiring { kDual, kDynamicOnly, kFrozenOnly };

struct DecodeConfig {
  CacheTableConfig table;
  DraftConfig draft;
  TableWiring wiring = TableWiring::kDual;

  void validate() const;
};

struct StepMetrics {
  std::size_t pending = 0;         // pending tokens counted against TDL
  std::size_t drafted = 0;         // draft nodes in the tree
  std::size_t longest_branch = 0;  // deepest draft path, in tokens
  std::size_t accepted = 0;        // draft tokens the verifier agreed with
  std::size_t emitted = 0;         // tokens appended (accepted + bonus, after truncation)
};

struct RunMetrics {
  std::vector<StepMetrics> steps;
  std::size_t total_emitted = 0;
  std::size_t total_drafted = 0;
  std::size_t total_accepted = 0;

  std::size_t step_count() const { return steps.size(); }
  /// Mean tokens emitted per step; 0 when no step ran.
  double mat() const;

  void record(const StepMetrics& step);
  void clear() { *this = RunMetrics{}; }
};

struct VerifyResult {
  std::vector<std::size_t> accepted;  // node indices, anchor-first
  TokenId bonus = 0;
};

/// Greedy tree acceptance. `predictions[i]` is the verifier's next token after
/// the path ending at node i; `anchor_prediction` is its next token after the
/// bare context. Descends while some child (earliest inserted first) matches
/// the current prediction.
VerifyResult verify_tree(const DraftTree& tree, std::span<const TokenId> predictions,
                         TokenId anchor_prediction);

/// Per-task mutable decoding state. The frozen table is shared read-only.
class DecodeState {
 public:
  DecodeState(const DecodeConfig& config, std::shared_ptr<const FrozenTable> frozen);

  const DecodeConfig& config() const { return config_; }
  const TokenSeq& committed() const { return committed_; }
  std::size_t pending_len() const { return pending_len_; }
  const LruCacheTable& dynamic() const { return dynamic_; }
  LruCacheTable& dynamic() { return dynamic_; }
  const FrozenTable* frozen() const { return frozen_.get(); }
  const RunMetrics& metrics() const { return metrics_; }

  /// Seeds the dynamic table with every LL+FL window of the prompt.
  void init_from_prompt(std::span<const TokenId> prompt);

  /// Inserts every full LL+FL window of `window_source` into the dynamic
  /// table. Frozen-only wiring leaves the dynamic table untouched.
  void update_tables(std::span<const TokenId> window_source);

  /// One draft -> verify -> accept -> update round. Emits at most
  /// `max_emit` tokens, and stops after an EOS when `stop_at_eos`.
  StepMetrics step(const Verifier& verifier, std::size_t max_emit, bool stop_at_eos);

  /// The tree the most recent step() verified.
  const DraftTree& last_tree() const { return last_tree_; }

  /// Drops dynamic contents, sequence and metrics; keeps the frozen table.
  void reset();

 private:
  LruCacheTable* drafting_dynamic();
  const FrozenTable* drafting_frozen() const;

  DecodeConfig config_;
  std::shared_ptr<const FrozenTable> frozen_;
  LruCacheTable dynamic_;
  TokenSeq committed_;
  std::size_t pending_len_ = 0;
  RunMetrics metrics_;
  DraftTree last_tree_;
  TokenSeq scratch_;
};

struct DecodeResult {
  TokenSeq output;
  RunMetrics metrics;
};

/// Resets `state`, seeds it with `prompt`, and steps until `max_new_tokens`
/// tokens are produced or EOS is emitted.
DecodeResult run_decode(DecodeState& state, std::span<const TokenId> prompt,
                        const Verifier& verifier, std::size_t max_new_tokens, bool stop_at_eos);

}  // namespace cacheback
