#include "cacheback/decode.hpp"

#include <algorithm>

namespace cacheback {

void DecodeConfig::validate() const {
  table.validate();
  draft.validate();
}

double RunMetrics::mat() const {
  return steps.empty() ? 0.0 : static_cast<double>(total_emitted) / static_cast<double>(steps.size());
}

void RunMetrics::record(const StepMetrics& step) {
  steps.push_back(step);
  total_emitted += step.emitted;
  total_drafted += step.drafted;
  total_accepted += step.accepted;
}

VerifyResult verify_tree(const DraftTree& tree, std::span<const TokenId> predictions,
                         TokenId anchor_prediction) {
  if (predictions.size() != tree.nodes.size()) {
    throw UsageError("verify_tree: one prediction per node required");
  }
  VerifyResult result;
  std::int32_t at = kAnchor;
  TokenId want = anchor_prediction;
  // Nodes are in BFS order and children follow their parent, so a forward scan
  // from the last accepted node finds the earliest-inserted matching child.
  std::size_t scan_from = 0;
  for (;;) {
    std::optional<std::size_t> match;
    for (std::size_t i = scan_from; i < tree.nodes.size(); ++i) {
      if (tree.nodes[i].parent == at && tree.nodes[i].token == want) {
        match = i;
        break;
      }
    }
    if (!match) break;
    result.accepted.push_back(*match);
    at = static_cast<std::int32_t>(*match);
    want = predictions[*match];
    scan_from = *match + 1;
  }
  result.bonus = want;
  return result;
}

DecodeState::DecodeState(const DecodeConfig& config, std::shared_ptr<const FrozenTable> frozen)
    : config_(config), frozen_(std::move(frozen)), dynamic_(config.table) {
  config_.validate();
  if (frozen_ && (frozen_->config().ll != config_.table.ll || frozen_->config().fl != config_.table.fl)) {
    throw UsageError("frozen table LL/FL does not match decode config");
  }
}

LruCacheTable* DecodeState::drafting_dynamic() {
  return config_.wiring == TableWiring::kFrozenOnly ? nullptr : &dynamic_;
}

const FrozenTable* DecodeState::drafting_frozen() const {
  return config_.wiring == TableWiring::kDynamicOnly ? nullptr : frozen_.get();
}

void DecodeState::update_tables(std::span<const TokenId> window_source) {
  if (config_.wiring == TableWiring::kFrozenOnly) return;
  const std::size_t ll = config_.table.ll;
  const std::size_t window = ll + config_.table.fl;
  for (std::size_t i = 0; i + window <= window_source.size(); ++i) {
    auto w = window_source.subspan(i, window);
    dynamic_.insert(NGram(w.first(ll)), NGram(w.subspan(ll)));
  }
}

void DecodeState::init_from_prompt(std::span<const TokenId> prompt) {
  committed_.assign(prompt.begin(), prompt.end());
  pending_len_ = std::min<std::size_t>(1, prompt.size());
  update_tables(prompt);
}

StepMetrics DecodeState::step(const Verifier& verifier, std::size_t max_emit, bool stop_at_eos) {
  if (max_emit == 0) throw UsageError("step: max_emit must be positive");
  StepMetrics m;
  m.pending = pending_len_;

  last_tree_ = build_draft_tree(committed_, pending_len_, drafting_dynamic(), drafting_frozen(),
                                config_.draft);
  const DraftTree& tree = last_tree_;
  m.drafted = tree.nodes.size();
  m.longest_branch = tree.max_depth();

  // Each node's prediction conditions on committed ++ path(node); this is
  // what one tree-masked forward pass yields per position.
  const TokenId anchor_prediction = verifier.greedy_next(committed_);
  std::vector<TokenId> predictions(tree.nodes.size());
  scratch_ = committed_;
  const std::size_t base = committed_.size();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const DraftNode& n = tree.nodes[i];
    // Rewrite the scratch tail into this node's path.
    scratch_.resize(base + n.depth);
    std::int32_t cur = static_cast<std::int32_t>(i);
    for (std::size_t d = n.depth; d > 0; --d) {
      scratch_[base + d - 1] = tree.nodes[cur].token;
      cur = tree.nodes[cur].parent;
    }
    predictions[i] = verifier.greedy_next(scratch_);
  }

  const VerifyResult verdict = verify_tree(tree, predictions, anchor_prediction);
  m.accepted = verdict.accepted.size();

  TokenSeq emitted;
  emitted.reserve(verdict.accepted.size() + 1);
  for (std::size_t idx : verdict.accepted) emitted.push_back(tree.nodes[idx].token);
  emitted.push_back(verdict.bonus);

  const auto eos = verifier.eos();
  if (stop_at_eos && eos) {
    auto it = std::find(emitted.begin(), emitted.end(), *eos);
    if (it != emitted.end()) emitted.erase(it + 1, emitted.end());
  }
  if (emitted.size() > max_emit) emitted.resize(max_emit);
  m.emitted = emitted.size();

  const std::size_t history = config_.table.ll + config_.table.fl - 1;
  const std::size_t prior = std::min(history, committed_.size());
  TokenSeq window_source(committed_.end() - static_cast<std::ptrdiff_t>(prior), committed_.end());
  window_source.insert(window_source.end(), emitted.begin(), emitted.end());

  committed_.insert(committed_.end(), emitted.begin(), emitted.end());
  pending_len_ = emitted.size();
  update_tables(window_source);

  metrics_.record(m);
  return m;
}

void DecodeState::reset() {
  dynamic_.clear();
  committed_.clear();
  pending_len_ = 0;
  metrics_.clear();
  last_tree_ = DraftTree{};
}

DecodeResult run_decode(DecodeState& state, std::span<const TokenId> prompt,
                        const Verifier& verifier, std::size_t max_new_tokens, bool stop_at_eos) {
  if (max_new_tokens == 0) throw UsageError("run_decode: max_new_tokens must be >= 1");
  state.reset();
  state.init_from_prompt(prompt);
  const auto eos = verifier.eos();
  std::size_t produced = 0;
  while (produced < max_new_tokens) {
    const StepMetrics m = state.step(verifier, max_new_tokens - produced, stop_at_eos);
    produced += m.emitted;
    if (stop_at_eos && eos && state.committed().back() == *eos) break;
  }
  DecodeResult result;
  result.output.assign(state.committed().end() - static_cast<std::ptrdiff_t>(produced),
                       state.committed().end());
  result.metrics = state.metrics();
  return result;
}

}  // namespace cacheback
