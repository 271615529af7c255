#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cacheback/decode.hpp"
#include "cacheback/frozen_table.hpp"
#include "cacheback/verifier.hpp"

namespace cacheback {

std::string_view wiring_name(TableWiring wiring);
TableWiring parse_wiring(std::string_view name);

struct BenchTask {
  TokenSeq prompt;
  std::shared_ptr<const Verifier> verifier;
};

/// Splits each document in half: the first half is the prompt and a replay
/// oracle replays the second half, then `eos`.
std::vector<BenchTask> make_replay_tasks(const std::vector<TokenSeq>& docs, TokenId eos);

/// One task per prompt, all sharing `verifier`.
std::vector<BenchTask> make_shared_verifier_tasks(const std::vector<TokenSeq>& prompts,
                                                  std::shared_ptr<const Verifier> verifier);

struct BenchOptions {
  DecodeConfig decode;
  std::size_t max_new_tokens = 128;
  bool stop_at_eos = true;
  // Also run plain greedy decoding per task and compare outputs.
  bool check_lossless = false;
};

struct TaskReport {
  std::size_t index = 0;
  std::size_t prompt_tokens = 0;
  std::size_t steps = 0;
  std::size_t emitted = 0;
  std::size_t drafted = 0;
  std::size_t accepted = 0;
  std::size_t step_bound_violations = 0;
  std::optional<bool> lossless;
  RunMetrics metrics;

  double mat() const { return steps ? static_cast<double>(emitted) / static_cast<double>(steps) : 0.0; }
};

struct BenchReport {
  BenchOptions options;
  std::vector<TaskReport> tasks;
  std::size_t steps = 0;
  std::size_t emitted = 0;
  std::size_t drafted = 0;
  std::size_t accepted = 0;
  std::size_t step_bound_violations = 0;
  double wall_seconds = 0.0;

  /// Token-weighted: total emitted / total steps. Under emitted-per-step
  /// accounting this is also the tokens-per-step and step-reduction ratio
  /// versus one-token-per-step greedy decoding.
  double mat() const { return steps ? static_cast<double>(emitted) / static_cast<double>(steps) : 0.0; }
  double tokens_per_second() const { return wall_seconds > 0 ? static_cast<double>(emitted) / wall_seconds : 0.0; }
  bool all_lossless() const;
};

/// Runs every task on one reused DecodeState, reset between tasks.
BenchReport run_bench(const std::vector<BenchTask>& tasks, std::shared_ptr<const FrozenTable> frozen,
                      const BenchOptions& options);

/// Produces a frozen table shaped for the given table config, or null.
using FrozenProvider = std::function<std::shared_ptr<const FrozenTable>(const CacheTableConfig&)>;

struct SweepCell {
  std::size_t ll = 0;
  std::size_t fl = 0;
  BenchReport report;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // ll-major
  /// True when some ll == 1 cell attains the grid's maximum MAT.
  bool ll1_attains_max() const;
};

SweepResult run_sweep(const std::vector<BenchTask>& tasks, const FrozenProvider& frozen,
                      const BenchOptions& base, const std::vector<std::size_t>& ll_values,
                      const std::vector<std::size_t>& fl_values);

struct AblationResult {
  BenchReport dual;
  BenchReport dynamic_only;
  BenchReport frozen_only;
};

/// Three benches that differ only in table wiring.
AblationResult run_ablation(const std::vector<BenchTask>& tasks,
                            std::shared_ptr<const FrozenTable> frozen, const BenchOptions& options);

}  // namespace cacheback
