#include "cacheback/harness.hpp"

#include <algorithm>
#include <chrono>

namespace cacheback {

std::string_view wiring_name(TableWiring wiring) {
  switch (wiring) {
    case TableWiring::kDual: return "dual";
    case TableWiring::kDynamicOnly: return "dynamic-only";
    case TableWiring::kFrozenOnly: return "frozen-only";
  }
  return "?";
}

TableWiring parse_wiring(std::string_view name) {
  if (name == "dual") return TableWiring::kDual;
  if (name == "dynamic-only" || name == "dynamic") return TableWiring::kDynamicOnly;
  if (name == "frozen-only" || name == "frozen") return TableWiring::kFrozenOnly;
  throw UsageError("unknown table wiring '" + std::string(name) + "'");
}

std::vector<BenchTask> make_replay_tasks(const std::vector<TokenSeq>& docs, TokenId eos) {
  std::vector<BenchTask> tasks;
  for (const TokenSeq& doc : docs) {
    const std::size_t half = doc.size() / 2;
    TokenSeq prompt(doc.begin(), doc.begin() + static_cast<std::ptrdiff_t>(half));
    TokenSeq reference(doc.begin() + static_cast<std::ptrdiff_t>(half), doc.end());
    auto oracle = std::make_shared<ReplayOracle>(prompt.size(), std::move(reference), eos);
    tasks.push_back({std::move(prompt), std::move(oracle)});
  }
  return tasks;
}

std::vector<BenchTask> make_shared_verifier_tasks(const std::vector<TokenSeq>& prompts,
                                                  std::shared_ptr<const Verifier> verifier) {
  std::vector<BenchTask> tasks;
  tasks.reserve(prompts.size());
  for (const TokenSeq& p : prompts) tasks.push_back({p, verifier});
  return tasks;
}

bool BenchReport::all_lossless() const {
  return std::all_of(tasks.begin(), tasks.end(),
                     [](const TaskReport& t) { return t.lossless.value_or(true); });
}

BenchReport run_bench(const std::vector<BenchTask>& tasks, std::shared_ptr<const FrozenTable> frozen,
                      const BenchOptions& options) {
  BenchReport report;
  report.options = options;
  DecodeState state(options.decode, std::move(frozen));

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const BenchTask& task = tasks[i];
    DecodeResult r = run_decode(state, task.prompt, *task.verifier, options.max_new_tokens,
                                options.stop_at_eos);
    TaskReport row;
    row.index = i;
    row.prompt_tokens = task.prompt.size();
    row.steps = r.metrics.step_count();
    row.emitted = r.metrics.total_emitted;
    row.drafted = r.metrics.total_drafted;
    row.accepted = r.metrics.total_accepted;
    for (const StepMetrics& s : r.metrics.steps) {
      if (s.emitted < 1 || s.emitted > 1 + s.longest_branch) ++row.step_bound_violations;
    }
    if (options.check_lossless) {
      row.lossless = r.output == greedy_decode(*task.verifier, task.prompt, options.max_new_tokens,
                                               options.stop_at_eos);
    }
    row.metrics = std::move(r.metrics);
    report.steps += row.steps;
    report.emitted += row.emitted;
    report.drafted += row.drafted;
    report.accepted += row.accepted;
    report.step_bound_violations += row.step_bound_violations;
    report.tasks.push_back(std::move(row));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

bool SweepResult::ll1_attains_max() const {
  double best = 0.0;
  for (const auto& c : cells) best = std::max(best, c.report.mat());
  return std::any_of(cells.begin(), cells.end(),
                     [&](const SweepCell& c) { return c.ll == 1 && c.report.mat() == best; });
}

SweepResult run_sweep(const std::vector<BenchTask>& tasks, const FrozenProvider& frozen,
                      const BenchOptions& base, const std::vector<std::size_t>& ll_values,
                      const std::vector<std::size_t>& fl_values) {
  if (ll_values.empty() || fl_values.empty()) throw UsageError("sweep: empty ll or fl range");
  SweepResult result;
  for (std::size_t ll : ll_values) {
    for (std::size_t fl : fl_values) {
      BenchOptions opts = base;
      opts.decode.table.ll = ll;
      opts.decode.table.fl = fl;
      opts.decode.validate();
      auto table = frozen ? frozen(opts.decode.table) : nullptr;
      result.cells.push_back({ll, fl, run_bench(tasks, std::move(table), opts)});
    }
  }
  return result;
}

AblationResult run_ablation(const std::vector<BenchTask>& tasks,
                            std::shared_ptr<const FrozenTable> frozen, const BenchOptions& options) {
  if (!frozen) throw UsageError("ablation needs a frozen table");
  auto with = [&](TableWiring w) {
    BenchOptions opts = options;
    opts.decode.wiring = w;
    return run_bench(tasks, frozen, opts);
  };
  return {with(TableWiring::kDual), with(TableWiring::kDynamicOnly), with(TableWiring::kFrozenOnly)};
}

}  // namespace cacheback
