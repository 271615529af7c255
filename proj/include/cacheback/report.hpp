#pragma once

#include <string>

#include <json.hpp>

#include "cacheback/harness.hpp"

namespace cacheback {

// Structured output is JSON Lines: one object per line, each carrying a
// "type" field. Every summary line embeds the effective config plus any
// caller-supplied `meta` (tokenizer, verifier, seed, ...).

nlohmann::json config_json(const BenchOptions& options);
nlohmann::json task_json(const TaskReport& task);
nlohmann::json summary_json(const BenchReport& report, const nlohmann::json& meta);

std::string bench_text(const BenchReport& report);
std::string bench_jsonl(const BenchReport& report, const nlohmann::json& meta);
// Header: task,prompt_tokens,steps,emitted,drafted,accepted,mat
std::string bench_csv(const BenchReport& report);

std::string sweep_text(const SweepResult& sweep);
std::string sweep_jsonl(const SweepResult& sweep, const nlohmann::json& meta);
// Header: ll,fl,mat,tokens_per_step
std::string sweep_csv(const SweepResult& sweep);

std::string ablation_text(const AblationResult& ablation);
std::string ablation_jsonl(const AblationResult& ablation, const nlohmann::json& meta);
// Header: configuration,speedup_proxy,mat,tokens_per_second,steps,emitted
std::string ablation_csv(const AblationResult& ablation);

}  // namespace cacheback
