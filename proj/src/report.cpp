#include "cacheback/report.hpp"

#include <cstdio>
#include <sstream>

namespace cacheback {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

json config_json(const BenchOptions& o) {
  const auto& t = o.decode.table;
  const auto& d = o.decode.draft;
  return {{"ll", t.ll},
          {"fl", t.fl},
          {"lc", t.lc},
          {"fc", t.fc},
          {"tdl", d.tdl},
          {"crt", d.crt},
          {"wiring", wiring_name(o.decode.wiring)},
          {"max_new_tokens", o.max_new_tokens},
          {"stop_at_eos", o.stop_at_eos}};
}

json task_json(const TaskReport& t) {
  json j = {{"type", "task"},
            {"task", t.index},
            {"prompt_tokens", t.prompt_tokens},
            {"steps", t.steps},
            {"emitted", t.emitted},
            {"drafted", t.drafted},
            {"accepted", t.accepted},
            {"mat", t.mat()},
            {"step_bound_violations", t.step_bound_violations}};
  if (t.lossless) j["lossless"] = *t.lossless;
  return j;
}

json summary_json(const BenchReport& r, const json& meta) {
  json j = {{"type", "summary"},
            {"config", config_json(r.options)},
            {"tasks", r.tasks.size()},
            {"steps", r.steps},
            {"emitted", r.emitted},
            {"drafted", r.drafted},
            {"accepted", r.accepted},
            {"mat", r.mat()},
            {"tokens_per_step", r.mat()},
            {"speedup_proxy", r.mat()},
            {"wall_seconds", r.wall_seconds},
            {"tokens_per_second", r.tokens_per_second()},
            {"step_bound_violations", r.step_bound_violations}};
  if (r.options.check_lossless) j["lossless"] = r.all_lossless();
  if (!meta.is_null()) j["meta"] = meta;
  return j;
}

std::string bench_text(const BenchReport& r) {
  std::ostringstream os;
  os << "task  prompt  steps  emitted  drafted  accepted     MAT\n";
  for (const auto& t : r.tasks) {
    char line[160];
    std::snprintf(line, sizeof line, "%4zu  %6zu  %5zu  %7zu  %7zu  %8zu  %6s\n", t.index,
                  t.prompt_tokens, t.steps, t.emitted, t.drafted, t.accepted, fixed(t.mat(), 3).c_str());
    os << line;
  }
  os << "total: " << r.tasks.size() << " tasks, " << r.steps << " steps, " << r.emitted
     << " tokens, MAT " << fixed(r.mat()) << ", " << fixed(r.tokens_per_second(), 1)
     << " tok/s, wall " << fixed(r.wall_seconds, 3) << " s\n";
  if (r.options.check_lossless) os << "lossless: " << (r.all_lossless() ? "yes" : "NO") << "\n";
  return os.str();
}

std::string bench_jsonl(const BenchReport& r, const json& meta) {
  std::ostringstream os;
  for (const auto& t : r.tasks) os << task_json(t).dump() << '\n';
  os << summary_json(r, meta).dump() << '\n';
  return os.str();
}

std::string bench_csv(const BenchReport& r) {
  std::ostringstream os;
  os << "task,prompt_tokens,steps,emitted,drafted,accepted,mat\n";
  for (const auto& t : r.tasks) {
    os << t.index << ',' << t.prompt_tokens << ',' << t.steps << ',' << t.emitted << ','
       << t.drafted << ',' << t.accepted << ',' << fixed(t.mat(), 6) << '\n';
  }
  return os.str();
}

std::string sweep_text(const SweepResult& s) {
  std::ostringstream os;
  os << "  ll   fl      MAT\n";
  for (const auto& c : s.cells) {
    char line[96];
    std::snprintf(line, sizeof line, "%4zu %4zu %8s\n", c.ll, c.fl, fixed(c.report.mat()).c_str());
    os << line;
  }
  os << "ll=1 attains grid maximum: " << (s.ll1_attains_max() ? "yes" : "no") << '\n';
  return os.str();
}

std::string sweep_jsonl(const SweepResult& s, const json& meta) {
  std::ostringstream os;
  for (const auto& c : s.cells) {
    json j = summary_json(c.report, json());
    j["type"] = "cell";
    os << j.dump() << '\n';
  }
  json tail = {{"type", "sweep"}, {"cells", s.cells.size()}, {"ll1_attains_max", s.ll1_attains_max()}};
  if (!meta.is_null()) tail["meta"] = meta;
  os << tail.dump() << '\n';
  return os.str();
}

std::string sweep_csv(const SweepResult& s) {
  std::ostringstream os;
  os << "ll,fl,mat,tokens_per_step\n";
  for (const auto& c : s.cells) {
    os << c.ll << ',' << c.fl << ',' << fixed(c.report.mat(), 6) << ',' << fixed(c.report.mat(), 6)
       << '\n';
  }
  return os.str();
}

namespace {

template <typename F>
void for_each_row(const AblationResult& a, F&& f) {
  f("dual", a.dual);
  f("dynamic-only", a.dynamic_only);
  f("frozen-only", a.frozen_only);
}

}  // namespace

std::string ablation_text(const AblationResult& a) {
  std::ostringstream os;
  os << "configuration   speedup*      MAT   token/s\n";
  for_each_row(a, [&](const char* name, const BenchReport& r) {
    char line[128];
    std::snprintf(line, sizeof line, "%-14s %8sx %8s %9s\n", name, fixed(r.mat(), 2).c_str(),
                  fixed(r.mat(), 2).c_str(), fixed(r.tokens_per_second(), 1).c_str());
    os << line;
  });
  os << "* step-reduction ratio versus one-token-per-step greedy decoding\n";
  return os.str();
}

std::string ablation_jsonl(const AblationResult& a, const json& meta) {
  std::ostringstream os;
  for_each_row(a, [&](const char* name, const BenchReport& r) {
    json j = summary_json(r, meta);
    j["type"] = "ablation";
    j["configuration"] = name;
    os << j.dump() << '\n';
  });
  return os.str();
}

std::string ablation_csv(const AblationResult& a) {
  std::ostringstream os;
  os << "configuration,speedup_proxy,mat,tokens_per_second,steps,emitted\n";
  for_each_row(a, [&](const char* name, const BenchReport& r) {
    os << name << ',' << fixed(r.mat(), 6) << ',' << fixed(r.mat(), 6) << ','
       << fixed(r.tokens_per_second(), 2) << ',' << r.steps << ',' << r.emitted << '\n';
  });
  return os.str();
}

}  // namespace cacheback
